"""Mapping transformation patterns onto the thirteen error types.

Every transformation group accounts for exactly one error. Fillers
inside removed or introduced templates never count as spurious or
missing role fillers; they go to the two dedicated side tallies so a
template-level mistake is not double-billed as many filler mistakes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .exceptions import UnmappableSequence
from .transforms import Transformation, TransformationLog, TransformKind


class ErrorType(str, Enum):
    SPAN_ERROR = "span_error"
    DUPLICATE_ROLE_FILLER = "duplicate_role_filler"
    DUPLICATE_PARTIALLY_MATCHED_ROLE_FILLER = "duplicate_partially_matched_role_filler"
    SPURIOUS_ROLE_FILLER = "spurious_role_filler"
    MISSING_ROLE_FILLER = "missing_role_filler"
    INCORRECT_ROLE = "incorrect_role"
    INCORRECT_ROLE_PARTIALLY_MATCHED_FILLER = "incorrect_role_partially_matched_filler"
    WRONG_TEMPLATE_FOR_ROLE_FILLER = "wrong_template_for_role_filler"
    WRONG_TEMPLATE_FOR_PARTIALLY_MATCHED_ROLE_FILLER = (
        "wrong_template_for_partially_matched_role_filler"
    )
    WRONG_TEMPLATE_WRONG_ROLE = "wrong_template_wrong_role"
    WRONG_TEMPLATE_WRONG_ROLE_PARTIALLY_MATCHED_FILLER = (
        "wrong_template_wrong_role_partially_matched_filler"
    )
    SPURIOUS_TEMPLATE = "spurious_template"
    MISSING_TEMPLATE = "missing_template"


ERROR_TYPES = tuple(ErrorType)

_K = TransformKind
_GROUP_RULES: dict[frozenset, ErrorType] = {
    frozenset({_K.ALTER_SPAN}): ErrorType.SPAN_ERROR,
    frozenset({_K.REMOVE_DUPLICATE_ROLE_FILLER}): ErrorType.DUPLICATE_ROLE_FILLER,
    frozenset(
        {_K.ALTER_SPAN, _K.REMOVE_DUPLICATE_ROLE_FILLER}
    ): ErrorType.DUPLICATE_PARTIALLY_MATCHED_ROLE_FILLER,
    frozenset({_K.REMOVE_SPURIOUS_ROLE_FILLER}): ErrorType.SPURIOUS_ROLE_FILLER,
    frozenset({_K.INTRODUCE_ROLE_FILLER}): ErrorType.MISSING_ROLE_FILLER,
    frozenset({_K.ALTER_ROLE}): ErrorType.INCORRECT_ROLE,
    frozenset({_K.ALTER_SPAN, _K.ALTER_ROLE}): ErrorType.INCORRECT_ROLE_PARTIALLY_MATCHED_FILLER,
    frozenset(
        {_K.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER}
    ): ErrorType.WRONG_TEMPLATE_FOR_ROLE_FILLER,
    frozenset(
        {_K.ALTER_SPAN, _K.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER}
    ): ErrorType.WRONG_TEMPLATE_FOR_PARTIALLY_MATCHED_ROLE_FILLER,
    frozenset(
        {_K.ALTER_ROLE, _K.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER}
    ): ErrorType.WRONG_TEMPLATE_WRONG_ROLE,
    frozenset(
        {_K.ALTER_SPAN, _K.ALTER_ROLE, _K.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER}
    ): ErrorType.WRONG_TEMPLATE_WRONG_ROLE_PARTIALLY_MATCHED_FILLER,
    frozenset({_K.REMOVE_TEMPLATE}): ErrorType.SPURIOUS_TEMPLATE,
    frozenset({_K.INTRODUCE_TEMPLATE}): ErrorType.MISSING_TEMPLATE,
}

# Errors are filed under the gold target's role when one exists, so
# per-role recall diagnostics line up with the gold schema.
_GOLD_ROLE_ATTRIBUTION = {
    ErrorType.INCORRECT_ROLE,
    ErrorType.INCORRECT_ROLE_PARTIALLY_MATCHED_FILLER,
    ErrorType.WRONG_TEMPLATE_WRONG_ROLE,
    ErrorType.WRONG_TEMPLATE_WRONG_ROLE_PARTIALLY_MATCHED_FILLER,
    ErrorType.MISSING_ROLE_FILLER,
}

_TEMPLATE_LEVEL = {ErrorType.SPURIOUS_TEMPLATE, ErrorType.MISSING_TEMPLATE}


@dataclass
class ErrorProfile:
    """Error counts per type and role, plus the template-filler side tallies.

    Profiles merge elementwise, with the empty profile as identity, so
    per-document mapping followed by a fold gives the corpus profile.
    """

    counts: dict[ErrorType, int] = field(
        default_factory=lambda: {etype: 0 for etype in ERROR_TYPES}
    )
    per_role: dict[str, dict[ErrorType, int]] = field(default_factory=dict)
    spurious_template_role_fillers: int = 0
    missing_template_role_fillers: int = 0

    @classmethod
    def empty(cls) -> "ErrorProfile":
        return cls()

    def bump(self, etype: ErrorType, role: str | None = None, n: int = 1) -> None:
        self.counts[etype] = self.counts.get(etype, 0) + n
        if role is not None:
            role_counts = self.per_role.setdefault(role, {})
            role_counts[etype] = role_counts.get(etype, 0) + n

    def __add__(self, other: "ErrorProfile") -> "ErrorProfile":
        merged = ErrorProfile.empty()
        for profile in (self, other):
            for etype, count in profile.counts.items():
                merged.counts[etype] = merged.counts.get(etype, 0) + count
            for role, role_counts in profile.per_role.items():
                target = merged.per_role.setdefault(role, {})
                for etype, count in role_counts.items():
                    target[etype] = target.get(etype, 0) + count
        merged.spurious_template_role_fillers = (
            self.spurious_template_role_fillers + other.spurious_template_role_fillers
        )
        merged.missing_template_role_fillers = (
            self.missing_template_role_fillers + other.missing_template_role_fillers
        )
        return merged


def _group_role(group: list[Transformation], etype: ErrorType) -> str | None:
    if etype in _TEMPLATE_LEVEL:
        return None
    if etype in _GOLD_ROLE_ATTRIBUTION:
        for entry in group:
            if entry.gold_role is not None:
                return entry.gold_role
    return group[0].role


def map_errors(log: TransformationLog) -> ErrorProfile:
    """Fold a transformation log into an error profile.

    Raises UnmappableSequence when a group matches no rule; valid logs
    produced by the transform engine never do.
    """
    profile = ErrorProfile.empty()
    for group in log.groups():
        kinds = [entry.kind for entry in group]
        rule = frozenset(kinds)
        etype = _GROUP_RULES.get(rule)
        if etype is None or len(kinds) != len(rule):
            raise UnmappableSequence(kinds, group[0].subject_key())
        profile.bump(etype, _group_role(group, etype))
        if etype is ErrorType.SPURIOUS_TEMPLATE:
            profile.spurious_template_role_fillers += sum(
                (group[0].filler_counts or {}).values()
            )
        elif etype is ErrorType.MISSING_TEMPLATE:
            profile.missing_template_role_fillers += sum(
                (group[0].filler_counts or {}).values()
            )
    return profile


def total_errors(profile: ErrorProfile) -> int:
    """Sum of the thirteen error-type counts.

    The side tallies are excluded: a missing or spurious template is one
    decision error regardless of how many fillers it contains.
    """
    return sum(profile.counts.values())
