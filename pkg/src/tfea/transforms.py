"""Deriving and replaying the transformation sequence for a matched document.

The eight transformation kinds rewrite the predicted templates into the
gold templates. Pure alterations (span fixes on partially matched
fillers, role moves inside a template) are applied before everything
else; the remaining transformations follow in detection order: matched
template pairs by predicted index, roles in schema order, fillers in
list order, then unmatched templates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .config import AnalysisConfig
from .exceptions import InconsistentLog
from .matching import TemplateMatching, TemplatePair
from .model import (
    Document,
    GoldEntity,
    Mention,
    RoleKind,
    Schema,
    Span,
    Template,
    texts_match,
)
from .spans import ScsMode, best_gold_target


class TransformKind(str, Enum):
    ALTER_SPAN = "alter_span"
    ALTER_ROLE = "alter_role"
    REMOVE_DUPLICATE_ROLE_FILLER = "remove_duplicate_role_filler"
    REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER = "remove_cross_template_spurious_role_filler"
    REMOVE_SPURIOUS_ROLE_FILLER = "remove_spurious_role_filler"
    INTRODUCE_ROLE_FILLER = "introduce_role_filler"
    REMOVE_TEMPLATE = "remove_template"
    INTRODUCE_TEMPLATE = "introduce_template"


_PRED_FILLER_KINDS = {
    TransformKind.ALTER_SPAN,
    TransformKind.ALTER_ROLE,
    TransformKind.REMOVE_DUPLICATE_ROLE_FILLER,
    TransformKind.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER,
    TransformKind.REMOVE_SPURIOUS_ROLE_FILLER,
}

_REMOVAL_KINDS = {
    TransformKind.REMOVE_DUPLICATE_ROLE_FILLER,
    TransformKind.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER,
    TransformKind.REMOVE_SPURIOUS_ROLE_FILLER,
}


@dataclass(frozen=True)
class Transformation:
    """One atomic edit.

    The subject is a predicted filler (template index, role, filler
    index); set-fill subjects have no filler index. Targets reference a
    gold template, role, entity, and the concrete mention adopted by
    span alteration or introduction.
    """

    kind: TransformKind
    pred_template: int | None = None
    role: str | None = None
    filler: int | None = None
    pred_text: str | None = None
    pred_span: Span | None = None
    gold_template: int | None = None
    gold_role: str | None = None
    gold_entity: int | None = None
    gold_mention: Mention | None = None
    filler_counts: dict | None = None

    def subject_key(self) -> tuple:
        if self.kind in _PRED_FILLER_KINDS:
            return ("pred", self.pred_template, self.role, self.filler)
        if self.kind is TransformKind.INTRODUCE_ROLE_FILLER:
            return ("intro", self.gold_template, self.gold_role, self.gold_entity)
        if self.kind is TransformKind.REMOVE_TEMPLATE:
            return ("remove_template", self.pred_template)
        return ("introduce_template", self.gold_template)


@dataclass(frozen=True)
class TransformationLog:
    doc_id: str
    entries: tuple[Transformation, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def groups(self) -> list[list[Transformation]]:
        """Transformations bucketed by subject, in first-occurrence order.

        A group is the full edit applied to one filler (for example an
        alter-span plus the removal it precedes); each group maps to one
        error type.
        """
        order: dict[tuple, list[Transformation]] = {}
        for entry in self.entries:
            order.setdefault(entry.subject_key(), []).append(entry)
        return list(order.values())


def _exact_hit(mention: Mention, entity: GoldEntity, casefold: bool) -> Mention | None:
    for candidate in entity.mentions:
        if texts_match(mention.text, candidate.text, casefold):
            return candidate
    return None


def _partial_hit(mention: Mention, entity: GoldEntity, mode: ScsMode, casefold: bool) -> Mention | None:
    if _exact_hit(mention, entity, casefold) is not None:
        return None
    target = best_gold_target(mention, entity.mentions, mode)
    if target is not None and target[1] < 1.0:
        return target[0]
    return None


def _classify_unmatched(
    doc: Document,
    schema: Schema,
    pair: TemplatePair,
    role_name: str,
    filler_index: int,
    mention: Mention,
    matched_entities: list[int],
    config: AnalysisConfig,
) -> list[Transformation]:
    """Attribute an unmatched predicted filler to its most local explanation.

    Precedence: duplicate of a matched entity, wrong role in the same
    template, right role in another template, wrong role in another
    template, and finally plain spurious. Within each category an exact
    text match beats a partial span match.
    """
    gold_template = doc.gold_templates[pair.gold_index]
    subject = dict(
        pred_template=pair.pred_index,
        role=role_name,
        filler=filler_index,
        pred_text=mention.text,
        pred_span=mention.span,
    )

    def alter_span(gold_index: int, gold_role: str, entity_index: int, target: Mention) -> Transformation:
        return Transformation(
            TransformKind.ALTER_SPAN,
            gold_template=gold_index,
            gold_role=gold_role,
            gold_entity=entity_index,
            gold_mention=target,
            **subject,
        )

    def hit(entity: GoldEntity, exact: bool) -> Mention | None:
        if exact:
            return _exact_hit(mention, entity, config.casefold)
        return _partial_hit(mention, entity, config.scs_mode, config.casefold)

    # Duplicate of an entity already matched in this role of this pair.
    entities = gold_template.entities(role_name)
    for exact in (True, False):
        for entity_index in sorted(matched_entities):
            target = hit(entities[entity_index], exact)
            if target is None:
                continue
            group = [] if exact else [alter_span(pair.gold_index, role_name, entity_index, target)]
            group.append(
                Transformation(
                    TransformKind.REMOVE_DUPLICATE_ROLE_FILLER,
                    gold_template=pair.gold_index,
                    gold_role=role_name,
                    gold_entity=entity_index,
                    gold_mention=target,
                    **subject,
                )
            )
            return group

    # Another role of the same gold template.
    for exact in (True, False):
        for other in schema.string_fill_roles:
            if other.name == role_name:
                continue
            for entity_index, entity in enumerate(gold_template.entities(other.name)):
                target = hit(entity, exact)
                if target is None:
                    continue
                group = [] if exact else [alter_span(pair.gold_index, other.name, entity_index, target)]
                group.append(
                    Transformation(
                        TransformKind.ALTER_ROLE,
                        gold_template=pair.gold_index,
                        gold_role=other.name,
                        gold_entity=entity_index,
                        gold_mention=target,
                        **subject,
                    )
                )
                return group

    # Same role in a different gold template.
    for exact in (True, False):
        for gold_index, other_template in enumerate(doc.gold_templates):
            if gold_index == pair.gold_index:
                continue
            for entity_index, entity in enumerate(other_template.entities(role_name)):
                target = hit(entity, exact)
                if target is None:
                    continue
                group = [] if exact else [alter_span(gold_index, role_name, entity_index, target)]
                group.append(
                    Transformation(
                        TransformKind.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER,
                        gold_template=gold_index,
                        gold_role=role_name,
                        gold_entity=entity_index,
                        gold_mention=target,
                        **subject,
                    )
                )
                return group

    # Different role in a different gold template.
    for exact in (True, False):
        for gold_index, other_template in enumerate(doc.gold_templates):
            if gold_index == pair.gold_index:
                continue
            for other in schema.string_fill_roles:
                if other.name == role_name:
                    continue
                for entity_index, entity in enumerate(other_template.entities(other.name)):
                    target = hit(entity, exact)
                    if target is None:
                        continue
                    group = [] if exact else [alter_span(gold_index, other.name, entity_index, target)]
                    group.append(
                        Transformation(
                            TransformKind.ALTER_ROLE,
                            gold_template=gold_index,
                            gold_role=other.name,
                            gold_entity=entity_index,
                            gold_mention=target,
                            **subject,
                        )
                    )
                    group.append(
                        Transformation(
                            TransformKind.REMOVE_CROSS_TEMPLATE_SPURIOUS_ROLE_FILLER,
                            gold_template=gold_index,
                            gold_role=other.name,
                            gold_entity=entity_index,
                            gold_mention=target,
                            **subject,
                        )
                    )
                    return group

    return [Transformation(TransformKind.REMOVE_SPURIOUS_ROLE_FILLER, **subject)]


def derive_transformations(
    doc: Document,
    schema: Schema,
    matching: TemplateMatching,
    config: AnalysisConfig | None = None,
) -> TransformationLog:
    """Transformation sequence rewriting the predictions into the gold templates."""
    config = config or AnalysisConfig()
    alterations: list[Transformation] = []
    removals: list[Transformation] = []

    for pair in matching.pairs:
        pred_template = doc.predicted_templates[pair.pred_index]
        gold_template = doc.gold_templates[pair.gold_index]
        for role in schema:
            if role.kind is RoleKind.SET_FILL:
                pred_value = pred_template.set_fill(role.name)
                gold_value = gold_template.set_fill(role.name)
                if (
                    pred_value is not None
                    and gold_value is not None
                    and texts_match(pred_value, gold_value, config.casefold)
                ):
                    continue
                if pred_value is not None:
                    removals.append(
                        Transformation(
                            TransformKind.REMOVE_SPURIOUS_ROLE_FILLER,
                            pred_template=pair.pred_index,
                            role=role.name,
                            pred_text=pred_value,
                        )
                    )
                if gold_value is not None:
                    removals.append(
                        Transformation(
                            TransformKind.INTRODUCE_ROLE_FILLER,
                            pred_template=pair.pred_index,
                            role=role.name,
                            gold_template=pair.gold_index,
                            gold_role=role.name,
                            gold_mention=Mention(gold_value),
                        )
                    )
                continue

            pairing = pair.role_pairings[role.name]
            partial_by_pred = {p.pred_index: p for p in pairing.pairs if not p.exact}
            unmatched = set(pairing.unmatched_pred)
            matched_entities = [p.entity_index for p in pairing.pairs]
            mentions = pred_template.mentions(role.name)
            for filler_index, mention in enumerate(mentions):
                if filler_index in partial_by_pred:
                    mention_pair = partial_by_pred[filler_index]
                    alterations.append(
                        Transformation(
                            TransformKind.ALTER_SPAN,
                            pred_template=pair.pred_index,
                            role=role.name,
                            filler=filler_index,
                            pred_text=mention.text,
                            pred_span=mention.span,
                            gold_template=pair.gold_index,
                            gold_role=role.name,
                            gold_entity=mention_pair.entity_index,
                            gold_mention=mention_pair.gold_mention,
                        )
                    )
                elif filler_index in unmatched:
                    group = _classify_unmatched(
                        doc, schema, pair, role.name, filler_index, mention, matched_entities, config
                    )
                    if all(t.kind not in _REMOVAL_KINDS for t in group):
                        alterations.extend(group)
                    else:
                        removals.extend(group)
            gold_entities = gold_template.entities(role.name)
            for entity_index in pairing.unmatched_gold:
                removals.append(
                    Transformation(
                        TransformKind.INTRODUCE_ROLE_FILLER,
                        pred_template=pair.pred_index,
                        role=role.name,
                        gold_template=pair.gold_index,
                        gold_role=role.name,
                        gold_entity=entity_index,
                        gold_mention=gold_entities[entity_index].canonical,
                    )
                )

    for pred_index in matching.spurious_templates:
        removals.append(
            Transformation(
                TransformKind.REMOVE_TEMPLATE,
                pred_template=pred_index,
                filler_counts=doc.predicted_templates[pred_index].filler_counts(schema, gold=False),
            )
        )
    for gold_index in matching.missing_templates:
        removals.append(
            Transformation(
                TransformKind.INTRODUCE_TEMPLATE,
                gold_template=gold_index,
                filler_counts=doc.gold_templates[gold_index].filler_counts(schema, gold=True),
            )
        )

    return TransformationLog(doc.doc_id, tuple(alterations + removals))


def canonical_template(gold_template: Template) -> Template:
    """Reduce a gold template to one canonical mention per entity."""
    fillers: dict = {}
    for role, value in gold_template.role_fillers.items():
        if isinstance(value, str):
            fillers[role] = value
        else:
            fillers[role] = tuple(
                Mention(entity.canonical.text, entity.canonical.span) for entity in value
            )
    return Template(fillers)


@dataclass
class _TemplateState:
    removed: bool = False
    set_values: dict = field(default_factory=dict)
    slots: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_template(cls, template: Template) -> "_TemplateState":
        state = cls()
        for role, value in template.role_fillers.items():
            if isinstance(value, str):
                state.set_values[role] = value
            else:
                state.slots[role] = list(value)
        return state

    def current(self, role: str) -> list[Mention]:
        fillers = [m for m in self.slots.get(role, ()) if m is not None]
        fillers.extend(self.extras.get(role, ()))
        return fillers


def apply_transformations(
    doc: Document, log: TransformationLog, casefold: bool = True
) -> tuple[Template, ...]:
    """Replay a transformation log over the document's predictions.

    The result matches the gold templates up to the choice of canonical
    mention per entity. Raises InconsistentLog when an edit references a
    filler or template that no longer exists, which signals a bug in the
    log producer rather than an expected input condition.
    """
    states = [_TemplateState.from_template(t) for t in doc.predicted_templates]
    introduced: list[Template] = []

    def state_for(entry: Transformation) -> _TemplateState:
        index = entry.pred_template
        if index is None or not 0 <= index < len(states):
            raise InconsistentLog(f"{log.doc_id}: no predicted template {index}")
        state = states[index]
        if state.removed:
            raise InconsistentLog(f"{log.doc_id}: template {index} was already removed")
        return state

    def consume(entry: Transformation) -> None:
        state = state_for(entry)
        if entry.filler is None:
            if entry.role not in state.set_values:
                raise InconsistentLog(
                    f"{log.doc_id}: set-fill value of role '{entry.role}' already consumed"
                )
            del state.set_values[entry.role]
            return
        slots = state.slots.get(entry.role, [])
        if not 0 <= entry.filler < len(slots) or slots[entry.filler] is None:
            raise InconsistentLog(
                f"{log.doc_id}: filler {entry.filler} of role '{entry.role}' already consumed"
            )
        slots[entry.filler] = None

    def covered(state: _TemplateState, role: str, entity: GoldEntity) -> bool:
        return any(
            _exact_hit(current, entity, casefold) is not None for current in state.current(role)
        )

    def target_entity(entry: Transformation) -> GoldEntity:
        return doc.gold_templates[entry.gold_template].entities(entry.gold_role)[entry.gold_entity]

    for group in log.groups():
        kinds = {entry.kind for entry in group}
        if TransformKind.REMOVE_TEMPLATE in kinds:
            state = state_for(group[0])
            state.removed = True
        elif TransformKind.INTRODUCE_TEMPLATE in kinds:
            introduced.append(canonical_template(doc.gold_templates[group[0].gold_template]))
        elif TransformKind.INTRODUCE_ROLE_FILLER in kinds:
            entry = group[0]
            state = state_for(entry)
            if entry.gold_entity is None:
                if entry.role in state.set_values:
                    raise InconsistentLog(
                        f"{log.doc_id}: introducing set-fill value over an existing one"
                    )
                state.set_values[entry.role] = entry.gold_mention.text
            elif not covered(state, entry.gold_role, target_entity(entry)):
                state.extras.setdefault(entry.gold_role, []).append(
                    Mention(entry.gold_mention.text, entry.gold_mention.span)
                )
        elif kinds & _REMOVAL_KINDS:
            consume(group[0])
        elif TransformKind.ALTER_ROLE in kinds:
            consume(group[0])
            move = next(entry for entry in group if entry.kind is TransformKind.ALTER_ROLE)
            state = state_for(move)
            if not covered(state, move.gold_role, target_entity(move)):
                state.extras.setdefault(move.gold_role, []).append(
                    Mention(move.gold_mention.text, move.gold_mention.span)
                )
        else:
            entry = group[0]
            state = state_for(entry)
            slots = state.slots.get(entry.role, [])
            if not 0 <= entry.filler < len(slots) or slots[entry.filler] is None:
                raise InconsistentLog(
                    f"{log.doc_id}: span alteration targets a consumed filler"
                )
            slots[entry.filler] = Mention(entry.gold_mention.text, entry.gold_mention.span)

    result = []
    for state in states:
        if state.removed:
            continue
        fillers: dict = {}
        roles = list(state.set_values) + [r for r in state.slots if r not in state.set_values]
        for role in state.extras:
            if role not in roles:
                roles.append(role)
        for role in roles:
            if role in state.set_values:
                fillers[role] = state.set_values[role]
            else:
                mentions = state.current(role)
                if mentions:
                    fillers[role] = tuple(mentions)
        result.append(Template(fillers))
    result.extend(introduced)
    return tuple(result)
