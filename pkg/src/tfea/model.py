"""Core data model: documents, schemas, templates, and text canonicalization.

Gold and predicted templates share one shape, but their string-fill
fillers differ: gold roles hold entities (sets of coreferent mentions,
one per real-world referent) while predicted roles hold bare mentions,
since system output carries no coreference structure.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping


def normalize(text: str, casefold: bool = True) -> str:
    """Canonicalize a string for exact-match comparison.

    Applies Unicode composition (NFC), trims and collapses whitespace
    runs to single spaces, and case-folds unless ``casefold`` is False.
    Idempotent.
    """
    text = unicodedata.normalize("NFC", text)
    text = " ".join(text.split())
    return text.casefold() if casefold else text


def texts_match(a: str, b: str, casefold: bool = True) -> bool:
    return normalize(a, casefold) == normalize(b, casefold)


class RoleKind(str, Enum):
    SET_FILL = "set_fill"
    STRING_FILL = "string_fill"


@dataclass(frozen=True)
class RoleSpec:
    """One role of a template schema.

    Set-fill roles take exactly one value from a fixed inventory;
    string-fill roles take document spans and may allow multiple fillers.
    """

    name: str
    kind: RoleKind
    values: tuple[str, ...] = ()
    multi: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.kind is RoleKind.SET_FILL:
            if not self.values:
                raise ValueError(f"set-fill role '{self.name}' needs a value inventory")
            object.__setattr__(self, "multi", False)
        elif self.values:
            raise ValueError(f"string-fill role '{self.name}' cannot list allowed values")


@dataclass(frozen=True)
class Schema:
    """Ordered role list; the order drives matching and transformation detection."""

    roles: tuple[RoleSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "roles", tuple(self.roles))
        names = [r.name for r in self.roles]
        if len(set(names)) != len(names):
            raise ValueError("role names must be unique within a schema")

    def __iter__(self):
        return iter(self.roles)

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.roles)

    def role(self, name: str) -> RoleSpec:
        for r in self.roles:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.roles)

    @property
    def string_fill_roles(self) -> tuple[RoleSpec, ...]:
        return tuple(r for r in self.roles if r.kind is RoleKind.STRING_FILL)

    @property
    def set_fill_roles(self) -> tuple[RoleSpec, ...]:
        return tuple(r for r in self.roles if r.kind is RoleKind.SET_FILL)


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character interval [start, end) into a document text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start

    def overlap(self, other: "Span") -> int:
        return min(self.end, other.end) - max(self.start, other.start)


@dataclass(frozen=True)
class Mention:
    """A string filler, optionally located in the document by a span."""

    text: str
    span: Span | None = None


@dataclass(frozen=True)
class GoldEntity:
    """A non-empty set of coreferent gold mentions; counts once toward recall."""

    mentions: tuple[Mention, ...]

    def __post_init__(self):
        object.__setattr__(self, "mentions", tuple(self.mentions))
        if not self.mentions:
            raise ValueError("an entity needs at least one mention")

    @property
    def canonical(self) -> Mention:
        return self.mentions[0]


# A filler is a set-fill value (str), a gold string-fill (tuple of
# GoldEntity), or a predicted string-fill (tuple of Mention).
Filler = "str | tuple[GoldEntity, ...] | tuple[Mention, ...]"


@dataclass(frozen=True)
class Template:
    """Role name to filler mapping; absent roles mean empty."""

    role_fillers: Mapping[str, object]

    def __post_init__(self):
        object.__setattr__(self, "role_fillers", dict(self.role_fillers))

    def set_fill(self, role: str) -> str | None:
        value = self.role_fillers.get(role)
        return value if isinstance(value, str) else None

    def entities(self, role: str) -> tuple[GoldEntity, ...]:
        value = self.role_fillers.get(role)
        return tuple(value) if isinstance(value, (tuple, list)) else ()

    def mentions(self, role: str) -> tuple[Mention, ...]:
        value = self.role_fillers.get(role)
        return tuple(value) if isinstance(value, (tuple, list)) else ()

    def filler_counts(self, schema: Schema, gold: bool) -> dict[str, int]:
        """Number of fillers per role (1 per set-fill value, 1 per mention/entity)."""
        counts: dict[str, int] = {}
        for role in schema:
            if role.kind is RoleKind.SET_FILL:
                n = 1 if self.set_fill(role.name) is not None else 0
            elif gold:
                n = len(self.entities(role.name))
            else:
                n = len(self.mentions(role.name))
            if n:
                counts[role.name] = n
        return counts


@dataclass(frozen=True)
class Document:
    """One document with its gold and predicted template lists.

    Either list may be empty; the number of templates is part of what a
    system must predict.
    """

    doc_id: str
    text: str
    gold_templates: tuple[Template, ...] = ()
    predicted_templates: tuple[Template, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gold_templates", tuple(self.gold_templates))
        object.__setattr__(self, "predicted_templates", tuple(self.predicted_templates))


def exact_match(a: Mention, b: Mention, casefold: bool = True) -> bool:
    """True iff the two mention texts are equal after normalization.

    Spans never affect exactness; a mention found at the wrong offset
    still matches on text.
    """
    return texts_match(a.text, b.text, casefold)


def find_normalized(text: str, doc_text: str, casefold: bool = True) -> Span | None:
    """First occurrence of ``text`` in ``doc_text`` under normalized comparison."""
    tokens = normalize(text, casefold).split(" ")
    if tokens == [""]:
        return None
    pattern = r"\s+".join(re.escape(tok) for tok in tokens)
    flags = re.IGNORECASE if casefold else 0
    found = re.search(pattern, doc_text, flags)
    if found is None:
        return None
    return Span(found.start(), found.end())


def resolve_span(mention: Mention, doc: Document, casefold: bool = True) -> Mention:
    """Locate a span-less mention in the document text.

    Mentions whose text does not occur keep a null span; they score as
    maximally distant in span comparisons but still match exactly on text.
    Idempotent: mentions with a span are returned unchanged.
    """
    if mention.span is not None:
        return mention
    span = find_normalized(mention.text, doc.text, casefold)
    if span is None:
        return mention
    return replace(mention, span=span)


def _resolve_fillers(fillers: Iterable, doc: Document, casefold: bool):
    resolved = []
    for item in fillers:
        if isinstance(item, GoldEntity):
            resolved.append(
                GoldEntity(tuple(resolve_span(m, doc, casefold) for m in item.mentions))
            )
        else:
            resolved.append(resolve_span(item, doc, casefold))
    return tuple(resolved)


def resolve_document_spans(doc: Document, casefold: bool = True) -> Document:
    """Return a copy of the document with every locatable mention span filled in."""

    def resolve_templates(templates):
        out = []
        for template in templates:
            fillers = {}
            for role, value in template.role_fillers.items():
                if isinstance(value, str):
                    fillers[role] = value
                else:
                    fillers[role] = _resolve_fillers(value, doc, casefold)
            out.append(Template(fillers))
        return tuple(out)

    return replace(
        doc,
        gold_templates=resolve_templates(doc.gold_templates),
        predicted_templates=resolve_templates(doc.predicted_templates),
    )
