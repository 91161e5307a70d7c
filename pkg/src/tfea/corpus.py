"""Loading and serializing the JSON corpus and schema formats.

Corpus files hold one object per document id:

    {"<doc_id>": {"doctext": "...", "templates": [{"<role>": <filler>, ...}]}}

where a filler is a plain string for set-fill roles, a list of entities
(each a list of mention objects) on the gold side, or a flat list of
mention objects on the predicted side. Mention objects are
``{"text": str, "start": int?, "end": int?}``.
"""

from __future__ import annotations

import json
import logging
from typing import Mapping

from .exceptions import ParseError, SchemaMismatch
from .model import (
    Document,
    GoldEntity,
    Mention,
    RoleKind,
    RoleSpec,
    Schema,
    Span,
    Template,
    find_normalized,
    normalize,
)

log = logging.getLogger("tfea")


def load_schema(path: str) -> Schema:
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(path, f"cannot read schema: {exc}") from exc
    return schema_from_dict(raw, path=path)


def schema_from_dict(raw: Mapping, path: str = "<schema>") -> Schema:
    if not isinstance(raw, Mapping) or "roles" not in raw:
        raise ParseError(path, "schema must be an object with a 'roles' list")
    roles = []
    for entry in raw["roles"]:
        try:
            roles.append(
                RoleSpec(
                    name=entry["name"],
                    kind=RoleKind(entry["kind"]),
                    values=tuple(entry.get("values") or ()),
                    multi=bool(entry.get("multi", True)),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(path, f"bad role entry {entry!r}: {exc}") from exc
    try:
        return Schema(tuple(roles))
    except ValueError as exc:
        raise ParseError(path, str(exc)) from exc


def schema_to_dict(schema: Schema) -> dict:
    roles = []
    for role in schema:
        entry: dict = {"name": role.name, "kind": role.kind.value}
        if role.kind is RoleKind.SET_FILL:
            entry["values"] = list(role.values)
        else:
            entry["multi"] = role.multi
        roles.append(entry)
    return {"roles": roles}


def _mention_from_dict(raw, doc_text: str, path: str, where: str, casefold: bool) -> Mention:
    if not isinstance(raw, Mapping) or "text" not in raw:
        raise ParseError(path, f"mention must be an object with 'text'", where)
    text = raw["text"]
    if not isinstance(text, str):
        raise ParseError(path, f"mention text must be a string, got {text!r}", where)
    start, end = raw.get("start"), raw.get("end")
    if start is None or end is None:
        return Mention(text)
    try:
        span = Span(int(start), int(end))
    except (TypeError, ValueError):
        log.warning("%s: invalid offsets [%r, %r) for %r, re-locating", where, start, end, text)
        return _relocate(text, doc_text, casefold)
    if span.end > len(doc_text):
        log.warning("%s: span [%d, %d) falls outside the document, re-locating", where, span.start, span.end)
        return _relocate(text, doc_text, casefold)
    if normalize(doc_text[span.start : span.end], casefold) != normalize(text, casefold):
        log.warning(
            "%s: text %r does not match the document at [%d, %d), re-locating",
            where,
            text,
            span.start,
            span.end,
        )
        return _relocate(text, doc_text, casefold)
    return Mention(text, span)


def _relocate(text: str, doc_text: str, casefold: bool) -> Mention:
    # Declared offsets that disagree with the text are a warning, not a
    # hard error: fall back to searching for the first occurrence.
    span = find_normalized(text, doc_text, casefold)
    return Mention(text, span)


def _template_from_dict(
    raw: Mapping,
    schema: Schema,
    gold: bool,
    doc_text: str,
    path: str,
    doc_id: str,
    index: int,
    casefold: bool,
) -> Template:
    fillers: dict = {}
    for role_name, value in raw.items():
        if role_name not in schema:
            raise SchemaMismatch(role_name, doc_id)
        role = schema.role(role_name)
        where = f"doc '{doc_id}' template {index} role '{role_name}'"
        if role.kind is RoleKind.SET_FILL:
            if not isinstance(value, str):
                raise ParseError(path, f"set-fill filler must be a string, got {value!r}", where)
            if not any(texts_equal_inventory(value, v, casefold) for v in role.values):
                log.warning("%s: value %r is not in the role inventory", where, value)
            fillers[role_name] = value
            continue
        if not isinstance(value, list):
            raise ParseError(path, f"string-fill filler must be a list, got {value!r}", where)
        if gold:
            entities = []
            for ent in value:
                if not isinstance(ent, list) or not ent:
                    raise ParseError(
                        path, f"gold entity must be a non-empty mention list, got {ent!r}", where
                    )
                entities.append(
                    GoldEntity(
                        tuple(_mention_from_dict(m, doc_text, path, where, casefold) for m in ent)
                    )
                )
            seen: set[str] = set()
            for entity in entities:
                for mention in entity.mentions:
                    key = normalize(mention.text, casefold)
                    if key in seen:
                        log.warning("%s: mention %r appears in two entities", where, mention.text)
                    seen.add(key)
            fillers[role_name] = tuple(entities)
        else:
            # Duplicate identical strings are preserved so duplicate
            # role filler errors stay observable.
            fillers[role_name] = tuple(
                _mention_from_dict(m, doc_text, path, where, casefold) for m in value
            )
        if not role.multi and len(fillers[role_name]) > 1:
            log.warning("%s: multiple fillers for a single-fill role", where)
    return Template(fillers)


def texts_equal_inventory(value: str, inventory_value: str, casefold: bool) -> bool:
    return normalize(value, casefold) == normalize(inventory_value, casefold)


def load_side(path: str, schema: Schema, gold: bool, casefold: bool = True) -> dict[str, tuple[str, tuple[Template, ...]]]:
    """Load one side (gold or predicted) of a corpus.

    Returns doc id -> (document text, templates).
    """
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(path, f"cannot read corpus: {exc}") from exc
    if not isinstance(raw, Mapping):
        raise ParseError(path, "corpus must be an object keyed by document id")
    side: dict[str, tuple[str, tuple[Template, ...]]] = {}
    for doc_id, entry in raw.items():
        if not isinstance(entry, Mapping) or "doctext" not in entry:
            raise ParseError(path, "document entry needs 'doctext'", f"doc '{doc_id}'")
        text = entry["doctext"]
        templates = tuple(
            _template_from_dict(t, schema, gold, text, path, doc_id, i, casefold)
            for i, t in enumerate(entry.get("templates", ()))
        )
        side[doc_id] = (text, templates)
    return side


def merge_sides(
    gold_side: Mapping[str, tuple[str, tuple[Template, ...]]],
    pred_side: Mapping[str, tuple[str, tuple[Template, ...]]],
    pred_path: str = "<predictions>",
) -> list[Document]:
    """Combine the two sides into documents, keyed and ordered by doc id.

    Predicted doc ids must be a subset of gold's; documents without
    predictions get an empty predicted template list.
    """
    unknown = sorted(set(pred_side) - set(gold_side))
    if unknown:
        raise ParseError(pred_path, f"doc ids not present in the gold corpus: {unknown}")
    documents = []
    for doc_id in sorted(gold_side):
        text, gold_templates = gold_side[doc_id]
        pred_entry = pred_side.get(doc_id)
        pred_templates: tuple[Template, ...] = ()
        if pred_entry is not None:
            pred_text, pred_templates = pred_entry
            if pred_text != text:
                log.warning("doc '%s': predicted doctext differs from gold, using gold", doc_id)
        documents.append(Document(doc_id, text, gold_templates, pred_templates))
    return documents


def load_corpus(gold_path: str, pred_path: str, schema: Schema, casefold: bool = True) -> list[Document]:
    gold_side = load_side(gold_path, schema, gold=True, casefold=casefold)
    pred_side = load_side(pred_path, schema, gold=False, casefold=casefold)
    return merge_sides(gold_side, pred_side, pred_path)


def _mention_to_dict(mention: Mention) -> dict:
    out: dict = {"text": mention.text}
    if mention.span is not None:
        out["start"] = mention.span.start
        out["end"] = mention.span.end
    return out


def _template_to_dict(template: Template, gold: bool) -> dict:
    out: dict = {}
    for role, value in template.role_fillers.items():
        if isinstance(value, str):
            out[role] = value
        elif gold:
            out[role] = [[_mention_to_dict(m) for m in ent.mentions] for ent in value]
        else:
            out[role] = [_mention_to_dict(m) for m in value]
    return out


def side_to_dict(documents: Mapping[str, Document] | list[Document], gold: bool) -> dict:
    docs = documents.values() if isinstance(documents, Mapping) else documents
    out: dict = {}
    for doc in docs:
        templates = doc.gold_templates if gold else doc.predicted_templates
        out[doc.doc_id] = {
            "doctext": doc.text,
            "templates": [_template_to_dict(t, gold) for t in templates],
        }
    return out


def dump_side(documents, path: str, gold: bool) -> None:
    payload = side_to_dict(documents, gold)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")
