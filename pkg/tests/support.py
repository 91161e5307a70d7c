"""Shared builders and the randomized prediction fuzzer used across tests."""

from __future__ import annotations

import random

from tfea.inject import _decoy_phrases, default_schema  # noqa: F401
from tfea.model import Document, GoldEntity, Mention, RoleKind, Schema, Span, Template


def mention(text: str, start: int | None = None, end: int | None = None) -> Mention:
    if start is None:
        return Mention(text)
    return Mention(text, Span(start, end if end is not None else start + len(text)))


def entity(*mentions: Mention) -> GoldEntity:
    return GoldEntity(tuple(mentions))


def canonical_predictions(doc: Document, schema: Schema) -> tuple[Template, ...]:
    """Gold reduced to one canonical mention per entity."""
    templates = []
    for template in doc.gold_templates:
        fillers: dict = {}
        for role in schema:
            if role.kind is RoleKind.SET_FILL:
                value = template.set_fill(role.name)
                if value is not None:
                    fillers[role.name] = value
            else:
                ents = template.entities(role.name)
                if ents:
                    fillers[role.name] = tuple(
                        Mention(e.canonical.text, e.canonical.span) for e in ents
                    )
        templates.append(Template(fillers))
    return tuple(templates)


def _perturb_span(doc: Document, m: Mention, rng: random.Random) -> Mention:
    span = m.span
    if span is None:
        return m
    text = doc.text
    if rng.random() < 0.5 and span.end < len(text) and text[span.end] == " ":
        end = span.end + 1
        while end < len(text) and text[end] != " ":
            end += 1
        return Mention(text[span.start : end], Span(span.start, end))
    head = m.text.split(" ")[0]
    if len(head) < span.length:
        return Mention(head, Span(span.start, span.start + len(head)))
    return m


def mutate_predictions(doc: Document, schema: Schema, seed: int) -> Document:
    """Randomly corrupted predictions covering every error category.

    Starts from a canonical copy of the gold side, then drops, moves,
    duplicates, perturbs, and fabricates fillers and templates.
    """
    rng = random.Random(f"fuzz:{seed}:{doc.doc_id}")
    string_roles = [r.name for r in schema.string_fill_roles]
    decoys = list(_decoy_phrases(doc))
    rng.shuffle(decoys)

    templates: list[dict] = []
    for template in doc.gold_templates:
        if rng.random() < 0.15:
            continue  # missing template
        fillers: dict = {}
        for role in schema:
            if role.kind is RoleKind.SET_FILL:
                value = template.set_fill(role.name)
                if value is None:
                    continue
                roll = rng.random()
                if roll < 0.1:
                    continue  # dropped value
                if roll < 0.2:
                    fillers[role.name] = rng.choice(schema.role(role.name).values)
                else:
                    fillers[role.name] = value
                continue
            kept = []
            for ent in template.entities(role.name):
                m = Mention(ent.canonical.text, ent.canonical.span)
                roll = rng.random()
                if roll < 0.12:
                    continue  # missing filler
                if roll < 0.27:
                    m = _perturb_span(doc, m, rng)
                kept.append(m)
                if rng.random() < 0.12 and len(ent.mentions) > 1:
                    extra = ent.mentions[1]
                    kept.append(Mention(extra.text, extra.span))
                elif rng.random() < 0.06:
                    kept.append(Mention(m.text, m.span))  # verbatim duplicate
            fillers[role.name] = kept
        # move a filler into the wrong role
        if len(string_roles) > 1 and rng.random() < 0.2:
            source, target = rng.sample(string_roles, 2)
            if fillers.get(source):
                fillers.setdefault(target, []).append(fillers[source].pop(rng.randrange(len(fillers[source]))))
        # fabricate a filler: located decoy, or an unlocatable string
        if rng.random() < 0.2:
            target = rng.choice(string_roles)
            if decoys and rng.random() < 0.7:
                fillers.setdefault(target, []).append(decoys.pop())
            else:
                fillers.setdefault(target, []).append(Mention(f"phantom item {rng.randrange(100)}"))
        templates.append(fillers)

    # cross-template copy: a filler that belongs in another template
    if len(doc.gold_templates) > 1 and templates and rng.random() < 0.3:
        source_template = rng.choice(doc.gold_templates)
        role = rng.choice(string_roles)
        ents = source_template.entities(role)
        if ents:
            picked = rng.choice(ents).canonical
            host = rng.choice(templates)
            host_role = rng.choice(string_roles)
            host.setdefault(host_role, []).append(Mention(picked.text, picked.span))

    # spurious template built from decoys
    if rng.random() < 0.15:
        fillers = {}
        if decoys:
            fillers[rng.choice(string_roles)] = [decoys.pop()]
        if rng.random() < 0.5:
            role = rng.choice(schema.set_fill_roles).name if schema.set_fill_roles else None
            if role:
                fillers[role] = rng.choice(schema.role(role).values)
        if fillers:
            templates.append(fillers)

    rng.shuffle(templates)
    built = []
    for fillers in templates:
        cleaned = {}
        for role, value in fillers.items():
            if isinstance(value, str):
                cleaned[role] = value
            elif value:
                order = list(value)
                rng.shuffle(order)
                cleaned[role] = tuple(order)
        built.append(Template(cleaned))
    return Document(doc.doc_id, doc.text, doc.gold_templates, tuple(built))


def fuzzed_corpus(seed: int, n_docs: int = 2, max_templates: int = 3):
    """A (documents, schema) pair with randomized predictions."""
    from tfea.inject import GenerationParams, generate_corpus

    schema = default_schema()
    rng = random.Random(f"shape:{seed}")
    params = GenerationParams(
        n_docs=n_docs,
        templates_per_doc=(rng.randint(0, 1), rng.randint(1, max_templates)),
        entities_per_role=(0, 2),
        mentions_per_entity=(1, 2),
    )
    gold = generate_corpus(params, seed=seed)
    documents = [mutate_predictions(doc, schema, seed) for doc in gold]
    return documents, schema
