"""Optimal template and mention matching.

For each document, every injective partial pairing of predicted to gold
templates is enumerated and scored by exact-match F1; within a template
pair, every role is paired independently. Ties on F1 are broken by the
fewest implied errors, then by the lexicographically smallest pair list.

Denominators are fixed per document (each predicted filler adds one to
the precision denominator, each gold entity or set-fill value adds one
to the recall denominator), so maximizing F1 reduces to maximizing the
shared numerator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .config import AnalysisConfig
from .exceptions import ComplexityGuardExceeded
from .model import Document, GoldEntity, Mention, RoleKind, Schema, texts_match
from .spans import ScsMode, best_gold_target

PARTIAL_THRESHOLD = 1.0


def count_template_matchings(pred_count: int, gold_count: int) -> int:
    """Closed-form number of injective partial template pairings.

    Choosing i of the predicted templates and an ordered selection of i
    gold templates gives C(P, i) * G! / (G - i)! options; summing over i
    counts every possible matching, including the empty one.
    """
    if pred_count < 0 or gold_count < 0:
        raise ValueError("template counts must be non-negative")
    return sum(
        math.comb(pred_count, i) * math.perm(gold_count, i)
        for i in range(min(pred_count, gold_count) + 1)
    )


def iter_template_matchings(pred_count: int, gold_count: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Yield every injective partial pairing as a pred-index-sorted pair tuple."""

    def rec(pred_index: int, used: set[int]) -> Iterator[tuple[tuple[int, int], ...]]:
        if pred_index == pred_count:
            yield ()
            return
        for rest in rec(pred_index + 1, used):
            yield rest
        for gold_index in range(gold_count):
            if gold_index in used:
                continue
            used.add(gold_index)
            for rest in rec(pred_index + 1, used):
                yield ((pred_index, gold_index),) + rest
            used.remove(gold_index)

    return rec(0, set())


@dataclass(frozen=True)
class EntityMatch:
    """How one predicted mention relates to one gold entity."""

    exact: bool
    score: float
    gold_mention: Mention | None

    @property
    def eligible(self) -> bool:
        return self.exact or self.score < PARTIAL_THRESHOLD


def match_against_entity(
    mention: Mention, entity: GoldEntity, mode: ScsMode, casefold: bool = True
) -> EntityMatch:
    """Compare a predicted mention to an entity's mention set.

    Exactness is decided on normalized text against any mention of the
    entity; the score is the minimum SCS, with the arg-min mention kept
    as the span-alteration target.
    """
    exact_mention = None
    for candidate in entity.mentions:
        if texts_match(mention.text, candidate.text, casefold):
            exact_mention = candidate
            break
    target = best_gold_target(mention, entity.mentions, mode)
    score = target[1] if target is not None else 1.0
    if exact_mention is not None:
        return EntityMatch(True, score, exact_mention)
    if target is not None and score < PARTIAL_THRESHOLD:
        return EntityMatch(False, score, target[0])
    return EntityMatch(False, 1.0, None)


@dataclass(frozen=True)
class MentionPair:
    pred_index: int
    entity_index: int
    exact: bool
    score: float
    gold_mention: Mention


@dataclass(frozen=True)
class MentionPairing:
    """Injective partial pairing of one role's predicted mentions to entities."""

    pairs: tuple[MentionPair, ...]
    unmatched_pred: tuple[int, ...]
    unmatched_gold: tuple[int, ...]

    @property
    def exact_count(self) -> int:
        return sum(1 for p in self.pairs if p.exact)

    @property
    def partial_count(self) -> int:
        return len(self.pairs) - self.exact_count


def _match_matrix(
    pred: Sequence[Mention], gold: Sequence[GoldEntity], mode: ScsMode, casefold: bool
) -> list[list[EntityMatch]]:
    return [[match_against_entity(m, e, mode, casefold) for e in gold] for m in pred]


def _iter_index_pairings(eligible: list[list[int]]) -> Iterator[tuple[tuple[int, int], ...]]:
    def rec(i: int, used: set[int]) -> Iterator[tuple[tuple[int, int], ...]]:
        if i == len(eligible):
            yield ()
            return
        for rest in rec(i + 1, used):
            yield rest
        for j in eligible[i]:
            if j in used:
                continue
            used.add(j)
            for rest in rec(i + 1, used):
                yield ((i, j),) + rest
            used.remove(j)

    return rec(0, set())


def _build_pairing(
    index_pairs: tuple[tuple[int, int], ...],
    matrix: list[list[EntityMatch]],
    pred_count: int,
    gold_count: int,
) -> MentionPairing:
    matched_pred = {i for i, _ in index_pairs}
    matched_gold = {j for _, j in index_pairs}
    pairs = tuple(
        MentionPair(i, j, matrix[i][j].exact, matrix[i][j].score, matrix[i][j].gold_mention)
        for i, j in index_pairs
    )
    return MentionPairing(
        pairs=pairs,
        unmatched_pred=tuple(i for i in range(pred_count) if i not in matched_pred),
        unmatched_gold=tuple(j for j in range(gold_count) if j not in matched_gold),
    )


def enumerate_mention_matchings(
    pred: Sequence[Mention],
    gold: Sequence[GoldEntity],
    mode: ScsMode = ScsMode.GEOMETRIC,
    casefold: bool = True,
    max_matchings: int | None = None,
    doc_id: str = "<document>",
) -> list[MentionPairing]:
    """All injective partial pairings whose pairs are exact or span-eligible.

    A pair is only allowed when the predicted mention exactly matches the
    entity or overlaps one of its mention spans (SCS below 1): disjoint
    spans carry no evidence of a span mistake.
    """
    matrix = _match_matrix(pred, gold, mode, casefold)
    eligible = [[j for j, m in enumerate(row) if m.eligible] for row in matrix]
    out = []
    for index_pairs in _iter_index_pairings(eligible):
        out.append(_build_pairing(index_pairs, matrix, len(pred), len(gold)))
        if max_matchings is not None and len(out) > max_matchings:
            raise ComplexityGuardExceeded(doc_id, "mention matchings", len(out), max_matchings)
    return out


def _best_role_pairing(
    pred: Sequence[Mention],
    gold: Sequence[GoldEntity],
    mode: ScsMode,
    casefold: bool,
    cap: int,
    doc_id: str,
) -> MentionPairing:
    """Pick the pairing maximizing exact pairs, then partial pairs.

    Exact pairs are the numerator; each partial pair replaces one
    spurious plus one missing error with a single span error, so at a
    fixed numerator more partials means fewer errors.
    """
    matrix = _match_matrix(pred, gold, mode, casefold)
    eligible = [[j for j, m in enumerate(row) if m.eligible] for row in matrix]
    best_key = None
    best: tuple[tuple[int, int], ...] = ()
    seen = 0
    for index_pairs in _iter_index_pairings(eligible):
        seen += 1
        if seen > cap:
            raise ComplexityGuardExceeded(doc_id, "mention matchings", seen, cap)
        exact = sum(1 for i, j in index_pairs if matrix[i][j].exact)
        key = (-exact, -(len(index_pairs) - exact), index_pairs)
        if best_key is None or key < best_key:
            best_key = key
            best = index_pairs
    return _build_pairing(best, matrix, len(pred), len(gold))


@dataclass(frozen=True)
class Tally:
    """Raw precision/recall bookkeeping: numerator and the two denominators."""

    numerator: int = 0
    precision_denominator: int = 0
    recall_denominator: int = 0

    def __add__(self, other: "Tally") -> "Tally":
        return Tally(
            self.numerator + other.numerator,
            self.precision_denominator + other.precision_denominator,
            self.recall_denominator + other.recall_denominator,
        )


def f1_from_tally(tally: Tally) -> float:
    """Exact-match F1 with the degenerate-denominator conventions.

    An empty side yields precision or recall of 1.0 when nothing was
    expected on it (0/0), so a document with no gold and no predictions
    scores 1.0 while a one-sided document scores 0.0.
    """
    precision = 1.0 if tally.precision_denominator == 0 else tally.numerator / tally.precision_denominator
    recall = 1.0 if tally.recall_denominator == 0 else tally.numerator / tally.recall_denominator
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class TemplatePair:
    pred_index: int
    gold_index: int
    role_pairings: dict[str, MentionPairing] = field(default_factory=dict)


@dataclass(frozen=True)
class TemplateMatching:
    """The chosen pairing for one document plus its score bookkeeping."""

    doc_id: str
    pairs: tuple[TemplatePair, ...]
    spurious_templates: tuple[int, ...]
    missing_templates: tuple[int, ...]
    role_tallies: dict[str, Tally]
    total: Tally
    error_tally: int
    approximate: bool = False

    @property
    def f1(self) -> float:
        return f1_from_tally(self.total)


@dataclass(frozen=True)
class _PairScore:
    numerator: int
    errors: int
    role_numerators: dict[str, int]
    role_pairings: dict[str, MentionPairing]


def _set_fill_outcome(pred_value: str | None, gold_value: str | None, casefold: bool) -> tuple[int, int]:
    """(numerator, errors) for one set-fill role of a template pair.

    A wrong value costs two errors: the spurious predicted value plus the
    missing gold one; a one-sided value costs one.
    """
    if pred_value is not None and gold_value is not None:
        if texts_match(pred_value, gold_value, casefold):
            return 1, 0
        return 0, 2
    if pred_value is not None or gold_value is not None:
        return 0, 1
    return 0, 0


def _score_template_pair(
    doc: Document,
    schema: Schema,
    pred_index: int,
    gold_index: int,
    config: AnalysisConfig,
) -> _PairScore:
    pred = doc.predicted_templates[pred_index]
    gold = doc.gold_templates[gold_index]
    numerator = 0
    errors = 0
    role_numerators: dict[str, int] = {}
    role_pairings: dict[str, MentionPairing] = {}
    for role in schema:
        if role.kind is RoleKind.SET_FILL:
            num, err = _set_fill_outcome(
                pred.set_fill(role.name), gold.set_fill(role.name), config.casefold
            )
            numerator += num
            errors += err
            if num:
                role_numerators[role.name] = num
            continue
        mentions = pred.mentions(role.name)
        entities = gold.entities(role.name)
        pairing = _best_role_pairing(
            mentions,
            entities,
            config.scs_mode,
            config.casefold,
            config.max_mention_matchings,
            doc.doc_id,
        )
        exact = pairing.exact_count
        numerator += exact
        if exact:
            role_numerators[role.name] = exact
        errors += len(mentions) + len(entities) - 2 * exact - pairing.partial_count
        role_pairings[role.name] = pairing
    return _PairScore(numerator, errors, role_numerators, role_pairings)


def document_denominators(doc: Document, schema: Schema) -> dict[str, Tally]:
    """Per-role denominators; independent of any matching choice."""
    tallies = {role.name: Tally() for role in schema}
    for template in doc.predicted_templates:
        for role_name, count in template.filler_counts(schema, gold=False).items():
            tallies[role_name] += Tally(0, count, 0)
    for template in doc.gold_templates:
        for role_name, count in template.filler_counts(schema, gold=True).items():
            tallies[role_name] += Tally(0, 0, count)
    return tallies


def _assemble(
    doc: Document,
    schema: Schema,
    chosen: tuple[tuple[int, int], ...],
    cache: dict[tuple[int, int], _PairScore],
    error_tally: int,
    approximate: bool,
) -> TemplateMatching:
    role_tallies = document_denominators(doc, schema)
    pairs = []
    for pred_index, gold_index in chosen:
        score = cache[pred_index, gold_index]
        for role_name, num in score.role_numerators.items():
            role_tallies[role_name] += Tally(num, 0, 0)
        pairs.append(TemplatePair(pred_index, gold_index, dict(score.role_pairings)))
    matched_pred = {p for p, _ in chosen}
    matched_gold = {g for _, g in chosen}
    total = Tally()
    for tally in role_tallies.values():
        total += tally
    return TemplateMatching(
        doc_id=doc.doc_id,
        pairs=tuple(pairs),
        spurious_templates=tuple(
            i for i in range(len(doc.predicted_templates)) if i not in matched_pred
        ),
        missing_templates=tuple(
            j for j in range(len(doc.gold_templates)) if j not in matched_gold
        ),
        role_tallies=role_tallies,
        total=total,
        error_tally=error_tally,
        approximate=approximate,
    )


def find_optimal_matching(doc: Document, schema: Schema, config: AnalysisConfig | None = None) -> TemplateMatching:
    """Exhaustively search for the F1-optimal matching of one document.

    Raises ComplexityGuardExceeded before doing factorial work when the
    closed-form matching count (or any role's pairing count) exceeds the
    configured caps.
    """
    config = config or AnalysisConfig()
    pred_count = len(doc.predicted_templates)
    gold_count = len(doc.gold_templates)
    total_matchings = count_template_matchings(pred_count, gold_count)
    if total_matchings > config.max_template_matchings:
        raise ComplexityGuardExceeded(
            doc.doc_id, "template matchings", total_matchings, config.max_template_matchings
        )
    cache = {
        (p, g): _score_template_pair(doc, schema, p, g, config)
        for p in range(pred_count)
        for g in range(gold_count)
    }
    best_key = None
    best: tuple[tuple[int, int], ...] = ()
    for assignment in iter_template_matchings(pred_count, gold_count):
        numerator = sum(cache[pair].numerator for pair in assignment)
        errors = (
            sum(cache[pair].errors for pair in assignment)
            + (pred_count - len(assignment))
            + (gold_count - len(assignment))
        )
        key = (-numerator, errors, assignment)
        if best_key is None or key < best_key:
            best_key = key
            best = assignment
    error_tally = best_key[1] if best_key is not None else 0
    return _assemble(doc, schema, best, cache, error_tally, approximate=False)


def _greedy_role_pairing(
    pred: Sequence[Mention], gold: Sequence[GoldEntity], mode: ScsMode, casefold: bool
) -> MentionPairing:
    matrix = _match_matrix(pred, gold, mode, casefold)
    taken: set[int] = set()
    index_pairs = []
    for i, row in enumerate(matrix):
        for j, match in enumerate(row):
            if j not in taken and match.exact:
                taken.add(j)
                index_pairs.append((i, j))
                break
    paired = {i for i, _ in index_pairs}
    for i, row in enumerate(matrix):
        if i in paired:
            continue
        candidates = [
            (match.score, j) for j, match in enumerate(row) if j not in taken and match.eligible
        ]
        if candidates:
            _, j = min(candidates)
            taken.add(j)
            index_pairs.append((i, j))
    index_pairs.sort()
    return _build_pairing(tuple(index_pairs), matrix, len(pred), len(gold))


def greedy_matching(doc: Document, schema: Schema, config: AnalysisConfig | None = None) -> TemplateMatching:
    """Approximate fallback: accept template pairs by descending pairwise F1.

    Avoids the factorial search (and the pairing enumeration inside it)
    at the cost of optimality; results are flagged approximate.
    """
    config = config or AnalysisConfig()
    pred_count = len(doc.predicted_templates)
    gold_count = len(doc.gold_templates)
    cache: dict[tuple[int, int], _PairScore] = {}
    candidates = []
    for p in range(pred_count):
        for g in range(gold_count):
            numerator = 0
            errors = 0
            role_numerators: dict[str, int] = {}
            role_pairings: dict[str, MentionPairing] = {}
            local = Tally()
            pred = doc.predicted_templates[p]
            gold = doc.gold_templates[g]
            for role in schema:
                if role.kind is RoleKind.SET_FILL:
                    pv, gv = pred.set_fill(role.name), gold.set_fill(role.name)
                    num, err = _set_fill_outcome(pv, gv, config.casefold)
                    numerator += num
                    errors += err
                    if num:
                        role_numerators[role.name] = num
                    local += Tally(num, int(pv is not None), int(gv is not None))
                    continue
                mentions = pred.mentions(role.name)
                entities = gold.entities(role.name)
                pairing = _greedy_role_pairing(mentions, entities, config.scs_mode, config.casefold)
                exact = pairing.exact_count
                numerator += exact
                if exact:
                    role_numerators[role.name] = exact
                errors += len(mentions) + len(entities) - 2 * exact - pairing.partial_count
                role_pairings[role.name] = pairing
                local += Tally(exact, len(mentions), len(entities))
            cache[p, g] = _PairScore(numerator, errors, role_numerators, role_pairings)
            empty = local.precision_denominator + local.recall_denominator == 0
            if numerator > 0 or empty:
                candidates.append((-f1_from_tally(local), errors, p, g))
    candidates.sort()
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    chosen = []
    for _, _, p, g in candidates:
        if p in used_pred or g in used_gold:
            continue
        used_pred.add(p)
        used_gold.add(g)
        chosen.append((p, g))
    chosen.sort()
    error_tally = (
        sum(cache[pair].errors for pair in chosen)
        + (pred_count - len(chosen))
        + (gold_count - len(chosen))
    )
    return _assemble(doc, schema, tuple(chosen), cache, error_tally, approximate=True)
