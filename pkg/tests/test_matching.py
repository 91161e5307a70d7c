"""Matcher: counting formula, enumeration, optimality, guards, greedy fallback."""

import pytest

from oracles import brute_force_matching_count, naive_best_f1
from support import fuzzed_corpus
from tfea.config import AnalysisConfig
from tfea.exceptions import ComplexityGuardExceeded
from tfea.matching import (
    Tally,
    count_template_matchings,
    enumerate_mention_matchings,
    f1_from_tally,
    find_optimal_matching,
    greedy_matching,
    iter_template_matchings,
)
from tfea.model import Document, GoldEntity, Mention, RoleKind, RoleSpec, Schema, Span

from conftest import gold_template, pred_template, span_mention


class TestCountFormula:
    @pytest.mark.parametrize("p,g,expected", [(0, 5, 1), (2, 2, 7), (1, 3, 4)])
    def test_known_values(self, p, g, expected):
        assert count_template_matchings(p, g) == expected

    @pytest.mark.parametrize("p", range(5))
    @pytest.mark.parametrize("g", range(5))
    def test_matches_brute_force(self, p, g):
        assert count_template_matchings(p, g) == brute_force_matching_count(p, g)

    @pytest.mark.parametrize("p", range(5))
    @pytest.mark.parametrize("g", range(5))
    def test_enumeration_count(self, p, g):
        matchings = list(iter_template_matchings(p, g))
        assert len(matchings) == count_template_matchings(p, g)
        assert len(set(matchings)) == len(matchings)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            count_template_matchings(-1, 2)


class TestMentionMatchings:
    def test_exact_candidate(self):
        pred = [span_mention("newcastle", 57)]
        gold = [GoldEntity((span_mention("Newcastle", 57),))]
        pairings = enumerate_mention_matchings(pred, gold)
        shapes = {tuple((p.pred_index, p.entity_index, p.exact) for p in m.pairs) for m in pairings}
        assert shapes == {(), ((0, 0, True),)}

    def test_nothing_to_pair(self):
        gold = [GoldEntity((span_mention("a", 0),)), GoldEntity((span_mention("b", 10),))]
        pairings = enumerate_mention_matchings([], gold)
        assert len(pairings) == 1
        assert pairings[0].unmatched_gold == (0, 1)

    def test_overlapping_spans_allow_partial(self):
        pred = [Mention("maoist shining path group", Span(100, 125))]
        gold = [GoldEntity((Mention("shining path", Span(107, 119)),))]
        pairings = enumerate_mention_matchings(pred, gold)
        assert len(pairings) == 2
        partial = [m for m in pairings if m.pairs]
        assert partial[0].pairs[0].exact is False
        assert 0 < partial[0].pairs[0].score < 1

    def test_disjoint_spans_not_pairable(self):
        pred = [span_mention("unrelated", 0)]
        gold = [GoldEntity((span_mention("target", 50),))]
        pairings = enumerate_mention_matchings(pred, gold)
        assert len(pairings) == 1
        assert pairings[0].pairs == ()

    def test_guard(self):
        pred = [span_mention("x", 0) for _ in range(6)]
        gold = [GoldEntity((span_mention("x", 0),)) for _ in range(6)]
        with pytest.raises(ComplexityGuardExceeded):
            enumerate_mention_matchings(pred, gold, max_matchings=10)


def _simple_schema():
    return Schema((RoleSpec("agent", RoleKind.STRING_FILL),))


def _doc_2x2_crosswise():
    """Crosswise pairing yields numerator 4, parallel pairing only 2."""
    words = {
        "alpha": 0, "bravo": 10, "carol": 20, "delta": 30,
        "zeta": 40, "yotta": 50,
    }
    text = " " * 60

    def ent(name):
        return GoldEntity((span_mention(name, words[name]),))

    gold = [
        gold_template(agent=[ent("alpha"), ent("bravo"), ent("carol"), ent("delta")]),
        gold_template(agent=[ent("alpha"), ent("bravo"), ent("zeta"), ent("yotta")]),
    ]
    pred = [
        pred_template(agent=[span_mention("alpha", words["alpha"]), span_mention("bravo", words["bravo"])]),
        pred_template(agent=[span_mention("carol", words["carol"]), span_mention("delta", words["delta"])]),
    ]
    return Document("cross", text, tuple(gold), tuple(pred))


class TestOptimalMatching:
    def test_self_analysis(self):
        from support import canonical_predictions, default_schema
        from tfea.inject import GenerationParams, generate_corpus
        from tfea.model import resolve_document_spans

        schema = default_schema()
        for doc in generate_corpus(GenerationParams(n_docs=3), seed=11):
            doc = Document(doc.doc_id, doc.text, doc.gold_templates, canonical_predictions(doc, schema))
            doc = resolve_document_spans(doc)
            matching = find_optimal_matching(doc, schema)
            assert matching.f1 == 1.0
            assert matching.total.numerator == matching.total.precision_denominator
            assert matching.total.numerator == matching.total.recall_denominator
            assert matching.spurious_templates == ()
            assert matching.missing_templates == ()

    def test_one_sided(self, two_role_schema):
        doc = Document("d", "x", (gold_template(agent=[[span_mention("a", 0)]]),), ())
        matching = find_optimal_matching(doc, two_role_schema)
        assert matching.pairs == ()
        assert matching.missing_templates == (0,)
        assert matching.f1 == 0.0

    def test_crosswise_beats_parallel(self):
        doc = _doc_2x2_crosswise()
        schema = _simple_schema()
        matching = find_optimal_matching(doc, schema)
        assert matching.total.numerator == 4
        assert {(p.pred_index, p.gold_index) for p in matching.pairs} == {(0, 1), (1, 0)}
        oracle = naive_best_f1(doc, schema)
        assert matching.f1 == oracle[3]

    def test_optimality_on_fuzz(self):
        config = AnalysisConfig()
        from tfea.model import resolve_document_spans

        for seed in range(25):
            documents, schema = fuzzed_corpus(seed)
            for doc in documents:
                doc = resolve_document_spans(doc)
                matching = find_optimal_matching(doc, schema, config)
                num, p_den, r_den, f1 = naive_best_f1(doc, schema)
                assert matching.total.numerator == num
                assert matching.total.precision_denominator == p_den
                assert matching.total.recall_denominator == r_den
                assert matching.f1 == f1

    def test_denominators_stable_across_matchings(self):
        doc = _doc_2x2_crosswise()
        schema = _simple_schema()
        from tfea.matching import document_denominators

        base = document_denominators(doc, schema)
        matching = find_optimal_matching(doc, schema)
        assert matching.total.precision_denominator == base["agent"].precision_denominator
        assert matching.total.recall_denominator == base["agent"].recall_denominator

    def test_deterministic(self):
        doc = _doc_2x2_crosswise()
        schema = _simple_schema()
        assert find_optimal_matching(doc, schema) == find_optimal_matching(doc, schema)

    def test_template_guard_skip_boundary(self):
        schema = _simple_schema()
        gold = [gold_template(agent=[[span_mention("a", 0)]]) for _ in range(4)]
        pred = [pred_template(agent=[span_mention("a", 0)]) for _ in range(4)]
        doc = Document("big", " " * 10, tuple(gold), tuple(pred))
        config = AnalysisConfig(max_template_matchings=10)
        with pytest.raises(ComplexityGuardExceeded) as err:
            find_optimal_matching(doc, schema, config)
        assert "big" in str(err.value)


class TestGreedy:
    def test_fixed_point_on_perfect_predictions(self, two_role_schema):
        doc = Document(
            "d",
            "alpha beta",
            (gold_template(agent=[[span_mention("alpha", 0)]], target=[[span_mention("beta", 6)]]),),
            (pred_template(agent=[span_mention("alpha", 0)], target=[span_mention("beta", 6)]),),
        )
        exact = find_optimal_matching(doc, two_role_schema)
        greedy = greedy_matching(doc, two_role_schema)
        assert greedy.approximate is True
        assert greedy.total == exact.total
        assert [(p.pred_index, p.gold_index) for p in greedy.pairs] == [
            (p.pred_index, p.gold_index) for p in exact.pairs
        ]

    def test_adversarial_case_is_suboptimal(self):
        doc = _doc_2x2_crosswise()
        schema = _simple_schema()
        exact = find_optimal_matching(doc, schema)
        greedy = greedy_matching(doc, schema)
        assert greedy.approximate is True
        assert greedy.total.numerator == 2
        assert exact.total.numerator == 4
        assert greedy.f1 < exact.f1

    def test_never_beats_exhaustive(self):
        from tfea.model import resolve_document_spans

        for seed in range(15):
            documents, schema = fuzzed_corpus(seed)
            for doc in documents:
                doc = resolve_document_spans(doc)
                exact = find_optimal_matching(doc, schema)
                greedy = greedy_matching(doc, schema)
                assert greedy.f1 <= exact.f1 + 1e-12


def test_f1_conventions():
    assert f1_from_tally(Tally(0, 0, 0)) == 1.0
    assert f1_from_tally(Tally(0, 0, 3)) == 0.0
    assert f1_from_tally(Tally(0, 3, 0)) == 0.0
    assert f1_from_tally(Tally(2, 4, 4)) == pytest.approx(0.5)
