"""Core model: normalization, exact match, span resolution, type invariants."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tfea.model import (
    Document,
    GoldEntity,
    Mention,
    RoleKind,
    RoleSpec,
    Schema,
    Span,
    Template,
    exact_match,
    normalize,
    resolve_document_spans,
    resolve_span,
)


class TestNormalize:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("  Shining\n Path ", "shining path"),
            ("Newcastle", "newcastle"),
            ("", ""),
            ("a\t\tb   c", "a b c"),
        ],
    )
    def test_examples(self, raw, expected):
        assert normalize(raw) == expected

    def test_case_sensitive_mode(self):
        assert normalize("Shining Path", casefold=False) == "Shining Path"

    @given(st.text(max_size=80))
    def test_idempotent(self, s):
        once = normalize(s)
        assert normalize(once) == once

    @given(st.text(max_size=80))
    def test_no_surrounding_whitespace(self, s):
        assert normalize(s) == normalize(s).strip()


class TestExactMatch:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ("Newcastle", "newcastle", True),
            ("shining path", "maoist shining path group", False),
            ("bombing", "attack", False),
        ],
    )
    def test_examples(self, a, b, expected):
        assert exact_match(Mention(a), Mention(b)) is expected

    def test_spans_ignored(self):
        assert exact_match(Mention("x", Span(0, 1)), Mention("x", Span(50, 51)))

    def test_case_sensitive_flag(self):
        assert not exact_match(Mention("Newcastle"), Mention("newcastle"), casefold=False)

    @given(st.text(max_size=40), st.text(max_size=40), st.text(max_size=40))
    def test_equivalence_relation(self, a, b, c):
        ma, mb, mc = Mention(a), Mention(b), Mention(c)
        assert exact_match(ma, ma)
        assert exact_match(ma, mb) == exact_match(mb, ma)
        if exact_match(ma, mb) and exact_match(mb, mc):
            assert exact_match(ma, mc)


class TestResolveSpan:
    DOC = Document("d1", "An outbreak of Newcastle disease was confirmed in Newcastle county")

    def test_first_occurrence(self):
        resolved = resolve_span(Mention("Newcastle"), self.DOC)
        assert resolved.span == Span(15, 24)

    def test_not_found_keeps_null_span(self):
        resolved = resolve_span(Mention("acme virus"), self.DOC)
        assert resolved.span is None

    def test_idempotent_on_present_span(self):
        m = Mention("Newcastle", Span(51, 60))
        assert resolve_span(m, self.DOC) is m

    def test_never_changes_text(self):
        m = Mention("newcastle DISEASE")
        assert resolve_span(m, self.DOC).text == m.text

    def test_whitespace_flexible(self):
        doc = Document("d2", "the shining  path group")
        resolved = resolve_span(Mention("Shining Path"), doc)
        assert resolved.span == Span(4, 17)

    def test_resolve_document_spans(self):
        doc = Document(
            "d3",
            "alpha beta gamma",
            gold_templates=(Template({"agent": (GoldEntity((Mention("beta"),)),)}),),
            predicted_templates=(
                Template({"agent": (Mention("gamma"), Mention("missing"))}),
            ),
        )
        resolved = resolve_document_spans(doc)
        assert resolved.gold_templates[0].entities("agent")[0].mentions[0].span == Span(6, 10)
        pred = resolved.predicted_templates[0].mentions("agent")
        assert pred[0].span == Span(11, 16)
        assert pred[1].span is None


class TestTypes:
    def test_span_validation(self):
        with pytest.raises(ValueError):
            Span(5, 3)
        with pytest.raises(ValueError):
            Span(-1, 3)
        assert Span(3, 3).length == 0

    def test_entity_needs_mentions(self):
        with pytest.raises(ValueError):
            GoldEntity(())

    def test_set_fill_role_needs_values(self):
        with pytest.raises(ValueError):
            RoleSpec("status", RoleKind.SET_FILL)

    def test_set_fill_role_is_single(self):
        role = RoleSpec("status", RoleKind.SET_FILL, values=("a", "b"), multi=True)
        assert role.multi is False

    def test_string_fill_role_rejects_values(self):
        with pytest.raises(ValueError):
            RoleSpec("agent", RoleKind.STRING_FILL, values=("x",))

    def test_schema_unique_names(self):
        role = RoleSpec("agent", RoleKind.STRING_FILL)
        with pytest.raises(ValueError):
            Schema((role, role))
