"""Shared fixtures: schemas, small documents, and the two-event fixture corpus."""

from __future__ import annotations

import json

import pytest

from tfea.model import Document, GoldEntity, Mention, RoleKind, RoleSpec, Schema, Span, Template

FIXTURE_TEXT = (
    "the shining path members attacked the police station building with dynamite "
    "yesterday morning two policemen died in the blast the terrorists fled "
    "meanwhile a guerrilla column assaulted the mayor of ayacucho officials said "
    "the mayor survived"
)

INCIDENT_VALUES = ("attack", "kidnapping", "bombing", "arson", "robbery", "forced work stoppage")


def _at(text: str, needle: str, from_end: bool = False) -> tuple[int, int]:
    start = text.rfind(needle) if from_end else text.find(needle)
    assert start >= 0, needle
    return start, start + len(needle)


@pytest.fixture
def muc_schema() -> Schema:
    return Schema(
        (
            RoleSpec("incident_type", RoleKind.SET_FILL, values=INCIDENT_VALUES),
            RoleSpec("PerpInd", RoleKind.STRING_FILL),
            RoleSpec("PerpOrg", RoleKind.STRING_FILL),
            RoleSpec("Target", RoleKind.STRING_FILL),
            RoleSpec("Victim", RoleKind.STRING_FILL),
            RoleSpec("Weapon", RoleKind.STRING_FILL),
        )
    )


def _fixture_mention(needle: str, from_end: bool = False) -> dict:
    start, end = _at(FIXTURE_TEXT, needle, from_end)
    return {"text": needle, "start": start, "end": end}


@pytest.fixture
def fixture_gold_json() -> dict:
    """Two gold events: a bombing and an attack."""
    return {
        "fixture-001": {
            "doctext": FIXTURE_TEXT,
            "templates": [
                {
                    "incident_type": "bombing",
                    "PerpInd": [[_fixture_mention("shining path members"), _fixture_mention("terrorists")]],
                    "Target": [[_fixture_mention("police station")]],
                    "Weapon": [[_fixture_mention("dynamite")]],
                    "Victim": [[_fixture_mention("two policemen")]],
                },
                {
                    "incident_type": "attack",
                    "PerpInd": [[_fixture_mention("guerrilla column")]],
                    "Victim": [[_fixture_mention("mayor of ayacucho"), _fixture_mention("the mayor", from_end=True)]],
                },
            ],
        }
    }


@pytest.fixture
def fixture_pred_json() -> dict:
    """One predicted template with a span error, a duplicate, and a wrong-role copy."""
    return {
        "fixture-001": {
            "doctext": FIXTURE_TEXT,
            "templates": [
                {
                    "incident_type": "bombing",
                    "PerpInd": [_fixture_mention("shining path members"), _fixture_mention("terrorists")],
                    "Target": [_fixture_mention("police station building"), _fixture_mention("dynamite")],
                    "Weapon": [_fixture_mention("dynamite")],
                    "Victim": [_fixture_mention("two policemen")],
                }
            ],
        }
    }


@pytest.fixture
def fixture_files(tmp_path, fixture_gold_json, fixture_pred_json, muc_schema):
    from tfea.corpus import schema_to_dict

    gold = tmp_path / "gold.json"
    pred = tmp_path / "pred.json"
    schema = tmp_path / "schema.json"
    gold.write_text(json.dumps(fixture_gold_json), encoding="utf-8")
    pred.write_text(json.dumps(fixture_pred_json), encoding="utf-8")
    schema.write_text(json.dumps(schema_to_dict(muc_schema)), encoding="utf-8")
    return gold, pred, schema


@pytest.fixture
def two_role_schema() -> Schema:
    return Schema(
        (
            RoleSpec("agent", RoleKind.STRING_FILL),
            RoleSpec("target", RoleKind.STRING_FILL),
        )
    )


def make_doc(doc_id: str, text: str, gold: list[Template], pred: list[Template]) -> Document:
    return Document(doc_id, text, tuple(gold), tuple(pred))


def gold_template(**fillers) -> Template:
    built = {}
    for role, value in fillers.items():
        if isinstance(value, str):
            built[role] = value
        else:
            built[role] = tuple(
                e if isinstance(e, GoldEntity) else GoldEntity(tuple(e)) for e in value
            )
    return Template(built)


def pred_template(**fillers) -> Template:
    built = {}
    for role, value in fillers.items():
        built[role] = value if isinstance(value, str) else tuple(value)
    return Template(built)


def span_mention(text: str, start: int) -> Mention:
    return Mention(text, Span(start, start + len(text)))
