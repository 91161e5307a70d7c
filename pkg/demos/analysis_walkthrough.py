"""End-to-end walkthrough on a small hand-built document.

A news-style document describes two incidents; the system predicted one
template with a handful of classic mistakes. The analysis matches the
predicted template to its best gold counterpart, derives the
transformations that would repair it, and files each one under an error
type.

Run: python3 demos/analysis_walkthrough.py
"""

from tfea import (
    AnalysisConfig,
    Document,
    GoldEntity,
    Mention,
    RoleKind,
    RoleSpec,
    Schema,
    Span,
    Template,
    analyze_document,
    total_errors,
)
from tfea.scoring import score_document

TEXT = (
    "the shining path members attacked the police station building with dynamite "
    "yesterday morning two policemen died in the blast the terrorists fled "
    "meanwhile a guerrilla column assaulted the mayor of ayacucho officials said "
    "the mayor survived"
)


def at(needle: str, from_end: bool = False) -> Mention:
    start = TEXT.rfind(needle) if from_end else TEXT.find(needle)
    return Mention(needle, Span(start, start + len(needle)))


schema = Schema(
    (
        RoleSpec("incident_type", RoleKind.SET_FILL,
                 values=("attack", "kidnapping", "bombing", "arson", "robbery")),
        RoleSpec("PerpInd", RoleKind.STRING_FILL),
        RoleSpec("Target", RoleKind.STRING_FILL),
        RoleSpec("Victim", RoleKind.STRING_FILL),
        RoleSpec("Weapon", RoleKind.STRING_FILL),
    )
)

gold = (
    Template(
        {
            "incident_type": "bombing",
            "PerpInd": (GoldEntity((at("shining path members"), at("terrorists"))),),
            "Target": (GoldEntity((at("police station"),)),),
            "Weapon": (GoldEntity((at("dynamite"),)),),
            "Victim": (GoldEntity((at("two policemen"),)),),
        }
    ),
    Template(
        {
            "incident_type": "attack",
            "PerpInd": (GoldEntity((at("guerrilla column"),)),),
            "Victim": (GoldEntity((at("mayor of ayacucho"), at("the mayor", from_end=True))),),
        }
    ),
)

# The prediction gets the bombing roughly right: the target span runs
# long, the perpetrator appears twice (failed coreference), dynamite is
# also filed under Target, and the second incident is missed entirely.
predicted = (
    Template(
        {
            "incident_type": "bombing",
            "PerpInd": (at("shining path members"), at("terrorists")),
            "Target": (at("police station building"), at("dynamite")),
            "Weapon": (at("dynamite"),),
            "Victim": (at("two policemen"),),
        }
    ),
)

doc = Document("walkthrough", TEXT, gold, predicted)
analysis = analyze_document(doc, schema, AnalysisConfig())

matching = analysis.matching
print("chosen matching:")
for pair in matching.pairs:
    print(f"  predicted template {pair.pred_index} -> gold template {pair.gold_index}")
print(f"  missing gold templates: {list(matching.missing_templates)}")
print()

print("transformations, in application order:")
for t in analysis.log:
    target = f" -> {t.gold_mention.text!r}" if t.gold_mention else ""
    where = f" [{t.role}]" if t.role else ""
    print(f"  {t.kind.value}{where}: {t.pred_text!r}{target}"
          if t.pred_text else f"  {t.kind.value}{where}{target}")
print()

print("error profile:")
for etype, count in analysis.profile.counts.items():
    if count:
        print(f"  {etype.value}: {count}")
print(f"  (fillers inside the missed template: {analysis.profile.missing_template_role_fillers})")
print(f"  total errors: {total_errors(analysis.profile)}")
print()

scores = score_document(matching)
print(f"document F1 {scores.overall.f1:.4f} "
      f"(precision {scores.overall.precision:.4f}, recall {scores.overall.recall:.4f})")
for role, triple in scores.per_role.items():
    print(f"  {role:14s} P {triple.precision:.2f}  R {triple.recall:.2f}  F1 {triple.f1:.2f}")
