"""The injection oracle: seed known errors, then recover them exactly.

The injector starts from a synthetic gold corpus, perturbs a copy of it
with a requested number of each error type, and keeps a ledger of what
it planted. Analyzing the perturbed predictions must reproduce the
ledger exactly; this is the strongest end-to-end check the package has.

Run: python3 demos/injection_roundtrip.py
"""

from tfea import (
    AnalysisConfig,
    ErrorType,
    GenerationParams,
    InjectionSpec,
    analyze_corpus,
    generate_corpus,
    inject_errors,
)
from tfea.inject import default_schema

# Each document needs enough templates that one can stay untouched by
# the filler-level injections and still be deletable.
schema = default_schema()
params = GenerationParams(
    n_docs=4,
    templates_per_doc=(6, 6),
    entities_per_role=(2, 2),
    mentions_per_entity=(2, 2),
)
gold = generate_corpus(params, seed=2)
print(f"generated {len(gold)} documents, "
      f"{sum(len(d.gold_templates) for d in gold)} gold templates")

spec = InjectionSpec(
    counts={
        ErrorType.SPAN_ERROR: 2,
        ErrorType.DUPLICATE_ROLE_FILLER: 1,
        ErrorType.INCORRECT_ROLE: 1,
        ErrorType.SPURIOUS_ROLE_FILLER: 1,
        ErrorType.MISSING_TEMPLATE: 1,
    }
)
result = inject_errors(gold, schema, spec, seed=42)
print("injected per document:", {e.value: k for e, k in spec.counts.items()})
print()

analysis = analyze_corpus(result.documents, schema, AnalysisConfig())
ledger = result.ledger
recovered = analysis.profile

print(f"{'error type':55s} {'planted':>8s} {'found':>6s}")
for etype, planted in ledger.counts.items():
    found = recovered.counts[etype]
    marker = "" if planted == found else "   <-- MISMATCH"
    if planted or found:
        print(f"{etype.value:55s} {planted:8d} {found:6d}{marker}")
print(f"{'missing template role fillers (side tally)':55s} "
      f"{ledger.missing_template_role_fillers:8d} {recovered.missing_template_role_fillers:6d}")

exact = recovered == ledger
print()
print("analyzer profile == injection ledger:", exact)
print(f"corpus F1 after injection: {analysis.scores.overall.f1:.4f}")
