"""Transformation-based error analysis for document-level template filling.

Given gold and predicted templates per document, the package finds the
F1-optimal template and mention matching, derives the transformation
sequence that rewrites the predictions into the gold annotations, maps
those transformations onto thirteen diagnostic error types, and emits
per-role and aggregate score and error reports.
"""

__version__ = "0.1.0"

from .config import AnalysisConfig
from .errors import ERROR_TYPES, ErrorProfile, ErrorType, map_errors, total_errors
from .exceptions import (
    ComplexityGuardExceeded,
    InconsistentLog,
    IncompatibleReports,
    InfeasibleSpec,
    ParseError,
    SchemaMismatch,
    TfeaError,
    UnmappableSequence,
)
from .inject import GenerationParams, InjectionSpec, generate_corpus, inject_errors
from .matching import (
    MentionPair,
    MentionPairing,
    Tally,
    TemplateMatching,
    TemplatePair,
    count_template_matchings,
    enumerate_mention_matchings,
    find_optimal_matching,
    greedy_matching,
    iter_template_matchings,
)
from .model import (
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
from .pipeline import CorpusAnalysis, DocumentAnalysis, analyze_corpus, analyze_document
from .scoring import Scores, ScoreTriple, score_corpus, score_document
from .spans import ScsMode, best_gold_target, scs_absolute, scs_geometric, span_score
from .transforms import (
    Transformation,
    TransformationLog,
    TransformKind,
    apply_transformations,
    derive_transformations,
)

__all__ = [
    "AnalysisConfig",
    "ComplexityGuardExceeded",
    "CorpusAnalysis",
    "Document",
    "DocumentAnalysis",
    "ERROR_TYPES",
    "ErrorProfile",
    "ErrorType",
    "GenerationParams",
    "GoldEntity",
    "IncompatibleReports",
    "InconsistentLog",
    "InfeasibleSpec",
    "InjectionSpec",
    "Mention",
    "MentionPair",
    "MentionPairing",
    "ParseError",
    "RoleKind",
    "RoleSpec",
    "Schema",
    "SchemaMismatch",
    "Scores",
    "ScoreTriple",
    "ScsMode",
    "Span",
    "Tally",
    "Template",
    "TemplateMatching",
    "TemplatePair",
    "TfeaError",
    "Transformation",
    "TransformationLog",
    "TransformKind",
    "UnmappableSequence",
    "analyze_corpus",
    "analyze_document",
    "apply_transformations",
    "best_gold_target",
    "count_template_matchings",
    "derive_transformations",
    "enumerate_mention_matchings",
    "exact_match",
    "find_optimal_matching",
    "generate_corpus",
    "greedy_matching",
    "inject_errors",
    "iter_template_matchings",
    "map_errors",
    "normalize",
    "resolve_document_spans",
    "resolve_span",
    "score_corpus",
    "score_document",
    "scs_absolute",
    "scs_geometric",
    "span_score",
    "total_errors",
]
