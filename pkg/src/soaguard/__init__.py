"""Risk rating of Statement of Advice documents.

Core flow: parse or generate a document, label its sentences and tables with
the trained classifiers, run the six key-risk-indicator rule cascades, and
aggregate into a traffic-light assessment. An HTTP service adds the auditor
review workflow on top, with an append-only audit log.
"""

from .aggregate import DocumentAssessment, aggregate, rank_documents
from .errors import SoaGuardError
from .goals import GoalAdviceMap, GoalLink, MatchThresholds, map_goals, score_pair
from .kris import DocumentLabels, KriPolicy, load_policy
from .model import (
    Paragraph,
    Section,
    SoaDocument,
    Table,
    enumerate_units,
    parse_document,
    serialize_document,
    split_sentences,
)
from .pipeline import ModelBundle, analyze_document, load_models, save_models, train_models
from .ratings import KRI_IDS, EvidenceItem, KriResult, RiskRating
from .synth import CorpusProfile, GroundTruth, default_mix, generate_corpus, generate_document

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "SoaGuardError",
    "SoaDocument",
    "Section",
    "Paragraph",
    "Table",
    "parse_document",
    "serialize_document",
    "split_sentences",
    "enumerate_units",
    "RiskRating",
    "KriResult",
    "EvidenceItem",
    "KRI_IDS",
    "KriPolicy",
    "load_policy",
    "DocumentLabels",
    "MatchThresholds",
    "GoalLink",
    "GoalAdviceMap",
    "score_pair",
    "map_goals",
    "DocumentAssessment",
    "aggregate",
    "rank_documents",
    "ModelBundle",
    "train_models",
    "save_models",
    "load_models",
    "analyze_document",
    "CorpusProfile",
    "GroundTruth",
    "generate_document",
    "generate_corpus",
    "default_mix",
]
