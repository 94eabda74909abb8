"""Skip-gram embedding lab: exact softmax training on toy corpora,
negative sampling at scale, and validation of model probabilities
against corpus counts.
"""

from .analysis import (
    CorrelationResult,
    OptimalityReport,
    correlation,
    optimal_E,
    optimality_report,
)
from .cooccur import CooccurrenceTable, count_cooccurrences, ground_truth_prob
from .corpus import Vocabulary, build_vocab, encode, tokenize
from .embeddings import EmbeddingSet, init_embeddings, load_embeddings, save_embeddings
from .errors import (
    DegenerateCorrelationError,
    SglabError,
    TrainingDivergedError,
    UndefinedProbabilityError,
    VocabularyMismatchError,
)
from .exact import TrainConfig, train_exact
from .sgns import NoiseDistribution, SgnsConfig, build_noise_table, train_sgns
from .softmax import average_log_prob, log_prob_matrix, softmax_matrix, softmax_row

__all__ = [
    "CooccurrenceTable",
    "CorrelationResult",
    "DegenerateCorrelationError",
    "EmbeddingSet",
    "NoiseDistribution",
    "OptimalityReport",
    "SgnsConfig",
    "SglabError",
    "TrainConfig",
    "TrainingDivergedError",
    "UndefinedProbabilityError",
    "Vocabulary",
    "VocabularyMismatchError",
    "average_log_prob",
    "build_noise_table",
    "build_vocab",
    "correlation",
    "count_cooccurrences",
    "encode",
    "ground_truth_prob",
    "init_embeddings",
    "load_embeddings",
    "log_prob_matrix",
    "optimal_E",
    "optimality_report",
    "save_embeddings",
    "softmax_matrix",
    "softmax_row",
    "tokenize",
    "train_exact",
    "train_sgns",
]

__version__ = "0.1.0"
