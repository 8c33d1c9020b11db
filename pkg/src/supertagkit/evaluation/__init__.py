"""Evaluation measures and the synthetic corpus generator."""
from .generator import CorpusGenerator, GeneratorError, generate_corpus
from .metrics import (DependencyCounts, EmptyCorpusError, accuracy_counts, dependency_counts,
                      dependency_scores, format_report, supertag_accuracy, topn_counts,
                      topn_success)

__all__ = [
    "CorpusGenerator", "DependencyCounts", "EmptyCorpusError", "GeneratorError",
    "accuracy_counts", "dependency_counts", "dependency_scores", "format_report",
    "generate_corpus", "supertag_accuracy", "topn_counts", "topn_success",
]
