"""Derivation-tree corpora and the trainers built on them."""
from .derivation import (ADJUNCTION, SUBSTITUTION, Attachment, DependencyLink, DerivationError,
                         DerivationNode, FlatSentence, FlatWord, flatten, linearize, load_corpus,
                         parse_corpus, serialize_corpus, serialize_derivation,
                         toy_corpus_path, validate_derivation)
from .tables import (BOS, DEFAULT_FLOOR, DEFAULT_K, EOS, LEFT, ORDINAL_MODES, RIGHT,
                     DependencyEntry, DependencyTable, TableFormatError, TrigramTable,
                     UnigramTable, candidate_sets, format_signature, load_table, ordinal_of,
                     parse_signature, save_table, signature_of, train_dependency,
                     train_trigram, train_unigram)

__all__ = [
    "ADJUNCTION", "BOS", "DEFAULT_FLOOR", "DEFAULT_K", "EOS", "LEFT", "ORDINAL_MODES", "RIGHT",
    "SUBSTITUTION", "Attachment", "DependencyEntry", "DependencyLink", "DependencyTable",
    "DerivationError", "DerivationNode", "FlatSentence", "FlatWord", "TableFormatError",
    "TrigramTable", "UnigramTable", "candidate_sets", "flatten", "format_signature",
    "linearize", "load_corpus", "load_table", "ordinal_of", "parse_corpus", "parse_signature",
    "save_table", "serialize_corpus", "serialize_derivation", "signature_of", "toy_corpus_path",
    "train_dependency", "train_trigram", "train_unigram", "validate_derivation",
]
