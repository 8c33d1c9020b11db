"""The supertag disambiguation models."""
from .dependency import DEFAULT_BUDGET, SEARCH_MODES, SEED_ORDERS, dependency_tag
from .sentence import Arc, TaggedSentence, TaggedWord, kite_string_tangle
from .trigram import sequence_score, trigram_tag
from .unigram import rank_candidates, unigram_best, unigram_tag

__all__ = [
    "DEFAULT_BUDGET", "SEARCH_MODES", "SEED_ORDERS", "Arc", "TaggedSentence", "TaggedWord", "dependency_tag",
    "kite_string_tangle", "rank_candidates", "sequence_score", "trigram_tag", "unigram_best",
    "unigram_tag",
]
