from __future__ import annotations

import math

from ..corpus.tables import UnigramTable
from ..grammar import Lexicon
from .sentence import TaggedSentence


def rank_candidates(pos, candidates, table: UnigramTable) -> list:
    """Most preferred supertag first; ties go to the smallest id."""
    return sorted(candidates, key=lambda t: (-table.prob(pos, t), t))


def unigram_tag(sentence, table: UnigramTable, lexicon: Lexicon, n=1) -> list:
    """Top-``n`` supertags per word by P(supertag | POS).

    ``sentence`` is a list of (word, POS) pairs or a TaggedSentence.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not isinstance(sentence, TaggedSentence):
        sentence = TaggedSentence.from_tokens(sentence, lexicon)
    return [rank_candidates(w.pos, w.candidates, table)[:n] for w in sentence.words]


def unigram_best(sentence, table: UnigramTable, lexicon: Lexicon) -> TaggedSentence:
    """Top-1 assignment as a TaggedSentence, scored by summed unigram log-probability."""
    if not isinstance(sentence, TaggedSentence):
        sentence = TaggedSentence.from_tokens(sentence, lexicon)
    for w, best in zip(sentence.words, unigram_tag(sentence, table, lexicon, 1)):
        w.chosen = best[0]
    sentence.score = sum(math.log(table.prob(w.pos, w.chosen)) for w in sentence.words)
    return sentence
