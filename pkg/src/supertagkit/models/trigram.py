from __future__ import annotations

import math

from ..corpus.tables import BOS, EOS, TrigramTable
from ..grammar import Lexicon
from .sentence import TaggedSentence


def sequence_score(tags, symbols, table: TrigramTable) -> float:
    """log P(T) + log P(symbols | T) under the trigram and emission approximations."""
    seq = [BOS, BOS] + list(tags) + [EOS]
    score = sum(math.log(table.transition_prob(seq[i - 2], seq[i - 1], seq[i]))
                for i in range(2, len(seq)))
    return score + sum(math.log(table.emission_prob(t, s)) for t, s in zip(tags, symbols))


def trigram_tag(sentence, table: TrigramTable, lexicon: Lexicon) -> TaggedSentence:
    """Exact Viterbi decoding over (previous, current) supertag pairs.

    Only each word's candidates are considered.  Equal scores resolve to the
    smallest supertag id.
    """
    if not isinstance(sentence, TaggedSentence):
        sentence = TaggedSentence.from_tokens(sentence, lexicon)
    words = sentence.words
    if not words:
        sentence.score = math.log(table.transition_prob(BOS, BOS, EOS))
        return sentence
    symbols = [w.pos if table.emission_unit == "pos" else w.word for w in words]
    tr = table.transition_prob
    em = table.emission_prob

    # column[(v, w)] = (score, backpointer u)
    column = {}
    for t in words[0].candidates:
        column[BOS, t] = (math.log(tr(BOS, BOS, t)) + math.log(em(t, symbols[0])), None)
    history = [column]
    for i in range(1, len(words)):
        nxt = {}
        for w in words[i].candidates:
            emit = math.log(em(w, symbols[i]))
            for v in words[i - 1].candidates:
                best = None
                for (u, v2), (score, _) in column.items():
                    if v2 != v:
                        continue
                    s = score + math.log(tr(u, v, w))
                    if best is None or s > best[0] or (s == best[0] and u < best[1]):
                        best = (s, u)
                nxt[v, w] = (best[0] + emit, best[1])
        column = nxt
        history.append(column)

    final = None
    for (v, w), (score, _) in column.items():
        s = score + math.log(tr(v, w, EOS))
        if final is None or s > final[0] or (s == final[0] and (v, w) < final[1]):
            final = (s, (v, w))
    score, (v, w) = final
    tags = [w]
    for i in range(len(words) - 1, 0, -1):
        u = history[i][v, w][1]
        tags.append(v)
        v, w = u, v
    tags.reverse()
    for word, tag in zip(words, tags):
        word.chosen = tag
    sentence.score = score
    return sentence
