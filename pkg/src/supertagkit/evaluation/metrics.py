"""Evaluation measures over a gold corpus of flattened derivations.

Every measure comes in two layers: a counting function that compares gold
sentences with predictions already computed (so callers can tag in parallel),
and a convenience wrapper that runs a tagger itself.  Percentages are in
[0, 100].
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass


class EmptyCorpusError(ValueError):
    def __init__(self):
        super().__init__("empty corpus")


def _require(corpus):
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpusError()
    return corpus


def _tags(prediction):
    return list(prediction.tags) if hasattr(prediction, "tags") else list(prediction)


def _pct(num, den):
    return 100.0 * num / den if den else 100.0


def topn_counts(corpus, topn_lists):
    """(successes, sentences): a sentence succeeds when every gold tag is in its word's list."""
    corpus = _require(corpus)
    ok = sum(all(g in cands for g, cands in zip(s.gold, lists))
             for s, lists in zip(corpus, topn_lists))
    return ok, len(corpus)


def topn_success(corpus, tagger, n=1):
    """Percentage of sentences whose gold supertags all fall in the top-``n`` lists.

    ``tagger(tokens, n)`` returns one list of supertags per word.
    """
    corpus = _require(corpus)
    return _pct(*topn_counts(corpus, [tagger(s.tokens, n) for s in corpus]))


def accuracy_counts(corpus, predictions):
    """(correct words, words) for predicted supertag sequences."""
    corpus = _require(corpus)
    correct = words = 0
    for s, p in zip(corpus, predictions):
        tags = _tags(p)
        if len(tags) != len(s):
            raise ValueError("prediction has %d tags for a %d-word sentence" % (len(tags), len(s)))
        correct += sum(a == b for a, b in zip(tags, s.gold))
        words += len(s)
    return correct, words


def supertag_accuracy(corpus, tagger):
    """Per-word exact-match percentage; ``tagger(tokens)`` returns tags or a TaggedSentence."""
    corpus = _require(corpus)
    return _pct(*accuracy_counts(corpus, [tagger(s.tokens) for s in corpus]))


@dataclass
class DependencyCounts:
    matched_links: int = 0
    gold_links: int = 0
    predicted_links: int = 0
    words: int = 0
    sentence_roots: int = 0
    correct_tags: int = 0
    complete: int = 0
    sentences: int = 0

    @property
    def link_recall(self):
        return _pct(self.matched_links, self.gold_links)

    @property
    def supertag_accuracy(self):
        return _pct(self.correct_tags, self.words)

    def __add__(self, other):
        return DependencyCounts(*(a + b for a, b in zip(asdict(self).values(),
                                                       asdict(other).values())))


def _pairs(links):
    return {frozenset((l.head, l.dependent)) if hasattr(l, "head") else frozenset(l)
            for l in links or ()}


def dependency_counts(corpus, predictions) -> DependencyCounts:
    """Links match as unordered word pairs; operation and address play no part.

    Each gold sentence contributes one missing link per derivation root, so
    gold_links always equals words - sentence_roots.
    """
    corpus = _require(corpus)
    total = DependencyCounts()
    for s, p in zip(corpus, predictions):
        gold = _pairs(s.links)
        predicted = _pairs(p.links)
        total += DependencyCounts(
            matched_links=len(gold & predicted),
            gold_links=len(gold),
            predicted_links=len(predicted),
            words=len(s),
            sentence_roots=len(s.roots),
            correct_tags=sum(a == b for a, b in zip(_tags(p), s.gold)),
            complete=int(getattr(p, "complete", True)),
            sentences=1,
        )
    return total


def dependency_scores(corpus, tagger):
    """(link recall, supertag accuracy) as percentages for ``tagger(tokens)``."""
    corpus = _require(corpus)
    counts = dependency_counts(corpus, [tagger(s.tokens) for s in corpus])
    return counts.link_recall, counts.supertag_accuracy


def format_report(metrics, structured=False) -> str:
    """``metric<TAB>value`` lines in the given order, optionally followed by JSON.

    Floats print with four decimals; the JSON block carries full precision.
    """
    lines = []
    for name, value in metrics.items():
        lines.append("%s\t%s" % (name, "%.4f" % value if isinstance(value, float) else value))
    text = "\n".join(lines) + "\n"
    if structured:
        text += json.dumps(metrics, indent=2) + "\n"
    return text


__all__ = [
    "DependencyCounts", "EmptyCorpusError", "accuracy_counts", "dependency_counts",
    "dependency_scores", "format_report", "supertag_accuracy", "topn_counts", "topn_success",
]
