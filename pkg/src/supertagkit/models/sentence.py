from __future__ import annotations

from dataclasses import dataclass

from ..grammar import Lexicon


@dataclass
class TaggedWord:
    word: str
    pos: str
    candidates: tuple            # sorted supertag ids
    chosen: str | None = None


@dataclass
class TaggedSentence:
    words: list
    links: list | None = None    # DependencyLink, dependency model only
    score: float = 0.0
    complete: bool = True

    @classmethod
    def from_tokens(cls, tokens, lexicon: Lexicon) -> "TaggedSentence":
        """``tokens`` is a sequence of (word, POS); raises UnknownPOSError."""
        return cls([TaggedWord(w, p, tuple(sorted(lexicon.candidates(w, p))))
                    for w, p in tokens])

    @property
    def tags(self):
        return [w.chosen for w in self.words]

    @property
    def tokens(self):
        return [(w.word, w.pos) for w in self.words]

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class Arc:
    """Undirected span between two word positions, stored with i < j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("arc endpoints must differ")
        if self.i > self.j:
            lo, hi = self.j, self.i
            object.__setattr__(self, "i", lo)
            object.__setattr__(self, "j", hi)


def kite_string_tangle(x, y) -> bool:
    """True iff the two arcs cross: with x = (a, c) and y = (b, d),
    a < b < c < d or b < a < d < c."""
    a, c = (x.i, x.j) if isinstance(x, Arc) else sorted(x)
    b, d = (y.i, y.j) if isinstance(y, Arc) else sorted(y)
    return a < b < c < d or b < a < d < c
