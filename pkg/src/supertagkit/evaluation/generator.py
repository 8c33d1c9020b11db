"""Random derivations from a grammar, for training and testing at desk scale."""
from __future__ import annotations

import random

from ..corpus.derivation import ADJUNCTION, SUBSTITUTION, DerivationNode
from ..grammar import ANCHOR, INITIAL, INTERNAL, Grammar

MAX_TRIES = 1000


class GeneratorError(ValueError):
    pass


def _min_heights(grammar: Grammar, usable):
    """Smallest derivation height reachable from each usable template (fixpoint)."""
    height = {}
    changed = True
    while changed:
        changed = False
        for tid in usable:
            need = [min((height[c] for c in usable
                         if c in height and grammar[c].kind == INITIAL
                         and grammar[c].root.label == site.label), default=None)
                    for site in grammar[tid].substitution_sites]
            if any(h is None for h in need):
                continue
            h = 1 + max(need, default=0)
            if height.get(tid, h + 1) > h:
                height[tid] = h
                changed = True
    return height


class CorpusGenerator:
    def __init__(self, grammar: Grammar, max_depth=6, max_length=15, adjoin_prob=0.1,
                 root_label="S"):
        self.grammar = grammar
        self.max_depth = max_depth
        self.max_length = max_length
        self.adjoin_prob = adjoin_prob
        self.anchors = {tid: grammar.lexicon.words_for(tid) for tid in grammar.templates}
        usable = sorted(tid for tid, ws in self.anchors.items() if ws)
        self.height = _min_heights(grammar, usable)
        self.initial = {}
        self.auxiliary = {}
        for tid in sorted(self.height):
            t = grammar[tid]
            bucket = self.initial if t.kind == INITIAL else self.auxiliary
            bucket.setdefault(t.root.label, []).append(tid)
        self.roots = [tid for tid in self.initial.get(root_label, [])
                      if self.height[tid] <= max_depth]
        if not self.roots:
            raise GeneratorError("grammar admits no complete derivation rooted in %s "
                                 "within depth %d" % (root_label, max_depth))

    def _expand(self, rng, tid, depth):
        template = self.grammar[tid]
        word, pos = rng.choice(self.anchors[tid])
        node = DerivationNode(tid, word, pos)
        room = self.max_depth - depth
        for site in template.substitution_sites:
            options = [c for c in self.initial.get(site.label, ()) if self.height[c] <= room]
            node.attach(self._expand(rng, rng.choice(options), depth + 1),
                        SUBSTITUTION, site.address)
        for target in template.nodes():
            if target.mark not in (INTERNAL, ANCHOR):
                continue
            options = [a for a in self.auxiliary.get(target.label, ()) if self.height[a] <= room]
            if options and rng.random() < self.adjoin_prob:
                node.attach(self._expand(rng, rng.choice(options), depth + 1),
                            ADJUNCTION, target.address)
        return node

    def derivation(self, rng) -> DerivationNode:
        for _ in range(MAX_TRIES):
            d = self._expand(rng, rng.choice(self.roots), 1)
            if len(d) <= self.max_length:
                return d
        raise GeneratorError("no derivation within %d words after %d tries"
                             % (self.max_length, MAX_TRIES))


def generate_corpus(grammar: Grammar, seed: int, size: int, max_depth=6, max_length=15,
                    adjoin_prob=0.1, root_label="S") -> list:
    """``size`` random derivations; identical for identical arguments."""
    if size < 0:
        raise ValueError("size must be non-negative")
    gen = CorpusGenerator(grammar, max_depth, max_length, adjoin_prob, root_label)
    rng = random.Random(seed)
    return [gen.derivation(rng) for _ in range(size)]


__all__ = ["CorpusGenerator", "GeneratorError", "generate_corpus"]
