"""Turn a supertagged, dependency-linked sentence into derivation trees.

The supertags together with the links already fix everything but the
operation and the address, and both follow from the templates: an initial
dependent substitutes into a same-label substitution site of its head, an
auxiliary one adjoins at a same-label node.  Words without a head become
roots, so an incomplete linking yields a forest of fragments.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .corpus.derivation import (ADJUNCTION, SUBSTITUTION, DerivationNode,
                                validate_derivation)
from .grammar import INITIAL, Grammar


class StitchError(ValueError):
    pass


@dataclass
class StitchResult:
    roots: list                                        # DerivationNode, by anchor position
    root_positions: list
    diagnostics: list = field(default_factory=list)    # human-readable messages
    ambiguous: list = field(default_factory=list)      # (head, dependent) adjunctions

    @property
    def complete(self):
        return len(self.roots) == 1 and not self.diagnostics

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def _pairs(links):
    for link in links:
        yield (link.head, link.dependent) if hasattr(link, "head") else tuple(link)


def stitch(tagged, grammar: Grammar, links=None) -> StitchResult:
    """Build the derivation forest for ``tagged`` (a TaggedSentence or FlatSentence).

    Substitution sites sharing a label are filled by dependents in surface
    order.  Adjunction goes to the lowest, then leftmost, free node whose label
    matches; when several nodes match the attachment is flagged ambiguous.
    A link with no compatible site is dropped with an "unattachable link"
    diagnostic and its dependent heads a separate fragment.
    """
    words = tagged.words
    tags = [getattr(w, "chosen", None) or getattr(w, "supertag", None) for w in words]
    if any(t is None for t in tags):
        raise StitchError("every word needs a chosen supertag")
    for i, t in enumerate(tags):
        if t not in grammar.templates:
            raise StitchError("word %d (%s): unknown supertag %s" % (i, words[i].word, t))
    pairs = sorted(set(_pairs(tagged.links if links is None else links)))
    head_of = {}
    for h, d in pairs:
        if not (0 <= h < len(words) and 0 <= d < len(words)) or h == d:
            raise StitchError("link %d->%d out of range" % (h, d))
        if d in head_of:
            raise StitchError("word %d has two heads (%d and %d)" % (d, head_of[d], h))
        head_of[d] = h
    for start in head_of:
        seen, i = {start}, start
        while i in head_of:
            i = head_of[i]
            if i in seen:
                raise StitchError("cyclic links through word %d" % i)
            seen.add(i)

    nodes = [DerivationNode(t, w.word, w.pos) for t, w in zip(tags, words)]
    result = StitchResult([], [])
    dependents = {}
    for h, d in pairs:
        dependents.setdefault(h, []).append(d)

    def drop(h, d, why):
        del head_of[d]
        result.diagnostics.append("unattachable link %d->%d (%s[%s] -> %s[%s]): %s"
                                  % (h, d, tags[h], words[h].word, tags[d], words[d].word, why))

    for h in sorted(dependents):
        template = grammar[tags[h]]
        open_sites = {}
        for site in template.substitution_sites:
            open_sites.setdefault(site.label, []).append(site)
        taken = set()
        for d in sorted(dependents[h]):
            dep_t = grammar[tags[d]]
            label = dep_t.root.label
            if dep_t.kind == INITIAL:
                sites = open_sites.get(label)
                if not sites:
                    drop(h, d, "no free %s substitution site" % label)
                    continue
                site = sites.pop(0)
                nodes[h].attach(nodes[d], SUBSTITUTION, site.address)
            else:
                matches = template.adjunction_sites(label)
                free = [n for n in matches if n.address not in taken]
                if not free:
                    drop(h, d, "no free %s node to adjoin to" % label)
                    continue
                ambiguous = len(matches) > 1
                taken.add(free[0].address)
                nodes[h].attach(nodes[d], ADJUNCTION, free[0].address, ambiguous)
                if ambiguous:
                    result.ambiguous.append((h, d))

    for i in range(len(words)):
        if i not in head_of:
            result.roots.append(nodes[i])
            result.root_positions.append(i)
    for root in result.roots:
        try:
            validate_derivation(root, grammar, complete=False)
        except ValueError as err:   # pragma: no cover - guarded by construction
            raise StitchError("stitched derivation is invalid: %s" % err) from None
    return result


def ambiguity_reduction(tagged, n=None):
    """(candidates before, supertags kept after, reduction factor).

    With ``n`` set, the count after is the top-n total instead of one per word.
    """
    before = sum(len(w.candidates) for w in tagged.words)
    if n is None:
        after = len(tagged.words)
    else:
        after = sum(min(n, len(w.candidates)) for w in tagged.words)
    return before, after, (before / after if after else 1.0)


__all__ = ["StitchError", "StitchResult", "ambiguity_reduction", "stitch"]
