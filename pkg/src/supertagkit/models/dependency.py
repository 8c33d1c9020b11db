"""Dependency-based supertag disambiguation.

A hypothesis fixes supertags for some positions and records head->dependent
arcs.  Fixing a supertag commits to one of its observed direction signatures,
which queues one slot per required dependent.  A slot is filled by picking a
(dependent supertag, ordinal) row from the table: the ordinal-th word in that
direction whose candidate set holds the dependent supertag becomes the
dependent, provided it is still unfixed and the new arc crosses no existing
arc.  The path score gains log P(row) and, once per position, the unigram
log-probability of the supertag fixed there.

Search is greedy: the best-scoring child of the current hypothesis is
extended first, and the remaining children are kept on a stack for
backtracking when a hypothesis dead-ends.  Each hypothesis is forward
checked when it is created (every pending slot must still have enough
reachable fillers, and no stretch of unfixed words may be cut off by
existing arcs), so dead ends are discarded without spending budget, and the
slot with the fewest fillers is filled next.  The first hypothesis with
every position fixed and every slot filled is the answer, except that the
rest of the budget is spent looking for other complete analyses with exactly
the same score; among such ties the one with the shortest total arc length
wins, so a dependent goes to its nearest eligible head.  With
``search="best"`` the leftover budget is used as branch and bound instead:
any complete analysis scoring higher replaces the current one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..corpus.derivation import DependencyLink
from ..corpus.tables import LEFT, RIGHT, DependencyTable, UnigramTable
from ..grammar import Lexicon
from .sentence import TaggedSentence, kite_string_tangle
from .unigram import rank_candidates

DEFAULT_BUDGET = 1000
TIE_EPS = 1e-9
SEED_ORDERS = ("position", "score")
SEARCH_MODES = ("first", "best")


@dataclass(frozen=True)
class _Hyp:
    score: float
    tags: tuple           # supertag or None per position
    sigs: tuple           # committed direction signature per fixed position
    arcs: tuple           # (head, dependent) pairs
    agenda: tuple         # slots: (head, direction, remaining, last distance)

    @property
    def fixed(self):
        return sum(t is not None for t in self.tags)


def _slots(head, sig):
    left = sum(1 for d in sig if d == LEFT)
    right = len(sig) - left
    out = []
    if left:
        out.append((head, -1, left, 0))
    if right:
        out.append((head, 1, right, 0))
    return tuple(out)


def _locate(candsets, head, step, tag, ordinal, mode):
    """Index of the ordinal-th word from ``head`` in direction ``step`` holding ``tag``."""
    if ordinal * step <= 0:
        return None
    if mode == "surface":
        j = head + ordinal
        return j if 0 <= j < len(candsets) and tag in candsets[j] else None
    need = abs(ordinal)
    j = head + step
    while 0 <= j < len(candsets):
        if tag in candsets[j]:
            need -= 1
            if need == 0:
                return j
        j += step
    return None


def _gaps_reachable(hyp, n):
    """Necessary condition for completion under the no-crossing constraint.

    Unfixed words form maximal runs between fixed ones; since arc endpoints
    are fixed words, a run lies wholly inside or outside every arc's span.  A
    run can only be filled from a pending slot that reaches it without
    crossing, or from another fillable run on the same sides of all arcs.
    """
    gaps, start = [], None
    for i in range(n + 1):
        free = i < n and hyp.tags[i] is None
        if free and start is None:
            start = i
        elif not free and start is not None:
            gaps.append(start)
            start = None
    if not gaps:
        return True
    spans = [(min(a), max(a)) for a in hyp.arcs]
    sides = [tuple(lo < g < hi for lo, hi in spans) for g in gaps]
    reached = set()
    for head, step, _, last in hyp.agenda:
        for k, g in enumerate(gaps):
            if k in reached:
                continue
            # any word of the run in the slot's direction and range will do
            end = g
            while end + 1 < n and hyp.tags[end + 1] is None:
                end += 1
            u = end if step > 0 else g
            if (u - head) * step > last and not any(
                    kite_string_tangle((head, u), a) for a in hyp.arcs):
                reached.add(k)
    frontier = list(reached)
    while frontier:
        k = frontier.pop()
        for m in range(len(gaps)):
            if m not in reached and sides[m] == sides[k]:
                reached.add(m)
                frontier.append(m)
    return len(reached) == len(gaps)


def _tie_key(hyp):
    """Preference among complete analyses of equal score: shorter arcs first."""
    return (sum(abs(h - d) for h, d in hyp.arcs), hyp.tags, tuple(sorted(hyp.arcs)))


def dependency_tag(sentence, table: DependencyTable, unigram: UnigramTable, lexicon: Lexicon,
                   budget=DEFAULT_BUDGET, seed_order="position", search="first") -> TaggedSentence:
    """Assign supertags and dependency links; returns a TaggedSentence.

    When no complete assignment is found within ``budget`` expansions the
    result has ``complete=False``: it carries the arcs of the partial
    hypothesis that fixed the most positions (best score among those), and the
    remaining positions fall back to their top unigram supertag.
    """
    if seed_order not in SEED_ORDERS:
        raise ValueError("seed_order must be one of %s" % (SEED_ORDERS,))
    if search not in SEARCH_MODES:
        raise ValueError("search must be one of %s" % (SEARCH_MODES,))
    if not isinstance(sentence, TaggedSentence):
        sentence = TaggedSentence.from_tokens(sentence, lexicon)
    words = sentence.words
    n = len(words)
    if n == 0:
        sentence.links = []
        return sentence
    candsets = [frozenset(w.candidates) for w in words]
    mode = table.ordinal_mode
    uni = {}

    def unilog(i, tag):
        key = (i, tag)
        if key not in uni:
            uni[key] = math.log(unigram.prob(words[i].pos, tag))
        return uni[key]

    def fix(values, i, value):
        values = list(values)
        values[i] = value
        return tuple(values)

    def fillers(hyp, group):
        """Feasible (score, dependent supertag, position) choices for a slot group."""
        head, step, _, last = group
        direction = LEFT if step < 0 else RIGHT
        out = []
        for dep, ordinal, prob in table.rows_for(words[head].pos, hyp.tags[head],
                                                 hyp.sigs[head], direction):
            j = _locate(candsets, head, step, dep, ordinal, mode)
            if j is None or hyp.tags[j] is not None or abs(j - head) <= last:
                continue
            if any(kite_string_tangle((head, j), a) for a in hyp.arcs):
                continue
            out.append((hyp.score + math.log(prob) + unilog(j, dep), dep, j))
        return out

    def analyse(hyp):
        """None when ``hyp`` can never complete, else the slot group to fill next.

        Every pending group is forward checked; the one with the fewest
        feasible fillers is returned as (index, options).  A hypothesis
        with an empty agenda is returned as () when complete.
        """
        if not hyp.agenda:
            return () if hyp.fixed == n else None
        if sum(g[2] for g in hyp.agenda) > n - hyp.fixed or not _gaps_reachable(hyp, n):
            return None
        chosen = None
        for index, group in enumerate(hyp.agenda):
            options = fillers(hyp, group)
            if len({o[2] for o in options}) < group[2]:
                return None
            if chosen is None or len(options) < len(chosen[1]):
                chosen = (index, options)
        return chosen

    seeds = []
    for i, w in enumerate(words):
        for tag in w.candidates:
            for rank, sig in enumerate(table.signatures_for(w.pos, tag)):
                hyp = _Hyp(unilog(i, tag), fix((None,) * n, i, tag), fix((None,) * n, i, sig),
                           (), _slots(i, sig))
                seeds.append(((i, -hyp.score, tag, rank) if seed_order == "position"
                              else (-hyp.score, i, tag, rank), hyp))
    seeds.sort(key=lambda s: s[0])
    best_partial = max((h for _, h in seeds), key=lambda h: h.score)
    stack = [(hyp, plan) for hyp, plan in ((h, analyse(h)) for _, h in reversed(seeds))
             if plan is not None]

    # only live hypotheses are extended, and each extension costs one unit of budget
    expansions = 0
    result = None
    while stack and expansions < budget:
        hyp, plan = stack.pop()
        if result is not None and hyp.score < result.score - TIE_EPS:
            continue            # scores only fall along a path, so this cannot tie
        if plan == ():
            if (result is None
                    or (search == "best" and hyp.score > result.score + TIE_EPS)
                    or (abs(hyp.score - result.score) <= TIE_EPS
                        and _tie_key(hyp) < _tie_key(result))):
                result = hyp
            continue
        expansions += 1
        index, options = plan
        head, step, remaining, last = hyp.agenda[index]
        rest = hyp.agenda[:index] + hyp.agenda[index + 1:]
        children = []
        for score, dep, j in options:
            dist = abs(j - head)
            agenda = rest[:index] + (((head, step, remaining - 1, dist),) if remaining > 1 else ()) + rest[index:]
            tags = fix(hyp.tags, j, dep)
            for rank, dep_sig in enumerate(table.signatures_for(words[j].pos, dep)):
                child = _Hyp(score, tags, fix(hyp.sigs, j, dep_sig), hyp.arcs + ((head, j),),
                             agenda + _slots(j, dep_sig))
                child_plan = analyse(child)
                if child_plan is None:
                    continue
                if (child.fixed, child.score) > (best_partial.fixed, best_partial.score):
                    best_partial = child
                children.append(((-score, dep, j, rank), child, child_plan))
        children.sort(key=lambda c: c[0])
        stack.extend((child, child_plan) for _, child, child_plan in reversed(children))

    if result is not None:
        return _finish(sentence, result, complete=True)
    return _finish(sentence, best_partial, complete=False, unigram=unigram)


def _finish(sentence, hyp, complete, unigram=None):
    for i, w in enumerate(sentence.words):
        tag = hyp.tags[i] if hyp is not None else None
        if tag is None:
            tag = rank_candidates(w.pos, w.candidates, unigram)[0]
        w.chosen = tag
    arcs = sorted(hyp.arcs) if hyp is not None else []
    sentence.links = [DependencyLink(h, d) for h, d in arcs]
    sentence.score = hyp.score if hyp is not None else float("-inf")
    sentence.complete = complete
    return sentence
