"""Probability tables for the disambiguation models, with trainers and file formats.

Tables keep raw counts; probabilities are derived on lookup so that files
round-trip exactly.  Every file is tab-separated, one record per line, with
``@name<TAB>value`` settings at the top and records in sorted order:

unigram.tsv      ``POS  supertag  count  prob``
trigram.tsv      ``trans  t-2  t-1  t  count  prob`` and ``emit  t  symbol  count  prob``
dependency.tsv   ``sig  POS  supertag  signature  count`` and
                 ``dep  POS  supertag  signature  direction  dependent  ordinal  count  prob``
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from ..grammar import Lexicon

BOS = "<s>"
EOS = "</s>"
LEFT = "-"
RIGHT = "+"

DEFAULT_K = 0.1
DEFAULT_FLOOR = 1e-6
ORDINAL_MODES = ("candidate", "surface")


class TableFormatError(ValueError):
    pass


def _num(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _prob(x):
    return "%.12g" % x


def _read_num(text):
    return int(text) if text.lstrip("-").isdigit() else float(text)


def _require_corpus(corpus):
    corpus = list(corpus)
    if not corpus or not any(len(s) for s in corpus):
        raise ValueError("empty corpus")
    return corpus


def format_signature(sig) -> str:
    return "(" + ",".join(sig) + ")"


def parse_signature(text: str) -> tuple:
    if not (text.startswith("(") and text.endswith(")")):
        raise TableFormatError("malformed direction signature %r" % text)
    inner = text[1:-1]
    sig = tuple(inner.split(",")) if inner else ()
    if any(d not in (LEFT, RIGHT) for d in sig):
        raise TableFormatError("malformed direction signature %r" % text)
    return sig


def _settings_and_records(text):
    settings, records = {}, []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if fields[0].startswith("@"):
            settings[fields[0][1:]] = fields[1] if len(fields) > 1 else ""
        else:
            records.append((lineno, fields))
    return settings, records


# -- unigram -----------------------------------------------------------------

@dataclass
class UnigramTable:
    """Relative frequency of each supertag given the POS of its anchor."""

    counts: dict = field(default_factory=dict)      # pos -> Counter(tag -> count)
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        self.counts = {p: Counter(c) for p, c in self.counts.items()}
        self._totals = {p: sum(c.values()) for p, c in self.counts.items()}

    def prob(self, pos, tag) -> float:
        total = self._totals.get(pos, 0)
        p = self.counts[pos][tag] / total if total else 0.0
        return p if p > 0 else self.floor

    def distribution(self, pos) -> dict:
        total = self._totals.get(pos, 0)
        return {t: c / total for t, c in self.counts.get(pos, {}).items()} if total else {}

    def __eq__(self, other):
        return (isinstance(other, UnigramTable) and self.floor == other.floor
                and {p: +c for p, c in self.counts.items()} == {p: +c for p, c in other.counts.items()})

    def dumps(self) -> str:
        lines = ["# unigram table: POS, supertag, count, P(supertag | POS)",
                 "@floor\t%r" % self.floor]
        for pos in sorted(self.counts):
            for tag in sorted(self.counts[pos]):
                c = self.counts[pos][tag]
                if c:
                    lines.append("\t".join([pos, tag, _num(c), _prob(self.prob(pos, tag))]))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text) -> "UnigramTable":
        settings, records = _settings_and_records(text)
        counts = defaultdict(Counter)
        for lineno, fields in records:
            if len(fields) != 4:
                raise TableFormatError("line %d: expected 4 fields" % lineno)
            counts[fields[0]][fields[1]] += _read_num(fields[2])
        return cls(dict(counts), float(settings.get("floor", DEFAULT_FLOOR)))


def train_unigram(corpus, floor=DEFAULT_FLOOR) -> UnigramTable:
    corpus = _require_corpus(corpus)
    counts = defaultdict(Counter)
    for sentence in corpus:
        for w in sentence.words:
            counts[w.pos][w.supertag] += 1
    return UnigramTable(dict(counts), floor)


# -- trigram -----------------------------------------------------------------

@dataclass
class TrigramTable:
    """Supertag trigram transitions plus per-supertag emission of POS (or word).

    Both are add-k smoothed: transitions over ``tags`` plus EOS, emissions
    over ``symbols``.  With k = 0 unseen events fall back to ``floor``.
    """

    transitions: dict = field(default_factory=dict)   # (t-2, t-1) -> Counter(t -> count)
    emissions: dict = field(default_factory=dict)     # t -> Counter(symbol -> count)
    tags: tuple = ()
    symbols: tuple = ()
    k: float = DEFAULT_K
    floor: float = DEFAULT_FLOOR
    emission_unit: str = "pos"

    def __post_init__(self):
        self.transitions = {ctx: Counter(c) for ctx, c in self.transitions.items()}
        self.emissions = {t: Counter(c) for t, c in self.emissions.items()}
        self.tags = tuple(sorted(set(self.tags)))
        self.symbols = tuple(sorted(set(self.symbols)))
        self._tagset = frozenset(self.tags) | {EOS}
        self._symbolset = frozenset(self.symbols)
        self._ctx_totals = {ctx: sum(c.values()) for ctx, c in self.transitions.items()}
        self._tag_totals = {t: sum(c.values()) for t, c in self.emissions.items()}

    def transition_prob(self, u, v, w) -> float:
        if w not in self._tagset:
            return self.floor
        counts = self.transitions.get((u, v))
        total = self._ctx_totals.get((u, v), 0)
        denom = total + self.k * len(self._tagset)
        p = ((counts[w] if counts else 0) + self.k) / denom if denom else 0.0
        return p if p > 0 else self.floor

    def emission_prob(self, tag, symbol) -> float:
        if symbol not in self._symbolset:
            return self.floor
        counts = self.emissions.get(tag)
        total = self._tag_totals.get(tag, 0)
        denom = total + self.k * len(self._symbolset)
        p = ((counts[symbol] if counts else 0) + self.k) / denom if denom else 0.0
        return p if p > 0 else self.floor

    def __eq__(self, other):
        if not isinstance(other, TrigramTable):
            return NotImplemented
        strip = lambda m: {key: +c for key, c in m.items() if +c}
        return (strip(self.transitions) == strip(other.transitions)
                and strip(self.emissions) == strip(other.emissions)
                and (self.tags, self.symbols, self.k, self.floor, self.emission_unit)
                == (other.tags, other.symbols, other.k, other.floor, other.emission_unit))

    def dumps(self) -> str:
        lines = ["# trigram table: transitions P(t | t-2, t-1), emissions P(symbol | t)",
                 "@k\t%r" % self.k, "@floor\t%r" % self.floor,
                 "@emission\t%s" % self.emission_unit,
                 "@tags\t%s" % " ".join(self.tags), "@symbols\t%s" % " ".join(self.symbols)]
        for (u, v) in sorted(self.transitions):
            for w in sorted(self.transitions[u, v]):
                c = self.transitions[u, v][w]
                if c:
                    lines.append("\t".join(["trans", u, v, w, _num(c),
                                            _prob(self.transition_prob(u, v, w))]))
        for t in sorted(self.emissions):
            for s in sorted(self.emissions[t]):
                c = self.emissions[t][s]
                if c:
                    lines.append("\t".join(["emit", t, s, _num(c),
                                            _prob(self.emission_prob(t, s))]))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text) -> "TrigramTable":
        settings, records = _settings_and_records(text)
        transitions, emissions = defaultdict(Counter), defaultdict(Counter)
        for lineno, fields in records:
            if fields[0] == "trans" and len(fields) == 6:
                transitions[fields[1], fields[2]][fields[3]] += _read_num(fields[4])
            elif fields[0] == "emit" and len(fields) == 5:
                emissions[fields[1]][fields[2]] += _read_num(fields[3])
            else:
                raise TableFormatError("line %d: malformed trigram record" % lineno)
        return cls(dict(transitions), dict(emissions),
                   tuple(settings.get("tags", "").split()),
                   tuple(settings.get("symbols", "").split()),
                   float(settings.get("k", DEFAULT_K)),
                   float(settings.get("floor", DEFAULT_FLOOR)),
                   settings.get("emission", "pos"))


def train_trigram(corpus, tags=(), symbols=(), k=DEFAULT_K, floor=DEFAULT_FLOOR,
                  emission="pos") -> TrigramTable:
    """Count supertag trigrams over BOS BOS t1 .. tN EOS and supertag->symbol emissions.

    ``tags``/``symbols`` extend the smoothing vocabularies beyond what the
    corpus shows (pass the grammar's supertags and the lexicon's POS set).
    """
    if emission not in ("pos", "word"):
        raise ValueError("emission must be 'pos' or 'word'")
    corpus = _require_corpus(corpus)
    transitions, emissions = defaultdict(Counter), defaultdict(Counter)
    seen_tags, seen_symbols = set(tags), set(symbols)
    for sentence in corpus:
        seq = [BOS, BOS] + sentence.gold + [EOS]
        for i in range(2, len(seq)):
            transitions[seq[i - 2], seq[i - 1]][seq[i]] += 1
        for w in sentence.words:
            symbol = w.pos if emission == "pos" else w.word
            emissions[w.supertag][symbol] += 1
            seen_tags.add(w.supertag)
            seen_symbols.add(symbol)
    return TrigramTable(dict(transitions), dict(emissions), tuple(seen_tags),
                        tuple(seen_symbols), k, floor, emission)


# -- dependency --------------------------------------------------------------

@dataclass(frozen=True)
class DependencyEntry:
    key: tuple                   # (POS, supertag)
    direction_signature: tuple   # e.g. ("-", "+")
    dependent: str | None        # None for a supertag without dependents
    ordinal: int | None
    prob: float | None

    def __str__(self):
        if self.dependent is None:
            return "(%s, %s)\t()\t-\t-\t-" % self.key
        return "(%s, %s)\t%s\t%s\t%+d\t%.3f" % (self.key + (
            format_signature(self.direction_signature), self.dependent, self.ordinal, self.prob))


def signature_of(left: int, right: int) -> tuple:
    return (LEFT,) * left + (RIGHT,) * right


def ordinal_of(candsets, head, dependent, tag, mode="candidate") -> int:
    """Signed position of ``dependent`` seen from ``head``.

    In candidate mode only words whose candidate set holds ``tag`` are counted,
    walking outward from the head; in surface mode every word counts.
    """
    if mode == "surface":
        return dependent - head
    step = 1 if dependent > head else -1
    n = sum(1 for i in range(head + step, dependent + step, step) if tag in candsets[i])
    return step * n


def candidate_sets(tokens, lexicon: Lexicon, gold=None) -> list:
    sets = [set(lexicon.candidates(word, pos)) for word, pos in tokens]
    if gold is not None:
        for s, tag in zip(sets, gold):
            s.add(tag)
    return [frozenset(s) for s in sets]


@dataclass
class DependencyTable:
    """Per (POS, supertag): observed direction signatures, and for each signature and
    direction a distribution over (dependent supertag, signed ordinal)."""

    signatures: dict = field(default_factory=dict)   # (pos, tag) -> Counter(sig -> count)
    rows: dict = field(default_factory=dict)         # (pos, tag, sig, dir) -> Counter((dep, ord) -> count)
    ordinal_mode: str = "candidate"
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if self.ordinal_mode not in ORDINAL_MODES:
            raise ValueError("ordinal mode must be one of %s" % (ORDINAL_MODES,))
        self.signatures = {key: Counter(c) for key, c in self.signatures.items()}
        self.rows = {key: Counter(c) for key, c in self.rows.items()}
        self._totals = {key: sum(c.values()) for key, c in self.rows.items()}

    def prob(self, pos, tag, sig, direction, dependent, ordinal) -> float:
        key = (pos, tag, tuple(sig), direction)
        total = self._totals.get(key, 0)
        p = self.rows[key][dependent, ordinal] / total if total else 0.0
        return p if p > 0 else self.floor

    def signatures_for(self, pos, tag) -> list:
        """Observed signatures, most frequent first; an unseen key has only ``()``."""
        counts = self.signatures.get((pos, tag))
        if not counts:
            return [()]
        return [sig for sig, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))]

    def rows_for(self, pos, tag, sig, direction) -> list:
        """(dependent, ordinal, prob) rows, most probable first."""
        key = (pos, tag, tuple(sig), direction)
        total = self._totals.get(key, 0)
        if not total:
            return []
        rows = [(dep, o, c / total) for (dep, o), c in self.rows[key].items() if c]
        rows.sort(key=lambda r: (-r[2], r[0], abs(r[1])))
        return rows

    def entries(self) -> list:
        out = []
        for (pos, tag) in sorted(self.signatures):
            for sig in sorted(self.signatures[pos, tag]):
                if not sig:
                    out.append(DependencyEntry((pos, tag), (), None, None, None))
                    continue
                for direction in (LEFT, RIGHT):
                    key = (pos, tag, sig, direction)
                    for (dep, o) in sorted(self.rows.get(key, {}), key=lambda r: (r[1], r[0])):
                        out.append(DependencyEntry((pos, tag), sig, dep, o,
                                                   self.prob(pos, tag, sig, direction, dep, o)))
        return out

    def __eq__(self, other):
        if not isinstance(other, DependencyTable):
            return NotImplemented
        strip = lambda m: {key: +c for key, c in m.items() if +c}
        return (strip(self.signatures) == strip(other.signatures)
                and strip(self.rows) == strip(other.rows)
                and (self.ordinal_mode, self.floor) == (other.ordinal_mode, other.floor))

    def dumps(self) -> str:
        lines = ["# dependency table: direction signatures per (POS, supertag) and "
                 "P(dependent, ordinal | POS, supertag, signature, direction)",
                 "@ordinal\t%s" % self.ordinal_mode, "@floor\t%r" % self.floor]
        for (pos, tag) in sorted(self.signatures):
            for sig in sorted(self.signatures[pos, tag]):
                c = self.signatures[pos, tag][sig]
                if c:
                    lines.append("\t".join(["sig", pos, tag, format_signature(sig), _num(c)]))
        for key in sorted(self.rows):
            pos, tag, sig, direction = key
            for (dep, o) in sorted(self.rows[key], key=lambda r: (r[0], r[1])):
                c = self.rows[key][dep, o]
                if c:
                    lines.append("\t".join([
                        "dep", pos, tag, format_signature(sig), direction, dep, "%+d" % o,
                        _num(c), _prob(self.prob(pos, tag, sig, direction, dep, o))]))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text) -> "DependencyTable":
        settings, records = _settings_and_records(text)
        signatures, rows = defaultdict(Counter), defaultdict(Counter)
        for lineno, f in records:
            try:
                if f[0] == "sig" and len(f) == 5:
                    signatures[f[1], f[2]][parse_signature(f[3])] += _read_num(f[4])
                elif f[0] == "dep" and len(f) == 9:
                    if f[4] not in (LEFT, RIGHT):
                        raise TableFormatError("bad direction %r" % f[4])
                    rows[f[1], f[2], parse_signature(f[3]), f[4]][f[5], int(f[6])] += _read_num(f[7])
                else:
                    raise TableFormatError("malformed dependency record")
            except (TableFormatError, ValueError) as err:
                raise TableFormatError("line %d: %s" % (lineno, err)) from None
        return cls(dict(signatures), dict(rows), settings.get("ordinal", "candidate"),
                   float(settings.get("floor", DEFAULT_FLOOR)))


def train_dependency(corpus, lexicon: Lexicon, ordinal_mode="candidate",
                     floor=DEFAULT_FLOOR) -> DependencyTable:
    corpus = _require_corpus(corpus)
    if ordinal_mode not in ORDINAL_MODES:
        raise ValueError("ordinal mode must be one of %s" % (ORDINAL_MODES,))
    signatures, rows = defaultdict(Counter), defaultdict(Counter)
    for sentence in corpus:
        words = sentence.words
        candsets = candidate_sets(sentence.tokens, lexicon, sentence.gold)
        deps = defaultdict(list)
        for link in sentence.links:
            deps[link.head].append(link.dependent)
        for h, w in enumerate(words):
            mine = sorted(deps[h])
            left = sum(1 for j in mine if j < h)
            sig = signature_of(left, len(mine) - left)
            signatures[w.pos, w.supertag][sig] += 1
            for j in mine:
                direction = LEFT if j < h else RIGHT
                tag = words[j].supertag
                o = ordinal_of(candsets, h, j, tag, ordinal_mode)
                rows[w.pos, w.supertag, sig, direction][tag, o] += 1
    return DependencyTable(dict(signatures), dict(rows), ordinal_mode, floor)


# -- model directories -------------------------------------------------------

TABLE_FILES = {"unigram": ("unigram.tsv", UnigramTable),
               "trigram": ("trigram.tsv", TrigramTable),
               "dependency": ("dependency.tsv", DependencyTable)}


def save_table(table, model_dir, name):
    filename, _ = TABLE_FILES[name]
    path = Path(model_dir) / filename
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(table.dumps(), encoding="utf-8")
    return path


def load_table(model_dir, name):
    filename, cls = TABLE_FILES[name]
    return cls.loads((Path(model_dir) / filename).read_text(encoding="utf-8"))
