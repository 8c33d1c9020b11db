"""Elementary trees (supertags) and the syntactic lexicon.

Grammar file format (UTF-8, ``#`` comments)::

    tree alpha_2 initial anchor-pos=V
        (S (NP ↓) (VP (V @) (NP ↓)))
    lex saw V alpha_2,alpha_9
    pos V alpha_2,alpha_9,alpha_7

``@`` marks the anchor, ``↓`` (or ASCII ``!``) a substitution site and ``*``
the foot of an auxiliary tree.  The node expression may span several
indented lines.  Nodes are addressed Gorn-style: the root is ``()``, the k-th
child of a node appends ``k`` (1-based); in text the root is written ``0``
and other addresses as dotted numbers (``2.2``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .sexpr import SExprError, read_all, strip_comment

INTERNAL = "internal"
ANCHOR = "anchor"
SUBST = "substitution-site"
FOOT = "foot"

INITIAL = "initial"
AUXILIARY = "auxiliary"

_MARKS = {"@": ANCHOR, "↓": SUBST, "!": SUBST, "*": FOOT}
_MARK_TEXT = {ANCHOR: "@", SUBST: "↓", FOOT: "*"}

Address = tuple


class GrammarError(ValueError):
    def __init__(self, message, line=None, template=None):
        self.line = line
        self.template = template
        if template is not None:
            message = "template %s: %s" % (template, message)
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class UnknownPOSError(KeyError):
    def __init__(self, pos):
        self.pos = pos
        super().__init__(pos)

    def __str__(self):
        return "unknown POS %r" % self.pos


def parse_address(text: str) -> Address:
    if text in ("0", ""):
        return ()
    try:
        address = tuple(int(part) for part in text.split("."))
    except ValueError:
        raise ValueError("malformed Gorn address %r" % text) from None
    if any(k < 1 for k in address):
        raise ValueError("malformed Gorn address %r" % text)
    return address


def format_address(address: Address) -> str:
    return ".".join(map(str, address)) if address else "0"


@dataclass(frozen=True)
class TreeNode:
    label: str
    mark: str = INTERNAL
    children: tuple = ()
    address: Address = ()

    def walk(self) -> Iterator["TreeNode"]:
        """Preorder, i.e. left-to-right by address."""
        yield self
        for child in self.children:
            yield from child.walk()

    def to_expr(self) -> str:
        if self.mark != INTERNAL:
            return "(%s %s)" % (self.label, _MARK_TEXT[self.mark])
        return "(%s %s)" % (self.label, " ".join(c.to_expr() for c in self.children))


def build_node(expr, address: Address = ()) -> TreeNode:
    """Turn a parsed bracket expression into a TreeNode with addresses filled in."""
    if not isinstance(expr, list) or not expr or isinstance(expr[0], list):
        raise GrammarError("node must start with a label", getattr(expr, "line", None))
    label, rest = expr[0], expr[1:]
    line = getattr(expr, "line", None)
    if not rest:
        raise GrammarError("frontier node %s carries no @, ↓ or * mark" % label, line)
    if len(rest) == 1 and not isinstance(rest[0], list):
        if rest[0] not in _MARKS:
            raise GrammarError("unknown node mark %r" % str(rest[0]), line)
        return TreeNode(str(label), _MARKS[rest[0]], (), address)
    if any(not isinstance(r, list) for r in rest):
        raise GrammarError("marked node %s cannot have children" % label, line)
    children = tuple(build_node(c, address + (k,)) for k, c in enumerate(rest, 1))
    return TreeNode(str(label), INTERNAL, children, address)


def parse_tree_expr(text: str) -> TreeNode:
    exprs = read_all(text.splitlines())
    if len(exprs) != 1:
        raise GrammarError("expected exactly one tree expression")
    return build_node(exprs[0])


@dataclass(frozen=True)
class TreeTemplate:
    id: str
    kind: str
    anchor_pos: str
    root: TreeNode

    def nodes(self):
        return list(self.root.walk())

    def node_at(self, address: Address) -> TreeNode | None:
        node = self.root
        for k in address:
            if not 1 <= k <= len(node.children):
                return None
            node = node.children[k - 1]
        return node

    @property
    def anchor(self) -> TreeNode:
        return next(n for n in self.root.walk() if n.mark == ANCHOR)

    @property
    def foot(self) -> TreeNode | None:
        return next((n for n in self.root.walk() if n.mark == FOOT), None)

    @property
    def substitution_sites(self) -> list:
        return [n for n in self.root.walk() if n.mark == SUBST]

    def adjunction_sites(self, label: str) -> list:
        """Nodes an auxiliary tree rooted in ``label`` may adjoin to, lowest first, then leftmost."""
        sites = [n for n in self.root.walk()
                 if n.label == label and n.mark in (INTERNAL, ANCHOR)]
        sites.sort(key=lambda n: (-len(n.address), n.address))
        return sites

    def validate(self):
        if not self.id:
            raise GrammarError("empty template id")
        if self.kind not in (INITIAL, AUXILIARY):
            raise GrammarError("kind must be initial or auxiliary, not %r" % self.kind,
                               template=self.id)
        nodes = self.nodes()
        anchors = [n for n in nodes if n.mark == ANCHOR]
        feet = [n for n in nodes if n.mark == FOOT]
        if len(anchors) != 1:
            raise GrammarError("expected exactly one anchor, found %d" % len(anchors),
                               template=self.id)
        if self.kind == INITIAL and feet:
            raise GrammarError("initial tree has a foot node", template=self.id)
        if self.kind == AUXILIARY:
            if len(feet) != 1:
                raise GrammarError("auxiliary tree needs exactly one foot, found %d"
                                   % len(feet), template=self.id)
            if feet[0].label != self.root.label:
                raise GrammarError("foot label %s does not match root label %s"
                                   % (feet[0].label, self.root.label), template=self.id)
        for node in nodes:
            if node.mark != INTERNAL and node.children:
                raise GrammarError("%s node %s has children" % (node.mark, node.label),
                                   template=self.id)
            if node.mark == INTERNAL and not node.children:
                raise GrammarError("unmarked frontier node %s" % node.label, template=self.id)
            for k, child in enumerate(node.children, 1):
                if child.address != node.address + (k,):
                    raise GrammarError("inconsistent address at %s"
                                       % format_address(child.address), template=self.id)


@dataclass(frozen=True)
class Lexicon:
    word_entries: dict = field(default_factory=dict)   # (word, pos) -> frozenset of ids
    pos_entries: dict = field(default_factory=dict)    # pos -> frozenset of ids

    @classmethod
    def build(cls, word_entries=None, pos_entries=None) -> "Lexicon":
        """Build a lexicon whose POS level aggregates every word-level entry."""
        words = {key: frozenset(ids) for key, ids in (word_entries or {}).items()}
        pos = {p: set(ids) for p, ids in (pos_entries or {}).items()}
        for (_, p), ids in words.items():
            pos.setdefault(p, set()).update(ids)
        return cls(words, {p: frozenset(ids) for p, ids in pos.items()})

    @property
    def pos_tags(self):
        return sorted(self.pos_entries)

    def candidates(self, word: str, pos: str) -> frozenset:
        found = self.word_entries.get((word, pos))
        if found:
            return found
        if pos not in self.pos_entries:
            raise UnknownPOSError(pos)
        return self.pos_entries[pos]

    def words_for(self, supertag: str) -> list:
        return sorted(key for key, ids in self.word_entries.items() if supertag in ids)


def candidates(word: str, pos: str, lexicon: Lexicon) -> frozenset:
    return lexicon.candidates(word, pos)


@dataclass(frozen=True)
class Grammar:
    templates: dict          # id -> TreeTemplate, in file order
    lexicon: Lexicon

    def __getitem__(self, supertag: str) -> TreeTemplate:
        return self.templates[supertag]

    def initial_rooted(self, label: str) -> list:
        return [t for t in self.templates.values() if t.kind == INITIAL and t.root.label == label]

    def auxiliary_rooted(self, label: str) -> list:
        return [t for t in self.templates.values()
                if t.kind == AUXILIARY and t.root.label == label]

    def validate(self):
        if not self.templates:
            raise GrammarError("empty grammar")
        for tid, template in self.templates.items():
            if tid != template.id:
                raise GrammarError("table key %s does not match id" % tid, template=template.id)
            template.validate()
        for (word, pos), ids in self.lexicon.word_entries.items():
            for tid in sorted(ids):
                if tid not in self.templates:
                    raise GrammarError("lexicon entry %s/%s references unknown template %s"
                                       % (word, pos, tid))
                if self.templates[tid].anchor_pos != pos:
                    raise GrammarError("lexicon entry %s/%s references %s, anchored by %s"
                                       % (word, pos, tid, self.templates[tid].anchor_pos))
        for pos, ids in self.lexicon.pos_entries.items():
            for tid in sorted(ids):
                if tid not in self.templates:
                    raise GrammarError("POS entry %s references unknown template %s" % (pos, tid))
                if self.templates[tid].anchor_pos != pos:
                    raise GrammarError("POS entry %s references %s, anchored by %s"
                                       % (pos, tid, self.templates[tid].anchor_pos))
        return self


def _split_ids(text, line):
    ids = [t for t in text.split(",") if t]
    if not ids:
        raise GrammarError("empty supertag list", line)
    return ids


def parse_grammar(text: str) -> Grammar:
    lines = text.splitlines()
    templates = {}
    words = {}
    pos_level = {}
    i = 0
    while i < len(lines):
        lineno = i + 1
        fields = strip_comment(lines[i]).split()
        i += 1
        if not fields:
            continue
        head = fields[0]
        if head == "tree":
            if len(fields) != 4 or not fields[3].startswith("anchor-pos="):
                raise GrammarError("expected 'tree <id> <initial|auxiliary> anchor-pos=<POS>'",
                                   lineno)
            tid, kind, anchor_pos = fields[1], fields[2], fields[3][len("anchor-pos="):]
            if tid in templates:
                raise GrammarError("duplicate template", lineno, tid)
            # gather indented lines until the expression closes
            body, start, depth = [], i + 1, 0
            while i < len(lines) and (not body or depth > 0):
                chunk = strip_comment(lines[i])
                if chunk.strip():
                    if not lines[i][:1].isspace():
                        break
                    if not body:
                        start = i + 1
                    body.append(chunk)
                    depth += chunk.count("(") - chunk.count(")")
                i += 1
            if not body:
                raise GrammarError("tree record without node expression", lineno, tid)
            try:
                exprs = read_all(body, first_line=start)
            except SExprError as err:
                raise GrammarError(str(err), template=tid) from None
            if len(exprs) != 1:
                raise GrammarError("expected one node expression", start, tid)
            root = build_node(exprs[0])
            template = TreeTemplate(tid, kind, anchor_pos, root)
            try:
                template.validate()
            except GrammarError as err:
                raise GrammarError(str(err), lineno) from None
            templates[tid] = template
        elif head == "lex":
            if len(fields) != 4:
                raise GrammarError("expected 'lex <word> <POS> <id>[,<id>...]'", lineno)
            key = (fields[1], fields[2])
            words.setdefault(key, set()).update(_split_ids(fields[3], lineno))
        elif head == "pos":
            if len(fields) != 3:
                raise GrammarError("expected 'pos <POS> <id>[,<id>...]'", lineno)
            pos_level.setdefault(fields[1], set()).update(_split_ids(fields[2], lineno))
        else:
            raise GrammarError("unknown record type %r" % head, lineno)
    return Grammar(templates, Lexicon.build(words, pos_level)).validate()


def load_grammar(source) -> Grammar:
    """Load from a path, or from grammar text when given a string containing newlines."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        source = Path(source).read_text(encoding="utf-8")
    return parse_grammar(source)


def serialize_grammar(grammar: Grammar) -> str:
    out = []
    for template in grammar.templates.values():
        out.append("tree %s %s anchor-pos=%s" % (template.id, template.kind, template.anchor_pos))
        out.append("    " + template.root.to_expr())
    lexicon = grammar.lexicon
    for (word, pos) in sorted(lexicon.word_entries):
        out.append("lex %s %s %s" % (word, pos, ",".join(sorted(lexicon.word_entries[word, pos]))))
    for pos in sorted(lexicon.pos_entries):
        out.append("pos %s %s" % (pos, ",".join(sorted(lexicon.pos_entries[pos]))))
    return "\n".join(out) + "\n"


def toy_grammar_path() -> Path:
    return Path(__file__).parent / "data" / "toy.grammar"


def load_toy_grammar() -> Grammar:
    return load_grammar(toy_grammar_path())


__all__ = [
    "ANCHOR", "AUXILIARY", "FOOT", "INITIAL", "INTERNAL", "SUBST",
    "Grammar", "GrammarError", "Lexicon", "TreeNode", "TreeTemplate",
    "UnknownPOSError", "candidates", "format_address", "load_grammar", "load_toy_grammar",
    "parse_address", "parse_grammar", "parse_tree_expr", "serialize_grammar",
    "toy_grammar_path",
]
