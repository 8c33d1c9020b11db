"""Derivation trees in a bracketed corpus format, plus flattening to dependency graphs.

One derivation per top-level expression::

    (alpha_2 saw V (sub 1 (alpha_8 John N))
                   (adj 2 (beta_8 with P (sub 2.2 (alpha_6 telescope N ...)))))

``sub``/``adj`` name the operation and the address is a Gorn address into the
parent's template (``0`` for the root).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..grammar import (ANCHOR, AUXILIARY, FOOT, INITIAL, INTERNAL, SUBST, Grammar,
                       format_address, parse_address)
from ..sexpr import SExprError, read_all

SUBSTITUTION = "substitution"
ADJUNCTION = "adjunction"
_OP_NAMES = {"sub": SUBSTITUTION, "adj": ADJUNCTION}
_OP_TEXT = {SUBSTITUTION: "sub", ADJUNCTION: "adj"}


class DerivationError(ValueError):
    pass


@dataclass
class Attachment:
    child: "DerivationNode"
    operation: str
    address: tuple
    ambiguous: bool = field(default=False, compare=False)


@dataclass
class DerivationNode:
    supertag: str
    word: str
    pos: str
    children: list = field(default_factory=list)

    def attach(self, child, operation, address, ambiguous=False):
        self.children.append(Attachment(child, operation, tuple(address), ambiguous))
        self.children.sort(key=lambda a: a.address)
        return child

    def walk(self):
        yield self
        for a in self.children:
            yield from a.child.walk()

    def __len__(self):
        return sum(1 for _ in self.walk())

    def __str__(self):
        return serialize_derivation(self)


@dataclass(frozen=True)
class DependencyLink:
    head: int
    dependent: int
    operation: str | None = None
    address: tuple | None = None

    @property
    def pair(self):
        return (self.head, self.dependent)


@dataclass(frozen=True)
class FlatWord:
    word: str
    pos: str
    supertag: str


@dataclass
class FlatSentence:
    words: list                          # FlatWord, surface order
    links: list = field(default_factory=list)

    @property
    def tokens(self):
        return [(w.word, w.pos) for w in self.words]

    @property
    def gold(self):
        return [w.supertag for w in self.words]

    @property
    def roots(self):
        dependents = {link.dependent for link in self.links}
        return [i for i in range(len(self.words)) if i not in dependents]

    def __len__(self):
        return len(self.words)


def _build(expr) -> DerivationNode:
    line = getattr(expr, "line", None)
    if not isinstance(expr, list) or len(expr) < 3 or any(isinstance(x, list) for x in expr[:3]):
        raise SExprError("expected (<supertag> <word> <POS> ...)", line)
    node = DerivationNode(str(expr[0]), str(expr[1]), str(expr[2]))
    seen = set()
    for sub in expr[3:]:
        sline = getattr(sub, "line", line)
        if (not isinstance(sub, list) or len(sub) != 3 or isinstance(sub[0], list)
                or isinstance(sub[1], list) or sub[0] not in _OP_NAMES):
            raise SExprError("expected (sub|adj <address> <derivation>) under %s"
                             % node.supertag, sline)
        try:
            address = parse_address(str(sub[1]))
        except ValueError as err:
            raise SExprError(str(err), sline) from None
        if address in seen:
            raise SExprError("two attachments at address %s of %s"
                             % (format_address(address), node.supertag), sline)
        seen.add(address)
        node.attach(_build(sub[2]), _OP_NAMES[sub[0]], address)
    return node


def parse_corpus(source: str, grammar: Grammar | None = None, complete=True) -> list:
    """Parse corpus text; with a grammar every derivation is validated against it."""
    derivations = []
    for expr in read_all(source.splitlines()):
        d = _build(expr)
        if grammar is not None:
            try:
                validate_derivation(d, grammar, complete=complete)
            except DerivationError as err:
                raise DerivationError("line %d: %s" % (expr.line, err)) from None
        derivations.append(d)
    return derivations


def load_corpus(path, grammar: Grammar | None = None, complete=True) -> list:
    return parse_corpus(Path(path).read_text(encoding="utf-8"), grammar, complete)


def toy_corpus_path() -> Path:
    """The small hand-built corpus shipped with the toy grammar."""
    return Path(__file__).resolve().parent.parent / "data" / "toy.corpus"


def serialize_derivation(d: DerivationNode) -> str:
    parts = [d.supertag, d.word, d.pos]
    for a in d.children:
        parts.append("(%s %s %s)" % (_OP_TEXT[a.operation], format_address(a.address),
                                     serialize_derivation(a.child)))
    return "(" + " ".join(parts) + ")"


def serialize_corpus(derivations) -> str:
    return "".join(serialize_derivation(d) + "\n" for d in derivations)


def _where(node):
    return "%s[%s]" % (node.supertag, node.word)


def validate_derivation(d: DerivationNode, grammar: Grammar, complete=True):
    """Check every attachment against the templates; raise DerivationError naming the node."""
    for node in d.walk():
        template = grammar.templates.get(node.supertag)
        if template is None:
            raise DerivationError("%s: unknown supertag" % _where(node))
        filled = set()
        addresses = set()
        for a in node.children:
            child_t = grammar.templates.get(a.child.supertag)
            if child_t is None:
                raise DerivationError("%s: unknown supertag" % _where(a.child))
            if a.address in addresses:
                raise DerivationError("%s: two attachments at %s"
                                      % (_where(node), format_address(a.address)))
            addresses.add(a.address)
            site = template.node_at(a.address)
            where = "%s at %s of %s" % (_where(a.child), format_address(a.address), _where(node))
            if site is None:
                raise DerivationError("%s: no such address" % where)
            if a.operation == SUBSTITUTION:
                if site.mark != SUBST:
                    raise DerivationError("%s: substitution into a %s node" % (where, site.mark))
                if child_t.kind != INITIAL:
                    raise DerivationError("%s: substituted tree is not initial" % where)
                if child_t.root.label != site.label:
                    raise DerivationError("%s: root %s does not match site %s"
                                          % (where, child_t.root.label, site.label))
                filled.add(a.address)
            elif a.operation == ADJUNCTION:
                if child_t.kind != AUXILIARY:
                    raise DerivationError("%s: adjoined tree is not auxiliary" % where)
                if site.mark not in (INTERNAL, ANCHOR):
                    raise DerivationError("%s: adjunction into a %s node" % (where, site.mark))
                if child_t.root.label != site.label:
                    raise DerivationError("%s: root %s does not match node %s"
                                          % (where, child_t.root.label, site.label))
            else:
                raise DerivationError("%s: unknown operation %r" % (where, a.operation))
        if complete:
            missing = [s for s in template.substitution_sites if s.address not in filled]
            if missing:
                raise DerivationError("%s: substitution site %s (%s) left open"
                                      % (_where(node), format_address(missing[0].address),
                                         missing[0].label))
    return d


def linearize(d: DerivationNode, grammar: Grammar, _foot=None) -> list:
    """Derivation nodes in surface order of their anchors."""
    template = grammar[d.supertag]
    at = {a.address: a for a in d.children}

    def visit(node):
        if node.mark == ANCHOR:
            out = [d]
        elif node.mark == SUBST:
            a = at.get(node.address)
            out = linearize(a.child, grammar) if a is not None else []
        elif node.mark == FOOT:
            out = list(_foot or ())
        else:
            out = [x for child in node.children for x in visit(child)]
        a = at.get(node.address)
        if a is not None and a.operation == ADJUNCTION:
            out = linearize(a.child, grammar, out)
        return out

    return visit(template.root)


def flatten(d: DerivationNode, grammar: Grammar) -> FlatSentence:
    order = linearize(d, grammar)
    index = {id(node): i for i, node in enumerate(order)}
    words = [FlatWord(n.word, n.pos, n.supertag) for n in order]
    links = []
    for node in order:
        for a in node.children:
            links.append(DependencyLink(index[id(node)], index[id(a.child)],
                                        a.operation, a.address))
    links.sort(key=lambda link: (link.head, link.dependent))
    return FlatSentence(words, links)
