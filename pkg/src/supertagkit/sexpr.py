"""Minimal bracketed-expression reader shared by the grammar and corpus formats."""
from __future__ import annotations

import re

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class SExprError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else "line %d: %s" % (line, message))


class Atom(str):
    """A string token that remembers the line it was read from."""

    line: int

    def __new__(cls, value, line):
        obj = super().__new__(cls, value)
        obj.line = line
        return obj


class SList(list):
    line: int

    def __init__(self, items=(), line=0):
        super().__init__(items)
        self.line = line


def strip_comment(line):
    """Drop a ``#`` comment that starts the line or follows whitespace."""
    if line.lstrip().startswith("#"):
        return ""
    match = re.search(r"\s#", line)
    return line[:match.start()] if match else line


def tokenize(lines, first_line=1):
    for lineno, line in enumerate(lines, first_line):
        for match in _TOKEN.finditer(strip_comment(line)):
            yield match.group(), lineno


def read_all(lines, first_line=1):
    """Parse every top-level expression in ``lines``; bare atoms at top level are errors."""
    stack = []
    result = []
    last_line = first_line
    for token, lineno in tokenize(lines, first_line):
        last_line = lineno
        if token == "(":
            stack.append(SList(line=lineno))
        elif token == ")":
            if not stack:
                raise SExprError("unbalanced ')'", lineno)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                result.append(done)
        elif stack:
            stack[-1].append(Atom(token, lineno))
        else:
            raise SExprError("unexpected token %r outside parentheses" % token, lineno)
    if stack:
        raise SExprError("unclosed '(' opened here", stack[-1].line or last_line)
    return result
