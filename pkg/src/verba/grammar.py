"""Parsing and printing of word expressions.

Grammar (whitespace separates tokens and is otherwise ignored)::

    word := term+
    term := atom ['^' (integer | atom)]
    atom := NAME | '1' | '(' word ')' | '[' word ',' word ']'

``NAME`` is ``[A-Za-z][A-Za-z0-9_]*``.  ``x^3`` and ``x^-2`` are integer
powers; ``a^b`` with ``b`` an atom is the conjugate ``b a b^-1``.  ``'^'``
does not chain: write ``(x^2)^y``.  ``[a,b]`` is the commutator
``a b a^-1 b^-1`` and ``1`` is the identity.

Names are bound to generator indices through a ``NameTable``; parsing with a
fresh table binds names to 1, 2, ... in order of first appearance.  Printing
renders maximal runs of one generator as a single power, e.g. ``x^2 y^-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .words import EMPTY, Word, commutator, conjugate, gen, power

_TOKEN_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*|\d+|[-^()\[\],])")
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_CANONICAL_RE = re.compile(r"x([1-9][0-9]*)\Z")

#: Keywords of the line-based file formats; never usable as generator names.
RESERVED_NAMES = frozenset(
    {"TARGET", "FACTOR", "CONJ", "WITNESS", "TEMPLATE", "FLAG", "COUNTS"}
)


@dataclass
class NameTable:
    """Mutable two-way binding between display names and generator indices."""

    by_name: dict[str, int] = field(default_factory=dict)
    by_index: dict[int, str] = field(default_factory=dict)

    def bind(self, name: str, index: int) -> None:
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid name {name!r}")
        if name in RESERVED_NAMES:
            raise ParseError(f"{name!r} is a reserved keyword, not a generator name")
        old_index = self.by_name.get(name)
        if old_index not in (None, index):
            raise ParseError(f"name {name!r} already bound to generator {old_index}")
        old_name = self.by_index.get(index)
        if old_name not in (None, name):
            raise ParseError(f"generator {index} already named {old_name!r}")
        self.by_name[name] = index
        self.by_index[index] = name

    def index(self, name: str) -> int:
        """Index bound to ``name``, binding the next free index if new."""
        found = self.by_name.get(name)
        if found is not None:
            return found
        index = 1
        while index in self.by_index:
            index += 1
        self.bind(name, index)
        return index

    def name(self, index: int) -> str:
        """Display name for ``index``, inventing and binding one if needed."""
        found = self.by_index.get(index)
        if found is not None:
            return found
        candidate = f"x{index}"
        while candidate in self.by_name:
            candidate += "_"
        self.bind(candidate, index)
        return candidate


class CanonicalNameTable(NameTable):
    """A table where ``x<i>`` always means generator ``i``; parses canonical output."""

    def index(self, name: str) -> int:
        found = self.by_name.get(name)
        if found is not None:
            return found
        match = _CANONICAL_RE.match(name)
        if match is not None:
            index = int(match.group(1))
            self.bind(name, index)
            return index
        return super().index(name)


def canonical_table() -> CanonicalNameTable:
    """A fresh table that resolves canonical ``x<i>`` names to index ``i``."""
    return CanonicalNameTable()


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}")
            break
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], names: NameTable):
        self.tokens = tokens
        self.pos = 0
        self.names = names

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input (expected {expected!r})")
        if tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def take_any(self, what: str) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input (expected {what})")
        self.pos += 1
        return tok

    def word(self) -> Word:
        out = self.term()
        while self.peek() not in (None, ")", "]", ","):
            out = out * self.term()
        return out

    def term(self) -> Word:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.take("^")
        tok = self.peek()
        if tok == "-" or (tok is not None and tok.isdigit()):
            negative = tok == "-"
            if negative:
                self.take("-")
            digits = self.take_any("an exponent")
            if not digits.isdigit():
                raise ParseError(f"expected an exponent, found {digits!r}")
            result = power(base, -int(digits) if negative else int(digits))
        else:
            result = conjugate(base, self.atom())
        if self.peek() == "^":
            raise ParseError("'^' does not chain; parenthesize, e.g. (x^2)^y")
        return result

    def atom(self) -> Word:
        tok = self.take_any("an atom")
        if tok == "1":
            return EMPTY
        if tok == "(":
            inner = self.word()
            self.take(")")
            return inner
        if tok == "[":
            left = self.word()
            self.take(",")
            right = self.word()
            self.take("]")
            return commutator(left, right)
        if _NAME_RE.match(tok):
            return gen(self.names.index(tok))
        raise ParseError(f"expected an atom, found {tok!r}")


def parse(text: str, names: NameTable | None = None) -> Word:
    """Parse ``text`` into a reduced ``Word``, binding new names in ``names``."""
    parser = _Parser(_tokenize(text), names if names is not None else NameTable())
    if parser.peek() is None:
        raise ParseError("empty expression (use '1' for the identity)")
    result = parser.word()
    if parser.peek() is not None:
        raise ParseError(f"trailing input starting at {parser.peek()!r}")
    return result


def format_word(w: Word, names: NameTable | None = None) -> str:
    """Render ``w`` as space-separated powers; canonical ``x<i>`` names by default."""
    if not w:
        return "1"
    parts: list[str] = []
    run_letter = w.letters[0]
    run = 0
    for letter in w.letters + ((0, 0),):
        if letter == run_letter:
            run += 1
            continue
        name = names.name(run_letter[0]) if names is not None else f"x{run_letter[0]}"
        exponent = run * run_letter[1]
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
        run_letter = letter
        run = 1
    return " ".join(parts)


def canonical_key(w: Word) -> str:
    """Name-independent canonical string for ``w`` (parseable via ``canonical_table``)."""
    return format_word(w, None)


BracketTree = tuple["BracketTree", "BracketTree"] | Word


def parse_bracket_tree(text: str, names: NameTable | None = None) -> BracketTree:
    """Parse ``text`` keeping its outermost commutator structure.

    Returns either a ``(left, right)`` pair of subtrees, when the whole
    expression is a single bracket ``[A, B]``, or the parsed ``Word`` leaf.
    Parenthesized subexpressions are always leaves.
    """
    if names is None:
        names = NameTable()
    stripped = text.strip()
    if stripped.startswith("["):
        depth = 0
        comma = -1
        for i, ch in enumerate(stripped):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
                if depth == 0 and i != len(stripped) - 1:
                    break  # the leading bracket closes early: not the whole expression
            elif ch == "," and depth == 1 and comma < 0:
                comma = i
        else:
            if depth == 0 and comma > 0:
                left = parse_bracket_tree(stripped[1:comma], names)
                right = parse_bracket_tree(stripped[comma + 1 : -1], names)
                return (left, right)
    return parse(stripped, names)


def tree_word(tree: BracketTree) -> Word:
    """Collapse a bracket tree to the word it denotes."""
    if isinstance(tree, Word):
        return tree
    left, right = tree
    return commutator(tree_word(left), tree_word(right))
