"""Freely reduced words over a countable alphabet of generators.

A word is an immutable sequence of letters; a letter is ``(index, sign)``
with ``index >= 1`` and ``sign`` either ``+1`` or ``-1``.  Every ``Word`` is
freely reduced at construction time, so equality of words is equality in the
free group and the empty word is the identity.

Conventions used throughout the package:

* ``conjugate(w, t)`` is ``t * w * t.inverse()``, written ``w ^ t`` in the
  expression grammar, so ``conjugate(conjugate(w, u), v) == conjugate(w, v * u)``.
* ``commutator(a, b)`` is ``a * b * a.inverse() * b.inverse()``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

Letter = tuple[int, int]


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for index, sign in letters:
        if stack and stack[-1][0] == index and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((index, sign))
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word; construct via ``gen``, operators, or ``grammar.parse``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for index, sign in self.letters:
            if not (isinstance(index, int) and index >= 1 and sign in (1, -1)):
                raise ValueError(f"bad letter {(index, sign)!r}")
        reduced = _reduce(self.letters)
        if reduced != self.letters:
            object.__setattr__(self, "letters", reduced)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if not isinstance(n, int):
            return NotImplemented
        return power(self, n)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word(tuple((i, -s) for i, s in reversed(self.letters)))

    def conjugated_by(self, t: "Word") -> "Word":
        return conjugate(self, t)

    def generators(self) -> tuple[int, ...]:
        return tuple(sorted({i for i, _ in self.letters}))

    def __repr__(self) -> str:
        from . import grammar

        return f"Word({grammar.format_word(self)!r})"


EMPTY = Word()


def gen(index: int) -> Word:
    """The length-one word for generator ``index`` (1-based)."""
    return Word(((index, 1),))


def power(w: Word, n: int) -> Word:
    """``w`` raised to an integer power (negative powers invert)."""
    if n < 0:
        return power(w.inverse(), -n)
    if n == 0 or not w:
        return EMPTY
    # Strip the conjugating shell once so repetition only cancels at the seam.
    head = 0
    letters = w.letters
    while head < len(letters) - head - 1 and letters[head] == (
        letters[-1 - head][0],
        -letters[-1 - head][1],
    ):
        head += 1
    shell = letters[:head]
    core = letters[head : len(letters) - head]
    inner = _reduce(core * n)
    return Word(shell + inner + tuple((i, -s) for i, s in reversed(shell)))


def conjugate(w: Word, t: Word) -> Word:
    """``t * w * t**-1``."""
    return t * w * t.inverse()


def commutator(a: Word, b: Word) -> Word:
    """``a * b * a**-1 * b**-1``."""
    return a * b * a.inverse() * b.inverse()


def substitute(w: Word, images: Mapping[int, Word]) -> Word:
    """Apply the endomorphism sending generator ``i`` to ``images[i]``.

    Generators absent from ``images`` are fixed.
    """
    out: list[Letter] = []
    for index, sign in w.letters:
        image = images.get(index)
        if image is None:
            out.append((index, sign))
        elif sign == 1:
            out.extend(image.letters)
        else:
            out.extend(image.inverse().letters)
    return Word(tuple(out))


def abelianization(w: Word) -> dict[int, int]:
    """Exponent sum of each generator, omitting zero entries."""
    sums: dict[int, int] = {}
    for index, sign in w.letters:
        sums[index] = sums.get(index, 0) + sign
        if sums[index] == 0:
            del sums[index]
    return sums


def in_commutator_subgroup(w: Word) -> bool:
    """True when every generator's exponent sum vanishes."""
    return not abelianization(w)


def canonical_renumber(w: Word) -> Word:
    """Relabel generators as 1, 2, ... in order of first occurrence.

    The result is the representative of ``w`` under renaming, used to compare
    words with template bodies structurally.
    """
    mapping: dict[int, int] = {}
    letters: list[Letter] = []
    for index, sign in w.letters:
        if index not in mapping:
            mapping[index] = len(mapping) + 1
        letters.append((mapping[index], sign))
    return Word(tuple(letters))


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, t)`` with ``w == conjugate(core, t)`` and ``core`` cyclically reduced."""
    letters = list(w.letters)
    prefix: list[Letter] = []
    while len(letters) >= 2 and letters[0] == (letters[-1][0], -letters[-1][1]):
        prefix.append(letters.pop(0))
        letters.pop()
    return Word(tuple(letters)), Word(tuple(prefix))
