"""Truncated power-series expansion and depth.

The oracle below reimplements the expansion independently: inverses are
computed by solving (1 + t) * s = 1 term by term instead of summing a
geometric series, and multiplication iterates sorted items.
"""
from __future__ import annotations

import random

import pytest
from helpers import random_word

from verba import magnus
from verba.errors import ResourceBudgetError
from verba.templates import beta_word, gamma_word, grope_word
from verba.words import EMPTY, Word, commutator, gen


def oracle_expand(word: Word, degree: int) -> dict[tuple[int, ...], int]:
    def mul(f, g):
        out: dict[tuple[int, ...], int] = {}
        for mf, cf in sorted(f.items()):
            for mg, cg in sorted(g.items()):
                if len(mf) + len(mg) > degree:
                    continue
                key = mf + mg
                out[key] = out.get(key, 0) + cf * cg
        return {k: v for k, v in out.items() if v}

    def letter(index: int, sign: int):
        plus = {(): 1, (index,): 1}
        if sign == 1:
            return plus
        # solve plus * s = 1 degree by degree
        s = {(): 1}
        for d in range(1, degree + 1):
            partial = mul(plus, s)
            for monomial, coeff in list(partial.items()):
                if len(monomial) == d and coeff:
                    s[monomial] = s.get(monomial, 0) - coeff
        assert mul(plus, s) == {(): 1}
        return s

    series = {(): 1}
    for index, sign in word.letters:
        series = mul(series, letter(index, sign))
    return series


def test_expand_matches_oracle():
    rng = random.Random(12)
    for _ in range(60):
        word = random_word(rng, rank=3, max_length=8)
        for degree in (1, 2, 3):
            assert magnus.expand(word, degree) == oracle_expand(word, degree)


def test_expand_of_inverse_pairs_is_one():
    rng = random.Random(13)
    for _ in range(50):
        word = random_word(rng, rank=4, max_length=6)
        product = word * word.inverse()
        assert magnus.expand(product, 3) == {(): 1}


def test_single_letters():
    assert magnus.expand(gen(1), 2) == {(): 1, (1,): 1}
    assert magnus.expand(gen(1).inverse(), 2) == {(): 1, (1,): -1, (1, 1): 1}


def test_depth_basics():
    assert magnus.depth(EMPTY) is None
    assert magnus.depth(gen(3)) == 1
    assert magnus.depth(commutator(gen(1), gen(2))) == 2
    assert magnus.depth(gen(1) * gen(2)) == 1


def test_depth_of_word_families():
    for n in range(1, 6):
        assert magnus.depth(gamma_word(n).body) == n
    assert magnus.depth(beta_word(2).body) == 4
    for n in range(1, 4):
        assert magnus.depth(grope_word(n).body) == 3


def test_depth_matches_oracle_lowest_degree():
    rng = random.Random(14)
    for _ in range(40):
        word = random_word(rng, rank=3, max_length=8)
        series = oracle_expand(word, 4)
        positive = [len(m) for m in series if m]
        expected = min(positive) if positive else None
        if expected is not None and expected <= 4:
            assert magnus.depth(word) == expected
        elif expected is None and word == EMPTY:
            assert magnus.depth(word) is None


def test_depth_at_least():
    assert magnus.depth_at_least(gamma_word(3).body, 3)
    assert not magnus.depth_at_least(commutator(gen(1), gen(2)), 3)
    assert magnus.depth_at_least(EMPTY, 6)


def test_budgets():
    wide = Word(tuple((i, 1) for i in range(1, 12)))
    with pytest.raises(ResourceBudgetError):
        magnus.expand(wide, 2)
    with pytest.raises(ResourceBudgetError):
        magnus.depth(gamma_word(7).body)
