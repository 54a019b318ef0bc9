"""Shared helpers for the test suite."""
from __future__ import annotations

import random

from verba.words import Word


def random_word(rng: random.Random, rank: int = 4, max_length: int = 12) -> Word:
    length = rng.randrange(0, max_length + 1)
    return Word(
        tuple(
            (rng.randrange(1, rank + 1), rng.choice((1, -1))) for _ in range(length)
        )
    )


def random_nonempty_word(
    rng: random.Random, rank: int = 4, max_length: int = 12
) -> Word:
    while True:
        word = random_word(rng, rank, max_length)
        if word:
            return word
