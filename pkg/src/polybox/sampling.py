"""Random words and codes for property checks and demos."""

from __future__ import annotations

import random

from .core import Code, Word, dichotomous, is_twin_pair


def random_word(rng: random.Random, d: int, k: int) -> Word:
    return Word(rng.randrange(2 * k) for _ in range(d))


def random_code(rng: random.Random, d: int, k: int, max_size: int, *,
                twin_pair_free: bool = False, tries: int = 64) -> Code:
    """Greedy random code: draw words and keep those dichotomous with all kept so far."""
    n = rng.randint(1, max_size)
    cur: list[Word] = []
    for _ in range(tries):
        if len(cur) >= n:
            break
        w = random_word(rng, d, k)
        if w in cur or not all(dichotomous(w, u) for u in cur):
            continue
        if twin_pair_free and any(is_twin_pair(w, u) for u in cur):
            continue
        cur.append(w)
    return Code(cur, check=False)
