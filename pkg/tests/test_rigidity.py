import itertools
import random

import pytest

from polybox.budget import Budget, BudgetExceeded
from polybox.core import Code, code, dichotomous, find_twin_pair, twin_pair_free
from polybox.grid import equivalent_grid, realize
from polybox.rigidity import (
    INCONCLUSIVE, NOT_RIGID, RIGID, enclosed_boxes, find_equivalent_codes, is_rigid,
)

EX21 = code("aaa", "a'a'a'", "baa'", "a'ba", "aa'b")


def test_enclosed_boxes_brute_force():
    F = realize(EX21, 2)
    brute = [w for w in itertools.product(range(4), repeat=3) if realize([w], 2) <= F]
    assert sorted(enclosed_boxes(F)) == sorted(brute)


def test_twin_pair_not_rigid():
    r = find_equivalent_codes(code("aaa", "a'aa"), 2)
    assert r.verdict == NOT_RIGID
    assert code("baa", "b'aa") in r.witnesses
    assert all(equivalent_grid(W, code("aaa", "a'aa"), 2) for W in r.witnesses)


def test_example_is_rigid():
    assert is_rigid(EX21, 2)
    assert is_rigid(code("aaa"), 2)


def test_budget():
    with pytest.raises(BudgetExceeded):
        is_rigid(EX21, 2, budget=Budget(max_nodes=1))
    r = find_equivalent_codes(EX21, 2, budget=Budget(max_nodes=1))
    assert r.verdict == INCONCLUSIVE


def test_witnesses_are_equivalent_random():
    rng = random.Random(9)
    words = list(itertools.product(range(4), repeat=3))
    for _ in range(200):
        rng.shuffle(words)
        cur = []
        for w in words[: rng.randint(1, 8)]:
            if all(dichotomous(w, u) for u in cur):
                cur.append(w)
        V = Code(cur)
        r = find_equivalent_codes(V, 2)
        for W in r.witnesses:
            assert W != V and equivalent_grid(V, W, 2)
        if find_twin_pair(V):
            assert r.verdict == NOT_RIGID
