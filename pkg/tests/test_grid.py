import itertools
import random
from fractions import Fraction

import pytest

from polybox.core import W, Code, code, delete_coord, measure_difference, slice_code
from polybox.grid import (
    CellSet, GridTooLarge, box_within, cylinder_groups, equivalent_grid, measure_difference_grid,
    q_equivalent, realize, realize_word, subset_grid,
)
from polybox.sampling import random_code

EX21 = code("aaa", "a'a'a'", "baa'", "a'ba", "aa'b")
C1 = Code.parse("{aaabb;a'a'a'bb;baa'bb;a'babb;aa'bbb}")


def test_word_cardinality():
    for k in (1, 2, 3):
        for w in itertools.product(range(2 * k), repeat=3):
            assert len(realize_word(w, k)) == 1 << ((k - 1) * 3)
    assert len(realize_word(W("aaa"), 2)) == 8
    assert realize_word(W("aaa"), 2).n_cells == 64


def test_letter_outside_grid_rejected():
    with pytest.raises(Exception):
        realize_word(W("aab"), 1)


def test_code_cardinality_is_additive():
    assert len(realize(code("aaa", "a'aa"), 2)) == 2 * 8
    rng = random.Random(3)
    for _ in range(500):
        V = random_code(rng, 4, 2, 8)
        assert len(realize(V, 2, 4)) == len(V) << 4


def test_equivalence_and_containment():
    assert equivalent_grid(code("aaa", "a'aa"), code("baa", "b'aa"))
    assert equivalent_grid(EX21, EX21)
    assert subset_grid([W("bbbbb")], C1)
    assert not equivalent_grid([W("bbbbb")], C1)
    assert box_within(W("bbb"), realize(EX21, 2))
    assert not box_within(W("aab"), realize(code("aaa"), 2))


def test_every_cover_word_meets_target():
    t = realize_word(W("bbbbb"), 2)
    assert all(realize_word(w, 2) & t for w in C1)


def test_q_equivalence():
    K, M = code("aab", "aa'a"), code("aba", "aaa'")
    assert q_equivalent(K, M, W("bbb"))
    assert q_equivalent(K, K, W("bbb"))
    # r agrees with q off the first coordinate, where every word carries a
    assert q_equivalent(K, M, W("abb"))
    assert not q_equivalent(K, M, W("bab"))
    assert not q_equivalent(K, M, W("bba"))


def test_cylinder_groups():
    gs = cylinder_groups(EX21, 2)
    assert sorted((g.cls, len(g.words)) for g in gs) == [(0, 4), (1, 1)]
    assert not any(g.is_cylinder for g in gs)
    full = Code(itertools.product((0, 1), repeat=3))
    assert all(g.is_cylinder for i in range(3) for g in cylinder_groups(full, i))


def test_partition_codes_split_into_cylinders():
    from polybox.keller import partition_code_search
    U = partition_code_search(2, 3, twin_pair_free=False).clique
    assert U is not None and len(U) == 8
    for i in range(3):
        assert all(g.is_cylinder for g in cylinder_groups(U, i))


def test_cap():
    with pytest.raises(GridTooLarge):
        realize_word(W("abc" * 3), 3, cap=8)


def test_measure_difference_closed_form_random():
    rng = random.Random(5)
    for _ in range(2000):
        d, k = rng.randint(1, 4), rng.randint(1, 3)
        V, Wc = random_code(rng, d, k, 6), random_code(rng, d, k, 6)
        assert measure_difference(V, Wc) == measure_difference_grid(V, Wc, k)


def test_difference_identity_on_equivalent_pair():
    # equivalent codes have equal slice differences after deleting the coordinate
    V, Wc = code("aaa", "a'aa"), code("baa", "b'aa")
    for i in range(3):
        for x in range(4):
            y = x ^ 1
            def part(C, l):
                s = slice_code(C, i, l)
                return delete_coord(s, i).words if len(s) else ()
            a = realize(part(V, x), 2, 2) - realize(part(V, y), 2, 2)
            b = realize(part(Wc, x), 2, 2) - realize(part(Wc, y), 2, 2)
            assert a.measure() == b.measure()


def test_cellset_ops():
    a = realize(code("aaa"), 2)
    b = realize(code("baa"), 2)
    assert (a & b).measure() == Fraction(1, 2)
    assert (a | b) - a == b - a
    assert CellSet.empty(2, 3) <= a <= CellSet.full(2, 3)
