import itertools
from fractions import Fraction

import pytest

from polybox.core import Code, find_twin_pair
from polybox.keller import partition_code_search
from polybox.tiling import (
    IntervalMap, L_sizes, PeriodicTiling, TilingError, parse_tiling, format_tiling,
    realize_tiling, shifted_columns, tiling_defects, tiling_r_stats, tiling_twin_pairs,
    unit_grid, validate_tiling,
)


def test_unit_grid():
    T = unit_grid(2)
    assert validate_tiling(T)
    assert len(tiling_twin_pairs(T)) == 4
    st = tiling_r_stats(T)
    assert (st.r_minus, st.r_plus) == (1, 1)


def test_missing_cube_reported():
    T = PeriodicTiling.make(unit_grid(2).translations[1:])
    dfx = tiling_defects(T)
    assert not validate_tiling(T) and dfx.uncovered == 1 and dfx.overlapped == 0


def test_shifted_columns():
    T = shifted_columns()
    assert validate_tiling(T)
    pairs = tiling_twin_pairs(T)
    assert len(pairs) == 2 and all(t[0] == s[0] for t, s in pairs)
    st = tiling_r_stats(T)
    assert st.r_plus == 2


def test_realize_binary_grid():
    U = Code(itertools.product((0, 1), repeat=2))
    T = realize_tiling(U, IntervalMap.uniform(2, [0]))
    assert set(T.translations) == set(unit_grid(2).translations)


def test_partition_codes_realize_d3():
    for tw in (False,):
        U = partition_code_search(2, 3, twin_pair_free=tw).clique
        for offs in ([0, Fraction(1, 3)], [Fraction(1, 2), 0]):
            T = realize_tiling(U, IntervalMap.uniform(3, offs))
            assert validate_tiling(T)
            assert bool(tiling_twin_pairs(T)) == (find_twin_pair(U) is not None)
            assert tiling_r_stats(T).r_plus <= 2


def test_three_class_realization():
    offs = [0, Fraction(1, 3), Fraction(1, 2)]
    found = 0
    words = list(itertools.product(range(6), repeat=2))
    for U in itertools.combinations(words, 4):
        if not all(any(x ^ y == 1 for x, y in zip(u, v)) for u, v in itertools.combinations(U, 2)):
            continue
        T = realize_tiling(Code(U), IntervalMap.uniform(2, offs))
        assert validate_tiling(T)
        assert bool(tiling_twin_pairs(T)) == (find_twin_pair(U) is not None)
        per = max(len({w[i] // 2 for w in U}) for i in range(2))
        assert tiling_r_stats(T).r_plus <= per
        found += 1
    assert found > 0


def test_rejects():
    with pytest.raises(TilingError):
        IntervalMap.uniform(2, [0, 0])
    with pytest.raises(TilingError):
        realize_tiling(Code([(0, 0), (1, 1)]), IntervalMap.uniform(2, [0]))
    T = PeriodicTiling.make([(Fraction(1, 61), 0)])
    with pytest.raises(TilingError):
        validate_tiling(T)


def test_L_matches_sampled_stats():
    T = shifted_columns()
    vals = [max(L_sizes(T, (Fraction(a, 4), Fraction(b, 4)))) for a in range(8) for b in range(8)]
    st = tiling_r_stats(T)
    assert max(vals) == st.r_plus and min(vals) >= st.r_minus


def test_file_round_trip(tmp_path):
    T = shifted_columns()
    assert parse_tiling(format_tiling(T)) == T
