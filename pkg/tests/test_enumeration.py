import itertools

import pytest

from polybox.core import Code, PolyboxError, W, code, covers, is_polybox_code, twin_pair_free
from polybox.enumeration import (
    CoverFamily, _cover_word_bar, census, check_q_pair, count_covers_direct, cover_code,
    cover_word, covers_of_code, distribution_admissible, enumerate_q_equivalent_pairs,
    frequency_profiles, local_families, seed_pairs,
)
from polybox.grid import realize
from polybox.isomorphism import canonical_form
from polybox.search import LocalGrid

C1 = Code.parse("{aaabb;a'a'a'bb;baa'bb;a'babb;aa'bbb}")


def test_frequency_profiles():
    assert [tuple(p.x) for p in frequency_profiles(3, 5)] == [(2, 3, 0), (4, 0, 1)]
    for d, n in [(4, 6), (5, 7)]:
        for p in frequency_profiles(d, n):
            assert sum(p.x) == n
            assert sum(c << w for w, c in enumerate(p.x)) == 1 << d


def test_seeds():
    assert seed_pairs(5, 2) == [(W("aaabb"), W("a'a'a'bb"))]
    assert len(seed_pairs(5, 0, twin_pair_free=False)) == 3


@pytest.mark.parametrize("u,k,hi", [("bbb", 2, 8), ("bbbb", 2, 10), ("bbb", 3, 8), ("ab'a", 2, 8)])
def test_cover_word_matches_direct_count(u, k, hi):
    from polybox.core import Alphabet
    w = Alphabet.standard(k).parse_word(u)
    direct = count_covers_direct(w, (2, hi), k)
    for n in range(2, hi + 1):
        fam = cover_word(w, n, k)
        assert len(fam) == direct[n], n
        fam.verify()


def test_search_orders_agree():
    grid = LocalGrid(W("bbbb"), 2)
    for n in range(5, 10):
        a = set(_cover_word_bar(grid, n, True, _b(), order="cell"))
        b = set(_cover_word_bar(grid, n, True, _b(), order="layered"))
        assert a == b


def _b():
    from polybox.budget import Budget
    return Budget()


def test_table1_family():
    fam = cover_word(W("bbbbb"), 5)
    assert len(fam) == 80 and C1 in fam


def test_option_errors():
    with pytest.raises(PolyboxError):
        cover_word(W("bbb"), 1)
    with pytest.raises(PolyboxError):
        cover_word(W("bbb"), 5, all_intersecting=False)


def test_family_round_trip(tmp_path):
    fam = cover_word(W("bbbb"), 6)
    p = tmp_path / "f.txt"
    fam.write(p)
    back = CoverFamily.read(p)
    assert back.members == fam.members and back.target == fam.target
    assert p.read_text() == fam.format()


def test_census_small_matches_direct():
    c = census(4, (5, 10))
    assert c.total == sum(count_covers_direct(W("bbbb"), (5, 10)).values())
    assert sum(cl.orbit for cl in c.classes) == c.total


def test_cover_code_join_matches_direct_search():
    U = [W("bbbb"), W("b'abb")]
    fams = local_families(U, 2, 8, exclude=U)
    joined = cover_code(U, None, 10, fams, disjoint_from=U)
    direct = covers_of_code(U, 2, 10, local_max=8, disjoint=True)
    assert set(joined.members) == set(direct)
    for C in direct:
        assert twin_pair_free(C) and is_polybox_code(C)
        assert all(covers(u, C) for u in U)


def _q(*counts):
    """One-letter words realizing the distribution ((n_a, n_a'), (n_b, n_b'), ...)."""
    return [(x,) for x, c in enumerate(counts) for _ in range(c)]


def test_distribution_rules_two_classes():
    assert distribution_admissible(_q(4, 4, 4, 4), 2)
    assert not distribution_admissible(_q(1, 3, 6, 6), 2)   # 16 words, 3 needs a partner >= 2
    assert not distribution_admissible(_q(0, 8, 4, 4), 2)   # 16 words, empty half
    assert distribution_admissible(_q(2, 3, 5, 6), 2)
    assert not distribution_admissible(_q(0, 0, 7, 8), 2)   # 15 words, empty pair
    assert not distribution_admissible(_q(0, 3, 6, 6), 2)   # 15 words, 3 with no partner
    assert distribution_admissible(_q(1, 3, 5, 6), 2)
    assert distribution_admissible(_q(0, 0, 7, 7), 2)       # 14 words: no rule applies


def test_three_class_rules_bind_two_class_codes():
    assert not distribution_admissible(_q(12, 0, 1, 1), 2)
    assert not distribution_admissible(_q(1, 0, 11, 3), 2)  # 15 words, lone letter beside 11
    assert distribution_admissible(_q(1, 0, 11, 2), 2)      # the same at 14 words
    assert not distribution_admissible(_q(1, 1, 8, 6), 2)   # 16 words, (1,1) beside 8
    assert distribution_admissible(_q(1, 1, 7, 7), 2)


def test_distribution_rules_three_classes():
    assert not distribution_admissible(_q(12, 0, 1, 1, 0, 0), 3)
    assert distribution_admissible(_q(11, 0, 1, 1, 0, 0), 3)
    assert not distribution_admissible(_q(1, 0, 8, 2, 2, 2), 3)  # 15 words, lone letter
    assert distribution_admissible(_q(1, 1, 7, 2, 2, 2), 3)
    assert not distribution_admissible(_q(1, 1, 8, 2, 2, 2), 3)  # 16 words, (1,1) beside 8
    assert distribution_admissible(_q(2, 1, 8, 1, 2, 2), 3)


def _brute_q_pairs():
    q = (2, 2, 2)
    words = list(itertools.product((0, 1, 2), repeat=3))
    codes = []

    def rec(start, cur):
        if cur:
            codes.append(tuple(cur))
        for j in range(start, len(words)):
            w = words[j]
            if all(any(x ^ y == 1 for x, y in zip(w, u)) for u in cur):
                cur.append(w)
                rec(j + 1, cur)
                cur.pop()

    rec(0, [])
    qq = realize([q], 2).bits
    by = {}
    for c in codes:
        if twin_pair_free(c):
            by.setdefault(realize(c, 2, 3).bits & qq, []).append(frozenset(c))
    keys = set()
    for grp in by.values():
        for K, M in itertools.combinations(grp, 2):
            if K & M:
                continue
            a = canonical_form((Code(K), Code(M)), fix=q, k=2)
            b = canonical_form((Code(M), Code(K)), fix=q, k=2)
            keys.add(min(a, b))
    return len(keys)


def test_q_pairs_match_brute_force():
    pairs = enumerate_q_equivalent_pairs((2, 2, 2), 2, letters=(0, 1, 2))
    assert all(check_q_pair(p.K, p.M, (2, 2, 2)) for p in pairs)
    assert len(pairs) == _brute_q_pairs() == 16
