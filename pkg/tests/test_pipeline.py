import pytest

from polybox.core import Code, code_covers, dichotomous, distribution, is_flat, twin_pair_free
from polybox.enumeration import covers_of_code, distribution_admissible
from polybox.pipeline import first_level, second_level

U5 = Code.parse("{aaabb;aa'bbb;a'a'a'bb;a'babb;baa'bb}")
# a flat first level cover of U5 and the single cover of it found when the slice bound is ignored
C_FLAT = Code.parse("{aab'ab;ab'aa'b;ab'bab;a'bb'ab;a'b'a'ab;bbbbb;bbb'a'b;bb'a'a'b;b'a'a'a'b;"
                    "b'baa'b;b'bbab}")
D_FLAT = Code.parse("{aaabb;aa'bbb;aa'b'a'b;a'a'a'bb;a'a'b'b'b;a'babb;baa'bb;bab'b'b;bb'bb'b;"
                    "b'aab'b;b'aa'ab;b'a'bb'b}")


def test_flat_candidate_meets_everything_but_the_slice_bound():
    # checked directly against the definitions, independent of the search
    D = D_FLAT
    assert code_covers(C_FLAT, D) and twin_pair_free(D) and twin_pair_free(C_FLAT)
    assert not set(D.words) & set(C_FLAT.words) and set(U5.words) <= set(D.words)
    assert all(any(not dichotomous(v, w) for v in C_FLAT) for w in D)
    assert max(sum(not dichotomous(v, w) for w in D) for v in C_FLAT) <= 11
    assert is_flat(D) and is_flat(C_FLAT)
    # all twelve words end in b
    assert (12, 0) in distribution(D, 4, 2) and not distribution_admissible(D, 2)
    assert distribution_admissible(C_FLAT, 2)


def test_second_level_empty_for_flat_cover():
    unfiltered = covers_of_code(C_FLAT, 2, 16, local_max=11, required=list(U5), disjoint=True)
    assert list(unfiltered) == [D_FLAT]
    assert second_level(U5, C_FLAT, 5) == []


def test_first_level_accepts_flat_cover():
    assert code_covers(U5, C_FLAT) and (2,) * 5 in C_FLAT


@pytest.mark.extended
def test_first_level_size_for_five_word_seed():
    F = first_level(U5, 5)
    assert len(F) == 324
    assert sum(map(is_flat, F)) == 12
    assert C_FLAT in F
