import itertools
import random

import pytest

from polybox.core import (
    Code, W, code, code_covers, covers, distribution, find_twin_pair, is_flat, is_polybox_code,
    measure_difference,
)
from polybox.grid import q_equivalent
from polybox.isomorphism import (
    Isomorphism, apply, canonical_form, dedup, fingerprint, group_elements, isomorphic,
    orbit_size, signed_maps, stabilizer_order,
)
from polybox.sampling import random_code, random_word

B5 = W("bbbbb")
C1 = Code.parse("{aaabb;a'a'a'bb;baa'bb;a'babb;aa'bbb}")
C2 = Code.parse("{aaaab;a'a'a'ab;baa'ab;a'baab;aa'bab;bbba'b}")


def random_iso(rng, d, k):
    sigma = list(range(d))
    rng.shuffle(sigma)
    maps = [rng.choice(signed_maps(k)) for _ in range(d)]
    return Isomorphism(tuple(sigma), tuple(maps))


def test_group_orders():
    assert len(signed_maps(2)) == 8
    assert stabilizer_order(5, 2, B5) == 3840
    assert stabilizer_order(6, 2, W("bbbbbb")) == 46080
    assert sum(1 for _ in group_elements(3, 2, W("bbb"))) == stabilizer_order(3, 2, W("bbb"))


def test_invalid_maps():
    with pytest.raises(Exception):
        Isomorphism((0, 0), ((0, 1, 2, 3),) * 2)
    with pytest.raises(Exception):
        Isomorphism((0,), ((2, 1, 0, 3),))


def test_inverse_and_composition():
    rng = random.Random(1)
    for _ in range(200):
        f, g = random_iso(rng, 4, 3), random_iso(rng, 4, 3)
        w = random_word(rng, 4, 3)
        assert f.inverse()(f(w)) == w
        assert f.then(g)(w) == g(f(w))


def _dist_shape(V, d, k):
    return sorted(sorted(tuple(sorted(p)) for p in distribution(V, i, k)) for i in range(d))


def test_apply_preserves_predicates_random():
    rng = random.Random(2)
    for _ in range(10_000):
        d = rng.randint(1, 5)
        k = rng.randint(1, 3) if d <= 4 else rng.randint(1, 2)
        V = random_code(rng, d, k, 6)
        w = random_word(rng, d, k)
        f = random_iso(rng, d, k)
        fV = apply(f, V)
        assert is_polybox_code(fV)
        assert (find_twin_pair(V) is None) == (find_twin_pair(fV) is None)
        assert covers(w, V) == covers(f(w), fV)
        assert is_flat(V) == is_flat(fV)
        assert _dist_shape(V, d, k) == _dist_shape(fV, d, k)


def test_apply_preserves_measure_and_q_equivalence():
    rng = random.Random(3)
    for _ in range(1000):
        d, k = rng.randint(1, 4), rng.randint(1, 2)
        V, Wc = random_code(rng, d, k, 5), random_code(rng, d, k, 5)
        q = random_word(rng, d, k)
        f = random_iso(rng, d, k)
        assert measure_difference(V, Wc) == measure_difference(apply(f, V), apply(f, Wc))
        assert q_equivalent(V, Wc, q, k) == q_equivalent(apply(f, V), apply(f, Wc), f(q), k)


def test_canonical_form_is_orbit_invariant():
    rng = random.Random(4)
    cf = canonical_form(C1, fix=B5, k=2)
    for _ in range(50):
        sigma = list(range(5))
        rng.shuffle(sigma)
        maps = tuple(rng.choice([(0, 1, 2, 3), (1, 0, 2, 3)]) for _ in range(5))
        f = Isomorphism(tuple(sigma), maps)
        assert f(B5) == B5
        assert canonical_form(apply(f, C1), fix=B5, k=2) == cf


def test_orbit_size_divides_group():
    n = orbit_size(C1, fix=B5, k=2)
    assert n == 80 and 3840 % n == 0


def test_isomorphic_witness():
    rng = random.Random(5)
    for _ in range(100):
        d, k = rng.randint(2, 4), 2
        V = random_code(rng, d, k, 6)
        f = random_iso(rng, d, k)
        g = isomorphic(V, apply(f, V), k=k)
        assert g is not None and apply(g, V) == apply(f, V)
        assert fingerprint(V, k=k) == fingerprint(apply(f, V), k=k)
    assert isomorphic(C1, C2, fix=B5, k=2) is None


def test_dedup_matches_brute_force():
    # all 2-word codes in dimension 2 over two classes, up to the full group
    words = list(itertools.product(range(4), repeat=2))
    codes = [Code(p) for p in itertools.combinations(words, 2) if is_polybox_code(p)]
    classes = dedup(codes, k=2)
    seen = set()
    orbits = 0
    for V in codes:
        if V in seen:
            continue
        orbits += 1
        seen |= {apply(f, V) for f in group_elements(2, 2)}
    assert len(classes) == orbits
