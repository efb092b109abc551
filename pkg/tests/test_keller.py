import itertools

import pytest

from polybox.core import Code, find_twin_pair, is_polybox_code
from polybox.keller import (
    KellerGraph, certificate_text, check_certificate, clique_with_column_classes, max_clique,
    partition_code_search,
)


def brute_clique_number(k, d):
    G = KellerGraph(k, d)
    best = 0
    # grow cliques in index order
    def rec(cands, size):
        nonlocal best
        best = max(best, size)
        while cands:
            if size + cands.bit_count() <= best:
                return
            v = (cands & -cands).bit_length() - 1
            cands &= ~(1 << v)
            rec(cands & G.adj[v], size + 1)
    rec((1 << G.n) - 1, 0)
    return best


def test_adjacency_definition():
    G = KellerGraph(2, 3)
    for u, v in itertools.combinations(G.vertices, 2):
        dich = any(x ^ y == 1 for x, y in zip(u, v))
        twin = dich and sum(x != y for x, y in zip(u, v)) == 1
        assert G.adjacent(u, v) == (dich and not twin)


def test_d3_matches_brute_force():
    w = max_clique(2, 3)
    assert w.certified and w.size == 5 == brute_clique_number(2, 3)
    assert is_polybox_code(w.clique) and find_twin_pair(w.clique) is None


def test_symmetry_cut_is_sound():
    assert max_clique(2, 3, symmetry=False).size == max_clique(2, 3).size
    assert max_clique(1, 3).size == max_clique(1, 3, symmetry=False).size


def test_monotone():
    s = {(k, d): max_clique(k, d).size for k in (1, 2) for d in (2, 3)}
    assert s[1, 2] <= s[2, 2] and s[1, 3] <= s[2, 3]
    assert s[1, 2] <= s[1, 3] and s[2, 2] <= s[2, 3]


def test_dichotomy_graph_has_partitions():
    w = partition_code_search(2, 3, twin_pair_free=False)
    assert w.clique is not None and len(w.clique) == 8


def test_no_twin_free_partition_d3():
    w = partition_code_search(2, 3)
    assert w.clique is None and w.certified


def test_column_classes():
    r = clique_with_column_classes(2, 3, 0, {0, 1}, 8)
    assert r.clique is None and r.certified
    r = clique_with_column_classes(2, 3, 0, {0, 1}, 4)
    assert r.clique is not None and {w[0] // 2 for w in r.clique} == {0, 1}


def test_certificate():
    w = max_clique(2, 3)
    text = certificate_text(w.clique)
    assert check_certificate(text)
    assert not check_certificate(text.replace("# pairwise-digest: ", "# pairwise-digest: 0"))
