"""Largest twin pair free codes are cliques of the Keller graph."""

import time

from polybox.core import Alphabet, find_twin_pair
from polybox.keller import KellerGraph, certificate_text, check_certificate, max_clique

A = Alphabet.standard(2)

for d in (2, 3, 4):
    G = KellerGraph(2, d, True)
    t = time.time()
    w = max_clique(2, d)
    print(f"d={d}: {G.n} vertices, clique number {w.size}, certified={w.certified}, "
          f"{w.nodes} nodes, {time.time() - t:.1f}s")

# the d=4 witness has 12 words, so no twin pair free code has 16
w = max_clique(2, 4)
print(w.clique.format(A))
print("twin pair:", find_twin_pair(w.clique))
text = certificate_text(w.clique, A)
print("certificate checks:", check_certificate(text, A))
