"""Words, boxes and covers on a small example."""

from polybox.core import Alphabet, code, cover_sum, covers, find_twin_pair, g_weight, W
from polybox.enumeration import B, cover_word
from polybox.grid import realize, realize_word
from polybox.isomorphism import dedup

A = Alphabet.standard(2)

# five words in dimension 3, no two of them a twin pair
V = code("aaa", "a'a'a'", "baa'", "a'ba", "aa'b")
print("code:", V.format(A), "twin pair:", find_twin_pair(V))

# the weight g(v, w) is how many of the 2^d sub-boxes of w meet v
w = W("bbb")
for v in V:
    print(f"  g({A.format(v)}, bbb) = {g_weight(v, w)}")
print("sum:", cover_sum(w, V), "of", 2 ** 3, "->", "covered" if covers(w, V) else "not covered")

# the same fact on the cell grid
print("grid agrees:", realize_word(w, 2) <= realize(V, 2, 3))

# all twin pair free 5-word covers of bbbbb, up to the symmetries fixing it
target = (B,) * 5
fam = cover_word(target, 5)
classes = dedup(fam.members, fix=target, k=2)
print(f"5-word covers of bbbbb: {len(fam)} in {len(classes)} class(es)")
print("representative:", classes[0].representative.format(A))
