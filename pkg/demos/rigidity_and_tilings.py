"""Rigid codes, and codes turned into periodic cube tilings."""

from fractions import Fraction

from polybox.core import Alphabet, Code, code, find_twin_pair
from polybox.rigidity import find_equivalent_codes, is_rigid
from polybox.tiling import (
    IntervalMap, format_tiling, realize_tiling, shifted_columns, tiling_r_stats,
    tiling_twin_pairs, unit_grid, validate_tiling,
)

A = Alphabet.standard(2)

# a twin pair has a second code with the same union
r = find_equivalent_codes(code("aaa", "a'aa"), k=2)
print("{aaa, a'aa}:", r.verdict, [c.format(A) for c in r.witnesses][:3])
print("five word example rigid:", is_rigid(code("aaa", "a'a'a'", "baa'", "a'ba", "aa'b"), k=2))

# a partition code over three classes gives a tiling of the 2-torus
A3 = Alphabet.standard(3)
U = Code([A3.parse_word(s) for s in ("ab", "ab'", "a'c", "a'c'")])
T = realize_tiling(U, IntervalMap.uniform(2, [0, Fraction(1, 3), Fraction(1, 2)]))
print(format_tiling(T))
print("valid:", validate_tiling(T), "twin pairs:", len(tiling_twin_pairs(T)),
      "code twin pair:", find_twin_pair(U) is not None)

for name, T in (("unit grid", unit_grid(2)), ("shifted columns", shifted_columns()), ("code", T)):
    st = tiling_r_stats(T)
    print(f"{name}: r- = {st.r_minus}, r+ = {st.r_plus}")
