"""Counting covers of b...b and grouping them into isomorphism classes."""

import time

from polybox.enumeration import B, census
from polybox.isomorphism import orbit_size, stabilizer_order

for d, sizes in ((3, (4, 7)), (4, (4, 9))):
    t = time.time()
    c = census(d, sizes)
    print(f"d={d}: {c.total} covers, {c.n_classes} classes ({time.time() - t:.1f}s)")
    for n, (seeded, total, classes) in sorted(c.per_size.items()):
        if total:
            print(f"   size {n:2d}: {total:6d} covers, {classes} classes")

# orbit sizes divide the order of the stabilizer of b...b
d = 4
order = stabilizer_order(d, 2, (B,) * d)
c = census(d, (4, 9))
sizes = [orbit_size(cl.representative, fix=(B,) * d, k=2) for cl in c.classes]
print("stabilizer order", order, "; orbit sizes", sorted(set(sizes)))
print("sum of orbits == total:", sum(sizes) == c.total)
