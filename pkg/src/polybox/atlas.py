"""Covers of a code assembled from the expanded census of covers of ``b...b``.

Every twin pair free cover of a word ``u`` is the image of a cover of
``b...b`` under a symmetry sending ``b...b`` to ``u``, so one expanded census
gives the cover family of every word.  Covers of a code are then glued word
by word: if ``C1`` covers ``u1``, ``C2`` covers ``u2`` and ``C1 | C2`` is a
code, the words of ``C1`` meeting ``u2`` are exactly the words of ``C2``
meeting ``u1``.  That set is the join key.

Words are handled as integers ``sum(x_i * 4**(d-1-i))`` over the two-class
alphabet and sets of words as Python int bitmasks.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .budget import Budget, ensure
from .core import Code, PolyboxError, Word
from .enumeration import B, Census, census
from .isomorphism import orbit_keys, signed_maps


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << int(i)
    return m


def _ids(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class CoverAtlas:
    """All covers of ``b...b`` with sizes in ``sizes``, two-class alphabet."""

    def __init__(self, d: int, sizes: tuple[int, int], *, seeds: Census | None = None,
                 budget: Budget | None = None):
        self.d = d
        self.sizes = sizes
        n = self.n_words = 4 ** d
        budget = ensure(budget)
        if seeds is None:
            seeds = census(d, sizes, 2, budget=budget)
        if seeds.d != d or seeds.k != 2:
            raise PolyboxError("census does not match the atlas")
        target = (B,) * d
        by_size: dict[int, list[bytes]] = {}
        for cls in seeds.classes:
            budget.tick()
            keys, _ = orbit_keys(cls.representative, fix=target, k=2)
            by_size.setdefault(len(cls.representative), []).extend(keys)
        dtype = np.uint16 if n < 65536 else np.int64
        self.tables = {s: np.frombuffer(b"".join(v), dtype=dtype).reshape(-1, s)
                       for s, v in sorted(by_size.items())}
        self.total = sum(len(t) for t in self.tables.values())
        # letters of every word, coordinate 0 first
        self.letters = np.array([[(c >> (2 * (d - 1 - i))) & 3 for i in range(d)] for c in range(n)],
                                dtype=np.int8)
        self.meet = []
        for c in range(n):
            row = ~np.any((self.letters ^ self.letters[c]) == 1, axis=1)
            self.meet.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
        self.twin = [_mask(c ^ (1 << (2 * (d - 1 - i))) for i in range(d)) for c in range(n)]

    # -- words ------------------------------------------------------------------

    def code(self, w: Sequence[int]) -> int:
        c = 0
        for x in w:
            if not 0 <= x < 4:
                raise PolyboxError("the atlas is built over the two-class alphabet")
            c = 4 * c + x
        return c

    def word(self, c: int) -> Word:
        return Word(int(x) for x in self.letters[c])

    def to_code(self, mask: int) -> Code:
        return Code((self.word(c) for c in _ids(mask)), check=False)

    def _map_to_target(self, u: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Tables of a symmetry sending ``u`` to ``b...b`` and of its inverse."""
        maps = []
        for x in u:
            m = next(m for m in signed_maps(2) if m[x] == B)
            maps.append(m)
        fwd = np.zeros(self.n_words, dtype=np.int64)
        for c in range(self.n_words):
            fwd[c] = self.code(maps[i][x] for i, x in enumerate(self.letters[c]))
        inv = np.empty_like(fwd)
        inv[fwd] = np.arange(self.n_words)
        return fwd, inv

    # -- families -----------------------------------------------------------------

    def family(self, u: Sequence[int], required: Iterable[Sequence[int]] = (),
               forbidden: Iterable[Sequence[int]] = ()) -> list[int]:
        """Covers of ``u`` (as masks) containing ``required`` and avoiding ``forbidden``."""
        fwd, inv = self._map_to_target(u)
        req = [int(fwd[self.code(w)]) for w in required]
        forb = [int(fwd[self.code(w)]) for w in forbidden]
        out = []
        for table in self.tables.values():
            # required words first: they cut the table down before the other tests
            for r in req:
                table = table[np.any(table == r, axis=1)]
            if forb and len(table):
                table = table[~np.isin(table, forb).any(axis=1)]
            for row in inv[table]:
                out.append(_mask(row))
        return out

    # -- gluing -------------------------------------------------------------------

    def join(self, targets: Sequence[Sequence[int]], families: Sequence[list[int]], m: int, *,
             accept: Callable[[Code], bool] | None = None,
             budget: Budget | None = None) -> list[Code]:
        """Twin pair free codes of at most ``m`` words restricting to a member of every family."""
        budget = ensure(budget)
        tcodes = [self.code(t) for t in targets]
        if any(not f for f in families):
            return []
        left = list(range(len(tcodes)))
        first = min(left, key=lambda i: len(families[i]))
        left.remove(first)
        partial = {C for C in families[first] if C.bit_count() <= m}
        reach = self.meet[tcodes[first]]
        while left and partial:
            # next: the target whose neighbourhood shares most with what is placed
            nxt = max(left, key=lambda i: ((self.meet[tcodes[i]] & reach).bit_count(), -len(families[i])))
            left.remove(nxt)
            here = self.meet[tcodes[nxt]]
            index: dict[int, list[int]] = {}
            for C in families[nxt]:
                index.setdefault(C & reach, []).append(C)
            grown = set()
            for P in partial:
                budget.tick()
                for C in index.get(P & here, ()):
                    new = C & ~P
                    if (P | new).bit_count() > m:
                        continue
                    ok = True
                    for x in _ids(new):
                        if (self.meet[x] | self.twin[x]) & P:
                            ok = False
                            break
                    if ok:
                        grown.add(P | new)
            partial = grown
            reach |= here
        out = [self.to_code(P) for P in partial]
        if accept is not None:
            out = [C for C in out if accept(C)]
        return sorted(out)
