"""Exact finite model of the equicomplementary realization.

Each coordinate of the ambient box is ``{0,1}^k`` (``k`` complement
classes); the letter ``(c, p)`` realizes to the atoms whose bit ``c`` equals
``p``.  Any family of letters from distinct classes then meets in exactly
``2^-n`` of the atoms, which is all the realization is ever used for.

A :class:`CellSet` stores occupancy as a Python int over the ``2^(k*d)``
cells, coordinate 0 most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .core import Code, DimensionError, PolyboxError, Word, num_classes

MAX_GRID_BITS = 24


class GridTooLarge(PolyboxError):
    pass


def _check_size(k: int, d: int, cap: int = MAX_GRID_BITS) -> None:
    if k * d > cap:
        raise GridTooLarge(f"grid of {k}*{d} bits exceeds cap {cap}")


@lru_cache(maxsize=None)
def _atom_mask(x: int, k: int) -> int:
    c, p = divmod(x, 2)
    if c >= k:
        raise PolyboxError(f"letter {x} needs more than {k} classes")
    m = 0
    for a in range(1 << k):
        if (a >> c) & 1 == p:
            m |= 1 << a
    return m


@lru_cache(maxsize=None)
def _atoms(x: int, k: int) -> tuple[int, ...]:
    m = _atom_mask(x, k)
    return tuple(a for a in range(1 << k) if (m >> a) & 1)


@lru_cache(maxsize=1 << 16)
def word_bits(w: tuple[int, ...], k: int) -> int:
    R = 1 << k
    m = _atom_mask(w[-1], k)
    block = R
    for x in reversed(w[:-1]):
        nm = 0
        for a in _atoms(x, k):
            nm |= m << (a * block)
        m = nm
        block *= R
    return m


@dataclass(frozen=True)
class CellSet:
    k: int
    d: int
    bits: int

    @classmethod
    def empty(cls, k: int, d: int) -> "CellSet":
        return cls(k, d, 0)

    @classmethod
    def full(cls, k: int, d: int) -> "CellSet":
        return cls(k, d, (1 << (1 << (k * d))) - 1)

    @property
    def n_cells(self) -> int:
        return 1 << (self.k * self.d)

    def _same(self, other: "CellSet") -> None:
        if (self.k, self.d) != (other.k, other.d):
            raise DimensionError("cell sets over different grids")

    def __or__(self, other):
        self._same(other)
        return CellSet(self.k, self.d, self.bits | other.bits)

    def __and__(self, other):
        self._same(other)
        return CellSet(self.k, self.d, self.bits & other.bits)

    def __sub__(self, other):
        self._same(other)
        return CellSet(self.k, self.d, self.bits & ~other.bits)

    def __le__(self, other) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def measure(self) -> Fraction:
        """Volume in units of one box (``2^((k-1)d)`` cells)."""
        return Fraction(len(self), 1 << ((self.k - 1) * self.d))

    def hex(self) -> str:
        return format(self.bits, "x")

    def cells(self) -> list[int]:
        b = self.bits
        out = []
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def coords(self, cell: int) -> tuple[int, ...]:
        R = 1 << self.k
        out = []
        for _ in range(self.d):
            cell, a = divmod(cell, R)
            out.append(a)
        return tuple(reversed(out))

    def axis_slices(self, i: int) -> list[int]:
        """Occupancy restricted to each atom of coordinate ``i``, aligned to atom 0."""
        R = 1 << self.k
        block = R ** (self.d - 1 - i)
        sel = 0
        stripe = (1 << block) - 1
        for hi in range(R ** i):
            sel |= stripe << (hi * block * R)
        return [(self.bits >> (a * block)) & sel for a in range(R)]

    def is_cylinder(self, i: int) -> bool:
        s = self.axis_slices(i)
        return all(x == s[0] for x in s)


def grid_k(*groups: Iterable[Sequence[int]], k: int | None = None) -> int:
    if k is not None:
        return k
    return max((num_classes(g) for g in groups), default=1)


def realize_word(v: Sequence[int], k: int | None = None, cap: int = MAX_GRID_BITS) -> CellSet:
    k = k if k is not None else num_classes([v])
    _check_size(k, len(v), cap)
    return CellSet(k, len(v), word_bits(tuple(v), k))


def realize(V: Iterable[Sequence[int]], k: int | None = None, d: int | None = None,
            cap: int = MAX_GRID_BITS) -> CellSet:
    ws = [tuple(w) for w in V]
    if k is None:
        k = num_classes(ws)
    if d is None:
        if not ws:
            raise DimensionError("cannot infer the dimension of an empty code")
        d = len(ws[0])
    _check_size(k, d, cap)
    bits = 0
    for w in ws:
        if len(w) != d:
            raise DimensionError("words of different lengths")
        bits |= word_bits(w, k)
    return CellSet(k, d, bits)


def _pair(V, W_, k):
    ws = list(V), list(W_)
    k = grid_k(*ws, k=k)
    d = len((ws[0] or ws[1])[0])
    return realize(ws[0], k, d), realize(ws[1], k, d)


def equivalent_grid(V: Iterable[Sequence[int]], W_: Iterable[Sequence[int]], k: int | None = None) -> bool:
    a, b = _pair(V, W_, k)
    return a == b


def subset_grid(V: Iterable[Sequence[int]], W_: Iterable[Sequence[int]], k: int | None = None) -> bool:
    """Whether the union of ``V``'s boxes lies inside the union of ``W_``'s."""
    a, b = _pair(V, W_, k)
    return a <= b


def measure_difference_grid(V, W_, k: int | None = None) -> Fraction:
    a, b = _pair(V, W_, k)
    return (a - b).measure()


def q_equivalent(K: Iterable[Sequence[int]], M: Iterable[Sequence[int]], q: Sequence[int],
                 k: int | None = None) -> bool:
    K, M = list(K), list(M)
    k = grid_k(K, M, [q], k=k)
    d = len(q)
    qq = realize_word(q, k)
    return (realize(K, k, d) & qq) == (realize(M, k, d) & qq)


def box_within(v: Sequence[int], F: CellSet) -> bool:
    return word_bits(tuple(v), F.k) & ~F.bits == 0


@dataclass(frozen=True)
class CylinderGroup:
    cls: int | None  # None for words with a full letter at i (never occurs for codes)
    words: tuple[Word, ...]
    is_cylinder: bool


def cylinder_groups(V: Code, i: int, k: int | None = None) -> list[CylinderGroup]:
    """Split ``V`` by the complement class of the letter at coordinate ``i``."""
    k = grid_k(V, k=k)
    d = V.d
    out = []
    for c in range(k):
        ws = tuple(w for w in V if w[i] // 2 == c)
        if ws:
            out.append(CylinderGroup(c, ws, realize(ws, k, d).is_cylinder(i)))
    return out
