"""Periodic cube tilings of the torus ``R^d / 2Z^d`` built from partition codes.

An :class:`IntervalMap` sends the letter ``(c, 0)`` at coordinate ``i`` to
``[o, o+1) + 2Z`` and ``(c, 1)`` to ``[o+1, o+2) + 2Z`` where ``o`` is the
offset of class ``c`` at ``i``.  A code with ``2^d`` words then realizes as
a tiling by unit cubes whose translation vectors are the left endpoints.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import Code, PolyboxError, Word, find_twin_pair

DEFAULT_DENOMINATOR_CAP = 60
TWO = Fraction(2)


class TilingError(PolyboxError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _mod2(x: Fraction) -> Fraction:
    return x - TWO * math.floor(x / TWO)


@dataclass(frozen=True)
class IntervalMap:
    """Per coordinate, per class offsets in ``[0, 1)``."""

    offsets: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for row in self.offsets:
            for o in row:
                if not 0 <= o < 1:
                    raise TilingError(f"offset {o} not in [0, 1)")
            if len(set(row)) != len(row):
                raise TilingError("offsets of distinct classes must differ at each coordinate")

    @classmethod
    def uniform(cls, d: int, offsets: Sequence) -> "IntervalMap":
        row = tuple(_frac(o) for o in offsets)
        return cls((row,) * d)

    @property
    def d(self) -> int:
        return len(self.offsets)

    @property
    def k(self) -> int:
        return len(self.offsets[0])

    def left(self, i: int, x: int) -> Fraction:
        c, p = divmod(x, 2)
        if c >= len(self.offsets[i]):
            raise TilingError(f"no offset for class {c} at coordinate {i}")
        return self.offsets[i][c] + p

    def translation(self, w: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(self.left(i, x) for i, x in enumerate(w))


@dataclass(frozen=True)
class PeriodicTiling:
    """Unit cubes ``[0,1)^d + t + 2Z^d`` for ``t`` in ``translations``."""

    d: int
    translations: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for t in self.translations:
            if len(t) != self.d:
                raise TilingError("translation of the wrong dimension")

    @classmethod
    def make(cls, translations: Iterable[Sequence]) -> "PeriodicTiling":
        ts = sorted({tuple(_mod2(_frac(x)) for x in t) for t in translations})
        if not ts:
            raise TilingError("no translations")
        return cls(len(ts[0]), tuple(ts))

    @property
    def denominator(self) -> int:
        D = 1
        for t in self.translations:
            for x in t:
                D = math.lcm(D, x.denominator)
        return D

    def __len__(self) -> int:
        return len(self.translations)


def realize_tiling(U: Iterable[Sequence[int]], imap: IntervalMap, *,
                   cap: int = DEFAULT_DENOMINATOR_CAP) -> PeriodicTiling:
    """The tiling whose cubes are the boxes of the partition code ``U``."""
    U = Code(U)
    d = U.d
    if len(U) != 1 << d:
        raise TilingError(f"a partition code in dimension {d} has {1 << d} words, not {len(U)}")
    if imap.d != d:
        raise TilingError("interval map and code differ in dimension")
    ts = [imap.translation(w) for w in U]
    if len(set(ts)) != len(ts):
        raise TilingError("two words share a translation")
    T = PeriodicTiling.make(ts)
    if not validate_tiling(T, cap=cap):
        raise TilingError("realization is not a tiling")
    return T


def coverage(T: PeriodicTiling, *, cap: int = DEFAULT_DENOMINATOR_CAP) -> tuple[np.ndarray, int]:
    """Cover counts of the ``(2D)^d`` cells of the torus, with ``D`` the common denominator."""
    D = T.denominator
    if D > cap:
        raise TilingError(f"denominator {D} exceeds cap {cap}")
    n = 2 * D
    if n ** T.d > 1 << 24:
        raise TilingError("torus grid too large")
    grid = np.zeros((n,) * T.d, dtype=np.int32)
    for t in T.translations:
        idx = [(int(x * D) + np.arange(D)) % n for x in t]
        grid[np.ix_(*idx)] += 1
    return grid, D


@dataclass
class TilingDefects:
    uncovered: int
    overlapped: int

    def __bool__(self) -> bool:
        return self.uncovered == 0 and self.overlapped == 0


def tiling_defects(T: PeriodicTiling, *, cap: int = DEFAULT_DENOMINATOR_CAP) -> TilingDefects:
    grid, _ = coverage(T, cap=cap)
    return TilingDefects(int((grid == 0).sum()), int((grid > 1).sum()))


def validate_tiling(T: PeriodicTiling, *, cap: int = DEFAULT_DENOMINATOR_CAP) -> bool:
    """Every torus cell covered exactly once."""
    return bool(tiling_defects(T, cap=cap))


def tiling_twin_pairs(T: PeriodicTiling) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    """Pairs of cubes differing by 1 (mod 2) in one coordinate and equal elsewhere."""
    out = []
    for t, s in itertools.combinations(T.translations, 2):
        diff = [i for i in range(T.d) if t[i] != s[i]]
        if len(diff) == 1 and _mod2(t[diff[0]] - s[diff[0]]) == 1:
            out.append((t, s))
    return out


@dataclass
class RStats:
    r_minus: int
    r_plus: int
    denominator: int
    samples: int


def L_sizes(T: PeriodicTiling, x: Sequence) -> list[int]:
    """``|L(T, x, i)|`` for every axis ``i``.

    For each cube class the unique translate with ``t_i`` in ``(x_i-1, x_i+1]``
    meets the closed cube at ``x``; those with ``t_i <= x_i`` count.
    """
    x = [_frac(v) for v in x]
    sizes = []
    for i in range(T.d):
        vals = set()
        for t in T.translations:
            lo = x[i] - 1
            r = lo + _mod2(t[i] - lo)
            if r == lo:
                r += TWO
            if r <= x[i]:
                vals.add(r)
        sizes.append(len(vals))
    return sizes


def tiling_r_stats(T: PeriodicTiling, sample_denominator: int = 1, *,
                   cap: int = DEFAULT_DENOMINATOR_CAP) -> RStats:
    """``(r-, r+)`` from points on a grid refining every translation coordinate.

    The count ``|L(T, x, i)|`` only changes where some ``x_j`` crosses a
    translation coordinate (mod 1), so sampling both the grid points of
    denominator ``N = lcm(D, sample_denominator)`` and the midpoints between
    them sees every case exactly.
    """
    D = T.denominator
    if D > cap:
        raise TilingError(f"denominator {D} exceeds cap {cap}")
    N = math.lcm(D, sample_denominator)
    M = 2 * N
    d = T.d
    if (2 * M) ** d > 1 << 22:
        raise TilingError("sample grid too large")
    # work in units of 1/M
    ts = np.array([[int(x * M) for x in t] for t in T.translations], dtype=np.int64)
    pts = np.arange(2 * M)
    lo_best, hi_best = None, 0
    samples = 0
    for x in itertools.product(pts, repeat=d):
        x = np.array(x, dtype=np.int64)
        lo = x - M
        r = lo + np.mod(ts - lo, 2 * M)
        r = np.where(r == lo, r + 2 * M, r)
        m = 0
        for i in range(d):
            sel = r[:, i][r[:, i] <= x[i]]
            m = max(m, len(np.unique(sel)))
        samples += 1
        lo_best = m if lo_best is None else min(lo_best, m)
        hi_best = max(hi_best, m)
    return RStats(lo_best, hi_best, M, samples)


# -- files ------------------------------------------------------------------------

def format_tiling(T: PeriodicTiling) -> str:
    lines = [f"# d: {T.d}", f"# cubes: {len(T)}"]
    for t in T.translations:
        lines.append(" ".join(str(x) for x in t))
    return "\n".join(lines) + "\n"


def parse_tiling(text: str) -> PeriodicTiling:
    ts = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            ts.append(tuple(Fraction(p) for p in line.split()))
        except (ValueError, ZeroDivisionError) as e:
            raise TilingError(f"bad translation line {line!r}") from e
    return PeriodicTiling.make(ts)


def write_tiling(path: str | Path, T: PeriodicTiling) -> None:
    Path(path).write_text(format_tiling(T))


def read_tiling(path: str | Path) -> PeriodicTiling:
    return parse_tiling(Path(path).read_text())


def unit_grid(d: int) -> PeriodicTiling:
    return PeriodicTiling.make(itertools.product((0, 1), repeat=d))


def shifted_columns() -> PeriodicTiling:
    """Columns ``[i, i+1) x R`` shifted by ``i/2`` along the second axis."""
    return PeriodicTiling.make([(0, 0), (0, 1), (1, Fraction(1, 2)), (1, Fraction(3, 2))])


def code_twin_pairs_match(U: Code, imap: IntervalMap) -> bool:
    """Twin pairs of the realization appear exactly when the code has one."""
    T = realize_tiling(U, imap)
    return bool(tiling_twin_pairs(T)) == (find_twin_pair(U) is not None)
