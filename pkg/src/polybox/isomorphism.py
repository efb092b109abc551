"""Isomorphisms of polybox codes.

An isomorphism permutes coordinates and, at every coordinate, applies a
letter bijection that respects complements (a class permutation plus a
polarity flip per class).  Output coordinate ``i`` reads source coordinate
``sigma[i]`` and rewrites its letter with ``maps[i]``.

Most routines accept a ``fix`` word; they then work in the stabilizer of
that word.  Tuples of codes are handled part by part, so ``(K, M)`` is
mapped onto ``(K2, M2)`` with ``K -> K2`` and ``M -> M2``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .budget import BudgetExceeded
from .core import Code, DimensionError, PolyboxError, Word, g_weight, num_classes

DEFAULT_MAX_GROUP = 4_000_000


@lru_cache(maxsize=None)
def signed_maps(k: int) -> tuple[tuple[int, ...], ...]:
    """All ``2^k k!`` complement-respecting bijections of the ``2k`` letters."""
    out = []
    for perm in itertools.permutations(range(k)):
        for flips in itertools.product((0, 1), repeat=k):
            m = [0] * (2 * k)
            for c in range(k):
                for p in (0, 1):
                    m[2 * c + p] = 2 * perm[c] + (p ^ flips[c])
            out.append(tuple(m))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _maps_sending(k: int, src: int, dst: int) -> tuple[tuple[int, ...], ...]:
    return tuple(m for m in signed_maps(k) if m[src] == dst)


@dataclass(frozen=True)
class Isomorphism:
    sigma: tuple[int, ...]
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = len(self.sigma)
        if sorted(self.sigma) != list(range(d)) or len(self.maps) != d:
            raise PolyboxError("sigma must be a permutation with one letter map per coordinate")
        for m in self.maps:
            if sorted(m) != list(range(len(m))) or len(m) % 2:
                raise PolyboxError(f"letter map {m} is not a bijection")
            if any(m[x ^ 1] != m[x] ^ 1 for x in range(len(m))):
                raise PolyboxError(f"letter map {m} does not respect complements")

    @classmethod
    def identity(cls, d: int, k: int) -> "Isomorphism":
        return cls(tuple(range(d)), (tuple(range(2 * k)),) * d)

    @classmethod
    def from_signed(cls, sigma: Sequence[int], perms: Sequence[Sequence[int]],
                    flips: Sequence[Sequence[int]]) -> "Isomorphism":
        maps = []
        for perm, fl in zip(perms, flips):
            k = len(perm)
            maps.append(tuple(2 * perm[x >> 1] + ((x & 1) ^ fl[x >> 1]) for x in range(2 * k)))
        return cls(tuple(sigma), tuple(maps))

    @property
    def d(self) -> int:
        return len(self.sigma)

    @property
    def k(self) -> int:
        return len(self.maps[0]) // 2

    def __call__(self, w: Sequence[int]) -> Word:
        if len(w) != self.d:
            raise DimensionError("word and isomorphism differ in dimension")
        try:
            return Word(self.maps[i][w[s]] for i, s in enumerate(self.sigma))
        except IndexError:
            raise PolyboxError("letter class out of range for this isomorphism") from None

    def inverse(self) -> "Isomorphism":
        d = self.d
        sig = [0] * d
        maps: list[tuple[int, ...]] = [()] * d
        for i, s in enumerate(self.sigma):
            sig[s] = i
            inv = [0] * len(self.maps[i])
            for x, y in enumerate(self.maps[i]):
                inv[y] = x
            maps[s] = tuple(inv)
        return Isomorphism(tuple(sig), tuple(maps))

    def then(self, other: "Isomorphism") -> "Isomorphism":
        """``other`` after ``self``."""
        sig = tuple(self.sigma[s] for s in other.sigma)
        maps = tuple(tuple(other.maps[i][self.maps[s][x]] for x in range(len(self.maps[s])))
                     for i, s in enumerate(other.sigma))
        return Isomorphism(sig, maps)


def apply(f: Isomorphism, V):
    """Image of a code (or tuple of codes) under ``f``."""
    if isinstance(V, tuple) and V and not isinstance(V[0], int):
        return tuple(apply(f, part) for part in V)
    return Code((f(w) for w in V), check=False)


def stabilizer_order(d: int, k: int, fix: Sequence[int] | None = None) -> int:
    if fix is None:
        return math.factorial(d) * (2 ** k * math.factorial(k)) ** d
    return math.factorial(d) * (2 ** (k - 1) * math.factorial(k - 1)) ** d


def group_elements(d: int, k: int, fix: Sequence[int] | None = None) -> Iterator[Isomorphism]:
    """Every element of the full group, or of the stabilizer of ``fix``."""
    for sigma in itertools.permutations(range(d)):
        if fix is None:
            opts = [signed_maps(k)] * d
        else:
            opts = [_maps_sending(k, fix[s], fix[i]) for i, s in enumerate(sigma)]
        for maps in itertools.product(*opts):
            yield Isomorphism(sigma, maps)


# -- vectorized orbits ------------------------------------------------------

def _parts(V) -> tuple[list[Code], bool]:
    if isinstance(V, tuple) and V and not isinstance(V[0], int):
        return [Code(p, check=False) for p in V], True
    return [Code(V, check=False)], False


def _infer(parts: list[Code], fix, k) -> tuple[int, int]:
    ws = [w for p in parts for w in p] + ([tuple(fix)] if fix is not None else [])
    if not ws:
        raise DimensionError("cannot infer the dimension of empty codes")
    d = len(ws[0])
    kk = max(num_classes(ws), 1)
    if k is not None:
        if k < kk:
            raise PolyboxError(f"codes use {kk} classes, more than k={k}")
        kk = k
    return d, kk


def _orbit_blocks(parts: list[Code], d: int, k: int, fix, max_group: int) -> Iterator[list[np.ndarray]]:
    """Yield, per coordinate permutation, the sorted images of every part."""
    order = stabilizer_order(d, k, fix)
    if order > max_group:
        raise BudgetExceeded(f"group of order {order} exceeds the limit {max_group}")
    base = 2 * k
    weights = np.array([base ** (d - 1 - i) for i in range(d)], dtype=np.int64)
    arrs = [np.array([tuple(w) for w in p], dtype=np.int64).reshape(len(p), d) for p in parts]
    for sigma in itertools.permutations(range(d)):
        if fix is None:
            opts = [signed_maps(k)] * d
        else:
            opts = [_maps_sending(k, fix[s], fix[i]) for i, s in enumerate(sigma)]
        optarr = [np.array(o, dtype=np.int64) for o in opts]
        out = []
        for A in arrs:
            cols = A[:, list(sigma)]
            acc = np.zeros((1, A.shape[0]), dtype=np.int64)
            for i in range(d):
                vals = optarr[i][:, cols[:, i]] * weights[i]
                acc = (acc[:, None, :] + vals[None, :, :]).reshape(-1, A.shape[0])
            acc.sort(axis=1)
            out.append(acc)
        yield out


def _decode(codes: Iterable[int], d: int, k: int) -> Code:
    base = 2 * k
    ws = []
    for c in codes:
        w = []
        for _ in range(d):
            c, x = divmod(int(c), base)
            w.append(x)
        ws.append(Word(reversed(w)))
    return Code(ws, check=False)


def _rows(blocks: list[np.ndarray]) -> np.ndarray:
    return np.concatenate(blocks, axis=1) if len(blocks) > 1 else blocks[0]


def canonical_form(V, fix: Sequence[int] | None = None, k: int | None = None,
                   max_group: int = DEFAULT_MAX_GROUP):
    """Lexicographically least image of ``V`` over the group (or stabilizer of ``fix``)."""
    parts, multi = _parts(V)
    d, k = _infer(parts, fix, k)
    if fix is not None and any(x >> 1 >= k for x in fix):
        raise PolyboxError("fixed word uses a class outside the alphabet")
    best = None
    for blocks in _orbit_blocks(parts, d, k, fix, max_group):
        rows = _rows(blocks)
        r = rows[np.lexsort(rows.T[::-1])[0]]
        t = tuple(r.tolist())
        if best is None or t < best:
            best = t
    out, pos = [], 0
    for p in parts:
        out.append(_decode(best[pos:pos + len(p)], d, k))
        pos += len(p)
    return tuple(out) if multi else out[0]


def orbit_keys(V, fix: Sequence[int] | None = None, k: int | None = None,
               max_group: int = DEFAULT_MAX_GROUP) -> tuple[set[bytes], tuple[int, ...]]:
    """Distinct images as byte keys, plus the least image as a code-number tuple."""
    parts, _ = _parts(V)
    d, k = _infer(parts, fix, k)
    keys: set[bytes] = set()
    best = None
    for blocks in _orbit_blocks(parts, d, k, fix, max_group):
        rows = np.ascontiguousarray(_rows(blocks).astype(np.uint16 if (2 * k) ** d < 65536 else np.int64))
        u = np.unique(rows, axis=0)
        keys.update(r.tobytes() for r in u)
        t = tuple(u[0].tolist())
        if best is None or t < best:
            best = t
    return keys, best


def code_key(V, k: int) -> bytes:
    """Byte key compatible with :func:`orbit_keys` (single codes only)."""
    d = len(next(iter(V)))
    base = 2 * k
    codes = sorted(sum(x * base ** (d - 1 - i) for i, x in enumerate(w)) for w in V)
    return np.array(codes, dtype=np.uint16 if base ** d < 65536 else np.int64).tobytes()


def orbit_expand(V, fix: Sequence[int] | None = None, k: int | None = None,
                 max_group: int = DEFAULT_MAX_GROUP) -> list:
    """All distinct images of ``V``, sorted."""
    parts, multi = _parts(V)
    d, k = _infer(parts, fix, k)
    seen = set()
    for blocks in _orbit_blocks(parts, d, k, fix, max_group):
        for r in np.unique(_rows(blocks), axis=0):
            seen.add(tuple(r.tolist()))
    out = []
    for t in sorted(seen):
        decoded, pos = [], 0
        for p in parts:
            decoded.append(_decode(t[pos:pos + len(p)], d, k))
            pos += len(p)
        out.append(tuple(decoded) if multi else decoded[0])
    return out


def orbit_size(V, fix: Sequence[int] | None = None, k: int | None = None,
               max_group: int = DEFAULT_MAX_GROUP) -> int:
    return len(orbit_keys(V, fix, k, max_group)[0])


# -- invariants and backtracking ----------------------------------------------

def _column_signature(tagged: Sequence[tuple[int, Word]], i: int, k: int, ntags: int):
    cnt = Counter((t, w[i]) for t, w in tagged)
    per_class = []
    for c in range(k):
        a = tuple(cnt[(t, 2 * c)] for t in range(ntags))
        b = tuple(cnt[(t, 2 * c + 1)] for t in range(ntags))
        per_class.append(min((a, b), (b, a)))
    return tuple(sorted(per_class))


def _tagged(V, fix) -> list[tuple[int, Word]]:
    parts, _ = _parts(V)
    out = [(t, Word(w)) for t, p in enumerate(parts) for w in p]
    if fix is not None:
        out.append((len(parts), Word(fix)))
    return out


def fingerprint(V, fix: Sequence[int] | None = None, k: int | None = None) -> tuple:
    """Isomorphism invariant: column signatures plus tagged pairwise g-weights."""
    parts, _ = _parts(V)
    d, k = _infer(parts, fix, k)
    tagged = _tagged(V, fix)
    ntags = len(parts) + (fix is not None)
    cols = tuple(sorted(_column_signature(tagged, i, k, ntags) for i in range(d)))
    profiles = []
    for t, w in tagged:
        prof = tuple(sorted((t2, g_weight(w, w2)) for t2, w2 in tagged if w2 is not w))
        profiles.append((t, prof))
    return (d, tuple(len(p) for p in parts), cols, tuple(sorted(profiles)))


def isomorphic(V, W_, fix: Sequence[int] | None = None, k: int | None = None,
               fix_to: Sequence[int] | None = None) -> Isomorphism | None:
    """A witness ``f`` with ``apply(f, V) == W_`` (and ``f(fix) == fix_to``), or None."""
    pv, _ = _parts(V)
    pw, _ = _parts(W_)
    if fix_to is None:
        fix_to = fix
    if (fix is None) != (fix_to is None):
        raise PolyboxError("fix and fix_to must be given together")
    if [len(p) for p in pv] != [len(p) for p in pw]:
        return None
    d, k1 = _infer(pv, fix, k)
    d2, k2 = _infer(pw, fix_to, k)
    if d != d2:
        return None
    k = max(k1, k2)
    tv = _tagged(V, fix)
    tw = _tagged(W_, fix_to)
    if not tv:
        return Isomorphism.identity(d, k)
    ntags = len(pv) + (fix is not None)
    sv = [_column_signature(tv, i, k, ntags) for i in range(d)]
    sw = [_column_signature(tw, i, k, ntags) for i in range(d)]
    if sorted(sv) != sorted(sw):
        return None
    rarity = Counter(sw)
    order = sorted(range(d), key=lambda i: (rarity[sw[i]], i))
    maps = signed_maps(k)
    sigma = [None] * d
    chosen: list[tuple[int, ...] | None] = [None] * d
    used = [False] * d
    tags = [t for t, _ in tv]
    wv = [w for _, w in tv]
    target_prefix = []
    for depth in range(d + 1):
        cols = order[:depth]
        target_prefix.append(Counter((t, tuple(w[i] for i in cols)) for t, w in tw))
    img = [[] for _ in tv]

    def rec(depth: int) -> bool:
        if depth == d:
            return True
        i = order[depth]
        for s in range(d):
            if used[s] or sv[s] != sw[i]:
                continue
            seen_effect = set()
            for m in maps:
                eff = tuple(m[w[s]] for w in wv)
                if eff in seen_effect:
                    continue
                seen_effect.add(eff)
                for row, x in zip(img, eff):
                    row.append(x)
                if Counter(zip(tags, map(tuple, img))) == target_prefix[depth + 1]:
                    used[s] = True
                    sigma[i] = s
                    chosen[i] = m
                    if rec(depth + 1):
                        return True
                    used[s] = False
                for row in img:
                    row.pop()
        return False

    if not rec(0):
        return None
    f = Isomorphism(tuple(sigma), tuple(chosen))
    return f


@dataclass
class IsoClass:
    representative: object
    members: int
    fingerprint: tuple


def dedup(codes: Iterable, fix: Sequence[int] | None = None, k: int | None = None) -> list[IsoClass]:
    """Group codes into isomorphism classes (fingerprint buckets, then backtracking)."""
    buckets: dict[tuple, list[IsoClass]] = {}
    order: list[IsoClass] = []
    for V in codes:
        fp = fingerprint(V, fix, k)
        bucket = buckets.setdefault(fp, [])
        for cls in bucket:
            if isomorphic(cls.representative, V, fix, k) is not None:
                cls.members += 1
                break
        else:
            cls = IsoClass(V, 1, fp)
            bucket.append(cls)
            order.append(cls)
    return order
