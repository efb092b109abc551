"""Cover enumeration: CoverWord, CoverCode, distribution filters, q-pairs.

Covers are computed in the local grid of the target (see
:mod:`polybox.search`).  :func:`cover_word` follows the seed-and-extend
procedure: frequency profiles fix how many words of each weight a cover
has, a seed pair with an odd number of complementary positions starts
every cover, and layers of words are added weight by weight.  The result
is closed under the stabilizer of the target lazily, since a census only
needs one member per orbit.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .budget import Budget, ensure
from .core import (Alphabet, Code, PolyboxError, Word, code_covers, covers, distribution,
                   find_twin_pair, format_word, g_weight, is_twin_pair, num_classes, twin_pair_free)
from .grid import q_equivalent, realize, realize_word
from .isomorphism import (Isomorphism, _maps_sending, apply, code_key, dedup, orbit_keys,
                          stabilizer_order)
from .search import LocalGrid, UnionGrid

B = 2  # the letter b, i.e. class 1 polarity 0


class FrequencyProfile(NamedTuple):
    x: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.x)

    def weights(self) -> list[int]:
        """Multiset of word weights, ascending."""
        return [i for i, n in enumerate(self.x) for _ in range(n)]


def frequency_profiles(d: int, k: int) -> list[FrequencyProfile]:
    """All ``x`` with ``sum x_i 2^i = 2^d`` and ``sum x_i = k``, lexicographically."""
    if d < 1 or k < 1:
        raise PolyboxError("need d >= 1 and k >= 1")
    out: list[tuple[int, ...]] = []

    def rec(i: int, prefix: list[int], vol: int, cnt: int) -> None:
        if i == d:
            if vol == 0 and cnt == 0:
                out.append(tuple(prefix))
            return
        for n in range(min(cnt, vol >> i) + 1):
            prefix.append(n)
            rec(i + 1, prefix, vol - n * (1 << i), cnt - n)
            prefix.pop()

    rec(0, [], 1 << d, k)
    return [FrequencyProfile(x) for x in sorted(out)]


# -- families -------------------------------------------------------------------

@dataclass
class CoverFamily:
    """Covers of a target word or code together with the constraints used."""

    target: object
    members: list[Code]
    constraints: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, C) -> bool:
        return Code(C, check=False) in set(self.members)

    def size_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(len(C) for C in self.members).items()))

    def verify(self) -> None:
        """Re-check every member with the closed formula and the grid model."""
        tw = self.constraints.get("twin_pair_free", True)
        targets = [self.target] if isinstance(self.target, tuple) else list(self.target)
        for C in self.members:
            if not code_covers(Code(targets, check=False), C):
                raise PolyboxError(f"{C} does not cover the target")
            k = num_classes(list(C) + targets)
            if not (realize(targets, k) <= realize(C, k)):
                raise PolyboxError(f"{C} fails the grid containment check")
            if tw and not twin_pair_free(C):
                raise PolyboxError(f"{C} has a twin pair")

    def format(self, alphabet: Alphabet | None = None) -> str:
        fmt = (lambda w: alphabet.format(w)) if alphabet else format_word
        if isinstance(self.target, tuple):
            tgt = fmt(self.target)
        else:
            tgt = Code(self.target, check=False).format(alphabet)
        lines = [f"# target: {tgt}"]
        for key in sorted(self.constraints):
            lines.append(f"# {key}: {self.constraints[key]}")
        lines.append(f"# count: {len(self.members)}")
        for n, c in self.size_counts().items():
            lines.append(f"# size {n}: {c}")
        lines.extend(C.format(alphabet) for C in sorted(self.members))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path, alphabet: Alphabet | None = None) -> None:
        Path(path).write_text(self.format(alphabet))

    @classmethod
    def read(cls, path: str | Path, alphabet: Alphabet | None = None) -> "CoverFamily":
        target = None
        members = []
        constraints = {}
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                key, val = key.strip(), val.strip()
                if key == "target":
                    target = (Code.parse(val, alphabet) if val.startswith("{")
                              else (alphabet or Alphabet.standard(2)).parse_word(val))
                elif key not in ("count",) and not key.startswith("size "):
                    constraints[key] = val
                continue
            members.append(Code.parse(line, alphabet))
        if target is None:
            raise PolyboxError(f"{path}: missing target header")
        return cls(target, members, constraints)


# -- CoverWord --------------------------------------------------------------------

def _to_b(u: Sequence[int], k: int) -> Isomorphism:
    """An isomorphism sending ``u`` to ``b...b``."""
    return Isomorphism(tuple(range(len(u))), tuple(_maps_sending(k, x, B)[0] for x in u))


def _alphabet_k(alphabet, u: Sequence[int]) -> int:
    if alphabet is None:
        return max(2, num_classes([u]))
    if isinstance(alphabet, Alphabet):
        k = alphabet.k
    else:
        k = int(alphabet)
    if k < 2:
        raise PolyboxError("cover enumeration needs at least two complement classes")
    if num_classes([u]) > k:
        raise PolyboxError("target uses a class outside the alphabet")
    return k


def seed_pairs(d: int, i: int, twin_pair_free: bool = True) -> list[tuple[Word, Word]]:
    """Seed codes ``V_{n,i}``: n complemented a-positions, then i letters b."""
    out = []
    for n in range(1 if not twin_pair_free else 3, d - i + 1, 2):
        rest = (0,) * (d - n - i)
        v = Word((0,) * n + (B,) * i + rest)
        p = Word((1,) * n + (B,) * i + rest)
        out.append((v, p))
    return out


def _cover_word_bar(grid: LocalGrid, size: int, twin_free: bool, budget: Budget,
                    order: str = "cell") -> Iterator[tuple[int, ...]]:
    """Covers of ``b...b`` produced before the orbit closure, as index tuples.

    Each (profile, seed) pair asks for the covers containing the seed whose
    remaining words have the profile's weights.  ``order="layered"`` adds
    words weight by weight in ascending order; ``order="cell"`` always
    covers the first uncovered cell next, drawing from the same weight
    budget.  Both produce the same set; the second prunes far better.
    """
    if order not in ("cell", "layered"):
        raise PolyboxError(f"unknown search order {order!r}")
    d = grid.d
    weight = grid.weight
    groups: dict[int, list[int]] = {}
    for j, w in enumerate(grid.words):
        if weight[j] < d:  # the target itself never lies in a cover of size >= 2
            groups.setdefault(weight[j], []).append(j)
    pos = {j: t for grp in groups.values() for t, j in enumerate(grp)}
    masks, twins, cells, full = grid.masks, grid.twins, grid.cell_cands, grid.full
    found: set[tuple[int, ...]] = set()
    for prof in frequency_profiles(d, size):
        ws = prof.weights()
        i1 = ws[0]
        if prof.x[i1] < 2:
            continue
        for v, p in seed_pairs(d, i1, twin_free):
            jv, jp = grid.index.get(v), grid.index.get(p)
            if jv is None or jp is None or masks[jv] & masks[jp]:
                continue
            layers = ws[2:]
            rem = [0] * (d + 1)
            for w in layers:
                rem[w] += 1
            blocked = [0] * len(grid.words)
            blocked[jv] += 1
            blocked[jp] += 1
            for j in range(len(grid.words)):
                if weight[j] == d:
                    blocked[j] += 1
            placed = [jv, jp]
            if twin_free:
                for t in twins[jv] + twins[jp]:
                    blocked[t] += 1

            def place(j: int) -> None:
                placed.append(j)
                rem[weight[j]] -= 1
                if twin_free:
                    for tj in twins[j]:
                        blocked[tj] += 1

            def unplace(j: int) -> None:
                if twin_free:
                    for tj in twins[j]:
                        blocked[tj] -= 1
                rem[weight[j]] += 1
                placed.pop()

            def by_cell(covered: int) -> Iterator[tuple[int, ...]]:
                budget.tick()
                unc = full ^ covered
                if not unc:
                    yield tuple(sorted(placed))
                    return
                cell = (unc & -unc).bit_length() - 1
                for j in cells[cell]:
                    if blocked[j] or not rem[weight[j]] or masks[j] & covered:
                        continue
                    place(j)
                    yield from by_cell(covered | masks[j])
                    unplace(j)

            def feasible(covered: int, w_cur: int, last: int) -> bool:
                unc = full ^ covered
                if not unc:
                    return True
                cell = (unc & -unc).bit_length() - 1
                for j in cells[cell]:
                    wj = weight[j]
                    if not rem[wj] or blocked[j] or masks[j] & covered:
                        continue
                    if wj == w_cur and pos[j] <= last:
                        continue
                    return True
                return False

            def layered(l: int, covered: int, last: int) -> Iterator[tuple[int, ...]]:
                budget.tick()
                if l == len(layers):
                    if covered == full:
                        yield tuple(sorted(placed))
                    return
                w = layers[l]
                start = last + 1 if l > 0 and layers[l - 1] == w else 0
                grp = groups.get(w, ())
                for t in range(start, len(grp)):
                    j = grp[t]
                    if blocked[j] or masks[j] & covered:
                        continue
                    place(j)
                    nc = covered | masks[j]
                    if feasible(nc, w, t):
                        yield from layered(l + 1, nc, t)
                    unplace(j)

            start = masks[jv] | masks[jp]
            gen = by_cell(start) if order == "cell" else layered(0, start, -1)
            for key in gen:
                if key not in found:
                    found.add(key)
                    yield key


def cover_word(u: Sequence[int], size: int, alphabet=None, *, twin_pair_free: bool = True,
               all_intersecting: bool = True, expand: bool = True,
               budget: Budget | None = None) -> CoverFamily:
    """All ``size``-word covers of ``u`` whose words meet ``u``'s box.

    With ``expand=False`` only the covers reached from the seeds are
    returned (every stabilizer orbit is represented at least once).
    """
    if size < 2:
        raise PolyboxError("covers with fewer than two words are not enumerated")
    if not all_intersecting:
        raise PolyboxError("inconsistent options: covers are enumerated over words meeting the target")
    u = Word(u)
    k = _alphabet_k(alphabet, u)
    budget = ensure(budget)
    f = _to_b(u, k)
    finv = f.inverse()
    grid = LocalGrid((B,) * len(u), k)
    bar = [grid.code_of(key) for key in _cover_word_bar(grid, size, twin_pair_free, budget)]
    if expand:
        seen: set[bytes] = set()
        for C in bar:
            if code_key(C, k) in seen:
                continue
            keys, _ = orbit_keys(C, fix=(B,) * len(u), k=k)
            seen |= keys
        members = [_decode_key(key, len(u), k) for key in seen]
    else:
        members = bar
    if u != (B,) * len(u):
        members = [apply(finv, C) for C in members]
    constraints = {"size": size, "classes": k, "twin_pair_free": twin_pair_free,
                   "expanded": expand}
    return CoverFamily(u, sorted(members), constraints)


def _decode_key(key: bytes, d: int, k: int) -> Code:
    import numpy as np
    dtype = np.uint16 if (2 * k) ** d < 65536 else np.int64
    from .isomorphism import _decode
    return _decode(np.frombuffer(key, dtype=dtype).tolist(), d, k)


# -- censuses ---------------------------------------------------------------------

@dataclass
class CensusClass:
    representative: Code
    orbit: int


@dataclass
class Census:
    d: int
    k: int
    sizes: tuple[int, int]
    total: int
    classes: list[CensusClass]
    per_size: dict[int, tuple[int, int, int]]  # size -> (seeded, total, classes)

    @property
    def n_classes(self) -> int:
        return len(self.classes)


def census(d: int, sizes: tuple[int, int], k: int = 2, *, budget: Budget | None = None,
           progress: Callable[[str], None] | None = None) -> Census:
    """Count twin pair free covers of ``b...b`` with sizes in ``sizes`` (inclusive).

    Classes are orbits of the stabilizer of ``b...b``; the total is the sum
    of orbit sizes, obtained by expanding each newly met orbit once.
    """
    budget = ensure(budget)
    lo, hi = sizes
    u = (B,) * d
    grid = LocalGrid(u, k)
    classes: list[CensusClass] = []
    per_size = {}
    total = 0
    for n in range(lo, hi + 1):
        seen: set[bytes] = set()
        seeded = 0
        n_total = 0
        n_classes = 0
        for key in _cover_word_bar(grid, n, True, budget):
            seeded += 1
            C = grid.code_of(key)
            if code_key(C, k) in seen:
                continue
            keys, best = orbit_keys(C, fix=u, k=k)
            seen |= keys
            n_total += len(keys)
            n_classes += 1
            from .isomorphism import _decode
            classes.append(CensusClass(_decode(best, d, k), len(keys)))
        per_size[n] = (seeded, n_total, n_classes)
        total += n_total
        if progress:
            progress(f"size {n}: seeded {seeded}, covers {n_total}, classes {n_classes}")
    classes.sort(key=lambda c: (len(c.representative), c.representative.words))
    return Census(d, k, (lo, hi), total, classes, per_size)


def count_covers_direct(u: Sequence[int], sizes: tuple[int, int], k: int = 2,
                        budget: Budget | None = None) -> dict[int, int]:
    """Independent count by exact cover over the local grid (no seeds, no symmetry)."""
    lo, hi = sizes
    grid = LocalGrid(u, k)
    c = Counter(len(C) for C in grid.covers(max_size=hi, min_size=lo, budget=budget))
    return {n: c.get(n, 0) for n in range(lo, hi + 1)}


# -- CoverCode --------------------------------------------------------------------

def cover_code(U: Iterable[Sequence[int]], required: Mapping[Word, Iterable[Sequence[int]]] | None,
               m: int, families: Mapping[Word, Iterable[Code]], *,
               disjoint_from: Iterable[Sequence[int]] = (),
               accept: Callable[[Code], bool] | None = None,
               twin_pair_free: bool = True, budget: Budget | None = None) -> CoverFamily:
    """Join per-word cover families into covers of the code ``U``.

    ``families[u]`` lists covers of ``u``; those missing ``required[u]`` or
    meeting ``disjoint_from`` are dropped first.  Families are merged one
    word at a time, keeping unions that stay twin pair free codes with at
    most ``m`` words.  ``accept`` filters the final covers.
    """
    budget = ensure(budget)
    U = [Word(u) for u in U]
    if not U:
        raise PolyboxError("empty code to cover")
    required = required or {}
    avoid = {Word(w) for w in disjoint_from}
    fams = []
    for u in U:
        if u not in families:
            raise PolyboxError(f"no family given for {u}")
        P = {Word(w) for w in required.get(u, ())}
        if len(P) > m:
            raise PolyboxError("a required code is larger than the size bound")
        fam = [C for C in families[u] if P <= C.frozen and not (avoid & C.frozen) and len(C) <= m]
        fams.append(fam)
    constraints = {"max_size": m, "twin_pair_free": twin_pair_free,
                   "disjoint": bool(avoid)}
    target = Code(U, check=False)
    if any(not f for f in fams):
        empty = [format_word(u) for u, f in zip(U, fams) if not f]
        constraints["empty_family"] = ",".join(empty)
        return CoverFamily(target, [], constraints)
    k = num_classes([w for f in fams for C in f for w in C] + U)
    order = sorted(range(len(U)), key=lambda i: len(fams[i]))
    vol_cache: dict[Word, tuple[int, int]] = {}

    def box(w: Word) -> tuple[int, int]:
        r = vol_cache.get(w)
        if r is None:
            b = realize_word(w, k).bits
            r = vol_cache[w] = (b, b.bit_count())
        return r

    def sig(C: frozenset) -> tuple[int, int]:
        bits = 0
        vol = 0
        for w in C:
            b, v = box(w)
            bits |= b
            vol += v
        return bits, vol

    cur = {C.frozen: sig(C.frozen) for C in fams[order[0]]}
    for idx in order[1:]:
        budget.tick()
        nxt = {}
        fam = [(C.frozen, sig(C.frozen)) for C in fams[idx]]
        for C1, (b1, v1) in cur.items():
            for C2, (b2, v2) in fam:
                budget.tick()
                common = C1 & C2
                if len(C1) + len(C2) - len(common) > m:
                    continue
                cb, cv = sig(common) if common else (0, 0)
                if (b1 | b2).bit_count() != v1 + v2 - cv:
                    continue
                un = C1 | C2
                if un in nxt:
                    continue
                if twin_pair_free and any(is_twin_pair(x, y) for x in C1 - common for y in C2 - common):
                    continue
                nxt[un] = (b1 | b2, v1 + v2 - cv)
        cur = nxt
        if not cur:
            break
    members = [Code(C, check=False) for C in cur]
    if accept is not None:
        members = [C for C in members if accept(C)]
    return CoverFamily(target, sorted(members), constraints)


def local_families(U: Iterable[Sequence[int]], k: int, max_size: int, *,
                   required: Mapping[Word, Iterable[Sequence[int]]] | None = None,
                   exclude: Iterable[Sequence[int]] = (),
                   caps: Sequence[tuple[int, int, int]] = (),
                   budget: Budget | None = None) -> dict[Word, list[Code]]:
    """Twin pair free covers of every word of ``U`` (words meeting the word's box)."""
    budget = ensure(budget)
    required = required or {}
    out = {}
    excl = [Word(w) for w in exclude]
    for u in U:
        u = Word(u)
        grid = LocalGrid(u, k)
        P = list(required.get(u, ()))
        fam = [grid.code_of(key) for key in grid.covers(max_size=max_size, required=P,
                                                         exclude=excl, caps=caps, budget=budget)]
        out[u] = fam
    return out


def covers_of_code(U: Iterable[Sequence[int]], k: int, m: int, *, local_max: int,
                   required: Iterable[Sequence[int]] = (), disjoint: bool = True,
                   caps: Sequence[tuple[int, int, int]] = (),
                   accept: Callable[[Code], bool] | None = None,
                   budget: Budget | None = None) -> list[Code]:
    """Direct search for twin pair free covers of the code ``U``.

    Every word of a cover meets some word of ``U``; at most ``local_max``
    words meet any single word of ``U``; ``required`` words must be used.
    Gives the same covers as :func:`cover_code` over the per-word families.
    """
    U = [Word(u) for u in U]
    grid = UnionGrid(U, k)
    out = []
    wrap = None if accept is None else (lambda placed: accept(grid.code_of(placed)))
    for key in grid.covers(max_size=m, required=required, exclude=U if disjoint else (),
                           local_max=local_max, caps=caps, accept=wrap, budget=budget):
        out.append(grid.code_of(key))
    return sorted(out)


# -- distribution filters ---------------------------------------------------------------

def distribution_admissible(Q: Iterable[Sequence[int]], k: int) -> bool:
    """Whether every coordinate's distribution obeys the size-dependent pair rules.

    ``k`` is the number of classes of the alphabet (2 or 3).  A code over
    two classes is also a code over three (with empty ``c`` slices), so the
    three-class rules hold for both: every pair is at most 11, and at 15 or
    16 words a pair with ``n + m == 1`` (15) or ``n == m == 1`` (16) forces
    every other pair of that coordinate to be at most 7.  The two-class
    rules at 15 and 16 words are added when ``k == 2``.
    """
    Q = list(Q)
    if not Q:
        return True
    if k not in (2, 3):
        raise PolyboxError("the distribution rules are stated for 2 or 3 classes")
    n_words = len(Q)
    d = len(Q[0])
    for i in range(d):
        pairs = distribution(Q, i, k)
        if any(n > 11 or m > 11 for n, m in pairs):
            return False
        if n_words in (15, 16):
            small = (lambda n, m: n + m == 1) if n_words == 15 else (lambda n, m: n == m == 1)
            for j, (n, m) in enumerate(pairs):
                if small(n, m) and any(p > 7 or q > 7 for t, (p, q) in enumerate(pairs) if t != j):
                    return False
        if k == 2:
            for n, m in pairs:
                if n_words == 15:
                    if n + m == 0:
                        return False
                    if (2 <= m <= 4 and n < 1) or (2 <= n <= 4 and m < 1):
                        return False
                elif n_words == 16:
                    if n * m == 0:
                        return False
                    if (2 <= m <= 4 and n < 2) or (2 <= n <= 4 and m < 2):
                        return False
    return True


# -- q-equivalent pairs -----------------------------------------------------------------

@dataclass(frozen=True)
class QPair:
    K: Code
    M: Code


def all_covers(u: Sequence[int], k: int, max_size: int, *, twin_pair_free: bool = False,
               letters: Iterable[int] | None = None, budget: Budget | None = None) -> list[Code]:
    """Every cover of ``u`` by words meeting its box, the word itself included."""
    grid = LocalGrid(u, k, letters)
    return [grid.code_of(key) for key in grid.covers(max_size=max_size, allow_target=True,
                                                     twin_free=twin_pair_free, budget=budget)]


def enumerate_q_equivalent_pairs(q: Sequence[int], k: int = 2, *, letters: Iterable[int] | None = None,
                                 max_size: int | None = None,
                                 budget: Budget | None = None) -> list[QPair]:
    """Disjoint twin pair free ``q``-equivalent pairs, one per class up to swapping.

    Pairs come from differences of two covers of ``q``; classes are taken
    under isomorphisms fixing ``q``, and ``(K, M)`` is identified with
    ``(M, K)``.
    """
    budget = ensure(budget)
    q = Word(q)
    d = len(q)
    if max_size is None:
        max_size = 1 << d
    fam = all_covers(q, k, max_size, letters=letters, budget=budget)
    pairs = set()
    for C1, C2 in itertools.combinations(fam, 2):
        budget.tick()
        K = C1.frozen - C2.frozen
        M = C2.frozen - C1.frozen
        if not K or not M:
            continue
        Kc, Mc = Code(K, check=False), Code(M, check=False)
        if find_twin_pair(Kc) or find_twin_pair(Mc):
            continue
        pairs.add((Kc, Mc) if Kc.words <= Mc.words else (Mc, Kc))
    reps = []
    for cls in dedup(sorted(pairs), fix=q, k=k):
        K, M = cls.representative
        reps.append((K, M))
    # fold the swap (K, M) ~ (M, K)
    out: list[QPair] = []
    for K, M in reps:
        if any(_same_pair((K, M), (p.K, p.M), q, k) for p in out):
            continue
        out.append(QPair(K, M))
    return out


def _same_pair(a, b, q, k) -> bool:
    from .isomorphism import isomorphic
    return (isomorphic(a, b, fix=q, k=k) is not None
            or isomorphic((a[1], a[0]), b, fix=q, k=k) is not None)


def check_q_pair(K: Code, M: Code, q: Sequence[int]) -> bool:
    """Disjoint, twin pair free and ``q``-equivalent."""
    return (K.isdisjoint(M) and twin_pair_free(K) and twin_pair_free(M)
            and q_equivalent(K, M, q))
