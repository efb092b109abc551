"""Exact-cover engines behind the cover enumerations.

:class:`LocalGrid` models the box of a single target word ``u``.  Only words
whose boxes meet ``u``'s box are candidates (no letter ``u_i'``), and inside
``u``'s box two such words are dichotomous exactly when their traces are
disjoint, so a twin pair free cover of ``u`` is a partition of the local
grid into candidate traces with no twin pair.

:class:`UnionGrid` does the same for a whole code ``U`` on the full grid;
there disjointness has to be checked on whole boxes since candidates may
stick out of ``U``'s union.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Sequence

from .budget import Budget, ensure
from .core import Code, PolyboxError, Word
from .grid import MAX_GRID_BITS, GridTooLarge, word_bits


def _local_atom_mask(y: int, x: int, k: int) -> int:
    """Atoms of letter ``y`` inside the half-axis of letter ``x`` (``y != x'``)."""
    R = 1 << (k - 1)
    if y == x:
        return (1 << R) - 1
    cu = x >> 1
    c, p = y >> 1, y & 1
    b = c if c < cu else c - 1
    m = 0
    for a in range(R):
        if (a >> b) & 1 == p:
            m |= 1 << a
    return m


class LocalGrid:
    """Candidate boxes inside the box of ``u`` over a ``k``-class alphabet.

    ``letters`` optionally restricts the letters words may use.
    """

    def __init__(self, u: Sequence[int], k: int, letters: Iterable[int] | None = None,
                 cap: int = MAX_GRID_BITS):
        self.u = Word(u)
        self.k = k
        d = self.d = len(u)
        if (k - 1) * d > cap:
            raise GridTooLarge(f"local grid of {(k - 1) * d} bits exceeds cap {cap}")
        allowed_set = None if letters is None else set(letters)
        R = self.R = 1 << (k - 1)
        self.n_cells = R ** d
        self.full = (1 << self.n_cells) - 1
        per = []
        for x in self.u:
            if x >= 2 * k:
                raise PolyboxError("target letter outside the alphabet")
            opts = [y for y in range(2 * k) if y != x ^ 1
                    and (allowed_set is None or y in allowed_set)]
            per.append(opts)
        self.per_coord = per
        words: list[Word] = []
        masks: list[int] = []
        for w in itertools.product(*per):
            words.append(Word(w))
            masks.append(self._mask(w))
        self.words = words
        self.masks = masks
        self.index = {w: j for j, w in enumerate(words)}
        # number of coordinates where the candidate agrees with u
        self.weight = [sum(1 for a, b in zip(w, self.u) if a == b) for w in words]
        self.twins = []
        for w in words:
            tw = []
            for i, x in enumerate(w):
                j = self.index.get(w[:i] + (x ^ 1,) + w[i + 1:])
                if j is not None:
                    tw.append(j)
            self.twins.append(tuple(tw))
        self._cell_cands = None

    def _mask(self, w: Sequence[int]) -> int:
        k, R = self.k, self.R
        u = self.u
        m = _local_atom_mask(w[-1], u[-1], k)
        block = R
        for y, x in zip(reversed(w[:-1]), reversed(u[:-1])):
            am = _local_atom_mask(y, x, k)
            nm = 0
            a = 0
            while am:
                if am & 1:
                    nm |= m << (a * block)
                am >>= 1
                a += 1
            m = nm
            block *= R
        return m

    @property
    def cell_cands(self) -> list[list[int]]:
        if self._cell_cands is None:
            cc = [[] for _ in range(self.n_cells)]
            for j, m in enumerate(self.masks):
                while m:
                    low = m & -m
                    cc[low.bit_length() - 1].append(j)
                    m ^= low
            self._cell_cands = cc
        return self._cell_cands

    def idx(self, w: Sequence[int]) -> int:
        try:
            return self.index[tuple(w)]
        except KeyError:
            raise PolyboxError(f"{Word(w)} does not meet the box of {self.u}") from None

    def covers(self, *, max_size: int, min_size: int = 1, required: Iterable[Sequence[int]] = (),
               exclude: Iterable[Sequence[int]] = (), allow_target: bool = False,
               twin_free: bool = True, caps: Sequence[tuple[int, int, int]] = (),
               accept: Callable[[list[int]], bool] | None = None,
               budget: Budget | None = None) -> Iterator[tuple[int, ...]]:
        """Yield every cover of ``u`` as a sorted tuple of candidate indices.

        ``caps`` holds ``(coord, letter, n)`` meaning at most ``n`` words of
        the cover carry ``letter`` at ``coord``.
        """
        budget = ensure(budget)
        n = len(self.words)
        blocked = [0] * n
        for w in exclude:
            j = self.index.get(tuple(w))
            if j is not None:
                blocked[j] += 1
        if not allow_target and self.u in self.index:
            blocked[self.index[self.u]] += 1
        cap_of = [[] for _ in range(n)]
        cap_left = []
        for ci, (coord, let, lim) in enumerate(caps):
            cap_left.append(lim)
            for j, w in enumerate(self.words):
                if w[coord] == let:
                    cap_of[j].append(ci)
        masks, twins, cells = self.masks, self.twins, self.cell_cands
        full = self.full
        placed: list[int] = []
        covered = 0
        for w in required:
            j = self.idx(w)
            m = masks[j]
            if m & covered or blocked[j] or j in placed:
                return
            for ci in cap_of[j]:
                cap_left[ci] -= 1
                if cap_left[ci] < 0:
                    return
            covered |= m
            placed.append(j)
            if twin_free:
                for t in twins[j]:
                    blocked[t] += 1
        if twin_free:
            for a, b in itertools.combinations(placed, 2):
                if b in twins[a]:
                    return
        max_vol = max(m.bit_count() for j, m in enumerate(masks) if not blocked[j]) if n else 1

        def rec(covered: int) -> Iterator[tuple[int, ...]]:
            budget.tick()
            unc = full ^ covered
            if not unc:
                if len(placed) >= min_size and (accept is None or accept(placed)):
                    yield tuple(sorted(placed))
                return
            room = max_size - len(placed)
            if room <= 0 or room * max_vol < unc.bit_count():
                return
            cell = (unc & -unc).bit_length() - 1
            for j in cells[cell]:
                if blocked[j]:
                    continue
                m = masks[j]
                if m & covered:
                    continue
                cj = cap_of[j]
                if cj and any(cap_left[ci] == 0 for ci in cj):
                    continue
                for ci in cj:
                    cap_left[ci] -= 1
                placed.append(j)
                if twin_free:
                    for t in twins[j]:
                        blocked[t] += 1
                yield from rec(covered | m)
                if twin_free:
                    for t in twins[j]:
                        blocked[t] -= 1
                placed.pop()
                for ci in cj:
                    cap_left[ci] += 1

        yield from rec(covered)

    def code_of(self, idxs: Iterable[int]) -> Code:
        return Code((self.words[j] for j in idxs), check=False)


class UnionGrid:
    """Candidate boxes for covering the union of a code ``U`` on the full grid."""

    def __init__(self, targets: Iterable[Sequence[int]], k: int,
                 letters: Iterable[int] | None = None, cap: int = MAX_GRID_BITS):
        self.targets = [Word(t) for t in targets]
        if not self.targets:
            raise PolyboxError("nothing to cover")
        self.k = k
        d = self.d = len(self.targets[0])
        if k * d > cap:
            raise GridTooLarge(f"grid of {k * d} bits exceeds cap {cap}")
        allowed = range(2 * k) if letters is None else sorted(set(letters))
        tmask = [word_bits(tuple(t), k) for t in self.targets]
        self.target_masks = tmask
        self.goal = 0
        for m in tmask:
            self.goal |= m
        words, masks, hits = [], [], []
        for w in itertools.product(allowed, repeat=d):
            hit = tuple(i for i, t in enumerate(self.targets)
                        if all(a ^ b != 1 for a, b in zip(w, t)))
            if not hit:
                continue
            words.append(Word(w))
            masks.append(word_bits(w, k))
            hits.append(hit)
        self.words, self.masks, self.hits = words, masks, hits
        self.index = {w: j for j, w in enumerate(words)}
        self.twins = []
        for w in words:
            tw = []
            for i, x in enumerate(w):
                j = self.index.get(w[:i] + (x ^ 1,) + w[i + 1:])
                if j is not None:
                    tw.append(j)
            self.twins.append(tuple(tw))
        cc: dict[int, list[int]] = {}
        for j, m in enumerate(masks):
            m &= self.goal
            while m:
                low = m & -m
                cc.setdefault(low.bit_length() - 1, []).append(j)
                m ^= low
        self.cell_cands = cc

    def covers(self, *, max_size: int, required: Iterable[Sequence[int]] = (),
               exclude: Iterable[Sequence[int]] = (), local_max: int | None = None,
               twin_free: bool = True, caps: Sequence[tuple[int, int, int]] = (),
               accept: Callable[[list[int]], bool] | None = None,
               budget: Budget | None = None) -> Iterator[tuple[int, ...]]:
        """Yield every twin pair free code covering all targets.

        Every word of a yielded code meets some target box.  ``local_max``
        bounds how many chosen words may meet any single target.
        """
        budget = ensure(budget)
        n = len(self.words)
        blocked = [0] * n
        for w in exclude:
            j = self.index.get(tuple(w))
            if j is not None:
                blocked[j] += 1
        nt = len(self.targets)
        local = [0] * nt
        lmax = local_max if local_max is not None else max_size
        cap_of = [[] for _ in range(n)]
        cap_left = []
        for ci, (coord, let, lim) in enumerate(caps):
            cap_left.append(lim)
            for j, w in enumerate(self.words):
                if w[coord] == let:
                    cap_of[j].append(ci)
        masks, twins, hits, cells, goal = self.masks, self.twins, self.hits, self.cell_cands, self.goal
        placed: list[int] = []
        occupied = 0

        def place(j: int) -> bool:
            nonlocal occupied
            if blocked[j] or masks[j] & occupied:
                return False
            if any(local[t] >= lmax for t in hits[j]):
                return False
            if any(cap_left[ci] == 0 for ci in cap_of[j]):
                return False
            for ci in cap_of[j]:
                cap_left[ci] -= 1
            for t in hits[j]:
                local[t] += 1
            occupied |= masks[j]
            placed.append(j)
            if twin_free:
                for t in twins[j]:
                    blocked[t] += 1
            return True

        def unplace(j: int) -> None:
            nonlocal occupied
            if twin_free:
                for t in twins[j]:
                    blocked[t] -= 1
            placed.pop()
            occupied ^= masks[j]
            for t in hits[j]:
                local[t] -= 1
            for ci in cap_of[j]:
                cap_left[ci] += 1

        for w in required:
            j = self.index.get(tuple(w))
            if j is None:
                raise PolyboxError(f"required word {Word(w)} meets no target")
            if not place(j):
                return

        def rec() -> Iterator[tuple[int, ...]]:
            budget.tick()
            unc = goal & ~occupied
            if not unc:
                if accept is None or accept(placed):
                    yield tuple(sorted(placed))
                return
            if len(placed) >= max_size:
                return
            cell = (unc & -unc).bit_length() - 1
            for j in cells[cell]:
                if place(j):
                    yield from rec()
                    unplace(j)

        yield from rec()

    def code_of(self, idxs: Iterable[int]) -> Code:
        return Code((self.words[j] for j in idxs), check=False)
