"""Rigidity: is a code the only one with its polybox?

Two codes are equivalent when their boxes have the same union, which on
the grid model means the same :class:`~polybox.grid.CellSet`.  Since words
are dichotomous exactly when their boxes are disjoint, every code
equivalent to ``V`` is an exact cover of ``V``'s cells by boxes lying
inside it, and a first-uncovered-cell search finds them all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .budget import Budget, BudgetExceeded, ensure
from .core import Code, PolyboxError, Word, find_twin_pair, num_classes
from .grid import CellSet, GridTooLarge, MAX_GRID_BITS, _atoms, realize, word_bits

RIGID = "rigid"
NOT_RIGID = "not_rigid"
INCONCLUSIVE = "inconclusive"


def enclosed_boxes(F: CellSet, k: int | None = None, cap: int = MAX_GRID_BITS) -> list[Word]:
    """All words over the ``k``-class alphabet whose boxes lie inside ``F``."""
    k = F.k if k is None else k
    if k != F.k:
        raise PolyboxError("alphabet and cell set disagree on the number of classes")
    if k * F.d > cap:
        raise GridTooLarge(f"grid of {k * F.d} bits exceeds cap {cap}")
    out = []
    bits = F.bits
    letters = range(2 * k)

    def rec(prefix: list[int]) -> None:
        if len(prefix) == F.d:
            w = tuple(prefix)
            if word_bits(w, k) & ~bits == 0:
                out.append(Word(w))
            return
        for x in letters:
            prefix.append(x)
            if _prefix_possible(prefix, F, k):
                rec(prefix)
            prefix.pop()

    rec([])
    return out


def _prefix_possible(prefix: Sequence[int], F: CellSet, k: int) -> bool:
    """Necessary check: every slab of the prefix box must meet ``F``."""
    R = 1 << k
    block = R ** (F.d - len(prefix))
    starts = [0]
    for x in prefix:
        starts = [s * R + a for s in starts for a in _atoms(x, k)]
    stripe = (1 << block) - 1
    for s in starts:
        if (F.bits >> (s * block)) & stripe == 0:
            return False
    return True


@dataclass
class SuitSearchResult:
    verdict: str
    witnesses: list[Code]
    nodes: int
    candidates: int
    complete: bool

    @property
    def rigid(self) -> bool:
        return self.verdict == RIGID


def find_equivalent_codes(V: Iterable[Sequence[int]], k: int | None = None, *,
                          disjoint: bool = False, twin_pair_free_only: bool = False,
                          limit: int | None = None, budget: Budget | None = None) -> SuitSearchResult:
    """Every code other than ``V`` with the same union over the ``k``-class alphabet.

    ``disjoint`` keeps only codes sharing no word with ``V``;
    ``twin_pair_free_only`` keeps only twin pair free ones.  The search stops
    after ``limit`` witnesses (the verdict is still exact).
    """
    V = Code(V)
    if not len(V):
        raise PolyboxError("empty code")
    k = max(num_classes(V), 1) if k is None else k
    if num_classes(V) > k:
        raise PolyboxError("code uses classes outside the alphabet")
    budget = ensure(budget)
    F = realize(V, k)
    cands = enclosed_boxes(F, k)
    if disjoint:
        cands = [w for w in cands if w not in V]
    masks = [word_bits(tuple(w), k) for w in cands]
    index = {w: j for j, w in enumerate(cands)}
    twins = []
    for w in cands:
        t = []
        for i, x in enumerate(w):
            j = index.get(w[:i] + (x ^ 1,) + w[i + 1:])
            if j is not None:
                t.append(j)
        twins.append(t)
    cells: dict[int, list[int]] = {}
    for j, m in enumerate(masks):
        while m:
            low = m & -m
            cells.setdefault(low.bit_length() - 1, []).append(j)
            m ^= low
    vol = 1 << ((k - 1) * V.d)
    if len(F) != vol * len(V):
        raise PolyboxError("grid volume disagrees with the number of words")
    blocked = [0] * len(cands)
    placed: list[int] = []
    witnesses: list[Code] = []
    target = F.bits

    class _Stop(Exception):
        pass

    def rec(covered: int) -> None:
        budget.tick()
        unc = target & ~covered
        if not unc:
            W = Code((cands[j] for j in placed), check=False)
            if W != V:
                witnesses.append(W)
                if limit is not None and len(witnesses) >= limit:
                    raise _Stop
            return
        cell = (unc & -unc).bit_length() - 1
        for j in cells.get(cell, ()):
            if blocked[j] or masks[j] & covered:
                continue
            placed.append(j)
            if twin_pair_free_only:
                for t in twins[j]:
                    blocked[t] += 1
            rec(covered | masks[j])
            if twin_pair_free_only:
                for t in twins[j]:
                    blocked[t] -= 1
            placed.pop()

    complete = True
    try:
        rec(0)
    except _Stop:
        complete = False
    except BudgetExceeded:
        return SuitSearchResult(NOT_RIGID if witnesses else INCONCLUSIVE, witnesses,
                                budget.nodes, len(cands), False)
    witnesses.sort()
    verdict = NOT_RIGID if witnesses else RIGID
    if verdict == RIGID and k >= 2 and not (disjoint or twin_pair_free_only) and find_twin_pair(V):
        raise AssertionError("a code with a twin pair cannot be rigid")
    return SuitSearchResult(verdict, witnesses, budget.nodes, len(cands), complete)


def is_rigid(V: Iterable[Sequence[int]], k: int | None = None, budget: Budget | None = None) -> bool:
    """Whether ``V`` is the only code over the ``k``-class alphabet with its union.

    Raises :class:`BudgetExceeded` when the search cannot finish.
    """
    r = find_equivalent_codes(V, k, limit=1, budget=budget)
    if r.verdict == INCONCLUSIVE:
        raise BudgetExceeded("rigidity search did not finish")
    return r.verdict == RIGID
