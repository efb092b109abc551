"""Keller graphs and clique search.

Vertices of the Keller graph on ``S^d`` are all words; two words are
adjacent when they are dichotomous but not a twin pair, so cliques are
exactly the twin pair free codes.  :func:`max_clique` is a bitset branch
and bound with greedy colouring bounds.  The graph is vertex transitive
(the isomorphism group acts transitively on words), so the first vertex
of a maximum clique may be fixed to ``a...a``.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .budget import Budget, BudgetExceeded, ensure
from .core import Alphabet, Code, PolyboxError, Word, format_word

MAX_VERTICES = 1 << 16


def _adjacent(u: Sequence[int], v: Sequence[int], twin_pair_free: bool = True) -> bool:
    diff = 0
    comp = False
    for x, y in zip(u, v):
        if x != y:
            diff += 1
            if x ^ y == 1:
                comp = True
    if not comp:
        return False
    return not (twin_pair_free and diff == 1)


@dataclass
class KellerGraph:
    """Keller graph (or, with ``twin_pair_free=False``, the dichotomy graph) on ``S^d``."""

    k: int
    d: int
    twin_pair_free: bool = True
    vertices: list[Word] = field(init=False, repr=False)
    adj: list[int] = field(init=False, repr=False)

    def __post_init__(self):
        n = (2 * self.k) ** self.d
        if n > MAX_VERTICES:
            raise PolyboxError(f"{n} vertices exceed the limit {MAX_VERTICES}")
        self.vertices = [Word(w) for w in itertools.product(range(2 * self.k), repeat=self.d)]
        self.index = {w: i for i, w in enumerate(self.vertices)}
        adj = [0] * n
        for i, j in itertools.combinations(range(n), 2):
            if _adjacent(self.vertices[i], self.vertices[j], self.twin_pair_free):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        self.adj = adj

    @property
    def n(self) -> int:
        return len(self.vertices)

    def adjacent(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return bool(self.adj[self.index[tuple(u)]] >> self.index[tuple(v)] & 1)

    def degree(self, u: Sequence[int]) -> int:
        return self.adj[self.index[tuple(u)]].bit_count()

    def is_clique(self, words: Iterable[Sequence[int]]) -> bool:
        idx = [self.index[tuple(w)] for w in words]
        return all(self.adj[a] >> b & 1 for a, b in itertools.combinations(idx, 2))


@dataclass
class CliqueWitness:
    clique: Code | None
    size: int
    certified: bool
    upper_bound: int | None
    nodes: int

    def __bool__(self) -> bool:
        return self.clique is not None


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _color_bound(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of ``P``; vertices listed with non-decreasing colour."""
    order, colors = [], []
    U = P
    c = 0
    while U:
        c += 1
        Q = U
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= ~adj[v] & ~(1 << v)
            U &= ~(1 << v)
            order.append(v)
            colors.append(c)
    return order, colors


class _Search:
    def __init__(self, adj: list[int], budget: Budget, target: int | None = None,
                 accept=None, need=None):
        self.adj = adj
        self.budget = budget
        self.best: list[int] = []
        self.target = target
        self.accept = accept
        self.need = need or []
        self.done = False

    def feasible(self, R: list[int], P: int) -> bool:
        if not self.need:
            return True
        for mask in self.need:
            if not any(mask >> v & 1 for v in R) and not (P & mask):
                return False
        return True

    def expand(self, R: list[int], P: int) -> None:
        self.budget.tick()
        if len(R) > len(self.best) and (self.accept is None or self.accept(R)):
            self.best = list(R)
            if self.target is not None and len(R) >= self.target:
                self.done = True
                return
        order, colors = _color_bound(P, self.adj)
        goal = len(self.best) if self.target is None else max(len(self.best), self.target - 1)
        for v, c in zip(reversed(order), reversed(colors)):
            if len(R) + c <= goal:
                return
            R.append(v)
            NP = P & self.adj[v]
            if self.feasible(R, NP):
                self.expand(R, NP)
            R.pop()
            if self.done:
                return
            P &= ~(1 << v)
            goal = len(self.best) if self.target is None else max(len(self.best), self.target - 1)


def max_clique(k: int, d: int, *, twin_pair_free: bool = True, symmetry: bool = True,
               budget: Budget | None = None, graph: KellerGraph | None = None) -> CliqueWitness:
    """Maximum clique of the Keller graph on the ``k``-class alphabet in dimension ``d``."""
    budget = ensure(budget)
    G = graph or KellerGraph(k, d, twin_pair_free)
    s = _Search(G.adj, budget)
    try:
        if symmetry:
            s.expand([0], G.adj[0])
        else:
            s.expand([], (1 << G.n) - 1)
        certified = True
    except BudgetExceeded:
        certified = False
    clique = Code((G.vertices[i] for i in s.best), check=True) if s.best else None
    return CliqueWitness(clique, len(s.best), certified,
                         len(s.best) if certified else None, budget.nodes)


def clique_with_column_classes(k: int, d: int, i: int, classes: Iterable[int], target: int, *,
                               budget: Budget | None = None) -> CliqueWitness:
    """A clique of at least ``target`` words using every class in ``classes`` at coordinate ``i``.

    A missing result with ``certified=True`` proves no such clique exists.
    """
    classes = sorted(set(classes))
    if any(c < 0 or c >= k for c in classes):
        raise PolyboxError("requested class outside the alphabet")
    if not 0 <= i < d:
        raise PolyboxError("coordinate out of range")
    budget = ensure(budget)
    G = KellerGraph(k, d)
    need = []
    for c in classes:
        m = 0
        for j, w in enumerate(G.vertices):
            if w[i] >> 1 == c:
                m |= 1 << j
        need.append(m)

    def ok(R: list[int]) -> bool:
        return all(any(mask >> v & 1 for v in R) for mask in need)

    s = _Search(G.adj, budget, target=target, accept=ok, need=need)
    try:
        s.expand([], (1 << G.n) - 1)
        certified = True
    except BudgetExceeded:
        certified = False
    if s.best and len(s.best) >= target:
        return CliqueWitness(Code(G.vertices[j] for j in s.best), len(s.best), certified, None, budget.nodes)
    return CliqueWitness(None, 0, certified, target - 1 if certified else None, budget.nodes)


def partition_code_search(k: int, d: int, twin_pair_free: bool = True, *,
                          budget: Budget | None = None) -> CliqueWitness:
    """Look for a code with ``2^d`` words (a partition code)."""
    budget = ensure(budget)
    G = KellerGraph(k, d, twin_pair_free)
    s = _Search(G.adj, budget, target=1 << d)
    try:
        s.expand([0], G.adj[0])
        certified = True
    except BudgetExceeded:
        certified = False
    if len(s.best) >= 1 << d:
        return CliqueWitness(Code(G.vertices[j] for j in s.best), len(s.best), certified, None, budget.nodes)
    return CliqueWitness(None, 0, certified, None, budget.nodes)


def certificate_text(W: Code, alphabet: Alphabet | None = None) -> str:
    """Clique words plus a digest of the pairwise adjacency transcript."""
    fmt = alphabet.format if alphabet else format_word
    lines = []
    for u, v in itertools.combinations(W.words, 2):
        lines.append(f"{fmt(u)} {fmt(v)} {int(_adjacent(u, v))}")
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
    body = [f"# size: {len(W)}", f"# pairwise-digest: {digest}"]
    body.extend(fmt(w) for w in W.words)
    return "\n".join(body) + "\n"


def write_certificate(path: str | Path, W: Code, alphabet: Alphabet | None = None) -> None:
    Path(path).write_text(certificate_text(W, alphabet))


def check_certificate(text: str, alphabet: Alphabet | None = None) -> bool:
    alphabet = alphabet or Alphabet.standard(2)
    digest = None
    words = []
    for line in text.splitlines():
        if line.startswith("# pairwise-digest:"):
            digest = line.split(":", 1)[1].strip()
        elif line and not line.startswith("#"):
            words.append(alphabet.parse_word(line))
    W = Code(words, check=False)
    if not all(_adjacent(u, v) for u, v in itertools.combinations(W.words, 2)):
        return False
    return certificate_text(W, alphabet).splitlines()[1].endswith(digest or "")
