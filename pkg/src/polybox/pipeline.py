"""Two-level cover closure behind the dimension 5 and 6 non-existence checks.

Start from one representative ``U`` per class of twin pair free covers of
``v = b...b``.  The first level collects twin pair free covers ``C_U`` of
``U`` that avoid ``U``, contain ``v``, have at most 16 words and pass the
distribution rules.  The second level covers each ``C_U`` back by codes
containing ``U``.  Every word is covered by at most ``local_max`` words of
the other side (10 for d=6, 11 for d=5).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .budget import Budget, ensure
from .atlas import CoverAtlas
from .core import Code, dichotomous
from .enumeration import B, Census, census, covers_of_code, distribution_admissible

LOCAL_MAX = {5: 11, 6: 10}
SIZES = {5: (5, 11), 6: (5, 10)}


@dataclass
class SeedResult:
    U: Code
    first: list[Code]
    second: dict[Code, int] = field(default_factory=dict)

    @property
    def second_total(self) -> int:
        return sum(self.second.values())


@dataclass
class PipelineReport:
    d: int
    seeds: list[SeedResult]

    @property
    def nonempty(self) -> list[SeedResult]:
        return [s for s in self.seeds if s.first]


def first_level(U: Code, d: int, *, k: int = 2, m: int = 16, local_max: int | None = None,
                atlas: CoverAtlas | None = None, budget: Budget | None = None) -> list[Code]:
    """Covers ``C_U`` of ``U``; glued from ``atlas`` families when one is given."""
    v = (B,) * d
    accept = lambda C: distribution_admissible(C, k)
    if atlas is not None:
        fams = [atlas.family(u, required=[v], forbidden=U) for u in U]
        return atlas.join(list(U), fams, m, accept=accept, budget=budget)
    local_max = LOCAL_MAX[d] if local_max is None else local_max
    return covers_of_code(U, k, m, local_max=local_max, required=[v], disjoint=True,
                          accept=accept, budget=budget)


def second_level(U: Code, C_U: Code, d: int, *, k: int = 2, m: int = 16,
                 local_max: int | None = None, atlas: CoverAtlas | None = None,
                 budget: Budget | None = None) -> list[Code]:
    """Covers of ``C_U`` containing ``U`` and avoiding ``C_U``.

    The cover of a word ``w`` of ``C_U`` must contain every word of ``U``
    meeting ``w``; since each word of ``U`` meets some word of ``C_U`` this
    is the same as asking for ``U`` inside the whole cover.
    """
    accept = lambda C: distribution_admissible(C, k)
    if atlas is not None:
        fams = [atlas.family(w, required=[u for u in U if not dichotomous(u, w)], forbidden=C_U)
                for w in C_U]
        return atlas.join(list(C_U), fams, m, accept=accept, budget=budget)
    local_max = LOCAL_MAX[d] if local_max is None else local_max
    return covers_of_code(C_U, k, m, local_max=local_max, required=list(U), disjoint=True,
                          accept=accept, budget=budget)


def run_pipeline(d: int, *, seeds: Census | None = None, k: int = 2, direct: bool = False,
                 budget: Budget | None = None,
                 progress: Callable[[str], None] | None = None) -> PipelineReport:
    """Both levels for every seed class.

    By default covers are glued from the expanded census; ``direct`` runs
    the cell by cell search instead (same results, much slower).
    """
    if d not in LOCAL_MAX:
        raise ValueError("the pipeline is defined for d = 5 and d = 6")
    if k != 2:
        raise ValueError("the pipeline runs over the two-class alphabet")
    budget = ensure(budget)
    if seeds is None:
        seeds = census(d, SIZES[d], k, budget=budget)
    atlas = None if direct else CoverAtlas(d, SIZES[d], seeds=seeds, budget=budget)
    out = []
    for i, cls in enumerate(seeds.classes, 1):
        U = cls.representative
        first = first_level(U, d, k=k, atlas=atlas, budget=budget)
        res = SeedResult(U, first)
        for C_U in first:
            res.second[C_U] = len(second_level(U, C_U, d, k=k, atlas=atlas, budget=budget))
        if progress:
            progress(f"seed {i}/{len(seeds.classes)} |U|={len(U)} first={len(first)} "
                     f"second={res.second_total}")
        out.append(res)
    return PipelineReport(d, out)


# -- the two-by-two slice case at d = 5 ------------------------------------------------

SLICE_U = ("aabbb", "aa'abb", "a'babb", "a'aa'bb")
SLICE_P = ("bbbab", "bbba'a", "b'bbba", "b'bbaa'")
SLICE_CAPS = ((0, 0, 3), (0, 1, 3))  # at most three words start with a, three with a'


@dataclass
class SliceCase:
    U: Code
    families: dict
    covers: list[Code]

    @property
    def family_sizes(self) -> dict:
        return {u: len(f) for u, f in self.families.items()}


def slice_case_d5(*, m: int = 16, local_max: int = 11, use_symmetry: bool = True,
                  budget: Budget | None = None) -> SliceCase:
    """Covers of the four-word slice code over the three-class alphabet.

    Every per-word cover has at most ``local_max`` words, contains the fixed
    code ``SLICE_P``, avoids the slice code and respects the two caps on the
    first coordinate.  The joined covers keep at most ``m`` words.

    Swapping coordinates 1 and 2 together with a and a' at coordinate 0 fixes
    the slice code, ``SLICE_P`` and the pair of caps, and exchanges
    ``aabbb`` with ``a'babb`` and ``aa'abb`` with ``a'aa'bb``.  With
    ``use_symmetry`` only two families are searched and the other two are
    their images.
    """
    from .core import Alphabet
    from .enumeration import cover_code, local_families
    from .isomorphism import Isomorphism, apply
    A = Alphabet.standard(3)
    words = [A.parse_word(s) for s in SLICE_U]
    U = Code(words)
    P = [A.parse_word(s) for s in SLICE_P]
    kw = dict(required={u: P for u in U}, exclude=U, caps=SLICE_CAPS, budget=budget)
    if use_symmetry:
        ident = tuple(range(6))
        f = Isomorphism((0, 2, 1, 3, 4), ((1, 0, 2, 3, 4, 5),) + (ident,) * 4)
        assert apply(f, U) == U and apply(f, Code(P)) == Code(P)
        assert f(words[0]) == words[2] and f(words[1]) == words[3]
        fams = local_families(words[:2], 3, local_max, **kw)
        for src, dst in ((0, 2), (1, 3)):
            fams[words[dst]] = [apply(f, C) for C in fams[words[src]]]
    else:
        fams = local_families(U, 3, local_max, **kw)

    def capped(C: Code) -> bool:
        return all(sum(1 for w in C if w[i] == x) <= n for i, x, n in SLICE_CAPS)

    joined = cover_code(U, None, m, fams, disjoint_from=U, accept=capped, budget=budget)
    return SliceCase(U, fams, list(joined.members))
