"""Alphabets, words and polybox codes.

A letter is an integer ``2*c + p``: ``c`` is the index of its complement
class and ``p`` its polarity, so the complement of a letter is ``x ^ 1``.
Words are tuples of such integers.  Coordinates are 0-based throughout the
package; the notation ``aa'b`` is used only for parsing and printing.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

DEFAULT_CLASS_NAMES = "abcdefghijklmnopqrstuvwxyz"


class PolyboxError(ValueError):
    """Base class for invalid input to the polybox routines."""


class AlphabetError(PolyboxError):
    pass


class DimensionError(PolyboxError):
    pass


class NotACodeError(PolyboxError):
    """Raised when a word set is required to be pairwise dichotomous but is not."""


def letter(cls: int, polarity: int = 0) -> int:
    return 2 * cls + polarity


def complement(x: int) -> int:
    return x ^ 1


class Word(tuple):
    """A word over a complemented alphabet; a tuple of letter codes."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int]):
        w = super().__new__(cls, letters)
        if not w:
            raise DimensionError("a word needs at least one letter")
        for x in w:
            if not isinstance(x, int) or x < 0:
                raise AlphabetError(f"invalid letter code {x!r}")
        return w

    @property
    def d(self) -> int:
        return len(self)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word('{format_word(self)}')"


@dataclass(frozen=True)
class Alphabet:
    """An alphabet with ``k`` complement classes named by ``class_names``.

    Each class ``c`` contributes the two letters ``name`` and ``name'``.
    """

    class_names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.class_names)
        object.__setattr__(self, "class_names", names)
        if not names:
            raise AlphabetError("an alphabet needs at least one class")
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate class names in {names}")
        for n in names:
            if not n or "'" in n or "′" in n or any(ch.isspace() for ch in n):
                raise AlphabetError(f"invalid class name {n!r}")

    @classmethod
    def standard(cls, k: int) -> "Alphabet":
        if not 1 <= k <= len(DEFAULT_CLASS_NAMES):
            raise AlphabetError(f"unsupported class count {k}")
        return cls(tuple(DEFAULT_CLASS_NAMES[:k]))

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        """Parse ``"a b c"`` or ``"a,b,c"`` or ``"abc"`` (single-letter names)."""
        parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
        if len(parts) == 1 and len(parts[0]) > 1:
            parts = list(parts[0])
        return cls(tuple(parts))

    @property
    def k(self) -> int:
        return len(self.class_names)

    @property
    def size(self) -> int:
        return 2 * self.k

    def letters(self) -> range:
        return range(2 * self.k)

    def letter_name(self, x: int) -> str:
        c, p = divmod(x, 2)
        if c >= self.k:
            raise AlphabetError(f"letter {x} outside alphabet {self}")
        return self.class_names[c] + ("'" if p else "")

    def format(self, w: Sequence[int]) -> str:
        return "".join(self.letter_name(x) for x in w)

    def parse_word(self, text: str, d: int | None = None) -> Word:
        """Parse apostrophe notation, e.g. ``"aa'b"``, into a :class:`Word`."""
        text = text.strip().replace("′", "'").replace("’", "'")
        if not text:
            raise PolyboxError("empty word")
        names = sorted(self.class_names, key=len, reverse=True)
        out = []
        pos = 0
        while pos < len(text):
            for c_name in names:
                if text.startswith(c_name, pos):
                    break
            else:
                raise AlphabetError(f"unknown letter at {text[pos:]!r} in {text!r}")
            pos += len(c_name)
            p = 0
            if pos < len(text) and text[pos] == "'":
                p = 1
                pos += 1
            out.append(letter(self.class_names.index(c_name), p))
        if d is not None and len(out) != d:
            raise DimensionError(f"{text!r} has {len(out)} letters, expected {d}")
        return Word(out)

    def check(self, w: Sequence[int]) -> None:
        for x in w:
            if x >= 2 * self.k:
                raise AlphabetError(f"letter {x} outside alphabet with {self.k} classes")

    def __str__(self) -> str:
        return " ".join(self.class_names)


STANDARD = Alphabet.standard(len(DEFAULT_CLASS_NAMES))


def format_word(w: Sequence[int]) -> str:
    return STANDARD.format(w)


def parse_word(text: str, alphabet: Alphabet | None = None, d: int | None = None) -> Word:
    return (alphabet or STANDARD).parse_word(text, d)


def W(text: str) -> Word:
    """Shorthand used heavily in tests and demos: ``W("aa'b")``."""
    return STANDARD.parse_word(text)


def num_classes(words: Iterable[Sequence[int]]) -> int:
    """Smallest ``k`` whose alphabet contains every letter used."""
    m = -1
    for w in words:
        for x in w:
            if x > m:
                m = x
    return m // 2 + 1 if m >= 0 else 1


def _check_pair(u: Sequence[int], v: Sequence[int]) -> None:
    if len(u) != len(v):
        raise DimensionError(f"dimension mismatch: {len(u)} vs {len(v)}")


def dichotomous(u: Sequence[int], v: Sequence[int]) -> bool:
    _check_pair(u, v)
    return any(x ^ y == 1 for x, y in zip(u, v))


def is_twin_pair(u: Sequence[int], v: Sequence[int]) -> bool:
    _check_pair(u, v)
    flips = 0
    for x, y in zip(u, v):
        if x != y:
            if x ^ y != 1:
                return False
            flips += 1
    return flips == 1


def g_weight(v: Sequence[int], w: Sequence[int]) -> int:
    """Product over coordinates of 2 (equal), 1 (different class), 0 (complement).

    Equals ``2**d * |v∩w| / |w|`` in the equicomplementary realization.
    """
    _check_pair(v, w)
    r = 1
    for x, y in zip(v, w):
        if x == y:
            r *= 2
        elif x ^ y == 1:
            return 0
    return r


def is_polybox_code(words: Iterable[Sequence[int]]) -> bool:
    ws = list(words)
    _uniform(ws)
    return all(dichotomous(u, v) for u, v in itertools.combinations(ws, 2))


def find_twin_pair(words: Iterable[Sequence[int]]) -> tuple[Word, Word] | None:
    """First twin pair in canonical (sorted) order, or ``None``."""
    ws = sorted({Word(w) for w in words})
    for u, v in itertools.combinations(ws, 2):
        if is_twin_pair(u, v):
            return u, v
    return None


def has_twin_pair(words: Iterable[Sequence[int]]) -> bool:
    return find_twin_pair(words) is not None


def _uniform(ws: Sequence[Sequence[int]]) -> int | None:
    if not ws:
        return None
    d = len(ws[0])
    for w in ws:
        if len(w) != d:
            raise DimensionError("words of different lengths")
    return d


class Code:
    """A polybox code: a duplicate-free set of pairwise dichotomous words.

    Words are kept sorted so equal codes print and hash identically.
    """

    __slots__ = ("words", "_set", "_hash")

    def __init__(self, words: Iterable[Sequence[int]] = (), *, check: bool = True):
        ws = [w if isinstance(w, Word) else Word(w) for w in words]
        _uniform(ws)
        ws.sort()
        for a, b in zip(ws, ws[1:]):
            if a == b:
                raise PolyboxError(f"duplicate word {a}")
        if check:
            for u, v in itertools.combinations(ws, 2):
                if not any(x ^ y == 1 for x, y in zip(u, v)):
                    raise NotACodeError(f"{u} and {v} are not dichotomous")
        self.words: tuple[Word, ...] = tuple(ws)
        self._set = frozenset(ws)
        self._hash = hash(self.words)

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> "Code":
        """Parse ``"{aaa;a'aa}"``, ``"aaa, a'aa"`` or whitespace separated words."""
        body = text.strip().strip("{}")
        parts = [p for p in re.split(r"[;,\s]+", body) if p]
        a = alphabet or STANDARD
        return cls(a.parse_word(p) for p in parts)

    @property
    def d(self) -> int:
        if not self.words:
            raise DimensionError("empty code has no dimension")
        return len(self.words[0])

    @property
    def frozen(self) -> frozenset:
        return self._set

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self._set

    def __eq__(self, other) -> bool:
        if isinstance(other, Code):
            return self.words == other.words
        return NotImplemented

    def __lt__(self, other: "Code") -> bool:
        return (len(self), self.words) < (len(other), other.words)

    def __hash__(self) -> int:
        return self._hash

    def __or__(self, other: "Code") -> "Code":
        return Code(self._set | other._set)

    def __and__(self, other: "Code") -> "Code":
        return Code(self._set & other._set, check=False)

    def __sub__(self, other: "Code") -> "Code":
        return Code(self._set - other._set, check=False)

    def isdisjoint(self, other: Iterable[Sequence[int]]) -> bool:
        return self._set.isdisjoint(tuple(w) for w in other)

    def issubset(self, other: "Code") -> bool:
        return self._set <= other._set

    def format(self, alphabet: Alphabet | None = None) -> str:
        a = alphabet or STANDARD
        return "{" + ";".join(a.format(w) for w in self.words) + "}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Code('{self.format()}')"


def code(*texts: str) -> Code:
    """``code("aaa", "a'aa")`` or ``code("aaa a'aa")``."""
    return Code.parse(" ".join(texts))


def twin_pair_free(V: Iterable[Sequence[int]]) -> bool:
    return not has_twin_pair(V)


def covers(w: Sequence[int], V: Code) -> bool:
    """Whether the box of ``w`` lies inside the union of ``V``'s boxes (g-sum test)."""
    if not isinstance(V, Code):
        V = Code(V)
    return cover_sum(w, V) == 1 << len(w)


def cover_sum(w: Sequence[int], V: Iterable[Sequence[int]]) -> int:
    return sum(g_weight(v, w) for v in V)


def code_covers(W_: Code, V: Code) -> bool:
    """True iff every word of ``W_`` is covered by ``V``."""
    return all(covers(w, V) for w in W_)


def equivalent(V: Code, W_: Code) -> bool:
    return len(V) == len(W_) and code_covers(W_, V) and code_covers(V, W_)


def measure_difference(V: Code, W_: Code) -> Fraction:
    """m(V \\ W) in units of one box: ``|V| - sum g(v, w) / 2**d``."""
    if not isinstance(V, Code):
        V = Code(V)
    if not isinstance(W_, Code):
        W_ = Code(W_)
    if not V:
        return Fraction(0)
    d = V.d
    s = sum(g_weight(v, w) for v in V for w in W_)
    return len(V) - Fraction(s, 1 << d)


class RawWords(NamedTuple):
    """A projected word multiset, which need not be a code."""

    words: tuple[Word, ...]
    is_code: bool

    def as_code(self) -> Code:
        if not self.is_code:
            raise NotACodeError("projection is not a polybox code")
        return Code(self.words)


def _raw(ws: list[Word]) -> RawWords:
    ws.sort()
    ok = len(set(ws)) == len(ws) and is_polybox_code(ws)
    return RawWords(tuple(ws), ok)


def _check_coord(V: Code, i: int) -> None:
    if V and not 0 <= i < V.d:
        raise DimensionError(f"coordinate {i} out of range for d={V.d}")


def slice_code(V: Code, i: int, x: int) -> Code:
    """The sub-code ``V^{i,x}`` of words with letter ``x`` at coordinate ``i``."""
    _check_coord(V, i)
    return Code((w for w in V if w[i] == x), check=False)


def delete_coord(V: Iterable[Sequence[int]], i: int) -> RawWords:
    V = list(V)
    if V and not 0 <= i < len(V[0]):
        raise DimensionError(f"coordinate {i} out of range")
    if V and len(V[0]) == 1:
        raise DimensionError("cannot delete the only coordinate")
    return _raw([Word(w[:i] + w[i + 1:]) for w in V])


def restrict(V: Iterable[Sequence[int]], coords: Iterable[int]) -> RawWords:
    cs = sorted(set(coords))
    if not cs:
        raise DimensionError("restriction to an empty coordinate set")
    ws = []
    for w in V:
        if cs[-1] >= len(w) or cs[0] < 0:
            raise DimensionError(f"coordinates {cs} out of range")
        ws.append(Word(w[c] for c in cs))
    return _raw(ws)


def distribution(V: Iterable[Sequence[int]], i: int, k: int | None = None) -> tuple[tuple[int, int], ...]:
    """Per-class letter counts ``((n_a, n_a'), (n_b, n_b'), ...)`` at coordinate ``i``."""
    ws = list(V)
    if k is None:
        k = num_classes(ws)
    counts = [[0, 0] for _ in range(k)]
    for w in ws:
        if not 0 <= i < len(w):
            raise DimensionError(f"coordinate {i} out of range")
        c, p = divmod(w[i], 2)
        if c >= k:
            raise AlphabetError(f"letter outside {k}-class alphabet")
        counts[c][p] += 1
    return tuple((a, b) for a, b in counts)


def is_flat(V: Code) -> bool:
    if not V:
        return True
    return any(len({w[i] for w in V}) == 1 for i in range(V.d))


def letter_profile(V: Iterable[Sequence[int]]) -> Counter:
    return Counter(x for w in V for x in w)


@dataclass(frozen=True)
class SiblingEdge:
    u: Word
    v: Word
    colors: frozenset[int]
    # colours at which one endpoint carries the complement of the reference letter
    complement_colors: frozenset[int] = frozenset()


@dataclass(frozen=True)
class SiblingsGraph:
    vertices: tuple[Word, ...]
    edges: tuple[SiblingEdge, ...]

    def colors(self) -> set[int]:
        return {c for e in self.edges for c in e.colors}

    def edges_of_color(self, i: int) -> list[SiblingEdge]:
        return [e for e in self.edges if i in e.colors]


def sibling_colors(u: Sequence[int], v: Sequence[int]) -> frozenset[int]:
    """Coordinates ``i`` at which ``u`` and ``v`` are i-siblings."""
    out = []
    for i, (x, y) in enumerate(zip(u, v)):
        if x == y or x ^ y == 1:
            continue
        if is_twin_pair(u[:i] + u[i + 1:], v[:i] + v[i + 1:]):
            out.append(i)
    return frozenset(out)


def siblings_graph(V: Code, reference: Sequence[int] | None = None) -> SiblingsGraph:
    """The coloured graph of siblings of ``V``.

    With a ``reference`` word ``w`` an edge of colour ``i`` is additionally
    flagged when one endpoint has the letter ``w_i'`` at ``i`` (the
    "type b'" edges used when ``w = b...b``).
    """
    edges = []
    for u, v in itertools.combinations(V.words, 2):
        cs = sibling_colors(u, v)
        if not cs:
            continue
        flagged = frozenset()
        if reference is not None:
            flagged = frozenset(i for i in cs if reference[i] ^ 1 in (u[i], v[i]))
        edges.append(SiblingEdge(u, v, cs, flagged))
    return SiblingsGraph(V.words, tuple(edges))


# -- code files --------------------------------------------------------------

def read_code_file(path: str | Path) -> tuple[Alphabet, Code]:
    """Read a code file: optional ``alphabet: a b`` header, one word per line."""
    alphabet = None
    words = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("alphabet:"):
            alphabet = Alphabet.parse(line.split(":", 1)[1])
            continue
        words.append(line)
    if alphabet is None:
        alphabet = STANDARD
        parsed = [alphabet.parse_word(w) for w in words]
        alphabet = Alphabet.standard(num_classes(parsed))
    d = None
    out = []
    for w in words:
        pw = alphabet.parse_word(w, d)
        d = len(pw)
        out.append(pw)
    return alphabet, Code(out)


def format_code_file(V: Code, alphabet: Alphabet | None = None, comment: str | None = None) -> str:
    a = alphabet or Alphabet.standard(num_classes(V))
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"alphabet: {a}")
    lines.extend(a.format(w) for w in V)
    return "\n".join(lines) + "\n"


def write_code_file(path: str | Path, V: Code, alphabet: Alphabet | None = None,
                    comment: str | None = None) -> None:
    Path(path).write_text(format_code_file(V, alphabet, comment), encoding="utf-8")
