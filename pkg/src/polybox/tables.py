"""Golden data for the two small tables and their regeneration.

Table 1 lists the two smallest twin pair free covers of ``bbbbb``; Table 2
lists the disjoint twin pair free pairs ``K, M`` that agree inside the box
of ``q = bbb``, written over ``{a, a', b}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Code
from .enumeration import B, check_q_pair, cover_word, enumerate_q_equivalent_pairs
from .isomorphism import dedup, isomorphic

TARGET_1 = (B,) * 5

TABLE1 = {
    "C1": "{aaabb;a'a'a'bb;baa'bb;a'babb;aa'bbb}",
    "C2": "{aaaab;a'a'a'ab;baa'ab;a'baab;aa'bab;bbba'b}",
}

Q2 = (B, B, B)
LETTERS2 = (0, 1, 2)  # a, a', b

TABLE2 = [
    ("{aab;aa'a}", "{aba;aaa'}"),
    ("{bab;ba'a}", "{bba;baa'}"),
    ("{abb;a'a'a'}", "{ba'a';aba;aaa'}"),
    ("{aab;ba'a'}", "{aba';aaa;a'a'a'}"),
    ("{bab;ba'a}", "{aab;aa'a;a'ba;a'aa'}"),
    ("{aba';a'a'a';bba}", "{aab;a'aa;ba'b}"),
    ("{aba';a'a'a';bba}", "{abb;a'aa;a'a'b}"),
    ("{aba';a'a'a';bba}", "{aaa';baa;ba'b}"),
    ("{aab;a'ba';ba'a}", "{aba;a'a'b;baa'}"),
    ("{aba;a'aa';ba'a'}", "{aaa;aa'b;a'ba'}"),
    ("{aaa';aba;a'aa;a'ba'}", "{aa'a;a'a'a';bab}"),
    ("{aaa;aba';a'ab;ba'a}", "{aa'a';baa';bba}"),
    ("{aba';a'aa';a'a'a;baa}", "{aaa;aa'a';a'ba;baa'}"),
    ("{aab;aa'a;a'aa';a'ba}", "{aaa';aba;a'ab;a'a'a}"),
    ("{aaa;aba';a'a'a';a'ba}", "{aab;aa'a';a'aa;a'a'b}"),
    ("{aaa;a'a'a';baa';a'ba;aa'b}", "{bbb}"),
    ("{aaa;a'a'a';baa';a'ba;aa'b}", "{a'a'a;aaa';ba'a';aba;a'ab}"),
]


def table1_codes() -> dict[str, Code]:
    return {name: Code.parse(text) for name, text in TABLE1.items()}


def table2_pairs() -> list[tuple[Code, Code]]:
    return [(Code.parse(K), Code.parse(M)) for K, M in TABLE2]


@dataclass
class TableReport:
    name: str
    ok: bool
    lines: list[str] = field(default_factory=list)

    def text(self) -> str:
        head = f"{self.name}: {'match' if self.ok else 'MISMATCH'}"
        return "\n".join([head] + ["  " + s for s in self.lines])


def verify_table1(golden: dict[str, Code] | None = None) -> TableReport:
    """Regenerate the size 5 and 6 cover families of ``bbbbb`` and locate each golden row."""
    golden = table1_codes() if golden is None else golden
    lines = []
    ok = True
    for n in (5, 6):
        fam = cover_word(TARGET_1, n)
        classes = dedup(fam.members, fix=TARGET_1, k=2)
        lines.append(f"size {n}: covers {len(fam)}, classes {len(classes)}")
        for name, C in sorted(golden.items()):
            if len(C) != n:
                continue
            found = C in fam and any(isomorphic(C, c.representative, fix=TARGET_1, k=2) is not None
                                     for c in classes)
            lines.append(f"row {name} {C.format()}: {'found' if found else 'NOT FOUND'}")
            ok &= found
    return TableReport("table1", ok, lines)


def verify_table2(golden: list[tuple[Code, Code]] | None = None) -> TableReport:
    """Regenerate the q-equivalent pairs and match them against the golden rows both ways."""
    golden = table2_pairs() if golden is None else golden
    pairs = enumerate_q_equivalent_pairs(Q2, 2, letters=LETTERS2)
    lines = [f"classes: {len(pairs)}, rows: {len(golden)}"]
    ok = len(pairs) == len(golden)
    hit = [[] for _ in pairs]
    for r, (K, M) in enumerate(golden, 1):
        valid = check_q_pair(K, M, Q2)
        match = [j for j, p in enumerate(pairs)
                 if isomorphic((K, M), (p.K, p.M), fix=Q2, k=2) is not None
                 or isomorphic((M, K), (p.K, p.M), fix=Q2, k=2) is not None]
        for j in match:
            hit[j].append(r)
        status = "valid" if valid else "INVALID"
        where = f"class {match[0] + 1}" if match else "NO CLASS"
        lines.append(f"row {r}: {status}, {where}")
        ok &= valid and bool(match)
    for j, rows in enumerate(hit):
        if not rows:
            lines.append(f"class {j + 1} {pairs[j].K.format()} | {pairs[j].M.format()}: no row")
            ok = False
        elif len(rows) > 1:
            lines.append(f"class {j + 1}: rows {', '.join(map(str, rows))} coincide")
            ok = False
    return TableReport("table2", ok, lines)
