"""Command line entry point ``polybox``.

Every command builds a report (an ordered list of key/value pairs) that is
byte-reproducible for fixed inputs, plus a run manifest holding timing and
digests.  Exit codes: 0 verified, 1 mismatch, 2 budget exhausted, 3 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .budget import Budget, BudgetExceeded, default_node_budget
from .core import Alphabet, Code, PolyboxError, read_code_file

EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    items: list[tuple[str, Any]] = field(default_factory=list)
    status: int = EXIT_OK

    def add(self, key: str, value: Any) -> None:
        self.items.append((key, value))

    def render(self, fmt: str) -> str:
        if fmt == "json-lines":
            return "".join(json.dumps({"key": k, "value": v}, sort_keys=True) + "\n"
                           for k, v in self.items)
        return "".join(f"{k}: {v}\n" for k, v in self.items)


@dataclass
class RunManifest:
    command: str
    parameters: dict
    input_digests: dict
    budget: dict
    elapsed: float
    result_digest: str
    exit_code: int
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _file_digest(path: str) -> str:
    return sha256_bytes(Path(path).read_bytes())


def _budget(args) -> Budget:
    nodes = args.budget_nodes if args.budget_nodes is not None else default_node_budget()
    return Budget(nodes, args.budget_seconds)


def _alphabet(args, default_k: int = 2) -> Alphabet:
    if args.alphabet:
        try:
            return Alphabet.parse(args.alphabet)
        except PolyboxError as e:
            raise InputError(str(e)) from e
    return Alphabet.standard(default_k)


def _read_code(path: str | None) -> tuple[Alphabet, Code]:
    if not path:
        raise InputError("--in is required")
    try:
        return read_code_file(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def _parse_sizes(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return int(lo), int(hi)
        n = int(text)
        return n, n
    except ValueError as e:
        raise InputError(f"bad size range {text!r}, expected lo..hi") from e


def _parse_fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(p) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad offsets {text!r}") from e


# -- commands ---------------------------------------------------------------------

def cmd_verify_tables(args, rep: Report, budget: Budget) -> None:
    from .tables import verify_table1, verify_table2
    for r in (verify_table1(), verify_table2()):
        rep.add(r.name, "match" if r.ok else "mismatch")
        for i, line in enumerate(r.lines):
            rep.add(f"{r.name}.{i}", line)
        if not r.ok:
            rep.status = EXIT_MISMATCH


def _progress(args):
    if not getattr(args, "progress", False):
        return None
    return lambda msg: print(f"[progress] {msg}", file=sys.stderr, flush=True)


def cmd_census(args, rep: Report, budget: Budget) -> None:
    from .enumeration import census
    d = args.dim
    if d is None:
        raise InputError("--dim is required")
    lo, hi = _parse_sizes(args.sizes) if args.sizes else {5: (5, 11), 6: (5, 10)}.get(d, (2, 1 << d))
    k = _alphabet(args).k
    try:
        c = census(d, (lo, hi), k, budget=budget, progress=_progress(args))
    except BudgetExceeded:
        rep.add("authoritative", False)
        raise
    rep.add("dim", d)
    rep.add("classes_alphabet", k)
    rep.add("sizes", f"{lo}..{hi}")
    for n, (_, tot, cls) in sorted(c.per_size.items()):
        rep.add(f"size {n}", f"covers {tot}, classes {cls}")
    rep.add("total", c.total)
    rep.add("classes", c.n_classes)
    if args.expand_orbits:
        for j, cl in enumerate(c.classes):
            rep.add(f"class {j + 1}", f"{cl.representative.format()} orbit {cl.orbit}")
    expected = {5: (738680, 232), 6: (2058920, 104)}
    if (lo, hi) == {5: (5, 11), 6: (5, 10)}.get(d) and k == 2:
        ok = (c.total, c.n_classes) == expected[d]
        rep.add("reference", "match" if ok else f"mismatch, expected {expected[d]}")
        if not ok:
            rep.status = EXIT_MISMATCH


def cmd_pipeline(args, rep: Report, budget: Budget) -> None:
    from .pipeline import run_pipeline
    if args.dim not in (5, 6):
        raise InputError("--dim must be 5 or 6")
    r = run_pipeline(args.dim, budget=budget, progress=_progress(args))
    rep.add("dim", args.dim)
    rep.add("seed_classes", len(r.seeds))
    for s in r.nonempty:
        rep.add(f"U {s.U.format()}", f"|U| {len(s.U)}, first level {len(s.first)}, "
                                     f"second level {s.second_total}")
    sizes = sorted((len(s.U), len(s.first)) for s in r.nonempty)
    rep.add("first_level", " ".join(f"{u}:{n}" for u, n in sizes))
    empty2 = all(s.second_total == 0 for s in r.nonempty)
    rep.add("second_level_empty", empty2)
    expected = {6: [(5, 42), (6, 48), (7, 48), (8, 24), (9, 24)], 5: [(5, 324), (7, 8)]}[args.dim]
    ok = sizes == expected and empty2
    rep.add("reference", "match" if ok else f"mismatch, expected {expected} and empty second level")
    if not ok:
        rep.status = EXIT_MISMATCH


def cmd_clique(args, rep: Report, budget: Budget) -> None:
    from .keller import max_clique, write_certificate
    if args.dim is None:
        raise InputError("--dim is required")
    k = args.classes or _alphabet(args).k
    w = max_clique(k, args.dim, twin_pair_free=not args.allow_twins,
                   symmetry=not args.no_symmetry, budget=budget)
    rep.add("classes", k)
    rep.add("dim", args.dim)
    rep.add("clique_size", w.size)
    rep.add("certified", w.certified)
    rep.add("clique", w.clique.format() if w.clique else "none")
    rep.add("partition_code_possible", w.size >= 1 << args.dim)
    if args.certificate and w.clique:
        write_certificate(args.certificate, w.clique, Alphabet.standard(k))
    if args.target is not None and w.certified and w.size != args.target:
        rep.status = EXIT_MISMATCH
    if not w.certified:
        rep.status = EXIT_BUDGET


def cmd_rigidity(args, rep: Report, budget: Budget) -> None:
    from .rigidity import INCONCLUSIVE, find_equivalent_codes
    alphabet, V = _read_code(args.input)
    k = _alphabet(args, alphabet.k).k if args.alphabet else alphabet.k
    r = find_equivalent_codes(V, k, limit=args.limit, budget=budget)
    rep.add("code", V.format(alphabet))
    rep.add("classes", k)
    rep.add("verdict", r.verdict)
    rep.add("candidates", r.candidates)
    for j, W in enumerate(r.witnesses):
        rep.add(f"witness {j + 1}", W.format(alphabet))
    if r.verdict == INCONCLUSIVE:
        rep.status = EXIT_BUDGET


def _default_partition_code(k: int) -> Code:
    # first coordinate splits a / a', the second uses the remaining classes
    if k == 1:
        return Code.parse("{aa;aa';a'a;a'a'}")
    if k == 2:
        return Code.parse("{ab;ab';a'a;a'a'}")
    return Code.parse("{ab;ab';a'c;a'c'}")


def cmd_tiling(args, rep: Report, budget: Budget) -> None:
    from . import tiling as T
    try:
        if args.action == "realize":
            if args.input:
                alphabet, U = _read_code(args.input)
            else:
                alphabet, U = None, None
            offs = _parse_fractions(args.offsets) if args.offsets else [Fraction(0)]
            k = len(offs)
            if U is None:
                U = _default_partition_code(k)
            imap = T.IntervalMap.uniform(U.d, offs)
            til = T.realize_tiling(U, imap, cap=args.cap)
            rep.add("code", U.format(alphabet))
            rep.add("offsets", ",".join(str(o) for o in offs))
            rep.add("valid", True)
            rep.add("twin_pairs", len(T.tiling_twin_pairs(til)))
            for t in til.translations:
                rep.add("t", " ".join(str(x) for x in t))
            if args.tiling_out:
                T.write_tiling(args.tiling_out, til)
        else:
            if not args.input:
                raise InputError("--in is required")
            try:
                til = T.read_tiling(args.input)
            except OSError as e:
                raise InputError(f"cannot read {args.input}: {e.strerror}") from e
            if args.action == "validate":
                dfx = T.tiling_defects(til, cap=args.cap)
                rep.add("cubes", len(til))
                rep.add("denominator", til.denominator)
                rep.add("uncovered_cells", dfx.uncovered)
                rep.add("overlapping_cells", dfx.overlapped)
                rep.add("valid", bool(dfx))
                if not dfx:
                    rep.status = EXIT_MISMATCH
            else:
                st = T.tiling_r_stats(til, args.sample_denominator, cap=args.cap)
                rep.add("r_minus", st.r_minus)
                rep.add("r_plus", st.r_plus)
                rep.add("sample_grid", f"1/{st.denominator} with midpoints")
                rep.add("samples", st.samples)
    except T.TilingError as e:
        rep.add("valid", False)
        rep.add("error", str(e))
        rep.status = EXIT_MISMATCH


def cmd_cover_word(args, rep: Report, budget: Budget) -> None:
    from .enumeration import cover_word
    alphabet = _alphabet(args)
    try:
        u = alphabet.parse_word(args.word)
    except PolyboxError as e:
        raise InputError(str(e)) from e
    fam = cover_word(u, args.size, alphabet.k, budget=budget)
    rep.add("target", alphabet.format(u))
    rep.add("size", args.size)
    rep.add("covers", len(fam))
    if args.list:
        for C in fam.members:
            rep.add("cover", C.format(alphabet))


COMMANDS = {
    "verify-tables": cmd_verify_tables,
    "census": cmd_census,
    "pipeline-ke2": cmd_pipeline,
    "clique": cmd_clique,
    "rigidity": cmd_rigidity,
    "tiling": cmd_tiling,
    "cover-word": cmd_cover_word,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help="class names, e.g. 'a b c'")
    common.add_argument("--dim", type=int)
    common.add_argument("--budget-nodes", type=int)
    common.add_argument("--budget-seconds", type=float)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--manifest", help="manifest path (default: <out>.manifest.json, else stderr)")
    common.add_argument("--format", choices=("text", "json-lines"), default="text")

    p = argparse.ArgumentParser(prog="polybox", description="Exact computations with polybox codes.")
    p.add_argument("--version", action="version", version=f"polybox {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-tables", parents=[common], help="regenerate both tables and diff them")
    s = sub.add_parser("census", parents=[common], help="count twin pair free covers of b...b")
    s.add_argument("--sizes", help="lo..hi")
    s.add_argument("--expand-orbits", action="store_true", help="list every class representative")
    s.add_argument("--progress", action="store_true", help="progress lines on stderr")
    s = sub.add_parser("pipeline-ke2", parents=[common], help="two-level cover closure")
    s.add_argument("--progress", action="store_true", help="progress lines on stderr")
    s = sub.add_parser("clique", parents=[common], help="maximum Keller graph clique")
    s.add_argument("--classes", type=int)
    s.add_argument("--target", type=int)
    s.add_argument("--no-symmetry", action="store_true")
    s.add_argument("--allow-twins", action="store_true", help="dichotomy graph instead")
    s.add_argument("--certificate")
    s = sub.add_parser("rigidity", parents=[common], help="search for codes with the same union")
    s.add_argument("--in", dest="input")
    s.add_argument("--limit", type=int, default=None)
    s = sub.add_parser("tiling", parents=[common], help="torus tilings from partition codes")
    s.add_argument("action", choices=("realize", "validate", "stats"))
    s.add_argument("--in", dest="input")
    s.add_argument("--offsets", help="class offsets, e.g. 0,1/3,1/2")
    s.add_argument("--tiling-out")
    s.add_argument("--cap", type=int, default=60, help="denominator cap")
    s.add_argument("--sample-denominator", type=int, default=1)
    s = sub.add_parser("cover-word", parents=[common], help="covers of one word")
    s.add_argument("word")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--list", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    rep = Report(args.command)
    budget = _budget(args)
    t0 = time.monotonic()
    try:
        COMMANDS[args.command](args, rep, budget)
    except BudgetExceeded as e:
        rep.add("budget", f"exhausted: {e}")
        rep.status = EXIT_BUDGET
    except (InputError, PolyboxError) as e:
        print(f"polybox: {e}", file=sys.stderr)
        return EXIT_INPUT
    payload = rep.render(args.format).encode()
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode())
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("out", "manifest", "format", "budget_nodes", "budget_seconds")}
    inputs = {}
    if getattr(args, "input", None):
        inputs[args.input] = _file_digest(args.input)
    man = RunManifest(args.command, params, inputs,
                      {"nodes": budget.max_nodes, "seconds": budget.max_seconds, "used_nodes": budget.nodes},
                      round(time.monotonic() - t0, 3), sha256_bytes(payload), rep.status)
    target = args.manifest or (args.out + ".manifest.json" if args.out else None)
    if target:
        Path(target).write_text(man.to_json())
    else:
        sys.stderr.write(man.to_json())
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
