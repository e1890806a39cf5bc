"""Command-line interface.

Exit codes: 0 accepted / realized / verified / exists, 1 rejected /
nonexistent / verification failed, 2 usage or parse error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from .checker import check_h_realizable
from .core import (ContractViolation, DegreeSequence, FactorShape,
                   InvariantError, LabelledGraph, Verdict, verify_realization)
from .factorize import UnsupportedEvenH, extract_matchings
from .oracle import (CapExceeded, RetryBudgetExceeded, decide_exists,
                     gen_sequence, sweep_equivalence)
from .realizer import InvariantViolation, StuckWithDeficiency, realize

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class ParseError(ValueError):
    def __init__(self, position: int, token: str):
        super().__init__(f"bad token {token!r} at position {position}")
        self.position = position
        self.token = token


def _read_text(text: str) -> str:
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def parse_degrees(text: str) -> list[int]:
    """Split comma/whitespace separated integers; positions are 1-based."""
    tokens = [t for t in re.split(r"[,\s]+", _read_text(text).strip()) if t]
    if not tokens:
        raise ParseError(1, "")
    out = []
    for pos, tok in enumerate(tokens, 1):
        if not re.fullmatch(r"[+-]?\d+", tok):
            raise ParseError(pos, tok)
        out.append(int(tok))
    return out


def parse_sequence(text: str, h: int = 0) -> DegreeSequence:
    return DegreeSequence(parse_degrees(text), h)


def emit_graph(g: LabelledGraph, shape: FactorShape, fmt: str = "edgelist") -> str:
    h_edges, rest = [], []
    for u, v in g.edges():
        (h_edges if shape.is_h_edge(u, v) else rest).append((u, v))
    if fmt == "edgelist":
        lines = [f"{g.n} {g.m} {shape.h}"]
        lines += [f"{u} {v}" for u, v in h_edges + rest]
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        lines = ["graph G {"]
        for b, blk in enumerate(shape.blocks(), 1):
            members = "; ".join(str(v) for v in blk)
            lines.append(f'  subgraph cluster_{b} {{ label="V{b}"; {members}; }}')
        lines += [f"  {u} -- {v} [style=bold];" for u, v in h_edges]
        lines += [f"  {u} -- {v};" for u, v in rest]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def read_edgelist(text: str) -> tuple[LabelledGraph, int]:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise ValueError("edgelist header must be 'n m h'")
    n, m, h = (int(x) for x in rows[0])
    if len(rows) - 1 != m:
        raise ValueError(f"header announces {m} edges, found {len(rows) - 1}")
    g = LabelledGraph(n)
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"bad edge line {' '.join(row)!r}")
        g.add_edge(int(row[0]), int(row[1]))
    return g, h


def _verdict_json(v: Verdict) -> str:
    return json.dumps(v.to_dict(), separators=(",", ":"))


def _cmd_check(args) -> int:
    verdict = check_h_realizable(parse_degrees(args.seq), args.h)
    print(_verdict_json(verdict))
    return EXIT_OK if verdict.accepted else EXIT_NO


def _realize_or_reject(args):
    degrees = parse_degrees(args.seq)
    verdict = check_h_realizable(degrees, args.h)
    if not verdict.accepted:
        print(_verdict_json(verdict))
        return None, None
    seq = DegreeSequence(degrees, args.h)
    return seq, realize(seq, trace=bool(getattr(args, "trace", None)),
                        audit=getattr(args, "audit", False))


def _cmd_realize(args) -> int:
    seq, report = _realize_or_reject(args)
    if report is None:
        return EXIT_NO
    if args.trace:
        Path(args.trace).write_text("".join(line + "\n" for line in report.trace))
    sys.stdout.write(emit_graph(report.graph, seq.shape(), args.format))
    return EXIT_OK


def _cmd_verify(args) -> int:
    seq = parse_sequence(args.seq, args.h)
    g, h = read_edgelist(Path(args.graph).read_text())
    if h != args.h:
        raise ContractViolation(f"graph file declares h={h}, --h is {args.h}")
    report = verify_realization(g, seq, FactorShape(args.h, g.n))
    print(json.dumps({"ok": report.ok, "degrees_match": report.degrees_match,
                      "spanning": report.spanning, "simple": report.simple,
                      "first_mismatch": report.first_mismatch},
                     separators=(",", ":")))
    return EXIT_OK if report.ok else EXIT_NO


def _cmd_oracle(args) -> int:
    if args.sweep:
        hs = [int(x) for x in str(args.h).split(",")]
        report = sweep_equivalence(hs, args.nmax, jobs=args.jobs)
        sys.stdout.write(report.to_text())
        return EXIT_OK if report.disagreements == 0 else EXIT_NO
    if args.seq is None:
        raise ContractViolation("oracle needs SEQ or --sweep")
    seq = parse_sequence(args.seq, int(args.h))
    exists = decide_exists(seq)
    print(json.dumps({"exists": exists}, separators=(",", ":")))
    return EXIT_OK if exists else EXIT_NO


def _cmd_matchings(args) -> int:
    if args.h % 2 == 0:
        raise UnsupportedEvenH(f"h={args.h} is even; only odd h is supported")
    seq, report = _realize_or_reject(args)
    if report is None:
        return EXIT_NO
    for t, matching in enumerate(extract_matchings(report.graph, seq.shape()), 1):
        print(f"M{t}: " + " ".join(f"{u}-{v}" for u, v in matching))
    return EXIT_OK


def _cmd_gen(args) -> int:
    seq = gen_sequence(args.n, args.h, args.seed)
    print(",".join(str(d) for d in seq.degrees))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfactor",
        description="Degree sequences realizable with a spanning clique factor.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate the realizability conditions")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("seq", help="comma/space separated degrees, or @file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("realize", help="construct a realization")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("seq")
    p.add_argument("--format", choices=("edgelist", "dot"), default="edgelist")
    p.add_argument("--trace", metavar="PATH", help="write the move log here")
    p.add_argument("--audit", action="store_true",
                   help="check every invariant after each move (slow)")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("verify", help="check a graph file against a sequence")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("seq")
    p.add_argument("--graph", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="brute-force existence or a full sweep")
    p.add_argument("--h", required=True, help="h, or a comma list with --sweep")
    p.add_argument("seq", nargs="?")
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("matchings", help="h disjoint perfect matchings (odd h)")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("seq")
    p.set_defaults(func=_cmd_matchings)

    p = sub.add_parser("gen", help="seeded accepted sequence")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_gen)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (InvariantViolation, StuckWithDeficiency) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except RetryBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO
    except (ParseError, InvariantError, ContractViolation, UnsupportedEvenH,
            CapExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
