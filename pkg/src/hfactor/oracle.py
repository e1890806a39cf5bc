"""Brute-force ground truth for small n.

The enumerator builds every labelled graph G containing H_h with prescribed
degrees. It walks the non-H pairs in lexicographic order, one vertex at a
time: vertex u picks its remaining neighbours among later vertices, after
which u is complete and never touched again. Branches die as soon as a later
vertex can no longer reach its target with the partners still available.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Iterator

from .checker import check_graphic, check_h_realizable
from .core import (ContractViolation, DegreeSequence, FactorShape,
                   LabelledGraph, is_h_spanning)

DEFAULT_ENUM_CAP = 12


class CapExceeded(RuntimeError):
    pass


class RetryBudgetExceeded(RuntimeError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get("HFACTOR_NMAX")
    return int(raw) if raw else DEFAULT_ENUM_CAP


def enumerate_realizations(seq: DegreeSequence, limit: int | None = None,
                           cap: int | None = None) -> Iterator[LabelledGraph]:
    """Yield every simple G containing H_h with d_G(v_i) = d_i.

    Stops after ``limit`` graphs when given. Graphs are yielded in a fixed
    order (lexicographic on the chosen neighbour sets).
    """
    cap = enumeration_cap() if cap is None else cap
    n, h = seq.n, seq.h
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    if n % (h + 1):
        return
    shape = FactorShape(h, n)
    res = [0] + [d - h for d in seq.degrees]
    if min(res[1:]) < 0 or sum(res) % 2:
        return
    block = [0] + [shape.block_of(v) for v in range(1, n + 1)]
    g = LabelledGraph.factor(shape)
    emitted = 0

    def feasible(after: int) -> bool:
        # every vertex beyond `after` must still find enough partners
        live = [v for v in range(after + 1, n + 1) if res[v] > 0]
        per_block: dict[int, int] = {}
        for v in live:
            per_block[block[v]] = per_block.get(block[v], 0) + 1
        total = len(live)
        for v in live:
            if res[v] > total - per_block[block[v]]:
                return False
        return True

    def search(u: int) -> Iterator[LabelledGraph]:
        if u > n:
            yield g.copy()
            return
        need = res[u]
        if need == 0:
            yield from search(u + 1)
            return
        cands = [j for j in range(u + 1, n + 1)
                 if res[j] > 0 and block[j] != block[u]]
        if need > len(cands):
            return
        res[u] = 0
        for combo in combinations(cands, need):
            for j in combo:
                res[j] -= 1
                g.add_edge(u, j)
            if feasible(u):
                yield from search(u + 1)
            for j in combo:
                res[j] += 1
                g.remove_edge(u, j)
        res[u] = need

    for graph in search(1):
        yield graph
        emitted += 1
        if limit is not None and emitted >= limit:
            return


def count_realizations(seq: DegreeSequence, cap: int | None = None) -> int:
    return sum(1 for _ in enumerate_realizations(seq, cap=cap))


def decide_exists(seq: DegreeSequence, cap: int | None = None) -> bool:
    return next(enumerate_realizations(seq, limit=1, cap=cap), None) is not None


def residual_graph(g: LabelledGraph, shape: FactorShape, k: int) -> LabelledGraph:
    """Delete the H-edges whose endpoints both lie beyond index k."""
    if not is_h_spanning(g, shape):
        raise ContractViolation("graph does not contain H as a spanning subgraph")
    if not 1 <= k <= g.n:
        raise ContractViolation(f"k={k} outside 1..{g.n}")
    out = g.copy()
    for u, v in shape.h_edges():
        if u > k and v > k:
            out.remove_edge(u, v)
    return out


def first_k_counting_holds(g: LabelledGraph, k: int) -> bool:
    """Erdos-Gallai counting over the first k labels of a concrete graph."""
    deg = g.degrees()
    lhs = sum(deg[:k])
    rhs = k * (k - 1) + sum(min(x, k) for x in deg[k:])
    return lhs <= rhs


def sorted_sequences(n: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    """All non-increasing length-n tuples with entries in [lo, hi]."""
    if lo > hi:
        return
    for combo in combinations_with_replacement(range(hi, lo - 1, -1), n):
        yield combo


@dataclass
class SweepRow:
    h: int
    n: int
    total: int = 0
    accepted: int = 0
    disagreements: list[tuple[int, ...]] = field(default_factory=list)
    graphic_mismatches: list[tuple[int, ...]] = field(default_factory=list)
    seconds: float = 0.0


@dataclass
class SweepReport:
    rows: list[SweepRow]

    @property
    def disagreements(self) -> int:
        return sum(len(r.disagreements) for r in self.rows)

    def to_text(self) -> str:
        width = max((r.n for r in self.rows), default=1)
        width = len(str(max(width - 1, 0)))
        lines = []
        for r in self.rows:
            lines.append(f"h={r.h} n={r.n} total={r.total} "
                         f"accepted={r.accepted} disagreements={len(r.disagreements)}")
            for seq in r.disagreements:
                lines.append(" ".join(str(d).zfill(width) for d in seq))
        return "\n".join(lines) + "\n"


def _sweep_cell(args: tuple[int, int, int]) -> SweepRow:
    h, n, cap = args
    row = SweepRow(h, n)
    t0 = time.perf_counter()
    for degs in sorted_sequences(n, h, n - 1):
        verdict = check_h_realizable(degs, h)
        exists = decide_exists(DegreeSequence(degs, h), cap=cap)
        row.total += 1
        row.accepted += verdict.accepted
        if verdict.accepted != exists:
            row.disagreements.append(degs)
        if h == 0 and check_graphic(degs) != verdict:
            row.graphic_mismatches.append(degs)
    row.seconds = time.perf_counter() - t0
    return row


def sweep_cells(hs: Iterable[int], ncap: int) -> list[tuple[int, int]]:
    return [(h, n) for h in sorted(set(hs)) for n in range(1, ncap + 1)
            if n % (h + 1) == 0]


def sweep_equivalence(hs: Iterable[int], ncap: int, jobs: int = 1,
                      cap: int | None = None) -> SweepReport:
    """Compare the checker with brute-force existence on every sequence
    with h <= d_i <= n-1, for each h and each admissible n <= ncap."""
    cap = enumeration_cap() if cap is None else cap
    if ncap > cap:
        raise CapExceeded(f"sweep cap {ncap} exceeds the enumeration cap {cap}")
    cells = [(h, n, cap) for h, n in sweep_cells(hs, ncap)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]
    rows.sort(key=lambda r: (r.h, r.n))
    return SweepReport(rows)


def gen_sequence(n: int, h: int, seed: int, max_tries: int = 100000) -> DegreeSequence:
    """Seeded rejection sampler for checker-accepted sequences."""
    if h < 0 or n < 1 or n % (h + 1):
        raise ContractViolation(f"n={n} is not a positive multiple of h+1={h + 1}")
    rng = random.Random(seed)
    for _ in range(max_tries):
        degs = sorted((rng.randint(h, n - 1) for _ in range(n)), reverse=True)
        if sum(degs) % 2:
            continue
        if check_h_realizable(degs, h).accepted:
            return DegreeSequence(degs, h)
    raise RetryBudgetExceeded(
        f"no accepted sequence for n={n}, h={h} after {max_tries} draws")
