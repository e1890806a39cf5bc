"""Constructive realization of an accepted sequence.

The engine starts from H_h itself and repeatedly repairs the first deficient
vertex ``v_r`` (the critical index) with a small edge exchange. Every exchange
keeps H, keeps the degrees of ``v_1 .. v_{r-1}``, never overshoots a target,
and raises ``d(v_r)`` by one or two. It also keeps the suffix
``S = {v_{r+1}, ..., v_n}`` free of non-H edges, which is what lets the
counting argument close when no exchange is available.

Exchanges are tried in a fixed priority order (first applicable wins):

    Case1   add v_r v_k for a deficient non-neighbour v_k beyond r
    Case2   v_r misses some earlier v_i: the C2.* family of repairs
    Case3   some later v_k sees too few of v_1..v_r
    Case4   two earlier vertices are non-adjacent

Witness vertices are always scanned smallest label first, so a run is fully
deterministic. Each candidate is screened by :func:`_legal` before use.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .checker import check_h_realizable
from .core import (DegreeSequence, FactorShape, LabelledGraph, Move, Rule,
                   Verdict, bits, is_h_spanning, lowest, range_mask,
                   verify_realization)


class Unrealizable(ValueError):
    def __init__(self, verdict: Verdict):
        super().__init__(f"sequence rejected: {verdict.to_dict()}")
        self.verdict = verdict


class InvariantViolation(AssertionError):
    def __init__(self, invariant: str, move: Move | None, detail: str = ""):
        super().__init__(f"{invariant} broken by {move}: {detail}")
        self.invariant = invariant
        self.move = move


class StuckWithDeficiency(AssertionError):
    """No exchange applies although v_r is still deficient."""


class _Advance:
    def __repr__(self) -> str:
        return "AdvanceR"


ADVANCE = _Advance()


@dataclass
class Subrealization:
    graph: LabelledGraph
    targets: DegreeSequence
    shape: FactorShape
    r: int
    log: list[Move] = field(default_factory=list)
    deficient: int = 0  # bitset of v with d(v) < d_v

    @property
    def n(self) -> int:
        return self.graph.n

    def deficiency(self, v: int) -> int:
        return self.targets.degrees[v - 1] - self.graph.deg[v]

    def suffix_mask(self) -> int:
        return range_mask(self.r + 1, self.n)


@dataclass(frozen=True)
class Case2Context:
    i: int
    p: int
    q: int
    Vp: int
    Vq: int
    A: int
    B: int
    C: int
    D: int
    F: int


@dataclass
class EngineReport:
    moves: int
    per_rule: Counter
    graph: LabelledGraph
    trace: list[str] | None = None
    log: list[Move] | None = None


def critical_index(state: Subrealization) -> int:
    d, deg = state.targets.degrees, state.graph.deg
    for v in range(1, state.n + 1):
        if deg[v] < d[v - 1]:
            return v
    return state.n + 1


def initial_subrealization(seq: DegreeSequence) -> Subrealization:
    verdict = check_h_realizable(seq)
    if not verdict.accepted:
        raise Unrealizable(verdict)
    shape = seq.shape()
    g = LabelledGraph.factor(shape)
    st = Subrealization(g, seq, shape, r=1)
    st.deficient = sum(1 << v for v in range(1, seq.n + 1)
                       if g.deg[v] < seq.degrees[v - 1])
    st.r = critical_index(st)
    return st


# -- screening -----------------------------------------------------------


def _legal(st: Subrealization, move: Move) -> bool:
    """True when the exchange is a valid step from ``st``.

    Valid means: removed pairs are present non-H edges, added pairs are absent
    and stay out of S x S, v_1..v_{r-1} keep their degrees, d(v_r) rises by
    one or two, and nobody exceeds their target.
    """
    g, shape, r = st.graph, st.shape, st.r
    rows = g.rows
    seen = set()
    for u, v in move.removed:
        if u == v or (u, v) in seen or not (rows[u] >> v) & 1 or shape.is_h_edge(u, v):
            return False
        seen.add((u, v))
    for u, v in move.added:
        if u == v or (u, v) in seen or (rows[u] >> v) & 1:
            return False
        if u > r and v > r:
            return False
        seen.add((u, v))
    delta = move.degree_delta()
    if delta.get(r, 0) not in (1, 2):
        return False
    d = st.targets.degrees
    for v, dv in delta.items():
        if dv and v < r:
            return False
        if g.deg[v] + dv > d[v - 1]:
            return False
    return True


# -- Case 2 helpers ------------------------------------------------------


def _case2_context(st: Subrealization, i: int) -> Case2Context:
    shape, rows, r = st.shape, st.graph.rows, st.r
    p, q = shape.block_of(i), shape.block_of(r)
    Vp, Vq = shape.block_mask(p), shape.block_mask(q)
    Nr = rows[r]
    return Case2Context(
        i=i, p=p, q=q, Vp=Vp, Vq=Vq,
        A=Vp & ~Nr, B=Vp & Nr,
        C=Vq & range_mask(1, r), D=Vq & range_mask(r + 1, st.n),
        F=rows[i] & ~Nr)


def _companion(st: Subrealization, ctx: Case2Context) -> int | None:
    """A deficient v_k in v_r's block beyond r whose neighbours all lie in N[v_r]."""
    rows, r = st.graph.rows, st.r
    closed = rows[r] | (1 << r)
    for k in bits(st.deficient & ctx.D):
        if not rows[k] & ~closed:
            return k
    return None


def _companion_moves(st, ctx) -> Iterator[Move]:
    """Make a companion exist when the deficiency at v_r is exactly one."""
    rows, r, shape, i = st.graph.rows, st.r, st.shape, ctx.i
    closed_r = rows[r] | (1 << r)
    for k in bits(st.deficient & st.suffix_mask()):
        t = shape.block_of(k)
        if t != ctx.q:
            cross = rows[i] & shape.block_mask(t)
            for j in bits(cross):
                yield Move.make(Rule.C21A, [(i, j)], [(i, r)], i=i, k=k, j=j)
            if cross:
                continue
            free = rows[i] & ~(rows[k] | (1 << k)) & ~shape.h_neighbors(i)
            for ell in bits(free):
                if ell < r:
                    yield Move.make(Rule.C21B, [(ell, i)], [(ell, k), (i, r)],
                                    i=i, k=k, l=ell)
                else:
                    yield Move.make(Rule.C21B, [(ell, i)], [(i, r)], i=i, k=k, l=ell)
        else:
            for u3 in bits(rows[k] & ~closed_r):
                yield Move.make(Rule.C21C, [(u3, k)], [(u3, r)], k=k, u=u3)


def _claim_assertions(st, ctx, delta) -> list[str]:
    """Facts that must hold whenever the terminal exchange is reached."""
    h, r = st.shape.h, st.r
    rows = st.graph.rows
    size_c = ctx.C.bit_count()
    broken = []
    if size_c != h + 1:
        broken.append(f"|C|={size_c} != h+1")
    if r % (h + 1):
        broken.append(f"r={r} not block-final")
    if delta < 2:
        broken.append(f"deficiency {delta} < 2")
    if size_c < 3:
        broken.append(f"|C|={size_c} < 3")
    if ctx.B.bit_count() > size_c - 2:
        broken.append(f"|B|={ctx.B.bit_count()} > |C|-2")
    for vj in bits(ctx.Vp):
        if (rows[vj] & ctx.Vq).bit_count() > h:
            broken.append(f"|N(v_{vj}) & V_q| > h")
    return broken


def _case2_moves(st: Subrealization, ctx: Case2Context, audit: bool) -> Iterator[Move]:
    g, r, n = st.graph, st.r, st.n
    rows = g.rows
    i, Vp, Vq, A, B, C, D, F = ctx.i, ctx.Vp, ctx.Vq, ctx.A, ctx.B, ctx.C, ctx.D, ctx.F
    Nr = rows[r]
    closed_r = Nr | (1 << r)
    rbit = 1 << r
    delta = st.deficiency(r)
    outside = range_mask(1, n) & ~Vp & ~Vq

    comp = None
    if delta == 1:
        if audit and not st.deficient & st.suffix_mask():
            raise InvariantViolation("parity", None, "no second deficient vertex")
        comp = _companion(st, ctx)
        if comp is None:
            yield from _companion_moves(st, ctx)

    # F must stay inside A
    if audit and not F:
        raise InvariantViolation("claim-F", None, "F is empty")
    for ell in bits(F & ~Vp):
        if delta >= 2:
            yield Move.make(Rule.C22A, [(ell, i)], [(ell, r), (i, r)], i=i, l=ell)
        elif comp is not None:
            if (rows[i] >> comp) & 1:
                yield Move.make(Rule.C22B, [(i, comp)], [(i, r)], i=i, k=comp)
            else:
                yield Move.make(Rule.C22C, [(i, ell)], [(ell, r), (i, comp)],
                                i=i, k=comp, l=ell)

    # no edges between A and D
    for a in bits(A):
        for u in bits(rows[a] & D):
            yield Move.make(Rule.C23, [(a, u)], [(a, r)], a=a, u=u)

    # outside neighbours of A are seen by all of C
    for a in bits(A):
        for u in bits(rows[a] & outside):
            for j in bits(C & ~rows[u]):
                if j == r:
                    if delta >= 2:
                        yield Move.make(Rule.C24A, [(u, a)], [(a, r), (u, r)], a=a, u=u)
                    elif comp is not None:
                        yield Move.make(Rule.C24B, [(a, u)], [(u, r), (a, comp)],
                                        a=a, u=u, k=comp)
                    continue
                xs = rows[j] & ~closed_r
                if delta >= 2:
                    for x in bits(xs & ~(1 << a)):
                        yield Move.make(Rule.C24C, [(u, a), (j, x)],
                                        [(u, j), (a, r), (x, r)], a=a, u=u, j=j, x=x)
                elif comp is not None:
                    for x in bits(xs):
                        yield Move.make(Rule.C24D, [(u, a), (j, x)],
                                        [(u, j), (x, r), (a, comp)],
                                        a=a, u=u, j=j, x=x, k=comp)

    # degree balance between V_p and C
    for ell in bits(Vp):
        seen_c = (rows[ell] & C).bit_count()
        for m in bits(C):
            if seen_c >= (rows[m] & Vp).bit_count():
                continue
            if not (B >> ell) & 1:
                continue
            ws = rows[m] & ~closed_r
            for t in bits(C & ~rows[ell] & ~rbit & ~(1 << m)):
                vs = rows[t] & ~closed_r
                for u in bits(rows[ell] & ~rows[m] & outside):
                    if m == r:
                        if delta >= 2:
                            for v in bits(vs & ~(1 << u)):
                                yield Move.make(Rule.C26A, [(ell, u), (t, v)],
                                                [(ell, t), (u, r), (v, r)],
                                                l=ell, m=m, t=t, u=u, v=v)
                        elif comp is not None:
                            for v in bits(vs):
                                if v < r:
                                    yield Move.make(Rule.C26B, [(ell, u), (t, v)],
                                                    [(t, ell), (u, r), (v, comp)],
                                                    l=ell, m=m, t=t, u=u, v=v, k=comp)
                                else:
                                    yield Move.make(Rule.C26C, [(ell, u), (t, v)],
                                                    [(t, ell), (u, r)],
                                                    l=ell, m=m, t=t, u=u, v=v)
                    else:
                        if delta >= 2:
                            for v in bits(vs):
                                for w in bits(ws & ~(1 << v)):
                                    yield Move.make(
                                        Rule.C26E, [(ell, u), (t, v), (m, w)],
                                        [(ell, t), (u, m), (v, r), (w, r)],
                                        l=ell, m=m, t=t, u=u, v=v, w=w)
                        elif comp is not None:
                            for v in bits(vs):
                                for w in bits(ws):
                                    if v < r:
                                        yield Move.make(
                                            Rule.C26F, [(ell, u), (t, v), (m, w)],
                                            [(t, ell), (u, m), (w, r), (v, comp)],
                                            l=ell, m=m, t=t, u=u, v=v, w=w, k=comp)
                                    else:
                                        yield Move.make(
                                            Rule.C26G, [(ell, u), (t, v), (m, w)],
                                            [(t, ell), (u, m), (w, r)],
                                            l=ell, m=m, t=t, u=u, v=v, w=w)
                rule = Rule.C26D if m == r else Rule.C26H
                for u in bits(rows[ell] & D):
                    for v in bits(vs):
                        yield Move.make(rule, [(ell, u), (t, v)], [(t, ell), (v, r)],
                                        l=ell, m=m, t=t, u=u, v=v)

    # terminal exchange
    if audit:
        broken = _claim_assertions(st, ctx, delta)
        if broken:
            raise InvariantViolation("M8", None, "; ".join(broken))
    for u in bits(outside):
        into_p = rows[u] & Vp
        if into_p.bit_count() <= (rows[u] & Vq).bit_count():
            continue
        for ell in bits(into_p):
            for t in bits(Vq & ~rbit & ~rows[ell]):
                for m in bits(Vq & ~rbit & ~(1 << t) & ~rows[u]):
                    for v in bits(rows[t] & ~closed_r):
                        for w in bits(rows[m] & ~closed_r & ~(1 << v)):
                            yield Move.make(
                                Rule.C2FINAL, [(ell, u), (t, v), (m, w)],
                                [(ell, t), (u, m), (v, r), (w, r)],
                                l=ell, t=t, m=m, u=u, v=v, w=w)


# -- Cases 3 and 4 -------------------------------------------------------


def saturation_targets(st: Subrealization) -> list[tuple[int, int, int]]:
    """(k, |N(v_k) & {v_1..v_r}|, quota) for every k > r.

    The quota is min(r, d_k - #H-neighbours of v_k beyond r).
    """
    g, shape, r, n = st.graph, st.shape, st.r, st.n
    prefix = range_mask(1, r)
    suffix = range_mask(r + 1, n)
    d = st.targets.degrees
    out = []
    for k in range(r + 1, n + 1):
        quota = min(r, d[k - 1] - (shape.h_neighbors(k) & suffix).bit_count())
        out.append((k, (g.rows[k] & prefix).bit_count(), quota))
    return out


def _case3_moves(st: Subrealization) -> Iterator[Move]:
    rows, r = st.graph.rows, st.r
    closed_r = rows[r] | (1 << r)
    earlier = range_mask(1, r - 1)
    for k, count, quota in saturation_targets(st):
        if count >= quota:
            continue
        for i in bits(earlier & ~rows[k]):
            for j in bits(rows[i] & ~closed_r):
                yield Move.make(Rule.CASE3, [(j, i)], [(j, r), (i, k)], i=i, j=j, k=k)


def _case4_moves(st: Subrealization) -> Iterator[Move]:
    rows, r = st.graph.rows, st.r
    closed_r = rows[r] | (1 << r)
    for i in range(1, r - 1):
        for j in bits(range_mask(i + 1, r - 1) & ~rows[i]):
            for ell in bits(rows[i] & ~closed_r):
                for m in bits(rows[j] & ~closed_r):
                    yield Move.make(Rule.CASE4, [(ell, i), (m, j)], [(i, j), (ell, r)],
                                    i=i, j=j, l=ell, m=m)


def _candidates(st: Subrealization, audit: bool) -> Iterator[Move]:
    rows, r = st.graph.rows, st.r
    k = lowest(st.deficient & ~rows[r] & range_mask(r + 1, st.n))
    if k:
        yield Move.make(Rule.CASE1, [], [(r, k)], k=k)
        return
    missed = range_mask(1, r - 1) & ~rows[r]
    if missed:
        yield from _case2_moves(st, _case2_context(st, lowest(missed)), audit)
        return
    yield from _case3_moves(st)
    yield from _case4_moves(st)


def _stuck_report(st: Subrealization) -> str:
    r = st.r
    rows = st.graph.rows
    prefix_clique = all((rows[v] & range_mask(1, r) & ~(1 << v)).bit_count() == r - 1
                        for v in range(1, r + 1))
    saturated = all(c == q for _, c, q in saturation_targets(st))
    return (f"r={r} d(v_r)={st.graph.deg[r]} d_r={st.targets.degrees[r - 1]} "
            f"prefix clique={prefix_clique} later quotas met={saturated}")


def select_move(state: Subrealization, audit: bool = False) -> Move | _Advance:
    """The next exchange at the critical index, or ADVANCE if v_r is done."""
    r = state.r
    if r > state.n or state.deficiency(r) <= 0:
        return ADVANCE
    for move in _candidates(state, audit):
        if _legal(state, move):
            return move
    raise StuckWithDeficiency(_stuck_report(state))


# -- application ---------------------------------------------------------


def _s_pure(st: Subrealization) -> bool:
    suffix = st.suffix_mask()
    rows, shape = st.graph.rows, st.shape
    return all(rows[v] & suffix == shape.h_neighbors(v) & suffix
               for v in range(st.r + 1, st.n + 1))


def apply_move(state: Subrealization, move: Move, audit: bool = False) -> Subrealization:
    """Apply ``move`` in place, refresh the critical index, and log it."""
    g, d = state.graph, state.targets.degrees
    r0 = state.r
    if audit:
        if not _legal(state, move):
            raise InvariantViolation("legal", move, f"not a valid step at r={r0}")
        before = g.deg[r0]
    try:
        for u, v in move.removed:
            g.remove_edge(u, v)
        for u, v in move.added:
            g.add_edge(u, v)
    except ValueError as exc:
        raise InvariantViolation("apply", move, str(exc)) from exc
    for v in move.degree_delta():
        if g.deg[v] < d[v - 1]:
            state.deficient |= 1 << v
        else:
            state.deficient &= ~(1 << v)
    r, n = r0, state.n
    while r <= n and g.deg[r] >= d[r - 1]:
        r += 1
    state.r = r
    state.log.append(move)
    if audit:
        _audit(state, move, r0, before)
    return state


def _audit(st: Subrealization, move: Move, r0: int, before: int) -> None:
    g, d, shape = st.graph, st.targets.degrees, st.shape
    for v in range(1, r0):
        if g.deg[v] != d[v - 1]:
            raise InvariantViolation("M1", move, f"v_{v} changed")
    gain = g.deg[r0] - before
    if gain not in (1, 2) or g.deg[r0] > d[r0 - 1]:
        raise InvariantViolation("M2", move, f"d(v_r) moved by {gain}")
    if any(shape.is_h_edge(u, v) for u, v in move.removed) or not is_h_spanning(g, shape):
        raise InvariantViolation("M3", move, "H edge lost")
    if not _s_pure(st):
        raise InvariantViolation("M4", move, f"non-H edge inside S at r={st.r}")
    for v in range(1, st.n + 1):
        if g.deg[v] > d[v - 1]:
            raise InvariantViolation("M5", move, f"v_{v} above target")
    if not g.is_simple():
        raise InvariantViolation("cache", move, "degree cache or symmetry broken")
    expected = sum(1 << v for v in range(1, st.n + 1) if g.deg[v] < d[v - 1])
    if expected != st.deficient:
        raise InvariantViolation("cache", move, "deficiency bitset out of date")


def format_move(seq_no: int, move: Move, r: int, deg_r: int) -> str:
    rem = ",".join(f"{u}-{v}" for u, v in move.removed)
    add = ",".join(f"{u}-{v}" for u, v in move.added)
    return f"{seq_no} {move.rule} -{rem} +{add} r={r} deg(v_r)={deg_r}"


def realize(seq: DegreeSequence, trace: bool = False, audit: bool = False) -> EngineReport:
    """Run the exchange engine to completion and return the realization."""
    st = initial_subrealization(seq)
    lines: list[str] | None = [] if trace else None
    per_rule: Counter = Counter()
    budget = seq.total()
    moves = 0
    while st.r <= st.n:
        move = select_move(st, audit)
        if move is ADVANCE:
            st.r += 1
            continue
        r = st.r
        apply_move(st, move, audit)
        moves += 1
        per_rule[move.rule.value] += 1
        if lines is not None:
            lines.append(format_move(moves, move, r, st.graph.deg[r]))
        if moves > budget:
            raise InvariantViolation("M6", move, f"more than {budget} moves")
    if audit:
        report = verify_realization(st.graph, seq)
        if not report.ok:
            raise InvariantViolation("final", None, str(report))
    return EngineReport(moves, per_rule, st.graph, lines,
                        st.log if trace else None)
