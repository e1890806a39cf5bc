import random
from collections import Counter
from itertools import combinations

import pytest

from hfactor.checker import check_h_realizable
from hfactor.core import DegreeSequence, FactorShape, LabelledGraph
from hfactor.realizer import Subrealization, critical_index


def brute_force_count(degrees, h):
    """Count realizations by trying every subset of the non-H pairs.

    Deliberately naive: no pruning, no shared code with the oracle module.
    """
    n = len(degrees)
    if n % (h + 1):
        return 0
    pairs = list(combinations(range(n), 2))
    in_h = [p for p in pairs if p[0] // (h + 1) == p[1] // (h + 1)]
    free = [p for p in pairs if p not in in_h]
    base = [0] * n
    for u, v in in_h:
        base[u] += 1
        base[v] += 1
    target = list(degrees)
    count = 0
    for mask in range(1 << len(free)):
        deg = base[:]
        for j, (u, v) in enumerate(free):
            if mask >> j & 1:
                deg[u] += 1
                deg[v] += 1
        count += deg == target
    return count


def subset_histogram(n, h):
    """Map every degree tuple to its number of realizations on n labels.

    One pass over all subsets of the non-H pairs, no pruning.
    """
    pairs = list(combinations(range(n), 2))
    in_h = [p for p in pairs if p[0] // (h + 1) == p[1] // (h + 1)]
    free = [p for p in pairs if p not in in_h]
    base = [0] * n
    for u, v in in_h:
        base[u] += 1
        base[v] += 1
    hist = Counter()
    for mask in range(1 << len(free)):
        deg = base[:]
        for j, (u, v) in enumerate(free):
            if mask >> j & 1:
                deg[u] += 1
                deg[v] += 1
        hist[tuple(deg)] += 1
    return hist


def build_state(degrees, h, extra=()):
    """A subrealization: H plus the given extra edges, targets ``degrees``."""
    seq = DegreeSequence(degrees, h)
    shape = seq.shape()
    g = LabelledGraph.factor(shape)
    for u, v in extra:
        g.add_edge(u, v)
    st = Subrealization(g, seq, shape, r=1)
    st.deficient = sum(1 << v for v in range(1, seq.n + 1)
                       if g.deg[v] < degrees[v - 1])
    st.r = critical_index(st)
    return st


def clone_state(st):
    return Subrealization(st.graph.copy(), st.targets, st.shape, st.r, [],
                          st.deficient)


def random_state(rng, n, h, r, p):
    """A random valid subrealization with critical index r, or None.

    Non-H edges only touch v_1..v_r, so the suffix stays H-pure; prefix
    targets equal current degrees and later targets are drawn so the whole
    sequence is non-increasing and accepted by the checker.
    """
    shape = FactorShape(h, n)
    g = LabelledGraph.factor(shape)
    for u in range(1, r + 1):
        for v in range(u + 1, n + 1):
            if not shape.is_h_edge(u, v) and rng.random() < p:
                g.add_edge(u, v)
    deg = g.deg
    if any(deg[i] < deg[i + 1] for i in range(1, r - 1)):
        return None
    hi = deg[r - 1] if r > 1 else n - 1
    if hi <= deg[r]:
        return None
    d = [0] * (n + 1)
    for i in range(1, r):
        d[i] = deg[i]
    d[r] = rng.randint(deg[r] + 1, hi)
    tail_max = [0] * (n + 2)
    for k in range(n, r, -1):
        tail_max[k] = max(tail_max[k + 1], deg[k])
    for k in range(r + 1, n + 1):
        if tail_max[k] > d[k - 1]:
            return None
        d[k] = rng.randint(tail_max[k], d[k - 1])
    degrees = d[1:]
    if not check_h_realizable(degrees, h).accepted:
        return None
    st = build_state(degrees, h)
    st.graph = g
    st.deficient = sum(1 << v for v in range(1, n + 1) if g.deg[v] < degrees[v - 1])
    st.r = critical_index(st)
    return st


def random_states(seed, count, max_n=16):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        h = rng.choice([0, 1, 2, 3, 4, 5])
        blocks = rng.randint(2, max(2, max_n // (h + 1)))
        n = blocks * (h + 1)
        r = rng.randint(1, n)
        st = random_state(rng, n, h, r, rng.random())
        if st is not None:
            out.append(st)
    return out


# Two hand-built states on which a deep Case 2 branch is the first move.
C24A_STATE = (
    (7, 7, 7, 7, 7, 7, 7, 7, 7, 6, 4, 3, 3, 3, 2), 2,
    [(1, 4), (1, 5), (1, 7), (1, 8), (1, 9), (6, 7), (6, 8), (6, 9), (4, 7),
     (4, 8), (4, 9), (4, 10), (5, 7), (5, 8), (5, 9), (5, 10), (2, 7), (2, 8),
     (2, 9), (2, 10), (2, 11), (3, 10), (3, 11), (3, 12), (3, 13), (3, 14)],
)
C26E_STATE = (
    (10,) * 12 + (4,) * 6 + (3, 3), 3,
    [(a, c) for a in (1, 2, 3) for c in (5, 6, 7)]
    + [(x, o) for x in (1, 2, 3, 5, 6, 7, 8) for o in (9, 10, 11, 12)]
    + [(4, 8)] + [(4, y) for y in range(13, 19)],
)


@pytest.fixture
def crafted():
    return {"C2.4a": C24A_STATE, "C2.6e": C26E_STATE}


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
