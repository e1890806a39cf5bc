"""Domain types shared by every module: degree sequences, the clique-factor
shape, the bitset-backed labelled graph, moves, verdicts, and realization
verification.

Vertices are labelled 1..n throughout. Graph rows are Python integers used as
bitsets, with bit ``v`` standing for vertex ``v`` (bit 0 is never set).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_VERTICES = 20000


class ContractViolation(ValueError):
    """Raised when an operation's precondition is not met by its arguments."""


class InvariantError(ValueError):
    """A degree sequence breaks one of its construction invariants.

    ``which`` names the failed invariant using the verdict vocabulary
    (``NotSorted``, ``BelowH``, ``DegreeCeiling``, ...).
    """

    def __init__(self, which: str, message: str):
        super().__init__(f"{which}: {message}")
        self.which = which


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> int:
    """Position of the lowest set bit, or 0 when ``mask`` is empty."""
    return (mask & -mask).bit_length() - 1 if mask else 0


def range_mask(lo: int, hi: int) -> int:
    """Bitset of labels lo..hi inclusive (empty when lo > hi)."""
    if lo > hi:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << lo


def norm_pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class DegreeSequence:
    """A non-increasing target degree sequence together with ``h``.

    Construction validates every invariant and raises :class:`InvariantError`
    on the first one that fails. Use :func:`hfactor.checker.check_h_realizable`
    on raw lists when a verdict is wanted instead of an exception.
    """

    degrees: tuple[int, ...]
    h: int = 0

    def __init__(self, degrees: Iterable[int], h: int = 0):
        degs = tuple(int(d) for d in degrees)
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "h", int(h))
        if self.h < 0:
            raise InvariantError("BelowH", f"h must be non-negative, got {h}")
        if not degs:
            raise InvariantError("Empty", "a degree sequence needs n >= 1")
        for i in range(len(degs) - 1):
            if degs[i] < degs[i + 1]:
                raise InvariantError(
                    "NotSorted", f"d_{i + 1}={degs[i]} < d_{i + 2}={degs[i + 1]}")
        if degs[-1] < self.h or degs[-1] < 0:
            raise InvariantError(
                "BelowH", f"d_n={degs[-1]} is below h={self.h}")
        if degs[0] > len(degs) - 1:
            raise InvariantError(
                "DegreeCeiling", f"d_1={degs[0]} exceeds n-1={len(degs) - 1}")

    @property
    def n(self) -> int:
        return len(self.degrees)

    def __getitem__(self, i: int) -> int:
        """1-indexed access: ``seq[i]`` is d_i."""
        if not 1 <= i <= len(self.degrees):
            raise IndexError(i)
        return self.degrees[i - 1]

    def __len__(self) -> int:
        return len(self.degrees)

    def total(self) -> int:
        return sum(self.degrees)

    def shape(self) -> "FactorShape":
        return FactorShape(self.h, self.n)


@dataclass(frozen=True)
class FactorShape:
    """The clique factor H_h: blocks of h+1 consecutive labels."""

    h: int
    n: int

    def __post_init__(self):
        if self.h < 0 or self.n < 1:
            raise ContractViolation(f"invalid shape h={self.h}, n={self.n}")
        if self.n % (self.h + 1):
            raise ContractViolation(
                f"n={self.n} is not a multiple of h+1={self.h + 1}")

    @property
    def size(self) -> int:
        return self.h + 1

    @property
    def num_blocks(self) -> int:
        return self.n // (self.h + 1)

    def block_of(self, k: int) -> int:
        return (k - 1) // (self.h + 1) + 1

    def residue(self, k: int) -> int:
        return k % (self.h + 1)

    def block(self, b: int) -> range:
        start = (b - 1) * (self.h + 1) + 1
        return range(start, start + self.h + 1)

    def block_mask(self, b: int) -> int:
        start = (b - 1) * (self.h + 1) + 1
        return range_mask(start, start + self.h)

    def blocks(self) -> list[range]:
        return [self.block(b) for b in range(1, self.num_blocks + 1)]

    def h_neighbors(self, v: int) -> int:
        """Bitset of v's neighbours in H."""
        return self.block_mask(self.block_of(v)) & ~(1 << v)

    def is_h_edge(self, u: int, v: int) -> bool:
        return u != v and self.block_of(u) == self.block_of(v)

    def h_edges(self) -> list[tuple[int, int]]:
        out = []
        for blk in self.blocks():
            for a in blk:
                for b in blk:
                    if a < b:
                        out.append((a, b))
        return out


class LabelledGraph:
    """Simple undirected graph on labels 1..n with bitset rows.

    ``rows[v]`` holds the neighbourhood of v as an integer bitset and
    ``deg[v]`` caches its popcount. Index 0 of both lists is unused.
    """

    __slots__ = ("n", "rows", "deg", "m")

    def __init__(self, n: int, max_vertices: int = DEFAULT_MAX_VERTICES):
        if n < 0:
            raise ContractViolation("vertex count must be non-negative")
        if n > max_vertices:
            raise ContractViolation(
                f"n={n} exceeds the configured cap of {max_vertices} vertices")
        self.n = n
        self.rows = [0] * (n + 1)
        self.deg = [0] * (n + 1)
        self.m = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "LabelledGraph":
        g = cls(n)
        for u, v in edges:
            if not g.has_edge(u, v):
                g.add_edge(u, v)
        return g

    @classmethod
    def complete(cls, n: int) -> "LabelledGraph":
        return cls.from_edges(
            n, ((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))

    @classmethod
    def factor(cls, shape: FactorShape) -> "LabelledGraph":
        """The graph H itself."""
        return cls.from_edges(shape.n, shape.h_edges())

    def copy(self) -> "LabelledGraph":
        g = LabelledGraph.__new__(LabelledGraph)
        g.n = self.n
        g.rows = list(self.rows)
        g.deg = list(self.deg)
        g.m = self.m
        return g

    def _check(self, u: int, v: int) -> None:
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ContractViolation(f"pair {u}-{v} outside 1..{self.n}")
        if u == v:
            raise ContractViolation(f"loop at {u} is not allowed")

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def add_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if (self.rows[u] >> v) & 1:
            raise ContractViolation(f"edge {u}-{v} already present")
        self.rows[u] |= 1 << v
        self.rows[v] |= 1 << u
        self.deg[u] += 1
        self.deg[v] += 1
        self.m += 1

    def remove_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if not (self.rows[u] >> v) & 1:
            raise ContractViolation(f"edge {u}-{v} not present")
        self.rows[u] &= ~(1 << v)
        self.rows[v] &= ~(1 << u)
        self.deg[u] -= 1
        self.deg[v] -= 1
        self.m -= 1

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.deg[v]

    def degrees(self) -> list[int]:
        """Degrees d(v_1)..d(v_n) as a 0-based list."""
        return self.deg[1:]

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(1, self.n + 1):
            for v in bits(self.rows[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def is_simple(self) -> bool:
        """Re-audit symmetry, irreflexivity and the degree cache."""
        if self.rows[0] or any(r & 1 for r in self.rows):
            return False
        m2 = 0
        for u in range(1, self.n + 1):
            row = self.rows[u]
            if (row >> u) & 1 or row >> (self.n + 1):
                return False
            if row.bit_count() != self.deg[u]:
                return False
            for v in bits(row):
                if not (self.rows[v] >> u) & 1:
                    return False
            m2 += self.deg[u]
        return m2 == 2 * self.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __repr__(self) -> str:
        return f"LabelledGraph(n={self.n}, m={self.m})"


class Rule(str, Enum):
    CASE1 = "Case1"
    C21A = "C2.1a"
    C21B = "C2.1b"
    C21C = "C2.1c"
    C22A = "C2.2a"
    C22B = "C2.2b"
    C22C = "C2.2c"
    C23 = "C2.3"
    C24A = "C2.4a"
    C24B = "C2.4b"
    C24C = "C2.4c"
    C24D = "C2.4d"
    C26A = "C2.6a"
    C26B = "C2.6b"
    C26C = "C2.6c"
    C26D = "C2.6d"
    C26E = "C2.6e"
    C26F = "C2.6f"
    C26G = "C2.6g"
    C26H = "C2.6h"
    C2FINAL = "C2.final"
    CASE3 = "Case3"
    CASE4 = "Case4"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Move:
    """One edge exchange: remove ``removed`` then add ``added``."""

    rule: Rule
    removed: tuple[tuple[int, int], ...]
    added: tuple[tuple[int, int], ...]
    witnesses: dict = field(default_factory=dict, compare=False)

    @classmethod
    def make(cls, rule: Rule, removed, added, **witnesses) -> "Move":
        return cls(rule,
                   tuple(norm_pair(*p) for p in removed),
                   tuple(norm_pair(*p) for p in added),
                   witnesses)

    def degree_delta(self) -> dict[int, int]:
        delta: dict[int, int] = {}
        for u, v in self.removed:
            delta[u] = delta.get(u, 0) - 1
            delta[v] = delta.get(v, 0) - 1
        for u, v in self.added:
            delta[u] = delta.get(u, 0) + 1
            delta[v] = delta.get(v, 0) + 1
        return delta


FAILURE_KINDS = ("NotSorted", "BelowH", "ParityOdd", "NotMultiple",
                 "DegreeCeiling", "Inequality")


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    failure: str | None = None
    k: int | None = None
    lhs: int | None = None
    rhs: int | None = None

    def __post_init__(self):
        if self.accepted != (self.failure is None):
            raise ContractViolation("accepted verdicts carry no failure kind")
        if self.failure is not None and self.failure not in FAILURE_KINDS:
            raise ContractViolation(f"unknown failure kind {self.failure!r}")
        if self.failure == "Inequality":
            if self.k is None or self.lhs is None or self.rhs is None:
                raise ContractViolation("Inequality verdict needs k, lhs, rhs")
            if self.lhs <= self.rhs:
                raise ContractViolation("Inequality verdict needs lhs > rhs")

    def __bool__(self) -> bool:
        return self.accepted

    def to_dict(self) -> dict:
        return {"accepted": self.accepted, "failure": self.failure,
                "k": self.k, "lhs": self.lhs, "rhs": self.rhs}


ACCEPT = Verdict(True)


@dataclass(frozen=True)
class VerifyReport:
    degrees_match: bool
    spanning: bool
    simple: bool
    first_mismatch: int | None = None

    @property
    def ok(self) -> bool:
        return self.degrees_match and self.spanning and self.simple

    def __bool__(self) -> bool:
        return self.ok


def is_h_spanning(g: LabelledGraph, shape: FactorShape) -> bool:
    """True iff every within-block pair of distinct labels is an edge of g."""
    if g.n != shape.n:
        raise ContractViolation(f"graph has {g.n} vertices, shape has {shape.n}")
    for v in range(1, g.n + 1):
        hn = shape.h_neighbors(v)
        if g.rows[v] & hn != hn:
            return False
    return True


def verify_realization(g: LabelledGraph, seq: DegreeSequence | Sequence[int],
                       shape: FactorShape | None = None) -> VerifyReport:
    """Check g against the targets: degrees, H-spanning, and simplicity."""
    degrees = seq.degrees if isinstance(seq, DegreeSequence) else tuple(seq)
    if shape is None:
        if not isinstance(seq, DegreeSequence):
            raise ContractViolation("a shape is required for raw degree lists")
        shape = seq.shape()
    elif isinstance(seq, DegreeSequence) and seq.h != shape.h:
        raise ContractViolation(f"sequence h={seq.h} but shape h={shape.h}")
    if not (g.n == len(degrees) == shape.n):
        raise ContractViolation(
            f"size mismatch: graph {g.n}, sequence {len(degrees)}, shape {shape.n}")
    mismatch = None
    for i in range(1, g.n + 1):
        if g.rows[i].bit_count() != degrees[i - 1]:
            mismatch = i
            break
    return VerifyReport(degrees_match=mismatch is None,
                        spanning=is_h_spanning(g, shape),
                        simple=g.is_simple(),
                        first_mismatch=mismatch)
