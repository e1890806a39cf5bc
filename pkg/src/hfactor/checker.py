"""Exact evaluation of the realizability inequalities.

Three tests live here:

* ``check_graphic``       -- the Erdos-Gallai criterion (h = 0);
* ``check_h1``            -- the two-branch criterion for perfect matchings;
* ``check_h_realizable``  -- the general clique-factor criterion.

For a target ``(d_1, ..., d_n)`` and clique order ``h + 1`` the general
bound at index k, with ``s = k mod (h+1)``, is::

    k(k-1) + sum_{i=k+1}^{k+1+h-s} min(d_i - h + s, k)
           + sum_{i=k+h-s+2}^{n}    min(d_i - h, k)

Upper limits are truncated at n and empty sums are zero.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence

from .core import ACCEPT, DegreeSequence, Verdict


@dataclass(frozen=True)
class BoundBreakdown:
    k: int
    s: int
    quadratic: int
    block_tail: int
    remainder: int

    @property
    def rhs(self) -> int:
        return self.quadratic + self.block_tail + self.remainder


def residue(k: int, h: int) -> int:
    return k % (h + 1)


def _unpack(seq, h):
    if isinstance(seq, DegreeSequence):
        return list(seq.degrees), seq.h if h is None else h
    return [int(d) for d in seq], (0 if h is None else h)


def rhs_bound(seq: DegreeSequence | Sequence[int], k: int,
              h: int | None = None) -> BoundBreakdown:
    d, h = _unpack(seq, h)
    n = len(d)
    if not 1 <= k <= n:
        raise IndexError(f"k={k} outside 1..{n}")
    s = residue(k, h)
    tail_end = min(n, k + 1 + h - s)
    # d is 0-based: d[i-1] is d_i
    block_tail = sum(min(d[i - 1] - h + s, k) for i in range(k + 1, tail_end + 1))
    remainder = sum(min(d[i - 1] - h, k) for i in range(k + h - s + 2, n + 1))
    return BoundBreakdown(k, s, k * (k - 1), block_tail, remainder)


class _FastBound:
    """Right-hand sides in O(h + log n) per k.

    The remainder sum runs over a suffix of the non-increasing values
    ``e_i = d_i - h``; the ones that are at least k contribute k each and
    the rest contribute themselves, so a binary search plus suffix sums do.
    """

    def __init__(self, d: list[int], h: int):
        self.d = d
        self.h = h
        self.n = len(d)
        self.neg = [h - x for x in d]  # non-decreasing, for bisect
        # suffix[i] = sum_{j >= i} (d_j - h), 0-based, suffix[n] = 0
        tail = list(accumulate(reversed([x - h for x in d])))
        self.suffix = list(reversed(tail)) + [0]

    def rhs(self, k: int) -> int:
        d, h, n = self.d, self.h, self.n
        s = k % (h + 1)
        total = k * (k - 1)
        for i in range(k + 1, min(n, k + 1 + h - s) + 1):
            total += min(d[i - 1] - h + s, k)
        lo = k + h - s + 2  # 1-based start of the remainder sum
        if lo <= n:
            # first 0-based position >= lo-1 with d_i - h < k
            cut = bisect_left(self.neg, -k + 1, lo - 1, n)
            total += k * (cut - (lo - 1)) + self.suffix[cut]
        return total


def _scan(d: list[int], h: int, method: str) -> Verdict:
    n = len(d)
    lhs = 0
    if method == "fast":
        rhs_of = _FastBound(d, h).rhs
    elif method == "naive":
        rhs_of = lambda k: rhs_bound(d, k, h).rhs  # noqa: E731
    else:
        raise ValueError(f"unknown method {method!r}")
    for k in range(1, n + 1):
        lhs += d[k - 1]
        rhs = rhs_of(k)
        if lhs > rhs:
            return Verdict(False, "Inequality", k, lhs, rhs)
    return ACCEPT


def _is_sorted(d: list[int]) -> bool:
    return all(d[i] >= d[i + 1] for i in range(len(d) - 1))


def check_h_realizable(seq: DegreeSequence | Sequence[int], h: int | None = None,
                       method: str = "fast") -> Verdict:
    """Decide whether ``seq`` is realizable by a graph containing H_h.

    ``seq`` may be a :class:`DegreeSequence` or a raw list (then pass ``h``).
    Structural conditions are tested in the order NotSorted, BelowH,
    NotMultiple, ParityOdd, DegreeCeiling before the per-k inequalities; the
    verdict names the first failure found.
    """
    d, h = _unpack(seq, h)
    n = len(d)
    if not _is_sorted(d):
        return Verdict(False, "NotSorted")
    if n == 0 or d[-1] < h or d[-1] < 0:
        return Verdict(False, "BelowH")
    if n % (h + 1):
        return Verdict(False, "NotMultiple")
    if sum(d) % 2:
        return Verdict(False, "ParityOdd")
    if d[0] > n - 1:
        return Verdict(False, "DegreeCeiling")
    return _scan(d, h, method)


def slack_profile(seq: DegreeSequence | Sequence[int], h: int | None = None) -> list[int]:
    """rhs - lhs at every k = 1..n (negative entries are violations)."""
    d, h = _unpack(seq, h)
    fast = _FastBound(d, h)
    out, lhs = [], 0
    for k in range(1, len(d) + 1):
        lhs += d[k - 1]
        out.append(fast.rhs(k) - lhs)
    return out


def check_graphic(seq: DegreeSequence | Sequence[int]) -> Verdict:
    """Erdos-Gallai: even sum and sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)."""
    d = list(seq.degrees) if isinstance(seq, DegreeSequence) else [int(x) for x in seq]
    if not _is_sorted(d):
        return Verdict(False, "NotSorted")
    if sum(d) % 2:
        return Verdict(False, "ParityOdd")
    lhs = 0
    for k in range(1, len(d) + 1):
        lhs += d[k - 1]
        rhs = k * (k - 1) + sum(min(x, k) for x in d[k:])
        if lhs > rhs:
            return Verdict(False, "Inequality", k, lhs, rhs)
    return ACCEPT


def check_h1(seq: DegreeSequence | Sequence[int]) -> Verdict:
    """The perfect-matching criterion with separate even-k and odd-k bounds."""
    d = list(seq.degrees) if isinstance(seq, DegreeSequence) else [int(x) for x in seq]
    n = len(d)
    if not _is_sorted(d):
        return Verdict(False, "NotSorted")
    if n == 0 or d[-1] < 1:
        return Verdict(False, "BelowH")
    if n % 2:
        return Verdict(False, "NotMultiple")
    if sum(d) % 2:
        return Verdict(False, "ParityOdd")
    lhs = 0
    for k in range(1, n + 1):
        lhs += d[k - 1]
        if k % 2 == 0:
            rhs = k * (k - 1) + sum(min(x - 1, k) for x in d[k:])
        else:
            rhs = k * (k - 1)
            if k < n:
                rhs += min(d[k], k) + sum(min(x - 1, k) for x in d[k + 1:])
        if lhs > rhs:
            return Verdict(False, "Inequality", k, lhs, rhs)
    return ACCEPT
