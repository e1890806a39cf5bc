"""Split the clique factor of a realization into h disjoint perfect matchings.

Only odd h is handled: each block is a complete graph on an even number of
vertices, which the circle method factorizes block by block.
"""

from __future__ import annotations

from .core import ContractViolation, FactorShape, LabelledGraph, is_h_spanning


class UnsupportedEvenH(ValueError):
    pass


def round_robin_block(h: int) -> list[list[tuple[int, int]]]:
    """Circle-method 1-factorization of the complete graph on labels 0..h.

    Round t pairs the fixed label h with t, and (t+j) mod h with (t-j) mod h
    for j = 1..(h-1)/2.
    """
    if h < 1 or h % 2 == 0:
        raise UnsupportedEvenH(f"h={h}: blocks of odd size have no perfect matching")
    rounds = []
    for t in range(h):
        pairs = [(h, t)]
        for j in range(1, (h - 1) // 2 + 1):
            pairs.append(((t + j) % h, (t - j) % h))
        rounds.append(pairs)
    return rounds


def extract_matchings(g: LabelledGraph, shape: FactorShape) -> list[list[tuple[int, int]]]:
    """Return h pairwise-disjoint perfect matchings of g whose union is E(H).

    Matching t is round t of the circle method, translated into every block.
    Pairs are 1-indexed, (low, high), and sorted.
    """
    if shape.h % 2 == 0:
        raise UnsupportedEvenH(f"h={shape.h} is even; only odd h is supported")
    if not is_h_spanning(g, shape):
        raise ContractViolation("graph does not contain H as a spanning subgraph")
    rounds = round_robin_block(shape.h)
    out = []
    for pairs in rounds:
        matching = []
        for blk in shape.blocks():
            base = blk.start
            for a, b in pairs:
                u, v = base + a, base + b
                matching.append((u, v) if u < v else (v, u))
        out.append(sorted(matching))
    return out
