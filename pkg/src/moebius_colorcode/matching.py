"""Exact minimum-weight perfect matching on small complete graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._blossom import min_weight_perfect_matching

FORBIDDEN = -1
BRUTE_FORCE_LIMIT = 12


class InfeasibleMatchingError(ValueError):
    """No perfect matching avoids the forbidden edges."""


@dataclass(frozen=True, eq=False)
class MatchGraph:
    """Complete graph on ``n`` nodes with integer edge costs.

    ``weight[i, j] == FORBIDDEN`` marks an edge that may not be used.
    """

    weight: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=np.int64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight must be a square matrix")
        if w.shape[0] % 2:
            raise ValueError(f"perfect matching needs an even node count, got {w.shape[0]}")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        off = ~np.eye(w.shape[0], dtype=bool)
        if np.any(w[off] < FORBIDDEN):
            raise ValueError("weights must be non-negative or FORBIDDEN")
        object.__setattr__(self, "weight", w)

    @property
    def n(self) -> int:
        return self.weight.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int, int]]) -> "MatchGraph":
        """Build from explicit edges; missing pairs are forbidden."""
        w = np.full((n, n), FORBIDDEN, dtype=np.int64)
        np.fill_diagonal(w, 0)
        for a, b, c in edges:
            w[a, b] = w[b, a] = c
        return cls(w)


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    cost: int

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.pairs]


def _pairs_from_mate(mate: np.ndarray) -> tuple[tuple[int, int], ...]:
    return tuple((int(a), int(b)) for a, b in enumerate(mate) if a < b)


def mwpm(g: MatchGraph) -> Matching:
    """Minimum-weight perfect matching via the blossom algorithm.

    Raises:
        InfeasibleMatchingError: every perfect matching uses a forbidden edge.
    """
    if g.n == 0:
        return Matching((), 0)
    mate, total = min_weight_perfect_matching(g.weight)
    if total < 0:
        raise InfeasibleMatchingError(f"no perfect matching on {g.n} nodes avoids forbidden edges")
    return Matching(_pairs_from_mate(mate), int(total))


def brute_force_matching(g: MatchGraph) -> Matching:
    """Enumerate all (n-1)!! perfect matchings and return a cheapest one."""
    if g.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {g.n}")
    w = g.weight.tolist()
    best_cost: int | None = None
    best_pairs: list[tuple[int, int]] = []

    def rec(rest: list[int], acc: int, pairs: list[tuple[int, int]]) -> None:
        nonlocal best_cost, best_pairs
        if not rest:
            if best_cost is None or acc < best_cost:
                best_cost, best_pairs = acc, list(pairs)
            return
        a = rest[0]
        for i in range(1, len(rest)):
            b = rest[i]
            if w[a][b] == FORBIDDEN:
                continue
            pairs.append((a, b))
            rec(rest[1:i] + rest[i + 1:], acc + w[a][b], pairs)
            pairs.pop()

    rec(list(range(g.n)), 0, [])
    if best_cost is None:
        raise InfeasibleMatchingError(f"no perfect matching on {g.n} nodes avoids forbidden edges")
    return Matching(tuple(best_pairs), best_cost)


def count_perfect_matchings(n: int) -> int:
    """(n-1)!! for even n."""
    out = 1
    for k in range(n - 1, 0, -2):
        out *= k
    return out
