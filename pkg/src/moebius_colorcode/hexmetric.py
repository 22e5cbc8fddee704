"""Three-axis coordinates for cells of the hexagonal tiling.

A cell is addressed by its projections ``(x0, x2, x4)`` onto the 12, 2 and
4 o'clock directions (in units of the cell-centre spacing times sqrt(3)/2).
The axes are linearly dependent: ``x0 - x2 + x4 == 0`` for every cell.
Neighbouring cells differ by a permutation of ``(±1, ±1, 0)``.
"""

from __future__ import annotations

from math import comb
from typing import NamedTuple


class HexCoord(NamedTuple):
    x0: int
    x2: int
    x4: int

    @classmethod
    def make(cls, x0: int, x2: int, x4: int) -> "HexCoord":
        if x0 - x2 + x4 != 0:
            raise ValueError(f"inconsistent hexagonal coordinates {(x0, x2, x4)}")
        return cls(int(x0), int(x2), int(x4))

    @classmethod
    def from_grid(cls, x: int, y: int) -> "HexCoord":
        """Convert doubled-width grid coordinates (``x + y`` even) as used by the lattice."""
        if (x + y) % 2:
            raise ValueError("grid coordinates must satisfy x + y even")
        return cls(y, (x + y) // 2, (x - y) // 2)

    def to_grid(self) -> tuple[int, int]:
        return self.x2 + self.x4, self.x0


# 1, 3, 5, 7, 9 and 11 o'clock
NEIGHBOUR_STEPS = (
    HexCoord(1, 1, 0),
    HexCoord(0, 1, 1),
    HexCoord(-1, 0, 1),
    HexCoord(-1, -1, 0),
    HexCoord(0, -1, -1),
    HexCoord(1, 0, -1),
)


def _deltas(x: HexCoord, y: HexCoord) -> list[int]:
    return sorted((abs(y.x0 - x.x0), abs(y.x2 - x.x2), abs(y.x4 - x.x4)), reverse=True)


def hex_distance(x: HexCoord, y: HexCoord) -> int:
    """Fewest steps between two cells: the largest coordinate difference."""
    return _deltas(x, y)[0]


def hex_path_count(x: HexCoord, y: HexCoord) -> int:
    """Number of distinct shortest paths between two cells."""
    d_max, d_med, d_min = _deltas(x, y)
    r = 2 * d_max - d_med - d_min
    s = d_max - d_med
    return comb(r, s)
