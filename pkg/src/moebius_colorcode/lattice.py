"""Triangular colour code on the hexagonal (6.6.6) lattice.

Sites of a triangular grid are laid out in rows ``y = 0..L`` with
``L = 3(d-1)/2`` and ``x`` running from ``y`` to ``2L - y`` in steps of two.
One site in three is a face centre (stabilizer); the rest are qubits.  A face
acts on the qubits among its six grid neighbours, so faces on the sides of the
triangle are truncated to weight four.

Only bit-flip (X) errors and Z-type stabilizers/logicals are modelled.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np


class Color(enum.IntEnum):
    R = 0
    G = 1
    B = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    def others(self) -> tuple["Color", "Color"]:
        """The two remaining colours, in increasing order."""
        v, w = (c for c in Color if c != self)
        return v, w

    @classmethod
    def parse(cls, s: str | "Color") -> "Color":
        if isinstance(s, Color):
            return s
        return cls[s.strip().upper()]


class QubitKind(enum.Enum):
    BULK = "bulk"
    BOUNDARY = "boundary"
    CORNER = "corner"


@dataclass(frozen=True)
class QubitClass:
    kind: QubitKind
    color: Color | None = None

    def __str__(self) -> str:
        if self.kind is QubitKind.BULK:
            return "bulk"
        return f"{self.kind.value}_{self.color.label}"


@dataclass(frozen=True)
class PauliXError:
    support: frozenset[int]

    def __init__(self, support: Iterable[int] = ()):
        object.__setattr__(self, "support", frozenset(int(q) for q in support))

    @property
    def weight(self) -> int:
        return len(self.support)

    def __xor__(self, other: "PauliXError | Iterable[int]") -> "PauliXError":
        other_support = other.support if isinstance(other, PauliXError) else frozenset(other)
        return PauliXError(self.support ^ other_support)


@dataclass(frozen=True)
class Syndrome:
    """Violated faces as sorted ``(face, colour)`` pairs."""

    defects: tuple[tuple[int, Color], ...]

    @property
    def faces(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.defects)

    def count(self, color: Color) -> int:
        return sum(1 for _, c in self.defects if c == color)

    def __len__(self) -> int:
        return len(self.defects)

    def __bool__(self) -> bool:
        return bool(self.defects)


@dataclass(frozen=True, eq=False)
class CodeLattice:
    d: int
    qubit_coords: tuple[tuple[int, int], ...]
    face_coords: tuple[tuple[int, int], ...]
    face_color: tuple[Color, ...]
    face_support: tuple[tuple[int, ...], ...]
    qubit_faces: tuple[tuple[int, ...], ...]
    qubit_class: tuple[QubitClass, ...]
    boundary: dict[Color, tuple[int, ...]]
    corner: dict[Color, int]
    check_matrix: np.ndarray = field(repr=False)

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_coords)

    @property
    def n_faces(self) -> int:
        return len(self.face_coords)

    def faces_of(self, color: Color) -> list[int]:
        return [f for f, c in enumerate(self.face_color) if c == color]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "qubits": [
                {"id": q, "class": str(self.qubit_class[q]), "coord": list(self.qubit_coords[q])}
                for q in range(self.n_qubits)
            ],
            "faces": [
                {"id": f, "color": self.face_color[f].label, "support": list(self.face_support[f])}
                for f in range(self.n_faces)
            ],
            "boundaries": {c.label: list(self.boundary[c]) for c in Color},
            "corners": {c.label: self.corner[c] for c in Color},
        }


def n_qubits_for(d: int) -> int:
    return 3 * (d - 1) * (d + 1) // 4 + 1


def _check_distance(d: int) -> None:
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise TypeError(f"distance must be an integer, got {type(d).__name__}")
    if d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be odd and >= 3, got {d}")


# face colour and the residue of (x - y)/2 that marks a face centre, per y mod 3
_ROW_FACE = {0: (Color.G, 2), 1: (Color.B, 0), 2: (Color.R, 1)}
_NEIGHBOURS = ((-2, 0), (2, 0), (-1, -1), (1, -1), (-1, 1), (1, 1))


@lru_cache(maxsize=None)
def build_lattice(d: int) -> CodeLattice:
    """Build the distance-``d`` triangular colour code.

    Qubits are indexed row-major by ``(y, x)``; faces by ``(colour, y, x)``.
    The result is cached and must be treated as read-only.
    """
    _check_distance(d)
    d = int(d)
    span = 3 * (d - 1) // 2

    qubit_sites: list[tuple[int, int]] = []
    face_sites: list[tuple[Color, int, int]] = []
    for y in range(span + 1):
        color, residue = _ROW_FACE[y % 3]
        for x in range(y, 2 * span - y + 1, 2):
            if ((x - y) // 2) % 3 == residue:
                face_sites.append((color, y, x))
            else:
                qubit_sites.append((y, x))

    qubit_index = {(x, y): i for i, (y, x) in enumerate(qubit_sites)}
    face_sites.sort()
    face_coords = tuple((x, y) for _, y, x in face_sites)
    face_color = tuple(c for c, _, _ in face_sites)

    face_support = []
    for x, y in face_coords:
        support = sorted(
            qubit_index[(x + dx, y + dy)]
            for dx, dy in _NEIGHBOURS
            if (x + dx, y + dy) in qubit_index
        )
        face_support.append(tuple(support))

    qubit_faces_lists: list[list[int]] = [[] for _ in qubit_sites]
    for f, support in enumerate(face_support):
        for q in support:
            qubit_faces_lists[q].append(f)
    qubit_faces = tuple(tuple(fs) for fs in qubit_faces_lists)

    qubit_class = []
    for fs in qubit_faces:
        colors = {face_color[f] for f in fs}
        if len(fs) == 3:
            qubit_class.append(QubitClass(QubitKind.BULK))
        elif len(fs) == 2:
            (missing,) = set(Color) - colors
            qubit_class.append(QubitClass(QubitKind.BOUNDARY, missing))
        elif len(fs) == 1:
            qubit_class.append(QubitClass(QubitKind.CORNER, face_color[fs[0]]))
        else:  # pragma: no cover - construction guarantees 1..3
            raise AssertionError(f"qubit touching {len(fs)} faces")

    corner = {
        cls.color: q for q, cls in enumerate(qubit_class) if cls.kind is QubitKind.CORNER
    }
    boundary = {}
    for u in Color:
        members = [
            q
            for q, cls in enumerate(qubit_class)
            if (cls.kind is QubitKind.BOUNDARY and cls.color == u)
            or (cls.kind is QubitKind.CORNER and cls.color != u)
        ]
        boundary[u] = tuple(sorted(members, key=lambda q: (qubit_sites[q], q)))

    coords = tuple((x, y) for y, x in qubit_sites)
    check = np.zeros((len(face_coords), len(coords)), dtype=np.uint8)
    for f, support in enumerate(face_support):
        check[f, list(support)] = 1
    check.setflags(write=False)

    return CodeLattice(
        d=d,
        qubit_coords=coords,
        face_coords=face_coords,
        face_color=face_color,
        face_support=tuple(face_support),
        qubit_faces=qubit_faces,
        qubit_class=tuple(qubit_class),
        boundary=boundary,
        corner=corner,
        check_matrix=check,
    )


def _as_support(lat: CodeLattice, e: PauliXError | Iterable[int]) -> frozenset[int]:
    support = e.support if isinstance(e, PauliXError) else frozenset(int(q) for q in e)
    bad = [q for q in support if not 0 <= q < lat.n_qubits]
    if bad:
        raise ValueError(f"qubit indices out of range for d={lat.d}: {sorted(bad)}")
    return support


def syndrome(lat: CodeLattice, e: PauliXError | Iterable[int]) -> Syndrome:
    """Faces whose support overlaps the error on an odd number of qubits."""
    flipped: set[int] = set()
    for q in _as_support(lat, e):
        flipped.symmetric_difference_update(lat.qubit_faces[q])
    return Syndrome(tuple((f, lat.face_color[f]) for f in sorted(flipped)))


def syndrome_from_faces(lat: CodeLattice, faces: Iterable[int]) -> Syndrome:
    faces = sorted(set(int(f) for f in faces))
    if any(not 0 <= f < lat.n_faces for f in faces):
        raise ValueError("face index out of range")
    return Syndrome(tuple((f, lat.face_color[f]) for f in faces))


def boundary_operator(lat: CodeLattice, u: Color) -> frozenset[int]:
    """Support of the product of all stabilizers not coloured ``u``."""
    u = Color.parse(u)
    acc: set[int] = set()
    for f, c in enumerate(lat.face_color):
        if c != u:
            acc.symmetric_difference_update(lat.face_support[f])
    return frozenset(acc)


def logical_support(lat: CodeLattice, u: Color) -> frozenset[int]:
    return frozenset(lat.boundary[Color.parse(u)])


def logical_parity(lat: CodeLattice, e: PauliXError | Iterable[int], u: Color = Color.G) -> int:
    """Commutator of the error with the Z logical on the ``u`` boundary (0 or 1)."""
    return len(_as_support(lat, e) & logical_support(lat, u)) % 2
