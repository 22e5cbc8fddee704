"""Moebius-strip matching decoder and its comparative variant.

The original decoder matches both panel copies of every defect on the unified
graph.  The predicted commutator with the green Z logical is the parity of
flagged (green-crease) edges along the matched paths.

The comparative decoder additionally constructs a matching in the opposite
logical class by tearing the strip along the green crease, and adopts it when

    ell_alt - ell_or == upsilon   and   (2 * ell_or - d) % 4 == 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels as K
from .lattice import CodeLattice, Color, PauliXError, Syndrome, logical_parity, syndrome
from .matching import Matching
from .unified import UnifiedLattice, build_unified, defect_nodes


class Variant(enum.Enum):
    ORIGINAL = "original"
    ALTERNATIVE = "alternative"


class DecoderKind(enum.Enum):
    MOEBIUS = "moebius"
    COMPARATIVE = "comparative"

    @classmethod
    def parse(cls, s: "str | DecoderKind") -> "DecoderKind":
        if isinstance(s, DecoderKind):
            return s
        try:
            return cls(s.lower())
        except ValueError:
            raise ValueError(f"unknown decoder variant {s!r}; expected moebius or comparative") from None


@dataclass(frozen=True)
class ComparativeConfig:
    upsilon: int = 1
    enabled: bool = True
    tear_crease: Color = Color.G

    def __post_init__(self):
        if self.upsilon < 1:
            raise ValueError(f"upsilon must be >= 1, got {self.upsilon}")
        if self.tear_crease != Color.G:
            raise ValueError("only the green crease can be torn")


@dataclass(frozen=True)
class Alternative:
    ell: int
    parity: int
    matching: Matching
    site: int
    u_l: int
    u_r: int
    rewired: int | None
    required_parity: tuple[int, ...] = field(default=())


@dataclass(frozen=True)
class DecodeResult:
    predicted_parity: int
    ell: int
    matching: Matching
    variant: Variant
    ell_or: int
    ell_alt: int | None = None
    defects: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "defects": list(self.defects),
            "ell_or": self.ell_or,
            "ell_alt": self.ell_alt,
            "predicted_parity": self.predicted_parity,
            "variant": self.variant.value,
            "matching": self.matching.to_json(),
        }


@lru_cache(maxsize=None)
def tables_for(d: int) -> K.Tables:
    return K.make_tables(build_unified(d))


def _nodes(u: UnifiedLattice, s: Syndrome) -> np.ndarray:
    return np.asarray(defect_nodes(u, s), dtype=np.int64)


def _original(u: UnifiedLattice, s: Syndrome):
    t = tables_for(u.d)
    nodes = _nodes(u, s)
    if nodes.size == 0:
        return nodes, np.zeros(0, dtype=np.int64), DecodeResult(0, 0, Matching((), 0), Variant.ORIGINAL, 0)
    mate, total, parity = K.match_original(nodes, t.dist_len, t.dist_parity)
    pairs = tuple((int(nodes[i]), int(nodes[j])) for i, j in enumerate(mate) if i < j)
    res = DecodeResult(
        predicted_parity=int(parity),
        ell=int(total),
        matching=Matching(pairs, int(total)),
        variant=Variant.ORIGINAL,
        ell_or=int(total),
        defects=s.faces,
    )
    return nodes, mate, res


def decode_moebius(u: UnifiedLattice, s: Syndrome) -> DecodeResult:
    """Single minimum-weight matching on the unified graph."""
    return _original(u, s)[2]


def alternative_matching(u: UnifiedLattice, s: Syndrome, orig: DecodeResult | None = None) -> Alternative | None:
    """Cheapest matching found by tearing the green crease, or None if no defects remain to cross it.

    ``orig`` is accepted for symmetry with the decoding pipeline; the original
    matching is recomputed (deterministically) when it is omitted.
    """
    t = tables_for(u.d)
    nodes = _nodes(u, s)
    if nodes.size == 0:
        return None
    pos = {int(x): i for i, x in enumerate(nodes)}
    if orig is not None and orig.matching.pairs:
        mate = np.empty(nodes.size, dtype=np.int64)
        for a, b in orig.matching.pairs:
            mate[pos[a]] = pos[b]
            mate[pos[b]] = pos[a]
    else:
        mate, _, _ = K.match_original(nodes, t.dist_len, t.dist_parity)
    found, ell, parity, pairs, req, site, u_l, u_r, rewired = K.match_alternative(
        nodes, mate, t.dist_parity, t.class_len, t.torn_len, t.site_left, t.site_right, t.site_weight
    )
    if not found:
        return None
    return Alternative(
        ell=int(ell),
        parity=int(parity),
        matching=Matching(tuple((int(a), int(b)) for a, b in pairs), int(ell)),
        site=int(site),
        u_l=int(u_l),
        u_r=int(u_r),
        rewired=None if rewired < 0 else int(rewired),
        required_parity=tuple(int(x) for x in req),
    )


def should_switch(ell_or: int, ell_alt: int, d: int, upsilon: int = 1) -> bool:
    return ell_alt - ell_or == upsilon and (2 * ell_or - d) % 4 == 1


def decode_comparative(
    u: UnifiedLattice, s: Syndrome, cfg: ComparativeConfig | None = None, d: int | None = None
) -> DecodeResult:
    """Original decoding, replaced by the alternative when the switching rule fires."""
    cfg = cfg or ComparativeConfig()
    d = u.d if d is None else d
    nodes, mate, orig = _original(u, s)
    if not cfg.enabled or nodes.size == 0:
        return orig
    alt = alternative_matching(u, s, orig)
    if alt is None:
        return orig
    if should_switch(orig.ell_or, alt.ell, d, cfg.upsilon):
        return DecodeResult(alt.parity, alt.ell, alt.matching, Variant.ALTERNATIVE, orig.ell_or, alt.ell, orig.defects)
    return DecodeResult(orig.predicted_parity, orig.ell, orig.matching, Variant.ORIGINAL,
                        orig.ell_or, alt.ell, orig.defects)


def decode(u: UnifiedLattice, s: Syndrome, variant: DecoderKind | str = DecoderKind.MOEBIUS,
           upsilon: int = 1) -> DecodeResult:
    kind = DecoderKind.parse(variant)
    if kind is DecoderKind.MOEBIUS:
        return decode_moebius(u, s)
    return decode_comparative(u, s, ComparativeConfig(upsilon=upsilon))


def decode_success(lat: CodeLattice, u: UnifiedLattice, e: PauliXError | Iterable[int],
                   variant: DecoderKind | str = DecoderKind.MOEBIUS, upsilon: int = 1) -> bool:
    """True iff the decoder predicts the green logical commutator of ``e``."""
    res = decode(u, syndrome(lat, e), variant, upsilon)
    return res.predicted_parity == logical_parity(lat, e, Color.G)


def fast_parity(d: int, support: Iterable[int], variant: DecoderKind | str = DecoderKind.MOEBIUS,
                upsilon: int = 1) -> tuple[int, int, int, bool]:
    """Compiled decode of one support: ``(parity, ell_or, ell_alt or -1, switched)``."""
    t = tables_for(d)
    err = np.asarray(sorted(set(support)), dtype=np.int64)
    comparative = DecoderKind.parse(variant) is DecoderKind.COMPARATIVE
    p, a, b, sw = K.decode_one(err, t.qubit_faces, t.n_faces, t.dist_len, t.dist_parity, t.class_len,
                               t.torn_len, t.site_left, t.site_right, t.site_weight, t.d,
                               comparative, upsilon)
    return int(p), int(a), int(b), bool(sw)
