"""Moebius-strip matching decoder for the triangular 6.6.6 colour code."""

from .analysis import LowPFit, ThresholdFit, fit_lowp, fit_threshold, linear_fit
from .decoder import (
    ComparativeConfig,
    DecodeResult,
    DecoderKind,
    Variant,
    alternative_matching,
    decode,
    decode_comparative,
    decode_moebius,
    decode_success,
)
from .hexmetric import HexCoord, hex_distance, hex_path_count
from .lattice import (
    CodeLattice,
    Color,
    PauliXError,
    Syndrome,
    boundary_operator,
    build_lattice,
    logical_parity,
    logical_support,
    syndrome,
)
from .matching import MatchGraph, Matching, brute_force_matching, mwpm
from .noise import ExhaustResult, MCResult, NoiseModel, error_log_likelihood, run_exhaustive, run_mc, sample_error
from .unified import UnifiedLattice, all_pairs, build_unified, defect_nodes

__all__ = [name for name in dir() if not name.startswith("_")]
