"""Search for worked-example errors where the original decoder picks the wrong class.

Usage: python scripts/find_fixtures.py [--out tests/fixtures] [--seed 7]

Writes ``moebius_fail_d9.json`` (exhaustive scan of weight-4 errors at d=9 with
ell_or = 11, ell_alt = 12) and ``moebius_fail_d11.json`` (random weight-5
clustered errors at d=11 with ell_or = 12, ell_alt = 13).
"""

from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

import numpy as np

from moebius_colorcode.decoder import fast_parity
from moebius_colorcode.lattice import build_lattice, logical_parity


def qualifies(lat, support, ell_or, ell_alt):
    truth = logical_parity(lat, support)
    p_or, a, _, _ = fast_parity(lat.d, support, "moebius")
    if p_or == truth or a != ell_or:
        return False
    p_cmp, a2, b2, switched = fast_parity(lat.d, support, "comparative")
    return switched and b2 == ell_alt and p_cmp == truth


def scan_d9(lat):
    for support in itertools.combinations(range(lat.n_qubits), 4):
        if qualifies(lat, support, 11, 12):
            return list(support)
    return None


def scan_d11(lat, seed, tries=2_000_000, radius=4):
    """Random compact clusters: failing errors are spatially local."""
    rng = np.random.default_rng(seed)
    xy = np.asarray(lat.qubit_coords)
    near = []
    for q in range(lat.n_qubits):
        dx = np.abs(xy[:, 0] - xy[q, 0])
        dy = np.abs(xy[:, 1] - xy[q, 1])
        near.append(np.flatnonzero(np.maximum(dy, (dx + dy) // 2) <= radius))
    for _ in range(tries):
        pool = near[rng.integers(lat.n_qubits)]
        if pool.size < 5:
            continue
        support = sorted(rng.choice(pool, 5, replace=False).tolist())
        if qualifies(lat, support, 12, 13):
            return support
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for d, finder in ((9, scan_d9), (11, lambda lat: scan_d11(lat, args.seed))):
        lat = build_lattice(d)
        support = finder(lat)
        if support is None:
            raise SystemExit(f"no qualifying error found at d={d}")
        path = out / f"moebius_fail_d{d}.json"
        path.write_text(json.dumps({"d": d, "error": support}) + "\n")
        print(d, support)


if __name__ == "__main__":
    main()
