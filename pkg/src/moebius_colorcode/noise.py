"""IID bit-flip sampling, Monte Carlo failure rates and exhaustive low-weight sweeps.

Randomness is counter based: trial ``t`` belongs to block ``t // BLOCK`` and
every block draws from its own Philox stream keyed by ``(seed, block)``.  The
sampled errors therefore depend only on the seed, never on how blocks are
distributed over worker processes.
"""

from __future__ import annotations

import json
import math
import multiprocessing as mp
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels as K
from .decoder import DecoderKind, tables_for
from .lattice import PauliXError, n_qubits_for

BLOCK = 4096
CSV_HEADER = "d,p,trials,failures,p_fail,stderr,seed,variant"


@dataclass(frozen=True)
class NoiseModel:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"bit-flip probability must lie in [0, 0.5], got {self.p}")


@dataclass(frozen=True)
class MCResult:
    d: int
    p: float
    trials: int
    failures: int
    seed: int
    variant: str

    @property
    def p_fail(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        q = self.p_fail
        return math.sqrt(q * (1.0 - q) / self.trials)

    def csv_row(self) -> str:
        return (f"{self.d},{self.p:.6g},{self.trials},{self.failures},{self.p_fail:.10g},"
                f"{self.stderr:.10g},{self.seed},{self.variant}")

    @classmethod
    def from_csv_row(cls, row: dict) -> "MCResult":
        return cls(int(row["d"]), float(row["p"]), int(row["trials"]), int(row["failures"]),
                   int(row["seed"]), row["variant"])


@dataclass
class ExhaustResult:
    d: int
    w_max: int
    variant: str
    configs_tested: int = 0
    failures: list[tuple[int, ...]] = field(default_factory=list)
    n_failures: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["failures"] = [list(f) for f in self.failures]
        return out


def block_rng(seed: int, block: int) -> np.random.Generator:
    if seed < 0 or block < 0:
        raise ValueError("seed and block index must be non-negative")
    return np.random.Generator(np.random.Philox(key=(seed & (2**64 - 1)) | (block << 64)))


def sample_error(n: int, p: float, rng: np.random.Generator) -> PauliXError:
    NoiseModel(p)
    return PauliXError(np.flatnonzero(rng.random(n) < p).tolist())


def sample_block(n: int, p: float, seed: int, block: int) -> np.ndarray:
    """0/1 error matrix for all ``BLOCK`` trials of one block."""
    return (block_rng(seed, block).random((BLOCK, n)) < p).astype(np.uint8)


def error_log_likelihood(e: PauliXError | Iterable[int], p: float, n: int) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError(f"log-likelihood needs 0 < p < 1, got {p}")
    w = e.weight if isinstance(e, PauliXError) else len(set(e))
    return n * math.log1p(-p) + w * math.log(p / (1.0 - p))


def _pool(jobs: int) -> ProcessPoolExecutor:
    return ProcessPoolExecutor(max_workers=jobs, mp_context=mp.get_context("fork"))


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _mc_block(args) -> int:
    d, p, seed, block, rows, comparative, upsilon = args
    t = tables_for(d)
    errs = sample_block(t.qubit_faces.shape[0], p, seed, block)[:rows]
    return int(K.decode_rows(errs, t.qubit_faces, t.on_green, t.n_faces, t.dist_len, t.dist_parity,
                             t.class_len, t.torn_len, t.site_left, t.site_right, t.site_weight,
                             t.d, comparative, upsilon))


def run_mc(d: int, p: float, trials: int, seed: int, variant: DecoderKind | str = DecoderKind.MOEBIUS,
           upsilon: int = 1, jobs: int = 1) -> MCResult:
    """Count decoding failures over ``trials`` iid samples."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    NoiseModel(p)
    kind = DecoderKind.parse(variant)
    comparative = kind is DecoderKind.COMPARATIVE
    n_blocks = -(-trials // BLOCK)
    tasks = [(d, p, seed, b, min(BLOCK, trials - b * BLOCK), comparative, upsilon) for b in range(n_blocks)]
    tables_for(d)
    if jobs <= 1 or n_blocks == 1:
        failures = sum(map(_mc_block, tasks))
    else:
        with _pool(jobs) as ex:
            failures = sum(ex.map(_mc_block, tasks))
    return MCResult(d, p, trials, failures, seed, kind.value)


# combinatorial number system, lexicographic order


def unrank_combination(rank: int, n: int, w: int) -> list[int]:
    """The ``rank``-th w-subset of range(n) in lexicographic order."""
    total = math.comb(n, w)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range for C({n}, {w}) = {total}")
    out = []
    x = 0
    for k in range(w, 0, -1):
        while True:
            c = math.comb(n - x - 1, k - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return out


def rank_combination(comb: Sequence[int], n: int) -> int:
    w = len(comb)
    rank = 0
    prev = -1
    for i, x in enumerate(comb):
        for y in range(prev + 1, x):
            rank += math.comb(n - y - 1, w - i - 1)
        prev = x
    return rank


def exhaustive_count(n: int, w_max: int) -> int:
    return sum(math.comb(n, w) for w in range(1, w_max + 1))


@dataclass(frozen=True)
class Chunk:
    index: int
    weight: int
    start: int
    count: int


def plan_chunks(n: int, w_max: int, chunk_size: int = 200_000) -> list[Chunk]:
    """Contiguous rank intervals covering every support of weight 1..w_max."""
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    chunks = []
    for w in range(1, w_max + 1):
        total = math.comb(n, w)
        for start in range(0, total, chunk_size):
            chunks.append(Chunk(len(chunks), w, start, min(chunk_size, total - start)))
    return chunks


def _exhaust_chunk(args):
    d, chunk, comparative, upsilon, max_record = args
    t = tables_for(d)
    n = t.qubit_faces.shape[0]
    first = np.asarray(unrank_combination(chunk.start, n, chunk.weight), dtype=np.int64)
    tested, n_fail, rec = K.sweep_combinations(
        first, chunk.count, n, t.qubit_faces, t.on_green, t.n_faces, t.dist_len, t.dist_parity,
        t.class_len, t.torn_len, t.site_left, t.site_right, t.site_weight, t.d,
        comparative, upsilon, max_record)
    return int(tested), int(n_fail), [tuple(int(q) for q in r) for r in rec]


def iter_exhaustive(d: int, w_max: int | None = None, variant: DecoderKind | str = DecoderKind.COMPARATIVE,
                    upsilon: int = 1, chunk_size: int = 200_000, jobs: int = 1,
                    chunks: Iterable[int] | None = None, max_record: int = 1000) -> Iterator[tuple[Chunk, int, int, list]]:
    """Yield ``(chunk, tested, n_failures, recorded_supports)`` in chunk order."""
    w_max = (d - 1) // 2 if w_max is None else w_max
    if not 1 <= w_max <= (d - 1) // 2:
        raise ValueError(f"w_max must lie in [1, {(d - 1) // 2}] at d={d}, got {w_max}")
    comparative = DecoderKind.parse(variant) is DecoderKind.COMPARATIVE
    plan = plan_chunks(n_qubits_for(d), w_max, chunk_size)
    if chunks is not None:
        wanted = set(chunks)
        plan = [c for c in plan if c.index in wanted]
    tables_for(d)
    tasks = [(d, c, comparative, upsilon, max_record) for c in plan]
    if jobs <= 1 or len(tasks) <= 1:
        for c, task in zip(plan, tasks):
            yield (c, *_exhaust_chunk(task))
    else:
        with _pool(jobs) as ex:
            for c, res in zip(plan, ex.map(_exhaust_chunk, tasks)):
                yield (c, *res)


def run_exhaustive(d: int, w_max: int | None = None, variant: DecoderKind | str = DecoderKind.COMPARATIVE,
                   upsilon: int = 1, chunk_size: int = 200_000, jobs: int = 1,
                   chunks: Iterable[int] | None = None, max_record: int = 1000) -> ExhaustResult:
    """Decode every error of weight 1..w_max (default (d-1)/2) and collect failures."""
    w_max = (d - 1) // 2 if w_max is None else w_max
    res = ExhaustResult(d, w_max, DecoderKind.parse(variant).value)
    for _, tested, n_fail, rec in iter_exhaustive(d, w_max, variant, upsilon, chunk_size, jobs, chunks, max_record):
        res.configs_tested += tested
        res.n_failures += n_fail
        res.failures.extend(rec[: max(0, max_record - len(res.failures))])
    return res


def failure_log_lines(res: ExhaustResult) -> list[str]:
    return [json.dumps({"d": res.d, "weight": len(f), "support": list(f)}) for f in res.failures]
