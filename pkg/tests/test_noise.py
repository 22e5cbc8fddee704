import itertools
import json
import math

import numpy as np
import pytest

from moebius_colorcode.decoder import fast_parity
from moebius_colorcode.lattice import PauliXError, build_lattice, logical_parity
from moebius_colorcode.noise import (
    BLOCK,
    MCResult,
    NoiseModel,
    block_rng,
    error_log_likelihood,
    exhaustive_count,
    failure_log_lines,
    iter_exhaustive,
    plan_chunks,
    rank_combination,
    run_exhaustive,
    run_mc,
    sample_block,
    sample_error,
    unrank_combination,
)


def test_noise_model_bounds():
    NoiseModel(0.0)
    NoiseModel(0.5)
    for p in (-0.1, 0.6):
        with pytest.raises(ValueError):
            NoiseModel(p)


def test_sample_error_extremes():
    rng = block_rng(1, 0)
    assert all(sample_error(19, 0.0, rng).weight == 0 for _ in range(100))
    weights = [sample_error(19, 0.5, rng).weight for _ in range(100_000)]
    mean = np.mean(weights)
    sigma = math.sqrt(19 * 0.25 / 100_000)
    assert abs(mean - 9.5) < 3 * sigma


def test_sampling_is_reproducible():
    a = sample_block(37, 0.1, 42, 3)
    b = sample_block(37, 0.1, 42, 3)
    c = sample_block(37, 0.1, 42, 4)
    assert a.shape == (BLOCK, 37)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert [sample_error(10, 0.3, block_rng(5, 0)).support for _ in range(3)] == \
        [sample_error(10, 0.3, block_rng(5, 0)).support] * 3


def test_log_likelihood():
    p, n = 0.1, 19
    assert error_log_likelihood([], p, n) == pytest.approx(n * math.log(0.9))
    assert error_log_likelihood([1, 2], p, n) == error_log_likelihood(PauliXError([5, 9]), p, n)
    vals = [error_log_likelihood(range(w), p, n) for w in range(n + 1)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    total = sum(math.comb(n, w) * math.exp(error_log_likelihood(range(w), p, n)) for w in range(n + 1))
    assert total == pytest.approx(1.0)
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            error_log_likelihood([], bad, n)


def test_mc_result_fields():
    r = MCResult(5, 0.1, 1000, 37, 1, "moebius")
    assert r.p_fail == 0.037
    assert r.stderr == pytest.approx(math.sqrt(0.037 * 0.963 / 1000))
    row = r.csv_row().split(",")
    assert MCResult.from_csv_row(dict(zip("d,p,trials,failures,p_fail,stderr,seed,variant".split(","), row))) == r


def test_mc_zero_noise():
    assert run_mc(7, 0.0, 5000, 3).failures == 0


@pytest.mark.parametrize("variant", ["moebius", "comparative"])
def test_mc_matches_exact_enumeration_d3(variant):
    lat = build_lattice(3)
    n = lat.n_qubits
    p = 0.12
    exact = 0.0
    for bits in itertools.product((0, 1), repeat=n):
        e = [q for q in range(n) if bits[q]]
        if fast_parity(3, e, variant)[0] != logical_parity(lat, e):
            exact += math.exp(error_log_likelihood(e, p, n))
    r = run_mc(3, p, 100_000, seed=17, variant=variant)
    assert abs(r.p_fail - exact) < 3 * math.sqrt(exact * (1 - exact) / r.trials)


def test_mc_independent_of_jobs():
    a = run_mc(5, 0.08, 3 * BLOCK + 17, seed=9, jobs=1)
    b = run_mc(5, 0.08, 3 * BLOCK + 17, seed=9, jobs=3)
    assert a == b


def test_mc_monotone_in_p():
    lo = run_mc(5, 0.03, 20_000, seed=2)
    hi = run_mc(5, 0.08, 20_000, seed=2)
    assert lo.p_fail <= hi.p_fail + 3 * (lo.stderr + hi.stderr)


def test_rank_unrank_round_trip():
    for n, w in [(7, 3), (10, 1), (12, 5), (19, 2)]:
        combos = list(itertools.combinations(range(n), w))
        for r, c in enumerate(combos):
            assert unrank_combination(r, n, w) == list(c)
            assert rank_combination(c, n) == r
    with pytest.raises(ValueError):
        unrank_combination(math.comb(5, 2), 5, 2)


@pytest.mark.parametrize("d,n,w_max,expect", [
    (3, 7, 1, 7), (5, 19, 2, 190), (7, 37, 3, 8473), (9, 61, 4, 559_736),
])
def test_exhaustive_counts(d, n, w_max, expect):
    assert exhaustive_count(n, w_max) == expect
    plan = plan_chunks(n, w_max, 1000)
    assert sum(c.count for c in plan) == expect
    assert [c.index for c in plan] == list(range(len(plan)))


def test_d13_count_closed_form():
    assert exhaustive_count(127, 6) == sum(math.comb(127, w) for w in range(1, 7))
    assert 5.0e9 < exhaustive_count(127, 6) < 5.5e9


def test_exhaustive_small_codes():
    for d in (3, 5):
        for variant in ("moebius", "comparative"):
            r = run_exhaustive(d, variant=variant)
            assert r.configs_tested == exhaustive_count(build_lattice(d).n_qubits, (d - 1) // 2)
            assert r.n_failures == 0 and r.failures == []


def test_exhaustive_chunks_compose():
    whole = run_exhaustive(7, variant="moebius", chunk_size=10**9)
    parts = list(iter_exhaustive(7, variant="moebius", chunk_size=1000))
    assert sum(t for _, t, _, _ in parts) == whole.configs_tested
    resumed = run_exhaustive(7, variant="moebius", chunk_size=1000, chunks=[c.index for c, *_ in parts[3:]])
    head = run_exhaustive(7, variant="moebius", chunk_size=1000, chunks=[0, 1, 2])
    assert head.configs_tested + resumed.configs_tested == whole.configs_tested


def test_exhaustive_records_failures_in_order():
    r = run_exhaustive(9, w_max=4, variant="moebius", chunks=[3])
    assert r.n_failures == len(r.failures) > 0
    assert r.failures == sorted(r.failures)
    lat = build_lattice(9)
    for f in r.failures:
        assert fast_parity(9, f, "moebius")[0] != logical_parity(lat, f)
    line = json.loads(failure_log_lines(r)[0])
    assert line["support"] == list(r.failures[0]) and line["weight"] == 4


def test_exhaustive_rejects_large_weight():
    with pytest.raises(ValueError):
        run_exhaustive(5, w_max=3)
