"""Packet-level simulator: encoder/decoder units, determinism, statistics."""

import math

import numpy as np
import pytest
from scipy import stats

from rlnc_delay import (
    OUTAGE,
    ChannelSpec,
    CodeConfig,
    EncoderState,
    FieldSpec,
    ReceiverState,
    avg_transmissions,
    next_coding_vector,
    overhead_cdf,
    overhead_distribution,
    receiver_ingest,
    run_campaign,
    run_generation,
    run_multi_receiver,
)
from rlnc_delay._kernels import HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


# ---------------------------------------------------------------- encoder

def test_systematic_prefix_vectors():
    enc = EncoderState(CodeConfig(5, 4, 2, "sys"), FieldSpec(2))
    rng = np.random.default_rng(0)
    for j in range(5):
        vec = next_coding_vector(enc, rng)
        expect = np.zeros(5, dtype=np.uint8)
        expect[j] = 1
        assert np.array_equal(vec, expect)
    assert enc.step == 6  # coded tail begins


def test_deadline_exhausted():
    enc = EncoderState(CodeConfig(2, 1, 2), FieldSpec(2))
    rng = np.random.default_rng(0)
    for _ in range(3):
        next_coding_vector(enc, rng)
    with pytest.raises(ValueError):
        next_coding_vector(enc, rng)


def test_vector_sequence_reproducible():
    def draw(seed):
        enc = EncoderState(CodeConfig(8, 10, 16), FieldSpec(16))
        rng = np.random.default_rng(seed)
        return [next_coding_vector(enc, rng) for _ in range(18)]

    a, b = draw(42), draw(42)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_zero_vector_fraction():
    # over GF(2)^2 a uniform vector is zero with probability 1/4
    enc = EncoderState(CodeConfig(2, 10**9, 2), FieldSpec(2))
    rng = np.random.default_rng(3)
    draws = 100_000
    zeros = sum(1 for _ in range(draws)
                if not next_coding_vector(enc, rng).any())
    sigma = math.sqrt(0.25 * 0.75 / draws)
    assert abs(zeros / draws - 0.25) < 3 * sigma


# ---------------------------------------------------------------- decoder

def test_ingest_basics():
    f = FieldSpec(2)
    rx = ReceiverState(f, 3)
    assert receiver_ingest(rx, np.zeros(3, dtype=np.uint8)).rank == 0
    e1 = np.array([1, 0, 0], dtype=np.uint8)
    assert receiver_ingest(rx, e1).rank == 1
    assert receiver_ingest(rx, e1).rank == 1  # dependent row
    assert rx.received_count == 3
    for j, expect in ((1, 2), (2, 3)):
        vec = np.zeros(3, dtype=np.uint8)
        vec[j] = 1
        assert receiver_ingest(rx, vec).rank == expect
    assert rx.done_at is None  # done_at is stamped by run_generation, not ingest
    with pytest.raises(ValueError):
        receiver_ingest(rx, np.zeros(4, dtype=np.uint8))


def _batch_rank(field, rows):
    """Full Gaussian elimination from scratch; independent of ReceiverState."""
    rows = [list(map(int, r)) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    mat = [r[:] for r in rows]
    for col in range(cols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(inv, x) for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                coef = mat[i][col]
                mat[i] = [field.add(x, field.mul(coef, y))
                          for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("q", [2, 4, 16])
def test_incremental_rank_matches_batch(q):
    f = FieldSpec(q)
    rng = np.random.default_rng(q + 1)
    for K in (1, 3, 6):
        for _ in range(30):
            rx = ReceiverState(f, K)
            rows = []
            m = int(rng.integers(0, 2 * K + 2))
            for _ in range(m):
                vec = rng.integers(0, q, size=K).astype(np.uint8)
                rows.append(vec.copy())
                receiver_ingest(rx, vec)
                assert rx.rank <= min(rx.received_count, K)
            assert rx.rank == _batch_rank(f, rows)


# ---------------------------------------------------------------- generation

def test_run_generation_edges():
    f = FieldSpec(2)
    rng = np.random.default_rng(0)
    assert run_generation(CodeConfig(4, 2, 2), ChannelSpec(1.0), f, rng) == OUTAGE
    for _ in range(10):
        n = run_generation(CodeConfig(4, 2, 2, "sys"), ChannelSpec(0.0), f, rng)
        assert n == 4


def test_run_generation_field_mismatch():
    with pytest.raises(ValueError):
        run_generation(CodeConfig(4, 2, 4), ChannelSpec(0.1), FieldSpec(2),
                       np.random.default_rng(0))


# ---------------------------------------------------------------- campaigns

def test_single_generation_deterministic():
    cfg, ch, f = CodeConfig(6, 4, 4), ChannelSpec(0.2), FieldSpec(4)
    a = run_campaign(cfg, ch, f, 1, 99, backend="python")
    b = run_campaign(cfg, ch, f, 1, 99, backend="python")
    assert np.array_equal(a.empirical_pmf, b.empirical_pmf)
    assert a.empirical_avg_transmissions == b.empirical_avg_transmissions
    assert a.stderr == 0.0  # single sample


@needs_numba
@pytest.mark.parametrize("scheme", ["nonsys", "sys"])
@pytest.mark.parametrize("q", [2, 4, 16])
def test_backend_equivalence(q, scheme):
    cfg, ch, f = CodeConfig(5, 4, q, scheme), ChannelSpec(0.25), FieldSpec(q)
    jit = run_campaign(cfg, ch, f, 400, 11, backend="jit")
    ref = run_campaign(cfg, ch, f, 400, 11, backend="python")
    assert np.array_equal(jit.empirical_pmf, ref.empirical_pmf)
    assert jit.empirical_outage == ref.empirical_outage
    assert jit.empirical_avg_transmissions == ref.empirical_avg_transmissions


def test_batch_size_invariance():
    cfg, ch, f = CodeConfig(4, 3, 2), ChannelSpec(0.3), FieldSpec(2)
    base = run_campaign(cfg, ch, f, 1000, 5, batch_size=8192)
    for bs in (1, 7, 333):
        other = run_campaign(cfg, ch, f, 1000, 5, batch_size=bs)
        assert np.array_equal(base.empirical_pmf, other.empirical_pmf)


def test_thread_invariance():
    cfg, ch, f = CodeConfig(6, 5, 4), ChannelSpec(0.15), FieldSpec(4)
    results = [run_campaign(cfg, ch, f, 2000, 17, threads=t) for t in (1, 2, 8)]
    for other in results[1:]:
        assert np.array_equal(results[0].empirical_pmf, other.empirical_pmf)
        assert (results[0].empirical_avg_transmissions
                == other.empirical_avg_transmissions)


def test_campaign_invariants_and_validation():
    cfg, ch, f = CodeConfig(5, 3, 2), ChannelSpec(0.4), FieldSpec(2)
    res = run_campaign(cfg, ch, f, 3000, 1)
    assert res.empirical_pmf.sum() + res.empirical_outage == pytest.approx(1.0, abs=1e-12)
    assert cfg.K <= res.empirical_avg_transmissions <= cfg.N
    assert res.master_seed == 1
    assert res.generations == 3000
    with pytest.raises(ValueError):
        run_campaign(cfg, ch, f, 0, 1)
    with pytest.raises(ValueError):
        run_campaign(cfg, ch, f, 10, 1, backend="cuda")
    with pytest.raises(ValueError):
        run_campaign(cfg, ch, FieldSpec(4), 10, 1)


def test_empirical_cdf_matches_theory_spot():
    # recovery within 3 slots for q=2, K=2, eps=0.5 happens w.p. 0.22265625
    cfg, ch, f = CodeConfig(2, 1, 2), ChannelSpec(0.5), FieldSpec(2)
    gens = 1_000_000
    res = run_campaign(cfg, ch, f, gens, 2024)
    p = overhead_cdf(cfg, ch, 1)
    sigma = math.sqrt(p * (1 - p) / gens)
    assert abs((1.0 - res.empirical_outage) - p) < 3 * sigma


def _merged_chi_square(counts, probs, gens):
    """Chi-square with tail bins merged so every expected count is >= 5."""
    obs, exp = [], []
    acc_o = acc_e = 0.0
    for o, p in zip(counts, probs):
        acc_o += o
        acc_e += p * gens
        if acc_e >= 5.0:
            obs.append(acc_o)
            exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and obs:
        obs[-1] += acc_o
        exp[-1] += acc_e
    exp = np.asarray(exp) * (sum(obs) / sum(exp))
    return stats.chisquare(obs, exp)


@needs_numba
@pytest.mark.parametrize("q,K,eps", [
    (2, 10, 0.05), (2, 10, 0.2), (2, 30, 0.05), (2, 30, 0.2),
    (4, 10, 0.05), (4, 10, 0.2), (4, 30, 0.05), (4, 30, 0.2),
])
def test_overhead_histogram_goodness_of_fit(q, K, eps):
    cfg = CodeConfig(K, K // 2, q)
    ch = ChannelSpec(eps)
    gens = 100_000
    res = run_campaign(cfg, ch, FieldSpec(q), gens, 4321)
    dist = overhead_distribution(cfg, ch)
    counts = np.append(res.empirical_pmf * gens, res.empirical_outage * gens)
    probs = np.append(dist.pmf, dist.outage)
    _, pvalue = _merged_chi_square(counts, probs, gens)
    assert pvalue > 0.001


def test_empirical_mean_matches_theory():
    cfg, ch, f = CodeConfig(10, 8, 2), ChannelSpec(0.2), FieldSpec(2)
    res = run_campaign(cfg, ch, f, 100_000, 31)
    theory_mean = avg_transmissions(cfg, ch).avg_transmissions
    assert abs(res.empirical_avg_transmissions - theory_mean) < 3 * res.stderr


# ---------------------------------------------------------------- multi-receiver

def test_multi_receiver_reduces_to_campaign():
    cfg, f = CodeConfig(6, 4, 2), FieldSpec(2)
    ch = ChannelSpec(0.2)
    single = run_campaign(cfg, ch, f, 2000, 12)
    multi = run_multi_receiver(cfg, [ch], f, 2000, 12)
    only = multi.per_receiver[0]
    assert np.array_equal(single.empirical_pmf, only.empirical_pmf)
    assert single.empirical_avg_transmissions == only.empirical_avg_transmissions
    assert multi.system_outage == single.empirical_outage
    assert multi.system_avg_delay == single.empirical_avg_transmissions


def test_multi_receiver_perfect_channels():
    cfg, f = CodeConfig(5, 4, 2, "sys"), FieldSpec(2)
    multi = run_multi_receiver(cfg, [ChannelSpec(0.0)] * 3, f, 500, 1)
    assert multi.system_avg_delay == 5.0
    assert multi.system_outage == 0.0


def test_multi_receiver_system_dominates_each():
    cfg, f = CodeConfig(8, 6, 2), FieldSpec(2)
    chans = [ChannelSpec(0.1), ChannelSpec(0.3), ChannelSpec(0.2)]
    multi = run_multi_receiver(cfg, chans, f, 4000, 77)
    assert multi.system_delay_hist.sum() == multi.generations == 4000
    for res in multi.per_receiver:
        assert multi.system_avg_delay >= res.empirical_avg_transmissions - 1e-12
        assert multi.system_outage >= res.empirical_outage - 1e-12
    # heterogeneous channels: per-receiver outage ordered by erasure rate
    assert multi.per_receiver[1].empirical_outage >= multi.per_receiver[0].empirical_outage


def test_multi_receiver_determinism_across_threads():
    cfg, f = CodeConfig(6, 5, 4), FieldSpec(4)
    chans = [ChannelSpec(0.2), ChannelSpec(0.25)]
    a = run_multi_receiver(cfg, chans, f, 1500, 8, threads=1)
    b = run_multi_receiver(cfg, chans, f, 1500, 8, threads=8)
    assert np.array_equal(a.system_delay_hist, b.system_delay_hist)
    for ra, rb in zip(a.per_receiver, b.per_receiver):
        assert np.array_equal(ra.empirical_pmf, rb.empirical_pmf)


def test_multi_receiver_validation():
    cfg, f = CodeConfig(6, 5, 4), FieldSpec(4)
    with pytest.raises(ValueError):
        run_multi_receiver(cfg, [], f, 100, 0)
