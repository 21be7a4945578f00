"""Packet-level Monte Carlo simulator for deadline-constrained RLNC broadcast.

A campaign simulates many independent generations.  Each generation
transmits N = K + Omega packets; every receiver loses each packet
independently with its channel's erasure probability and feeds the survivors
into incremental Gaussian elimination until rank K or the deadline.

Randomness contract
-------------------
Campaign randomness comes from counter-based Philox-4x64 streams so results
are bit-identical for a given (config, master_seed) regardless of worker
count or batch size.  Generation g owns the block range
[g * blocks_per_gen, (g+1) * blocks_per_gen) of the Philox sequence keyed by
master_seed (one block = 4 uint64 words).  Within a generation the words are
laid out as:

* R * N erasure words, one per (receiver, step), receiver-major; the packet
  is erased iff word < floor(epsilon * 2^64);
* then V * K coefficient bytes (words split into bytes little-endian), one
  byte per symbol, masked down to [0, q); V is the number of coded packets
  per generation (N non-systematic, Omega systematic).

Decoding delay depends on coefficient vectors alone, so packet payloads are
never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from numpy.random import Philox

from . import _kernels
from .field import FieldSpec, sample_uniform_vector
from .theory import ChannelSpec, CodeConfig, Scheme

# Returned by run_generation when the deadline passes before rank K.
OUTAGE = -1

_BATCH = 8192  # generations drawn and decoded per kernel call


@dataclass
class EncoderState:
    """Transmitter position within a generation: next time step to emit."""

    cfg: CodeConfig
    field: FieldSpec
    step: int = 1


def next_coding_vector(enc: EncoderState, rng: np.random.Generator) -> np.ndarray:
    """Coefficient vector of the next transmitted packet; advances the step.

    Systematic scheme: unit vector e_step for the first K steps, uniform
    random afterwards.  Non-systematic: uniform random (the zero vector is
    allowed) at every step.
    """
    if enc.step > enc.cfg.N:
        raise ValueError(f"deadline exhausted: all {enc.cfg.N} packets already sent")
    if enc.cfg.scheme is Scheme.SYSTEMATIC and enc.step <= enc.cfg.K:
        vec = np.zeros(enc.cfg.K, dtype=np.uint8)
        vec[enc.step - 1] = 1
    else:
        vec = sample_uniform_vector(enc.field, enc.cfg.K, rng)
    enc.step += 1
    return vec


@dataclass
class ReceiverState:
    """Row-reduced accumulator of received coefficient vectors.

    decode_rows[c] holds the normalized pivot row with leading column c
    (present iff pivot_present[c]).  rank always equals the true rank of
    the accumulated matrix.
    """

    field: FieldSpec
    K: int
    decode_rows: np.ndarray = dc_field(init=False)
    pivot_present: np.ndarray = dc_field(init=False)
    rank: int = 0
    received_count: int = 0
    done_at: int | None = None

    def __post_init__(self):
        self.decode_rows = np.zeros((self.K, self.K), dtype=np.uint8)
        self.pivot_present = np.zeros(self.K, dtype=bool)


def receiver_ingest(rx: ReceiverState, vec: np.ndarray) -> ReceiverState:
    """Fold one received coefficient vector into the receiver state.

    Rank grows by 1 iff vec lies outside the span of the rows already held;
    dependent rows (including the zero vector) leave the state unchanged.
    """
    if len(vec) != rx.K:
        raise ValueError(f"expected a length-{rx.K} vector, got {len(vec)}")
    rx.received_count += 1
    if rx.rank == rx.K:
        return rx
    mul = rx.field.mul_table
    inv = rx.field.inv_table
    v = np.asarray(vec, dtype=np.uint8).copy()
    for c in range(rx.K):
        a = v[c]
        if a == 0:
            continue
        if rx.pivot_present[c]:
            v[c:] ^= mul[a][rx.decode_rows[c, c:]]
        else:
            rx.decode_rows[c, c:] = mul[inv[a]][v[c:]]
            rx.pivot_present[c] = True
            rx.rank += 1
            break
    return rx


def run_generation(cfg: CodeConfig, ch: ChannelSpec, field: FieldSpec,
                   rng: np.random.Generator) -> int:
    """Simulate one generation; return the decode step n in [K, N] or OUTAGE.

    Per step the encoder draws a coding vector (systematic prefixes draw
    nothing), then one uniform variate decides erasure.  The receiver stops
    listening once rank K is reached.
    """
    if field.q != cfg.q:
        raise ValueError(f"field order {field.q} does not match config q={cfg.q}")
    enc = EncoderState(cfg, field)
    rx = ReceiverState(field, cfg.K)
    for step in range(1, cfg.N + 1):
        vec = next_coding_vector(enc, rng)
        if rng.random() < ch.epsilon:
            continue
        receiver_ingest(rx, vec)
        if rx.rank == cfg.K:
            rx.done_at = step
            return step
    return OUTAGE


@dataclass(frozen=True)
class SimCampaignResult:
    """Aggregate of one campaign for a single receiver.

    empirical_pmf[w] is the fraction of generations decoded at exactly
    K + w steps; histogram mass plus empirical_outage equals 1.
    empirical_avg_transmissions is the mean of min(n, N).
    """

    generations: int
    empirical_pmf: np.ndarray
    empirical_outage: float
    empirical_avg_transmissions: float
    stderr: float
    master_seed: int


@dataclass(frozen=True)
class MultiReceiverResult:
    """Per-receiver campaign results plus the empirical system delay.

    The system delay of a generation is max over receivers of min(n_r, N);
    a generation counts as a system outage if any receiver is in outage.
    """

    per_receiver: list[SimCampaignResult]
    system_delay_hist: np.ndarray  # counts over n = K..N
    system_outage: float
    system_avg_delay: float
    generations: int
    master_seed: int


def _stream_geometry(cfg: CodeConfig, receivers: int) -> tuple[int, int, int]:
    """(erasure words, coefficient bytes, blocks per generation)."""
    n_coded = cfg.N if cfg.scheme is Scheme.NON_SYSTEMATIC else cfg.Omega
    erasure_words = receivers * cfg.N
    coeff_bytes = n_coded * cfg.K
    words = erasure_words + (coeff_bytes + 7) // 8
    blocks = max(1, (words + 3) // 4)
    return erasure_words, coeff_bytes, blocks


def _erasure_threshold(epsilon: float) -> int:
    return min(int(epsilon * 2.0**64), 2**64 - 1) if epsilon < 1.0 else 2**64 - 1


def _draw_batch(master_seed: int, g0: int, count: int, cfg: CodeConfig,
                epsilons: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Materialize erasures and coefficient vectors for generations
    [g0, g0+count) from their Philox counter ranges."""
    receivers = len(epsilons)
    ew, cb, blocks = _stream_geometry(cfg, receivers)
    raw = Philox(key=master_seed, counter=g0 * blocks).random_raw(count * blocks * 4)
    raw = raw.reshape(count, blocks * 4)
    thresholds = np.array([_erasure_threshold(e) for e in epsilons], dtype=np.uint64)
    if np.any(epsilons >= 1.0):
        erased = np.ones((count, receivers, cfg.N), dtype=np.uint8)
        full = epsilons >= 1.0
    else:
        full = np.zeros(receivers, dtype=bool)
        erased = None
    words = raw[:, :ew].reshape(count, receivers, cfg.N)
    hit = words < thresholds[None, :, None]
    if erased is None:
        erased = hit.astype(np.uint8)
    else:
        erased[:, ~full, :] = hit[:, ~full, :]
    n_coded = cb // cfg.K
    cwords = np.ascontiguousarray(raw[:, ew:])
    cbytes = cwords.astype("<u8").view(np.uint8)[:, :cb]
    coeffs = (cbytes.reshape(count, n_coded, cfg.K) & np.uint8(cfg.q - 1)).copy()
    return erased, coeffs


def _decode_batch_python(coeffs: np.ndarray, erased: np.ndarray, field: FieldSpec,
                         cfg: CodeConfig, out: np.ndarray):
    """Reference decode of one batch; mirrors the compiled kernel exactly."""
    systematic = cfg.scheme is Scheme.SYSTEMATIC
    count, receivers = erased.shape[0], erased.shape[1]
    for g in range(count):
        for r in range(receivers):
            rx = ReceiverState(field, cfg.K)
            done = OUTAGE
            for t in range(cfg.N):
                if erased[g, r, t]:
                    continue
                if systematic and t < cfg.K:
                    vec = np.zeros(cfg.K, dtype=np.uint8)
                    vec[t] = 1
                else:
                    vec = coeffs[g, t - cfg.K if systematic else t]
                receiver_ingest(rx, vec)
                if rx.rank == cfg.K:
                    done = t + 1
                    break
            out[g, r] = done


def _set_threads(threads: int | None):
    if threads is not None and _kernels.HAVE_NUMBA:
        limit = _kernels.numba.config.NUMBA_NUM_THREADS
        _kernels.numba.set_num_threads(max(1, min(threads, limit)))


def _run_sim(cfg: CodeConfig, epsilons: np.ndarray, field: FieldSpec,
             generations: int, master_seed: int, threads: int | None,
             backend: str, batch_size: int) -> np.ndarray:
    """Decode-step matrix (generations, receivers); -1 marks outages."""
    if field.q != cfg.q:
        raise ValueError(f"field order {field.q} does not match config q={cfg.q}")
    if generations < 1:
        raise ValueError(f"generation count must be >= 1, got {generations}")
    if backend not in ("auto", "jit", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "jit" and not _kernels.HAVE_NUMBA:
        raise RuntimeError("numba is not available; use backend='python'")
    use_jit = backend == "jit" or (backend == "auto" and _kernels.HAVE_NUMBA)
    if use_jit:
        _set_threads(threads)
    out = np.empty((generations, len(epsilons)), dtype=np.int32)
    for g0 in range(0, generations, batch_size):
        count = min(batch_size, generations - g0)
        erased, coeffs = _draw_batch(master_seed, g0, count, cfg, epsilons)
        chunk = out[g0:g0 + count]
        if use_jit:
            _kernels.run_generations(
                coeffs, erased, field.mul_table, field.inv_table,
                cfg.K, cfg.N, int(cfg.scheme is Scheme.SYSTEMATIC), chunk,
            )
        else:
            _decode_batch_python(coeffs, erased, field, cfg, chunk)
    return out


def _summarize(done: np.ndarray, cfg: CodeConfig, generations: int,
               master_seed: int) -> SimCampaignResult:
    idx = np.where(done == OUTAGE, cfg.Omega + 1, done - cfg.K)
    counts = np.bincount(idx, minlength=cfg.Omega + 2)
    capped = np.where(done == OUTAGE, cfg.N, done).astype(np.float64)
    mean = float(capped.mean())
    if generations > 1:
        se = float(capped.std(ddof=1)) / math.sqrt(generations)
    else:
        se = 0.0
    return SimCampaignResult(
        generations=generations,
        empirical_pmf=counts[: cfg.Omega + 1] / generations,
        empirical_outage=counts[cfg.Omega + 1] / generations,
        empirical_avg_transmissions=mean,
        stderr=se,
        master_seed=master_seed,
    )


def run_campaign(cfg: CodeConfig, ch: ChannelSpec, field: FieldSpec,
                 generations: int, master_seed: int, *,
                 threads: int | None = None, backend: str = "auto",
                 batch_size: int = _BATCH) -> SimCampaignResult:
    """Simulate `generations` independent generations for one receiver.

    Deterministic in (cfg, ch, master_seed): per-generation counter streams
    make the result independent of threads, backend and batch_size.
    """
    eps = np.array([ch.epsilon])
    done = _run_sim(cfg, eps, field, generations, master_seed, threads,
                    backend, batch_size)
    return _summarize(done[:, 0], cfg, generations, master_seed)


def run_multi_receiver(cfg: CodeConfig, ch_per_receiver: list[ChannelSpec],
                       field: FieldSpec, generations: int, master_seed: int, *,
                       threads: int | None = None, backend: str = "auto",
                       batch_size: int = _BATCH) -> MultiReceiverResult:
    """Broadcast campaign: shared coding vectors, independent erasures.

    With a single receiver the per-receiver result is identical to
    run_campaign with the same seed.
    """
    if not ch_per_receiver:
        raise ValueError("at least one receiver channel is required")
    eps = np.array([ch.epsilon for ch in ch_per_receiver])
    done = _run_sim(cfg, eps, field, generations, master_seed, threads,
                    backend, batch_size)
    per_rx = [_summarize(done[:, r], cfg, generations, master_seed)
              for r in range(len(ch_per_receiver))]
    capped = np.where(done == OUTAGE, cfg.N, done)
    system = capped.max(axis=1)
    hist = np.bincount(system - cfg.K, minlength=cfg.Omega + 1)
    outage = float((done == OUTAGE).any(axis=1).mean())
    return MultiReceiverResult(
        per_receiver=per_rx,
        system_delay_hist=hist,
        system_outage=outage,
        system_avg_delay=float(system.mean()),
        generations=generations,
        master_seed=master_seed,
    )
