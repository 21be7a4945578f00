"""Closed-form delay and outage statistics for deadline-constrained RLNC.

A transmitter broadcasts a generation of K source packets as N = K + Omega
packets over an erasure channel (i.i.d. loss probability epsilon).  In the
non-systematic scheme every packet is a uniform random linear combination
over F_q; in the systematic scheme the first K packets are the source
packets themselves and only the remaining Omega are coded.

This module gives the exact PMF/CDF of the decoding overhead omega (extra
packets past K until the receiver's matrix reaches rank K), the outage
probability at the deadline, capped average transmission counts, and
lower/upper bounds on the unconstrained average decoding delay.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from . import rank


class Scheme(enum.Enum):
    """Coding scheme: all-coded transmission, or identity prefix + coded tail."""

    NON_SYSTEMATIC = "nonsys"
    SYSTEMATIC = "sys"


@dataclass(frozen=True)
class CodeConfig:
    """Code parameters: generation size K, permissible overhead Omega (so the
    deadline is N = K + Omega), field order q and coding scheme."""

    K: int
    Omega: int
    q: int
    scheme: Scheme = Scheme.NON_SYSTEMATIC

    def __post_init__(self):
        if not isinstance(self.K, (int, np.integer)) or self.K < 1:
            raise ValueError(f"generation size K must be an integer >= 1, got {self.K!r}")
        if not isinstance(self.Omega, (int, np.integer)) or self.Omega < 0:
            raise ValueError(f"permissible overhead must be an integer >= 0, got {self.Omega!r}")
        if not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise ValueError(f"field order q must be an integer >= 2, got {self.q!r}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    @property
    def N(self) -> int:
        return self.K + self.Omega


@dataclass(frozen=True)
class ChannelSpec:
    """An erasure broadcast channel: each packet is lost independently with
    probability epsilon at the receiver."""

    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"erasure probability must lie in [0, 1], got {self.epsilon!r}")


@dataclass(frozen=True)
class OverheadDistribution:
    """Tabulated overhead distribution on 0..Omega plus the outage mass.

    pmf[w] is the probability of decoding at exactly n = K + w steps and
    cdf[w] of decoding within K + w steps; outage = 1 - cdf[Omega] is the
    probability of missing the deadline entirely.
    """

    pmf: np.ndarray
    cdf: np.ndarray
    outage: float


@dataclass(frozen=True)
class DelaySummary:
    """Capped averages at a deadline plus unconstrained-delay bounds.

    avg_transmissions is E[min(n, N)] (outage generations count as N) and
    avg_overhead = avg_transmissions - K.  The bounds apply to the average
    decoding delay without a deadline and are identical for both schemes.
    """

    avg_transmissions: float
    avg_overhead: float
    outage: float
    lower_bound: float
    upper_bound: float


def _full_rank(cfg: CodeConfig, m: int, budget: int) -> float:
    """Full-rank probability after m receptions; budget is the number of
    coded packets transmitted so far (only relevant to the systematic scheme)."""
    if cfg.scheme is Scheme.SYSTEMATIC:
        if m < cfg.K:
            return 0.0
        return rank.systematic_full_rank_prob(cfg.q, cfg.K, m, budget)
    return rank.full_rank_prob(cfg.q, cfg.K, m)


def _check_omega(cfg: CodeConfig, omega: int):
    if not isinstance(omega, (int, np.integer)) or not 0 <= omega <= cfg.Omega:
        raise ValueError(
            f"overhead must be an integer in [0, {cfg.Omega}], got {omega!r}"
        )


def overhead_pmf(cfg: CodeConfig, ch: ChannelSpec, omega: int) -> float:
    """Probability that decoding completes at exactly n = K + omega steps.

    Non-systematic: evaluated directly as the telescoped binomial sum over
    the reception count m at time K + omega - 1 (not by differencing the
    CDF, so the two routes stay independently checkable).  Systematic: the
    full-rank probability depends on the split between source and coded
    slots, which changes with omega, so no fixed-budget telescoped form
    exists; the mass is the CDF increment (validated against the
    Markov-chain oracle).
    """
    _check_omega(cfg, omega)
    eps = ch.epsilon
    if eps == 1.0:
        return 0.0
    if cfg.scheme is Scheme.SYSTEMATIC:
        low = overhead_cdf(cfg, ch, omega - 1) if omega > 0 else 0.0
        return max(0.0, overhead_cdf(cfg, ch, omega) - low)
    K = cfg.K
    tau = K + omega - 1
    # weights of Binomial(tau, 1-eps) at m = K-1 .. tau; the m = K-1 term
    # carries P(K) and each later m carries P(m+1) - P(m).
    ms = np.arange(K - 1, tau + 1)
    w = binom.pmf(ms, tau, 1.0 - eps)
    p_hi = np.array([_full_rank(cfg, m + 1, omega) for m in ms])
    p_lo = np.array([_full_rank(cfg, m, omega) for m in ms])
    p_lo[0] = 0.0
    return (1.0 - eps) * float(np.dot(w, p_hi - p_lo))


def overhead_cdf(cfg: CodeConfig, ch: ChannelSpec, omega: int) -> float:
    """Probability of decoding within n = K + omega steps.

    Binomial average of the full-rank probability over the number m of
    packets received out of the K + omega transmitted.
    """
    _check_omega(cfg, omega)
    eps = ch.epsilon
    if eps == 1.0:
        return 0.0
    K = cfg.K
    n = K + omega
    if eps == 0.0:
        return _full_rank(cfg, n, omega)
    ms = np.arange(K, n + 1)
    w = binom.pmf(ms, n, 1.0 - eps)
    p = np.array([_full_rank(cfg, m, omega) for m in ms])
    return float(np.dot(w, p))


def overhead_distribution(cfg: CodeConfig, ch: ChannelSpec) -> OverheadDistribution:
    """Tabulate pmf and cdf on 0..Omega; outage is the mass beyond Omega.

    pmf and cdf are computed by their separate formulas, so the identity
    cdf[w] = sum(pmf[:w+1]) is a nontrivial cross-check, not a tautology.
    """
    pmf = np.array([overhead_pmf(cfg, ch, w) for w in range(cfg.Omega + 1)])
    cdf = np.array([overhead_cdf(cfg, ch, w) for w in range(cfg.Omega + 1)])
    return OverheadDistribution(pmf=pmf, cdf=cdf, outage=1.0 - float(cdf[-1]))


def outage_probability(cfg: CodeConfig, ch: ChannelSpec) -> float:
    """Probability of not reaching rank K within the deadline N = K + Omega."""
    return 1.0 - overhead_cdf(cfg, ch, cfg.Omega)


def avg_transmissions(cfg: CodeConfig, ch: ChannelSpec) -> DelaySummary:
    """Average number of transmissions a receiver listens to, capped at N.

    avg_overhead = Omega - sum_{v=0}^{Omega-1} cdf(v), i.e. E[min(omega,
    Omega)]: generations still undecoded at the deadline contribute Omega.
    """
    avg_overhead = cfg.Omega - math.fsum(
        overhead_cdf(cfg, ch, v) for v in range(cfg.Omega)
    )
    out = outage_probability(cfg, ch)
    if ch.epsilon < 1.0:
        lower, upper = decoding_delay_bounds(cfg.q, cfg.K, ch.epsilon)
    else:
        lower = upper = math.inf
    return DelaySummary(
        avg_transmissions=cfg.K + avg_overhead,
        avg_overhead=avg_overhead,
        outage=out,
        lower_bound=lower,
        upper_bound=upper,
    )


def decoding_delay_bounds(q: int, K: int, epsilon: float) -> tuple[float, float]:
    """Bounds on the unconstrained average decoding delay.

    lower = K/(1-eps); upper = (K + q(1-q^-K)/(q-1)^2) / (1-eps).  The same
    bounds hold for the systematic scheme, whose average delay is smaller.
    """
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"field order q must be an integer >= 2, got {q!r}")
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise ValueError(f"generation size K must be an integer >= 1, got {K!r}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {epsilon!r}")
    if epsilon == 1.0:
        raise ValueError("average decoding delay is unbounded when epsilon = 1")
    scale = 1.0 / (1.0 - epsilon)
    lower = scale * K
    upper = scale * (K + q * (1.0 - float(q) ** -K) / (q - 1) ** 2)
    return lower, upper


def _lucani_components(q: int, K: int, epsilon: float) -> tuple[float, float]:
    scale = 1.0 / (1.0 - epsilon)
    b1 = scale * (K * q / (q - 1))
    b2 = scale * (K + 1 + (1.0 - float(q) ** (-K + 1)) / (q - 1))
    return b1, b2


def lucani_upper_bound(q: int, K: int, epsilon: float) -> float:
    """The smaller of the two classical upper bounds on the average decoding
    delay: min{Kq/(q-1), K+1+(1-q^(1-K))/(q-1)} / (1-eps).

    Never smaller than the upper bound of decoding_delay_bounds.
    """
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"field order q must be an integer >= 2, got {q!r}")
    if not isinstance(K, (int, np.integer)) or K < 2:
        raise ValueError(f"generation size K must be an integer >= 2, got {K!r}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {epsilon!r}")
    if epsilon == 1.0:
        raise ValueError("average decoding delay is unbounded when epsilon = 1")
    return min(_lucani_components(q, K, epsilon))


def large_q_avg_transmissions(K: int, epsilon: float, Omega: int) -> float:
    """Capped average transmissions in the q -> infinity limit.

    Every received packet is then innovative, so the full-rank probability
    is 1 for m >= K and the capped mean depends only on the channel.  Tends
    to K/(1-eps) as Omega grows; equal for both schemes.
    """
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise ValueError(f"generation size K must be an integer >= 1, got {K!r}")
    if not isinstance(Omega, (int, np.integer)) or Omega < 0:
        raise ValueError(f"permissible overhead must be an integer >= 0, got {Omega!r}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {epsilon!r}")
    if epsilon == 1.0:
        return float(K + Omega)
    # cdf(v) with P == 1 is the binomial tail P[Bin(K+v, 1-eps) >= K]
    cdf_sum = math.fsum(
        float(binom.sf(K - 1, K + v, 1.0 - epsilon)) for v in range(Omega)
    )
    return K + Omega - cdf_sum


def ptp_exact_delay_pmf(kappa: int, epsilon: float, delta: int) -> float:
    """Point-to-point reference: probability that kappa packets, each
    retransmitted until received, take exactly kappa + delta time steps.

    Negative-binomial mass C(kappa+delta-1, kappa-1) (1-eps)^kappa eps^delta.
    """
    if not isinstance(kappa, (int, np.integer)) or kappa < 1:
        raise ValueError(f"packet count must be an integer >= 1, got {kappa!r}")
    if not isinstance(delta, (int, np.integer)) or delta < 0:
        raise ValueError(f"extra steps must be an integer >= 0, got {delta!r}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {epsilon!r}")
    return math.comb(kappa + delta - 1, kappa - 1) * (1.0 - epsilon) ** kappa * epsilon**delta
