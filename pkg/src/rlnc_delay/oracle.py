"""Independent Markov-chain evaluation of the overhead distribution.

A forward dynamic program over (time step, rank) that uses only two facts:
a packet survives the channel with probability 1 - epsilon, and a uniform
coded row is innovative at rank r with probability 1 - q^(r-K) (it avoids a
fixed r-dimensional subspace of F_q^K).  In the systematic scheme every
packet received during the first K steps is a fresh unit vector and raises
the rank deterministically.

No closed-form machinery from the rank/theory modules is used, so
agreement with those modules is a genuine cross-check rather than a
restatement.
"""

from __future__ import annotations

import numpy as np

from .theory import ChannelSpec, CodeConfig, OverheadDistribution, Scheme


def markov_oracle(cfg: CodeConfig, ch: ChannelSpec) -> OverheadDistribution:
    """Overhead pmf/cdf/outage computed by rank-state dynamic programming."""
    K, Omega, N = cfg.K, cfg.Omega, cfg.N
    qf = float(cfg.q)
    eps = ch.epsilon
    systematic = cfg.scheme is Scheme.SYSTEMATIC

    state = [0.0] * (K + 1)  # state[r]: probability of rank r, not yet decoded
    state[0] = 1.0
    pmf = [0.0] * (Omega + 1)
    for step in range(1, N + 1):
        if systematic and step <= K:
            p_inn = [1.0] * K  # unit vectors: always innovative
        else:
            p_inn = [1.0 - qf ** (r - K) for r in range(K)]
        nxt = [0.0] * (K + 1)
        for r in range(K):
            stay = eps + (1.0 - eps) * (1.0 - p_inn[r])
            nxt[r] += state[r] * stay
            nxt[r + 1] += state[r] * (1.0 - eps) * p_inn[r]
        if step >= K:
            pmf[step - K] = nxt[K]  # decoded exactly now; absorb
            nxt[K] = 0.0
        state = nxt
    pmf_arr = np.array(pmf)
    cdf_arr = np.cumsum(pmf_arr)
    return OverheadDistribution(pmf=pmf_arr, cdf=cdf_arr, outage=1.0 - float(cdf_arr[-1]))
