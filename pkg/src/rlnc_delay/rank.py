"""Rank statistics of random matrices over F_q.

Probabilities that an m x K matrix with i.i.d. uniform entries over F_q
(optionally prefixed by rows of the K x K identity) reaches full rank K.
Here q is an arbitrary integer >= 2: the formulas use q only numerically,
so no field tables are involved.

Counting is exact (Python integers / fractions); products of the form
prod(1 - q^(i-m)) are evaluated as exp(fsum(log1p(...))) so that the
tolerances of the downstream identities (1e-12) survive large m and K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np


def _check_qK(q: int, K: int):
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"field order q must be an integer >= 2, got {q!r}")
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise ValueError(f"generation size K must be an integer >= 1, got {K!r}")


@dataclass(frozen=True)
class RankDistribution:
    """Distribution of the rank of a random m x K matrix over F_q.

    probabilities[r] is the probability of rank r, for r = 0..min(m, K).
    Entries are nonnegative and sum to 1 within 1e-12.
    """

    probabilities: np.ndarray

    def __len__(self):
        return len(self.probabilities)

    def __getitem__(self, r: int) -> float:
        return float(self.probabilities[r])


@lru_cache(maxsize=None)
def full_rank_prob(q: int, K: int, m: int) -> float:
    """Probability that a random m x K matrix over F_q has rank K.

    Equals prod_{i=0}^{K-1} (1 - q^(i-m)) for m >= K and 0 otherwise.
    Nondecreasing in m; value in [0, 1).
    """
    _check_qK(q, K)
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"row count m must be an integer >= 0, got {m!r}")
    if m < K:
        return 0.0
    qf = float(q)
    return math.exp(math.fsum(math.log1p(-qf ** (i - m)) for i in range(K)))


def innovation_prob(q: int) -> float:
    """Probability 1 - 1/q that the last missing dimension is supplied.

    A uniform row avoids any fixed (K-1)-dimensional subspace of F_q^K
    with probability 1 - q^(-1), independently of K.
    """
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"field order q must be an integer >= 2, got {q!r}")
    return 1.0 - 1.0 / q


def _rank_count(q: int, K: int, m: int, r: int) -> int:
    """Number of m x K matrices over F_q of rank exactly r (exact integer)."""
    num = 1
    den = 1
    for i in range(r):
        num *= (q**m - q**i) * (q**K - q**i)
        den *= q**r - q**i
    return num // den


def rank_distribution(q: int, K: int, m: int) -> RankDistribution:
    """Exact distribution of the rank of a random m x K matrix over F_q.

    Computed by integer counting of the rank-r matrices, normalized by
    q^(mK); each entry is the correctly rounded float of an exact rational.
    """
    _check_qK(q, K)
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"row count m must be an integer >= 0, got {m!r}")
    total = q ** (m * K)
    probs = np.array(
        [float(Fraction(_rank_count(q, K, m, r), total)) for r in range(min(m, K) + 1)]
    )
    return RankDistribution(probs)


@lru_cache(maxsize=None)
def systematic_full_rank_prob(q: int, K: int, m: int, omega_prime: int) -> float:
    """Full-rank probability when m of K + omega_prime sent packets arrived.

    The transmission consists of the K distinct unit vectors followed by
    omega_prime uniform random vectors; the m received rows are a uniformly
    random subset.  Averaging over the number h of received unit rows:

        sum_h C(K,h) C(w',m-h) prod_{i=0}^{K-h-1} (1 - q^(h+i-m)) / C(K+w',m)

    with h from max(0, m-w') to K, and an empty product equal to 1.
    Strictly exceeds full_rank_prob(q, K, m).
    """
    _check_qK(q, K)
    if not isinstance(omega_prime, (int, np.integer)) or omega_prime < 0:
        raise ValueError(f"coded budget must be an integer >= 0, got {omega_prime!r}")
    if not isinstance(m, (int, np.integer)) or not K <= m <= K + omega_prime:
        raise ValueError(
            f"row count m must satisfy K <= m <= K + omega_prime, got m={m!r}"
        )
    qf = float(q)
    den = math.comb(K + omega_prime, m)
    terms = []
    for h in range(max(0, m - omega_prime), K + 1):
        ways = math.comb(K, h) * math.comb(omega_prime, m - h)
        prod = math.exp(math.fsum(math.log1p(-qf ** (h + i - m)) for i in range(K - h)))
        terms.append(float(Fraction(ways, den)) * prod)
    return math.fsum(terms)
