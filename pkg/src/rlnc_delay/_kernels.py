"""Compiled inner loop for simulation campaigns.

The kernel consumes pre-drawn randomness (see sim module for the stream
layout) and runs incremental Gaussian elimination per generation and
receiver.  It is behaviorally identical to the pure-Python reference path
in sim.py; tests assert that equivalence.  numba is optional: when it is
missing, HAVE_NUMBA is False and campaigns fall back to the Python path.
"""

from __future__ import annotations

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # pragma: no cover
        def wrap(f):
            return f

        return wrap

    prange = range  # pragma: no cover


@njit(cache=True, parallel=True)
def run_generations(coeffs, erased, mul, inv, K, N, systematic, out):
    """Decode every (generation, receiver) pair and record the finish step.

    coeffs: (B, V, K) uint8 coded coefficient vectors per generation, where
      V = N for the non-systematic scheme and V = N - K for the systematic
      one (the identity prefix is implicit).
    erased: (B, R, N) uint8, nonzero where the packet was lost.
    mul, inv: field multiplication table (q, q) and inverse table (q,).
    out: (B, R) int32; receives the 1-based step at which rank K was
      reached, or -1 for an outage.
    """
    B = erased.shape[0]
    R = erased.shape[1]
    for g in prange(B):
        piv = np.zeros((R, K, K), dtype=np.uint8)
        has = np.zeros((R, K), dtype=np.uint8)
        v = np.zeros(K, dtype=np.uint8)
        for r in range(R):
            rank = 0
            done = -1
            for t in range(N):
                if erased[g, r, t]:
                    continue
                if systematic and t < K:
                    # unit vector e_t: lands directly on pivot column t
                    if not has[r, t]:
                        piv[r, t, t] = 1
                        has[r, t] = 1
                        rank += 1
                else:
                    vi = t - K if systematic else t
                    for j in range(K):
                        v[j] = coeffs[g, vi, j]
                    for c in range(K):
                        a = v[c]
                        if a == 0:
                            continue
                        if has[r, c]:
                            for j in range(c, K):
                                v[j] ^= mul[a, piv[r, c, j]]
                        else:
                            ia = inv[a]
                            for j in range(c, K):
                                piv[r, c, j] = mul[ia, v[j]]
                            has[r, c] = 1
                            rank += 1
                            break
                if rank == K:
                    done = t + 1
                    break
            out[g, r] = done
