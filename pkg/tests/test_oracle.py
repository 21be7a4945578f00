"""Markov-chain DP oracle vs the closed forms, on a reduced grid.

The acceptance suite sweeps the full grid; here a spread of corners keeps
module-level feedback fast.
"""

import numpy as np
import pytest

from rlnc_delay import (
    ChannelSpec,
    CodeConfig,
    markov_oracle,
    overhead_distribution,
)


@pytest.mark.parametrize("scheme", ["nonsys", "sys"])
@pytest.mark.parametrize("q", [2, 4, 16])
def test_oracle_matches_closed_form(q, scheme):
    for K in (1, 4, 8, 12):
        for Omega in (0, 5, 12):
            cfg = CodeConfig(K, Omega, q, scheme)
            for eps in (0.0, 0.1, 0.5, 0.9):
                ch = ChannelSpec(eps)
                oracle = markov_oracle(cfg, ch)
                closed = overhead_distribution(cfg, ch)
                np.testing.assert_allclose(oracle.pmf, closed.pmf, atol=1e-9)
                np.testing.assert_allclose(oracle.cdf, closed.cdf, atol=1e-9)
                assert oracle.outage == pytest.approx(closed.outage, abs=1e-9)


def test_oracle_mass_conservation():
    for scheme in ("nonsys", "sys"):
        cfg = CodeConfig(5, 7, 2, scheme)
        for eps in (0.0, 0.3, 1.0):
            o = markov_oracle(cfg, ChannelSpec(eps))
            assert o.pmf.sum() + o.outage == pytest.approx(1.0, abs=1e-12)


def test_oracle_degenerate_channels():
    o = markov_oracle(CodeConfig(4, 3, 2), ChannelSpec(1.0))
    assert o.outage == 1.0
    assert o.pmf.sum() == 0.0
    o = markov_oracle(CodeConfig(4, 3, 16, "sys"), ChannelSpec(0.0))
    assert o.pmf[0] == pytest.approx(1.0, abs=1e-15)


def test_oracle_frozen_value():
    # q=2, K=2, eps=0.5: recovery within 3 slots
    o = markov_oracle(CodeConfig(2, 1, 2), ChannelSpec(0.5))
    assert o.cdf[1] == pytest.approx(0.22265625, abs=1e-15)
    assert o.outage == pytest.approx(0.77734375, abs=1e-15)
