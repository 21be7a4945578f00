"""Delay and outage statistics for deadline-constrained random linear
network coding over erasure broadcast channels.

Layers:

* :mod:`rlnc_delay.field`  — GF(2^n) arithmetic for the simulator;
* :mod:`rlnc_delay.rank`   — exact rank statistics of random matrices;
* :mod:`rlnc_delay.theory` — closed-form overhead/delay distributions and bounds;
* :mod:`rlnc_delay.oracle` — independent Markov-chain cross-check;
* :mod:`rlnc_delay.sim`    — packet-level Monte Carlo simulator;
* :mod:`rlnc_delay.results`/:mod:`rlnc_delay.cli` — result rows and the CLI.
"""

from .field import (
    DEFAULT_POLYNOMIALS,
    FieldSpec,
    gf_add,
    gf_inv,
    gf_mul,
    is_irreducible,
    sample_uniform_vector,
)
from .oracle import markov_oracle
from .rank import (
    RankDistribution,
    full_rank_prob,
    innovation_prob,
    rank_distribution,
    systematic_full_rank_prob,
)
from .results import ResultRow, csv_to_rows, json_to_rows, rows_to_csv, rows_to_json
from .sim import (
    OUTAGE,
    EncoderState,
    MultiReceiverResult,
    ReceiverState,
    SimCampaignResult,
    next_coding_vector,
    receiver_ingest,
    run_campaign,
    run_generation,
    run_multi_receiver,
)
from .theory import (
    ChannelSpec,
    CodeConfig,
    DelaySummary,
    OverheadDistribution,
    Scheme,
    avg_transmissions,
    decoding_delay_bounds,
    large_q_avg_transmissions,
    lucani_upper_bound,
    outage_probability,
    overhead_cdf,
    overhead_distribution,
    overhead_pmf,
    ptp_exact_delay_pmf,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLYNOMIALS", "FieldSpec", "gf_add", "gf_inv", "gf_mul",
    "is_irreducible", "sample_uniform_vector",
    "RankDistribution", "full_rank_prob", "innovation_prob",
    "rank_distribution", "systematic_full_rank_prob",
    "Scheme", "CodeConfig", "ChannelSpec", "OverheadDistribution",
    "DelaySummary", "overhead_pmf", "overhead_cdf", "overhead_distribution",
    "outage_probability", "avg_transmissions", "decoding_delay_bounds",
    "lucani_upper_bound", "large_q_avg_transmissions", "ptp_exact_delay_pmf",
    "markov_oracle",
    "OUTAGE", "EncoderState", "ReceiverState", "SimCampaignResult",
    "MultiReceiverResult", "next_coding_vector", "receiver_ingest",
    "run_generation", "run_campaign", "run_multi_receiver",
    "ResultRow", "rows_to_csv", "csv_to_rows", "rows_to_json", "json_to_rows",
    "__version__",
]
