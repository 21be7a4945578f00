"""
Cross-checking the closed forms against packet-level simulation
===============================================================

Run Monte Carlo campaigns -- real coefficient draws, real Gaussian
elimination -- and place the empirical averages next to the exact
formulas.  Agreement within a few standard errors on every row is the
whole point of having both implementations.
"""

from rlnc_delay import (ChannelSpec, CodeConfig, FieldSpec, avg_transmissions,
                        outage_probability, run_campaign)

GENERATIONS, SEED = 50_000, 7

print(f"{GENERATIONS} generations per row, seed {SEED}")
print(f"{'config':>28} {'theory':>8} {'empirical':>10} {'z':>6}")
for q, K, Omega, eps, scheme in [
    (2, 10, 5, 0.05, "nonsys"),
    (2, 10, 5, 0.05, "sys"),
    (4, 20, 10, 0.2, "nonsys"),
    (4, 20, 10, 0.2, "sys"),
    (16, 30, 15, 0.3, "nonsys"),
]:
    cfg = CodeConfig(K, Omega, q, scheme)
    ch = ChannelSpec(eps)
    res = run_campaign(cfg, ch, FieldSpec(q), GENERATIONS, SEED)
    expect = avg_transmissions(cfg, ch).avg_transmissions
    z = (res.empirical_avg_transmissions - expect) / res.stderr
    label = f"q={q} K={K} N={cfg.N} eps={eps} {scheme}"
    print(f"{label:>28} {expect:>8.3f} {res.empirical_avg_transmissions:>10.3f} {z:>6.2f}")

# Outage rates line up the same way:
cfg, ch = CodeConfig(30, 6, 2), ChannelSpec(0.2)
res = run_campaign(cfg, ch, FieldSpec(2), GENERATIONS, SEED)
print(f"\noutage at q=2 K=30 N=36 eps=0.2: "
      f"theory {outage_probability(cfg, ch):.4f}, "
      f"empirical {res.empirical_outage:.4f}")
