"""
Average overhead saturates once the deadline is generous enough
===============================================================

Sweep the permissible overhead Omega at a fixed generation size and
erasure rate.  Past a modest Omega the outage probability collapses and
the average overhead stops growing: extending the deadline further buys
reliability, not extra listening time.
"""

from rlnc_delay import ChannelSpec, CodeConfig, avg_transmissions, decoding_delay_bounds

K, EPSILON = 60, 0.1

# the deadline-free upper bound on the average overhead
upper = decoding_delay_bounds(2, K, EPSILON)[1] - K

print(f"K = {K}, epsilon = {EPSILON}, non-systematic, q = 2")
print(f"{'Omega':>6} {'avg overhead':>13} {'outage':>10}")
for Omega in range(0, 31, 3):
    s = avg_transmissions(CodeConfig(K, Omega, 2), ChannelSpec(EPSILON))
    print(f"{Omega:>6} {s.avg_overhead:>13.4f} {s.outage:>10.2e}")

print(f"\nupper bound on the plateau: {upper:.4f}")
# The plateau sits around 8.45 extra packets for q = 2; larger fields
# need less: rerun with q = 4 or q = 16 to watch the plateau drop.
