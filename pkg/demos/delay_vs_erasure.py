"""
Listening time as the channel degrades
======================================

Average number of transmissions a receiver must listen to before it can
decode, as the erasure probability rises.  The deadline is set generous
(Omega = 2K) so outage barely caps the mean and the curve tracks the
unconstrained decoding delay between its two bounds.
"""

from rlnc_delay import ChannelSpec, CodeConfig, avg_transmissions, decoding_delay_bounds

K = 20

print(f"K = {K}, Omega = {2 * K}, non-systematic")
print(f"{'eps':>5} {'lower':>8} {'q=2':>8} {'q=4':>8} {'q=16':>8} {'upper(q=2)':>11}")
for i in range(6):
    eps = round(0.1 * i, 1)
    ch = ChannelSpec(eps)
    means = [avg_transmissions(CodeConfig(K, 2 * K, q), ch).avg_transmissions
             for q in (2, 4, 16)]
    lower, upper2 = decoding_delay_bounds(2, K, eps)
    print(f"{eps:>5.1f} {lower:>8.2f} {means[0]:>8.2f} {means[1]:>8.2f}"
          f" {means[2]:>8.2f} {upper2:>11.2f}")

# Every column scales like 1/(1-eps): erasures stretch time uniformly.
# The q = 16 column hugs the lower bound -- the penalty for random
# coefficients is all but gone with 16-ary symbols.
