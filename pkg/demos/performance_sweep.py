"""
Link-level metrics across transmit SNR
======================================

Closed-form outage, bit error probability and ergodic capacity over a dB
grid, with exact-model simulation alongside.  The closed forms ride on the
high-SNR series CDF, so their agreement with simulation tightens as the
SNR grows; the capacity column shows the residual bias most clearly.
"""

import numpy as np

from afrelay.bessel_series import series_coeffs
from afrelay.channel import ChannelParams, combined_cdf_coeffs
from afrelay.metrics import bit_error_prob, capacity, outage
from afrelay.montecarlo import SimConfig, simulate

SAMPLES = 2_000_000
THRESHOLD = 1.0  # absolute linear SNR threshold (0 dB)

print(" SNR dB    outage        mc outage     bep           mc bep        capacity    mc capacity")
for g_db in np.linspace(0.0, 30.0, 7):
    g = 10 ** (float(g_db) / 10)
    p = ChannelParams(gamma=g, lambda_sd=1.0, lambda_sr=1.0, lambda_rd=1.0)
    co = combined_cdf_coeffs(p, series_coeffs(1.0, 10))
    cfg = SimConfig(seed=42, samples=SAMPLES)

    out = outage(p, co, THRESHOLD)
    mc_out = simulate(p, cfg, "outage", threshold=THRESHOLD, workers=4).value
    bep = bit_error_prob(p, co)
    mc_bep = simulate(p, cfg, "bep", workers=4).value
    cap = capacity(p, co)
    mc_cap = simulate(p, cfg, "capacity", workers=4).value

    print(
        f"  {g_db:5.1f}   {out:.5e}  {mc_out:.5e}  {bep:.5e}  {mc_bep:.5e}  {cap:.6f}    {mc_cap:.6f}"
    )

print()
print("capacity with a second relay (simulation only, same seed):")
for g_db in (0.0, 10.0, 20.0):
    g = 10 ** (g_db / 10)
    p = ChannelParams(gamma=g, lambda_sd=1.0, lambda_sr=1.0, lambda_rd=1.0)
    one = simulate(p, SimConfig(seed=42, samples=SAMPLES), "capacity", workers=4)
    two = simulate(p, SimConfig(seed=42, samples=SAMPLES, relays=2), "capacity", workers=4)
    print(f"  {g_db:5.1f} dB   1 relay {one.value:.6f}   2 relays {two.value:.6f}")
