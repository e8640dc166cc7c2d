"""
Warps of noisy signals
======================

Adding white noise flattens the spectral energy density, so the adapted
warp drifts from the clean-signal warp toward the spectrum-equalizing warp.
"""

from graphspectra.experiments import noise_sweep

r = noise_sweep(seed=0)
lam_max = r["lam_max"]
print(f"{'SNR dB':>7s} {'d(T, T_F)':>10s} {'d(T, T_L)':>10s} {'sup d(T, avg)':>14s}   (units of lambda_max)")
for row in r["rows"]:
    print(f"{row['snr_db']:7.0f} {row['dist_energy'] / lam_max:10.4f} "
          f"{row['dist_spectrum'] / lam_max:10.4f} {row['sup_dist_average'] / lam_max:14.4f}")
for name, ok in r["checks"].items():
    print(f"{name}: {ok}")
