"""How fast errors decay with repeated observations, with and without attacks.

Runs the full (n, lambda) sweep on the reference radar scenario, fits the
per-observation log rate of the miss and false-alarm probabilities, and
compares attack strengths.  The false-alarm decay is identical across all
attack strengths (the null hypothesis is never distorted); the miss decay
slows down as distortion gets cheaper.

Run:  python3 demos/03_error_decay_under_attack.py
"""

import math

import qspoof as q
from qspoof import cli

cfg = q.default_scenario()
rows, skipped = cli.run_sweep(cfg)
assert not skipped

print(f"sweep of {len(rows)} grid points: n = 1..{cfg.n_max}, prices {cfg.lambdas}")
print()
print(" n  lambda    miss(clean)  miss(attacked)  false alarm   entropy cost")
for r in rows:
    print(
        f" {r.n}  {r.lam:6.2f}   {r.miss_clean:10.6f}   {r.miss_attacked:12.6f}"
        f"   {r.p_f_clean:11.6f}   {r.rel_entropy_cost:10.6f}"
    )

print()
print("per-price decay fits (log rate per observation, fitted over n):")
print()
by_lam = {}
for r in rows:
    by_lam.setdefault(r.lam, []).append((r.n, r.miss_attacked))
for lam, pts in sorted(by_lam.items()):
    try:
        fit = q.decay_rate_fit(pts)
    except q.InsufficientData as exc:
        print(f"  lambda={lam:g}: {exc}")
        continue
    label = "no attack" if lam == 0 else f"lambda={lam:g}"
    print(f"  {label:10s} miss slope {fit.slope:+.4f}   (r^2 {fit.r_squared:.4f})")

pf_points = [(r.n, r.p_f_clean) for r in rows if r.lam == rows[0].lam]
try:
    pf_fit = q.decay_rate_fit(pf_points)
    print(f"  false-alarm slope {pf_fit.slope:+.4f} (identical for every price)")
except q.AllErrorsZero:
    print("  false alarms are exactly zero at every n in this configuration")

print()
print("Less negative miss slopes under cheaper distortion = slower decay:")
print("the attacker cannot stop the exponential trend, only flatten it.")
