"""Optimal detection of a radar return from repeated observations.

Walks through the passive detector's side of the problem: build the two
radar hypotheses (background noise only vs. noise plus a reflected target),
construct the risk-minimizing projective measurement for n observations at
the scheduled threshold, and watch both error rates fall as n grows.

Run:  python3 demos/01_helstrom_detection.py
"""

import numpy as np

import qspoof as q

cfg = q.default_scenario()
h = q.build_hypotheses(cfg)

print("Radar hypotheses in a photon-number space of dimension", cfg.dim)
print("  null (no target):  noise level", cfg.N_B, "around the vacuum")
print("  alternative:       reflectivity", cfg.x, "onto the target state")
print()

ranks = np.linalg.matrix_rank(np.stack([h.rho0.mat, h.rho1.mat]), tol=1e-10)
print(f"state ranks: null {ranks[0]}, alternative {ranks[1]} (mixtures of few pure states)")
print()

print(" n   threshold   detection   false alarm   miss")
for n in range(1, cfg.n_max + 1):
    tau = q.threshold(cfg.threshold, n)
    effect = q.helstrom_effect(h, n, tau)
    rho1n = q.DensityOperator(q.tensor_power(h.rho1, n), check=False)
    rho0n = q.DensityOperator(q.tensor_power(h.rho0, n), check=False)
    p_d, p_f = q.rates(effect, rho1n, rho0n)
    print(f" {n}   {tau:9.4f}   {p_d:9.6f}   {p_f:11.6f}   {1 - p_d:9.6f}")

print()
print("Both error rates shrink with n: more pulses mean better discrimination.")
print()

# the measurement is a projector, and single received states are decided by
# projecting them onto its range
n = 1
effect = q.helstrom_effect(h, n, q.threshold(cfg.threshold, n))
probe = q.coherent_state(np.sqrt(cfg.l), cfg.K)
print(
    "probability of declaring 'target present' on the pure target return:",
    f"{q.decide(probe, effect):.6f}",
)
vacuum = q.coherent_state(0.0, cfg.K)
print(
    "probability of declaring 'target present' on a pure vacuum return:  ",
    f"{q.decide(vacuum, effect):.6f}",
)
