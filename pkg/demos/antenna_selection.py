"""Choosing 6 of 16 antennas for 4 users, checked against full enumeration.

With C(16, 6) = 8008 subsets the optimum can be found exactly, which gives
a reference for the optimizers. The continuous search position is turned
into a selection by keeping its 6 largest coordinates.

    python demos/antenna_selection.py
"""

import numpy as np

from sublation import DEConfig, ISConfig, antenna, de_run, run

D, M, K = 16, 4, 6

print("seed   oracle    IS      DE")
ratios = []
for seed in range(10):
    inst = antenna.generate_channel(D, M, seed)
    best = antenna.exhaustive_msv(inst, K)
    prob = antenna.problem(inst, K)

    is_rec = run(prob, ISConfig(k1=39, k2=10), seed)
    de_rec = de_run(prob, DEConfig(0.2, 0.1), seed)
    got = [-is_rec.best_cost, -de_rec.best_cost]
    ratios.append([g / best.msv for g in got])
    print(f"{seed:4d}   {best.msv:.4f}  {got[0]:.4f}  {got[1]:.4f}")

ratios = np.array(ratios)
print(f"\nmean fraction of the optimal MSV: IS {ratios[:, 0].mean():.3f}, DE {ratios[:, 1].mean():.3f}")

# Imperfect CSI: select on the estimate, then score on the actual channel.
inst = antenna.generate_channel(D, M, 0, alpha=0.3, beta=0.9)
rec = run(antenna.problem(inst, K), ISConfig(k1=39, k2=10), 0)
sel = antenna.map_topk(rec.best_position, K)
print(f"\nalpha=0.3, beta=0.9: MSV on estimate {antenna.f14(sel, inst):.4f}, "
      f"on actual channel {antenna.f14(sel, inst, actual=True):.4f}")
