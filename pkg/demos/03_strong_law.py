"""
Empirical mean sets along one sample path
=========================================

Draw i.i.d. points, keep the count vector at checkpoints and recompute the
empirical mean set each time. On the antipodal circle with p = 2 the sets
settle on the two quarter points.
"""

import numpy as np

from frechet_sets import circle_grid, from_atoms, run_slln

sp = circle_grid(8)
mu = from_atoms(sp, {0: 0.5, 4: 0.5})
rec = run_slln(sp, mu, 2, False, 10_000, None, seed=1)

print("target:", rec.target.to_list())
for k in np.linspace(0, len(rec.checkpoints) - 1, 8).astype(int):
    print(f"n={rec.checkpoints[k]:6d}  set={rec.mean_set(k).to_list()}  rho={rec.rho[k]:.3f}")

print("limits:", rec.limits.to_json())
print({m: v["passed"] for m, v in rec.detectors["modes"].items()})

# every stored set can be recomputed from the stored counts
assert all(rec.recompute(k) == rec.mean_set(k) for k in range(len(rec.checkpoints)))

#########################
# p = 1 flips with the sign of the walk
#########################

rec = run_slln(sp, mu, 1, False, 200, "all", seed=4)
s = 2 * rec.counts[:, 0] - rec.checkpoints
for k in range(12):
    print(f"n={rec.checkpoints[k]:3d}  S_n={s[k]:+d}  set={rec.mean_set(k).to_list()}")
