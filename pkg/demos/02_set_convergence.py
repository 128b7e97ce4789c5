"""
Limits of set sequences
=======================

Kuratowski lower and upper limits, one-sided Hausdorff excess and the
convergence detectors, on hand-made sequences of point sets.
"""

from frechet_sets import PointSet, detect_convergence, discrete, hausdorff, interval_grid, kuratowski_limits, rho

sp = discrete(4)
A = PointSet(sp, (0, 1))
B = PointSet(sp, (1,))

# rho is one-sided: B sits inside A, not the other way round
print("rho(B, A) =", rho(B, A), " rho(A, B) =", rho(A, B), " d_H =", hausdorff(A, B))

# A sequence that cycles through the points one at a time
seq = [PointSet(sp, (k % 4,)) for k in range(40)]
est = kuratowski_limits(seq, n0=1, recurrence=2)
print("cycling singletons: Li =", est.li.to_list(), "Ls =", est.ls.to_list(), "limit:", est.lt)

# Ls is inside the whole space (upper convergence) but the whole space is not
# inside Li (no lower convergence)
rep = detect_convergence(seq, PointSet.full(sp), n0=1, recurrence=2)
for mode, v in rep["modes"].items():
    print(f"  {mode:8s} passed={v['passed']}")

#########################
# Hausdorff detectors use a tolerance
#########################

grid = interval_grid(20)
drift = [PointSet(grid, (min(k, 3),)) for k in range(30)]
target = PointSet(grid, (2,))
for tol in (0.0, 1 / 20):
    rep = detect_convergence(drift, target, modes=["H_plus", "H"], tolerance=tol)
    print(f"tolerance {tol:.2f}:", {m: v["passed"] for m, v in rep["modes"].items()})
