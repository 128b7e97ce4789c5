"""
Indistinguishable points and Voronoi cells of measures
======================================================

Two points are equivalent under mu when they have the same distances to
every atom of mu. When the mean set is exactly one such class the
empirical mean sets converge in the Hausdorff sense.
"""

from frechet_sets import (
    DiscreteMeasure,
    circle_grid,
    discrete,
    equivalence_classes,
    from_atoms,
    from_matrix,
    in_restricted_voronoi_cell,
    in_voronoi_cell,
    t2_slln_hypothesis,
    uniform,
)

sp = circle_grid(8)
mu = from_atoms(sp, {0: 0.5, 4: 0.5})
print("classes:", equivalence_classes(mu).to_json())
print("antipodal circle:", t2_slln_hypothesis(mu, 2).to_json())
print("uniform on 3 points:", t2_slln_hypothesis(uniform(discrete(3)), 2).to_json())

#########################
# Restricted cells are not convex
#########################

# the points -1, 0, 1 of the real line
line = from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]], labels=[-1, 0, 1])
mu1 = from_atoms(line, {0: 0.5, 1: 0.5})
mu2 = from_atoms(line, {0: 0.5, 2: 0.5})
mid = mu1.mix(mu2, 0.5)
print("-1 is a medoid of mu1, mu2, their midpoint:",
      [in_restricted_voronoi_cell(m, 0, 2) for m in (mu1, mu2, mid)])

# nor closed: 0 is a medoid all along this sequence, but not of its limit
for k in (1, 10, 1000):
    mu_k = DiscreteMeasure(line, [0.5 * (1 - 1 / k), 1 / k, 0.5 * (1 - 1 / k)])
    print(f"k={k:5d}: 0 is a medoid -> {in_restricted_voronoi_cell(mu_k, 1, 2)}")
print("limit:", in_restricted_voronoi_cell(mu2, 1, 2))

# the unrestricted cell of 0 does contain the limit
print("0 in the unrestricted cell of the limit:", in_voronoi_cell(mu2, 1, 2))
