"""
Fréchet mean sets on small metric spaces
=========================================

A p-mean of a measure is any point minimizing the average p-th power
distance to it. On a finite space the minimizer is rarely unique, so the
library always returns the whole set.
"""

import numpy as np

from frechet_sets import (
    PointSet,
    circle_grid,
    from_atoms,
    frechet_mean,
    interval_grid,
    medoid,
    star,
    uniform,
)

# Two equal atoms at the ends of [0, 1], discretized with 11 points.
line = interval_grid(10)
mu = from_atoms(line, {0: 0.5, 10: 0.5})

# p = 1 is a median: every point in between is as good as any other
res = frechet_mean(mu, None, 1)
print("p=1 mean set on [0,1]:", [line.labels[i] for i in res.argmin])
print("objective values:", np.round(res.values, 3))

# p = 2 picks the midpoint only
print("p=2 mean set on [0,1]:", [line.labels[i] for i in frechet_mean(mu, None, 2).argmin])

# Restricting the candidates to the two endpoints gives both, at value 1/2
ends = frechet_mean(mu, PointSet(line, (0, 10)), 2)
print("p=2 over the endpoints:", ends.argmin.to_list(), ends.values[[0, 10]])

#########################
# Antipodal atoms on a circle
#########################

circle = circle_grid(8)
mu = from_atoms(circle, {0: 0.5, 4: 0.5})
print("circle, p=2:", frechet_mean(mu, None, 2).argmin.to_list())  # the two quarter points
print("circle, p=1:", frechet_mean(mu, None, 1).argmin.to_list())  # everything
# the medoid only looks at the support
print("circle medoid, p=2:", medoid(mu, 2).argmin.to_list())

#########################
# Star space: hub tuned so every point ties
#########################

sp = star(4, 2.0)
res = frechet_mean(uniform(sp, range(1, 5)), None, 2)
print("star, p=2:", res.argmin.to_list(), "value", res.min_value)
