"""
Rate function and tail decay
============================

The rate of a set C is the smallest relative entropy H(nu | mu) over
measures nu whose mean set contains C. We bound it from above on a grid
of the simplex and compare with Monte Carlo tail probabilities.
"""

import math

from frechet_sets import DiscreteMeasure, PointSet, discrete, rate_function, rate_function_table, tail_decay_diagnostic

sp = discrete(2)
mu = DiscreteMeasure(sp, [0.3, 0.7])
for h in (10, 100, 1000):
    r = rate_function(PointSet(sp, (0,)), mu, 2, h)
    print(f"h={h:5d}  I({{0}}) <= {r.value:.6f}  witness {r.witness.weights}")
print("closed form at nu = (1/2, 1/2):", 0.5 * math.log(0.5 / 0.3) + 0.5 * math.log(0.5 / 0.7))

# all subsets of a three-point space
mu3 = DiscreteMeasure(discrete(3), [0.2, 0.3, 0.5])
for C, v in sorted(rate_function_table(mu3, 2, 40).items(), key=lambda kv: kv[1]):
    print(f"  {str(C):10s} {v:.4f}")

#########################
# Probability that the empirical mean set drifts away
#########################

mu = DiscreteMeasure(sp, [0.7, 0.3])
out = tail_decay_diagnostic(sp, mu, 1, 0.5, [10, 20, 40, 80, 160], 20_000, seed=0)
for row in out["rows"]:
    print(f"n={row['n']:4d}  P ~ {row['estimate']:.5f}  censored={row['censored']}")
print("fitted slope:", round(out["slope"], 4), "decay confirmed:", out["decay_confirmed"])
