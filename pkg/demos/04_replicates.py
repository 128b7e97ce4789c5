"""
Replicated experiments
======================

A JSON-serializable config drives many seeded trajectories. Replicate i
uses seed base + i, and the report does not depend on the thread count.
"""

from frechet_sets import ExperimentConfig, replicate
from frechet_sets.config import dumps

cfg = ExperimentConfig.from_json(
    {
        "space": {"kind": "circle_grid", "N": 8},
        "measure": {"atoms": {"0": 0.5, "4": 0.5}},
        "p": 2,
        "n_max": 5000,
        "seed": 100,
        "reps": 30,
        "tolerance": 0.0,
    }
)

rep = replicate(cfg, threads=4)
print("rng:", rep["rng"], "seeds:", rep["seeds"])
print("pass rates:", rep["pass_rate"])
print("final rho quantiles:", rep["final_rho_quantiles"])
print("final membership frequency:", rep["final_membership_frequency"])

# same config, one thread: identical bytes
print("thread invariant:", dumps(rep) == dumps(replicate(cfg, threads=1)))

#########################
# A Markov chain instead of i.i.d. draws
#########################

markov = ExperimentConfig.from_json(
    {
        "space": {"kind": "discrete", "m": 2},
        "measure": {"uniform": "all"},
        "sampler": {"kind": "markov", "kernel": [[0.9, 0.1], [0.5, 0.5]]},
        "p": 1,
        "n_max": 20_000,
        "seed": 0,
        "reps": 10,
    }
)
rep = replicate(markov)
print("Markov target (mean set of the stationary law):", rep["target"])
print("final rho quantiles:", rep["final_rho_quantiles"])
