"""Large-deviation quantities for empirical Fréchet mean sets.

The rate function of a set ``C`` is the smallest relative entropy
``H(nu | mu)`` over measures ``nu`` whose Fréchet mean set contains ``C``.
Here the infimum runs over the lattice of measures with weights in
``{0, 1/h, ..., 1}``, which gives an upper bound that can only decrease
under refinement of ``h``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySetError, FrechetSetsError
from .frechet import argmin_mask, frechet_mean
from .measures import DiscreteMeasure, relative_entropy_batch
from .metric import MetricSpace
from .sets import PointSet, rho_to_target
from .sampling import RNG_ALGORITHM, make_rng


@dataclass(frozen=True)
class SimplexGrid:
    """All probability vectors on ``m`` points with weights in multiples of ``1/h``."""

    m: int
    h: int

    def __post_init__(self):
        if self.m < 1 or self.h < 1:
            raise FrechetSetsError(f"simplex grid needs m >= 1 and h >= 1, got m={self.m}, h={self.h}")

    @property
    def size(self) -> int:
        return math.comb(self.h + self.m - 1, self.m - 1)

    def counts(self) -> np.ndarray:
        """Integer compositions of ``h`` into ``m`` parts, one per row (stars and bars)."""
        m, h = self.m, self.h
        if m == 1:
            return np.array([[h]], dtype=np.int64)
        bars = np.array(list(itertools.combinations(range(h + m - 1), m - 1)), dtype=np.int64)
        edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), h + m - 1)])
        return np.diff(edges, axis=1) - 1

    def weights(self) -> np.ndarray:
        return self.counts() / self.h


@dataclass(frozen=True)
class RateValue:
    value: float
    witness: DiscreteMeasure | None
    grid_size: int
    resolution: int

    def to_json(self) -> dict:
        return {
            "value": None if not np.isfinite(self.value) else self.value,
            "infinite": not np.isfinite(self.value),
            "label": "grid upper bound",
            "witness": None if self.witness is None else self.witness.weights.tolist(),
            "grid_size": self.grid_size,
            "resolution": self.resolution,
        }


def _grid_tables(mu: DiscreteMeasure, p: float, h: int):
    grid = SimplexGrid(mu.space.n_points, h)
    counts = grid.counts()
    dp = mu.space.powered(p)
    # f_p via counts / h keeps exact ties between equal-count points
    values = (counts.astype(float) @ dp.T) / h
    means = argmin_mask(values, np.ones(mu.space.n_points, dtype=bool))
    entropy = relative_entropy_batch(counts / h, mu.weights)
    return grid, counts, means, entropy


def rate_function(C: PointSet, mu: DiscreteMeasure, p: float, h: int) -> RateValue:
    """Grid upper bound on ``inf{H(nu | mu) : F_p(nu) ⊇ C}``.

    Returns ``inf`` with no witness when no grid measure is feasible.
    """
    if not C:
        raise EmptySetError("rate function of the empty set")
    grid, counts, means, entropy = _grid_tables(mu, p, h)
    feasible = means[:, list(C.indices)].all(axis=1)
    return _best(mu, grid, counts, feasible, entropy, h)


def _best(mu, grid, counts, feasible, entropy, h) -> RateValue:
    cand = np.where(feasible, entropy, np.inf)
    k = int(np.argmin(cand))
    if not np.isfinite(cand[k]):
        return RateValue(math.inf, None, grid.size, h)
    witness = DiscreteMeasure(mu.space, counts[k] / h)
    return RateValue(float(cand[k]), witness, grid.size, h)


def rate_function_table(mu: DiscreteMeasure, p: float, h: int) -> dict[tuple[int, ...], float]:
    """Rate-function grid bound for every nonempty subset of the space."""
    grid, counts, means, entropy = _grid_tables(mu, p, h)
    n = mu.space.n_points
    out = {}
    for r in range(1, n + 1):
        for sub in itertools.combinations(range(n), r):
            feasible = means[:, list(sub)].all(axis=1)
            out[sub] = float(np.where(feasible, entropy, np.inf).min())
    return out


def sublevel_sets(mu: DiscreteMeasure, p: float, h: int, alpha: float) -> list[tuple[int, ...]]:
    """Subsets whose rate-function grid bound is at most ``alpha``."""
    return [c for c, v in rate_function_table(mu, p, h).items() if v <= alpha]


def tail_decay_diagnostic(
    space: MetricSpace,
    mu: DiscreteMeasure,
    p: float,
    epsilon: float,
    n_grid: Sequence[int],
    n_reps: int,
    seed: int,
) -> dict:
    """Monte Carlo estimate of ``P(rho(F_p(mu_n), F_p(mu)) >= epsilon)`` along ``n_grid``.

    Sample counts for each ``n`` are drawn as a multinomial vector from one
    seeded stream, in grid order. Zero hit counts are censored at
    ``log(1 / n_reps)`` and left out of the least-squares slope of
    ``log P`` against ``n``.
    """
    if epsilon <= 0:
        raise FrechetSetsError(f"epsilon must be positive, got {epsilon}")
    if n_reps < 1:
        raise FrechetSetsError("n_reps must be >= 1")
    target = frechet_mean(mu, None, p).argmin
    rng = make_rng(seed)
    dp = space.powered(p)
    rows = []
    for n in n_grid:
        n = int(n)
        counts = rng.multinomial(n, mu.weights, size=n_reps)
        values = (counts.astype(float) @ dp.T) / n
        sets = argmin_mask(values, np.ones(space.n_points, dtype=bool))
        hits = int((rho_to_target(sets, target) >= epsilon).sum())
        est = hits / n_reps
        censored = hits == 0
        rows.append(
            {
                "n": n,
                "hits": hits,
                "estimate": est,
                "stderr": math.sqrt(est * (1 - est) / n_reps),
                "log_estimate": math.log(1.0 / n_reps) if censored else math.log(est),
                "censored": censored,
            }
        )
    unc = [r for r in rows if not r["censored"]]
    slope = None
    if len(unc) >= 2:
        x = np.array([r["n"] for r in unc], dtype=float)
        y = np.array([r["log_estimate"] for r in unc])
        slope = float(np.polyfit(x, y, 1)[0])
    return {
        "rng": RNG_ALGORITHM,
        "seed": seed,
        "epsilon": epsilon,
        "p": p,
        "n_reps": n_reps,
        "target": target.to_list(),
        "rows": rows,
        "slope": slope,
        "uncensored_points": len(unc),
        "decay_confirmed": None if len(unc) < 3 else bool(slope < 0),
    }
