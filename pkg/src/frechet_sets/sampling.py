"""Seeded sampling and strong-law-of-large-numbers trajectories.

Every random stream is a ``numpy`` ``PCG64`` generator seeded with a plain
integer; replicate ``i`` of an experiment uses ``base_seed + i``.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .config import ExperimentConfig
from .errors import FrechetSetsError, InvalidKernelError
from .frechet import argmin_mask, frechet_mean, medoid
from .measures import DiscreteMeasure, from_counts, measure_from_json
from .metric import MetricSpace, build_space
from .sets import LimitEstimate, PointSet, detect_from_masks, limits_from_masks, rho_to_target

RNG_ALGORITHM = "numpy.random.PCG64"
KERNEL_TOL = 1e-12


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _inverse_cdf(weights: np.ndarray, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(weights)
    idx = np.searchsorted(cdf, u, side="right")
    # u can land past cdf[-1] < 1 by round-off; map it to the last atom
    last = int(np.flatnonzero(weights > 0)[-1])
    return np.minimum(idx, last)


def sample_iid(mu: DiscreteMeasure, n: int, seed: int | np.random.Generator) -> np.ndarray:
    """``n`` independent draws from ``mu`` by inverse CDF."""
    if n < 1:
        raise FrechetSetsError(f"need n >= 1 samples, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    return _inverse_cdf(mu.weights, rng.random(n))


@dataclass(frozen=True, eq=False)
class MarkovKernel:
    space: MetricSpace
    matrix: np.ndarray

    def __post_init__(self):
        P = np.array(self.matrix, dtype=float)
        n = self.space.n_points
        if P.shape != (n, n):
            raise InvalidKernelError(f"kernel must be {n}x{n}, got shape {P.shape}")
        if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > KERNEL_TOL):
            raise InvalidKernelError("kernel rows must be nonnegative and sum to 1")
        P.setflags(write=False)
        object.__setattr__(self, "matrix", P)

    def is_irreducible(self) -> bool:
        n_comp, _ = connected_components(self.matrix > 0, directed=True, connection="strong")
        return n_comp == 1

    def period(self) -> int:
        """Period of an irreducible chain: gcd of ``level[u] + 1 - level[v]`` over edges."""
        adj = self.matrix > 0
        level = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for u in frontier:
                for v in np.flatnonzero(adj[u]):
                    v = int(v)
                    if v not in level:
                        level[v] = level[u] + 1
                        nxt.append(v)
            frontier = nxt
        diffs = [
            abs(level[u] + 1 - level[int(v)])
            for u in level
            for v in np.flatnonzero(adj[u])
            if int(v) in level
        ]
        return reduce(math.gcd, diffs, 0)

    def check_ergodic(self) -> None:
        if not self.is_irreducible():
            raise InvalidKernelError("kernel is reducible")
        per = self.period()
        if per != 1:
            raise InvalidKernelError(f"kernel is periodic with period {per}")


def stationary_distribution(kernel: MarkovKernel) -> DiscreteMeasure:
    """Solve ``pi = pi P`` with ``sum(pi) = 1`` for an irreducible aperiodic kernel."""
    kernel.check_ergodic()
    P = kernel.matrix
    n = P.shape[0]
    A = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    residual = float(np.abs(pi @ P - pi).max())
    if residual > 1e-10:
        raise InvalidKernelError(f"stationary solve residual {residual:.3g} exceeds 1e-10")
    return DiscreteMeasure(kernel.space, pi)


def stationary_residual(kernel: MarkovKernel, pi: DiscreteMeasure) -> float:
    return float(np.abs(pi.weights @ kernel.matrix - pi.weights).max())


def sample_markov(
    kernel: MarkovKernel, nu0: DiscreteMeasure, n: int, seed: int | np.random.Generator
) -> np.ndarray:
    """Chain of length ``n`` with ``X_1 ~ nu0`` and transitions drawn from ``kernel``."""
    if n < 1:
        raise FrechetSetsError(f"need n >= 1 samples, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    u = rng.random(n)
    rows = [np.cumsum(r).tolist() for r in kernel.matrix]
    lasts = [int(np.flatnonzero(r > 0)[-1]) for r in kernel.matrix]
    out = np.empty(n, dtype=np.int64)
    x = int(_inverse_cdf(nu0.weights, u[:1])[0])
    out[0] = x
    for i in range(1, n):
        x = min(bisect.bisect_right(rows[x], u[i]), lasts[x])
        out[i] = x
    return out


def geometric_checkpoints(n_max: int, base: float = 1.2) -> list[int]:
    """``ceil(base**k)`` for ``k = 0, 1, ...`` up to ``n_max``, deduplicated, ending at ``n_max``."""
    pts = set()
    k = 0
    while True:
        v = math.ceil(base**k)
        if v > n_max:
            break
        pts.add(v)
        k += 1
    pts.add(n_max)
    return sorted(pts)


def resolve_checkpoints(spec, n_max: int) -> list[int]:
    if spec in (None, "geometric"):
        return geometric_checkpoints(n_max)
    if spec == "all":
        return list(range(1, n_max + 1))
    if isinstance(spec, str):
        raise FrechetSetsError(f"unknown checkpoint schedule {spec!r}")
    cps = sorted({int(c) for c in spec})
    if not cps or cps[0] < 1 or cps[-1] > n_max:
        raise FrechetSetsError(f"checkpoints must lie in [1, {n_max}]")
    return cps


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Empirical mean sets of one sample path at a sequence of checkpoints.

    ``counts[k]`` is the occupation vector after ``checkpoints[k]`` samples,
    ``sets[k]`` the corresponding empirical mean set as a boolean mask and
    ``rho[k]`` its excess over ``target`` (``inf`` when the set is empty).
    """

    space: MetricSpace
    checkpoints: np.ndarray
    counts: np.ndarray
    sets: np.ndarray
    rho: np.ndarray
    target: PointSet
    limits: LimitEstimate
    detectors: dict
    seed: int
    p: float
    restricted: bool

    def mean_set(self, k: int) -> PointSet:
        return PointSet.from_mask(self.space, self.sets[k])

    def empirical(self, k: int) -> DiscreteMeasure:
        return from_counts(self.space, self.counts[k])

    def recompute(self, k: int) -> PointSet:
        """Mean set at checkpoint ``k`` recomputed from the stored counts through the solver."""
        mu_n = self.empirical(k)
        res = medoid(mu_n, self.p) if self.restricted else frechet_mean(mu_n, None, self.p)
        return res.argmin

    def summary(self) -> dict:
        return {
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
            "n_max": int(self.checkpoints[-1]),
            "n_checkpoints": int(len(self.checkpoints)),
            "final_set": self.mean_set(-1).to_list(),
            "final_rho": None if not np.isfinite(self.rho[-1]) else float(self.rho[-1]),
            "target": self.target.to_list(),
            "limits": self.limits.to_json(),
            "detectors": self.detectors,
        }

    def rows(self, rep: int = 0):
        """Long-format rows ``(rep, n, set, rho, counts)`` for CSV output."""
        for k, n in enumerate(self.checkpoints):
            yield {
                "rep": rep,
                "n": int(n),
                "set": ";".join(str(i) for i in np.flatnonzero(self.sets[k])),
                "rho": "" if not np.isfinite(self.rho[k]) else repr(float(self.rho[k])),
                "counts": ";".join(str(int(c)) for c in self.counts[k]),
            }


def mean_sets_from_counts(
    space: MetricSpace, counts: np.ndarray, p: float, restricted: bool, chunk: int = 4096
) -> np.ndarray:
    """Empirical (restricted) mean-set masks for a stack of count vectors."""
    dp = space.powered(p)
    counts = np.asarray(counts)
    out = np.empty(counts.shape, dtype=bool)
    for lo in range(0, counts.shape[0], chunk):
        c = counts[lo : lo + chunk]
        n = c.sum(axis=1, keepdims=True).astype(float)
        values = (c.astype(float) @ dp.T) / n
        cand = c > 0 if restricted else np.ones_like(c, dtype=bool)
        out[lo : lo + chunk] = argmin_mask(values, cand)
    return out


def population_target(mu: DiscreteMeasure, p: float, restricted: bool) -> PointSet:
    return (medoid(mu, p) if restricted else frechet_mean(mu, None, p)).argmin


def run_slln(
    space: MetricSpace,
    mu: DiscreteMeasure,
    p: float,
    restricted: bool,
    n_max: int,
    checkpoints: Sequence[int] | str | None,
    seed: int,
    *,
    kernel: MarkovKernel | None = None,
    nu0: DiscreteMeasure | None = None,
    target: PointSet | None = None,
    modes: Sequence[str] = ("K_plus", "K_minus", "H_plus", "H", "K"),
    n0: int | None = None,
    recurrence: int = 3,
    tolerance: float | None = None,
) -> TrajectoryRecord:
    """Sample ``n_max`` points and track the empirical mean sets at each checkpoint.

    With ``kernel`` given the samples come from a Markov chain started in
    ``nu0`` and the default target is the mean set of the stationary law;
    otherwise samples are i.i.d. from ``mu`` and the target is the mean set
    of ``mu``.
    """
    cps = np.array(resolve_checkpoints(checkpoints, n_max), dtype=np.int64)
    rng = make_rng(seed)
    if kernel is not None:
        kernel.check_ergodic()
        start = nu0 if nu0 is not None else mu
        samples = sample_markov(kernel, start, n_max, rng)
        population = stationary_distribution(kernel)
    else:
        samples = sample_iid(mu, n_max, rng)
        population = mu
    if target is None:
        target = population_target(population, p, restricted)

    counts = np.empty((len(cps), space.n_points), dtype=np.int64)
    for x in range(space.n_points):
        counts[:, x] = np.cumsum(samples == x)[cps - 1]
    sets = mean_sets_from_counts(space, counts, p, restricted)
    rho = rho_to_target(sets, target) if target else np.full(len(cps), np.nan)
    report = detect_from_masks(space, sets, target, modes, n0, recurrence, tolerance)
    limits = limits_from_masks(space, sets, n0, recurrence)
    return TrajectoryRecord(
        space, cps, counts, sets, rho, target, limits, report, seed, p, restricted
    )


@dataclass
class Experiment:
    """A resolved :class:`ExperimentConfig` ready to run replicates."""

    config: ExperimentConfig
    space: MetricSpace
    mu: DiscreteMeasure
    kernel: MarkovKernel | None = None
    nu0: DiscreteMeasure | None = None
    target: PointSet | None = None

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "Experiment":
        space = build_space(config.space)
        mu = measure_from_json(space, config.measure)
        kernel = nu0 = None
        if config.sampler.get("kind") == "markov":
            kernel = MarkovKernel(space, config.sampler["kernel"])
            kernel.check_ergodic()
            init = config.sampler.get("initial")
            nu0 = mu if init is None else measure_from_json(space, init)
        target = None if config.target is None else PointSet(space, tuple(config.target))
        return cls(config, space, mu, kernel, nu0, target)

    def run(self, rep: int) -> TrajectoryRecord:
        c = self.config
        return run_slln(
            self.space,
            self.mu,
            c.p,
            c.restricted,
            c.n_max,
            c.checkpoints,
            c.seed + rep,
            kernel=self.kernel,
            nu0=self.nu0,
            target=self.target,
            modes=c.modes,
            n0=c.n0,
            recurrence=c.recurrence,
            tolerance=c.tolerance,
        )


def _quantiles(x: np.ndarray) -> dict:
    x = x[np.isfinite(x)]
    if not x.size:
        return {}
    qs = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)
    return {str(q): float(v) for q, v in zip(qs, np.quantile(x, qs))}


def replicate(
    config: ExperimentConfig,
    n_reps: int | None = None,
    base_seed: int | None = None,
    threads: int | None = 1,
    keep: bool = False,
    summarize=None,
) -> dict:
    """Run ``n_reps`` independent trajectories and aggregate their verdicts.

    Replicate ``i`` is seeded with ``base_seed + i``. Results are reduced in
    replicate order, so the report does not depend on ``threads``.
    ``summarize(record)`` may return extra per-replicate data which is
    kept under ``"extra"`` in each replicate entry; ``keep=True`` also
    returns the raw trajectory records under ``"records"``.
    """
    if n_reps is not None or base_seed is not None:
        kw = config.to_json()
        if n_reps is not None:
            kw["reps"] = n_reps
        if base_seed is not None:
            kw["seed"] = base_seed
        config = ExperimentConfig.from_json(kw)
    exp = Experiment.from_config(config)
    reps = range(config.reps)

    def one(i):
        rec = exp.run(i)
        extra = summarize(rec) if summarize is not None else None
        return rec, extra

    if threads is None or threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, reps))
    else:
        results = [one(i) for i in reps]

    n_pts = exp.space.n_points
    mode_pass = {m: 0 for m in config.modes}
    final_rho = np.empty(config.reps)
    final_member = np.zeros(n_pts, dtype=np.int64)
    li_member = np.zeros(n_pts, dtype=np.int64)
    ls_member = np.zeros(n_pts, dtype=np.int64)
    ties = 0
    per_rep = []
    for i, (rec, extra) in enumerate(results):
        for m in config.modes:
            mode_pass[m] += rec.detectors["modes"][m]["passed"]
        final_rho[i] = rec.rho[-1]
        final_member += rec.sets[-1]
        li_member += rec.limits.li.mask()
        ls_member += rec.limits.ls.mask()
        ties += int(rec.sets[-1].sum() > 1)
        entry = rec.summary()
        entry["rep"] = i
        if extra is not None:
            entry["extra"] = extra
        per_rep.append(entry)

    R = config.reps
    report = {
        "rng": RNG_ALGORITHM,
        "seeds": [config.seed, config.seed + R - 1],
        "reps": R,
        "target": results[0][0].target.to_list(),
        "pass_rate": {m: mode_pass[m] / R for m in config.modes},
        "final_rho_quantiles": _quantiles(final_rho),
        "final_tie_frequency": ties / R,
        "final_membership_frequency": (final_member / R).tolist(),
        "li_membership_frequency": (li_member / R).tolist(),
        "ls_membership_frequency": (ls_member / R).tolist(),
        "replicates": per_rep,
    }
    if keep:
        report["records"] = [rec for rec, _ in results]
    return report
