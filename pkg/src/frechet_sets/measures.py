"""Discrete probability measures and the ``f_p`` functional."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidMeasureError
from .metric import MetricSpace
from .sets import PointSet

WEIGHT_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Probability weights over the points of a finite metric space.

    Empirical measures additionally keep their integer ``counts`` so that
    ``f_p`` can be evaluated as ``(D^p @ counts) / n``: two empirical
    measures with the same count vector then give bitwise-identical values.
    """

    space: MetricSpace
    weights: np.ndarray
    counts: np.ndarray | None = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.space.n_points,):
            raise InvalidMeasureError(
                f"expected {self.space.n_points} weights, got shape {w.shape}"
            )
        if np.any(~np.isfinite(w)) or np.any(w < 0):
            raise InvalidMeasureError("weights must be finite and nonnegative")
        total = w.sum()
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise InvalidMeasureError(f"weights sum to {total!r}, not 1")
        if abs(total - 1.0) > WEIGHT_TOL:
            w = w / total
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.counts is not None:
            c = np.array(self.counts, dtype=np.int64)
            c.setflags(write=False)
            object.__setattr__(self, "counts", c)

    @property
    def n(self) -> int | None:
        """Sample size for empirical measures."""
        return None if self.counts is None else int(self.counts.sum())

    def support(self) -> PointSet:
        return support(self)

    def values(self, p: float) -> np.ndarray:
        """``f_p(mu, x)`` for every point ``x``."""
        return fp_values(self, p)

    def mix(self, other: "DiscreteMeasure", alpha: float) -> "DiscreteMeasure":
        """The mixture ``alpha * self + (1 - alpha) * other``."""
        return DiscreteMeasure(self.space, alpha * self.weights + (1 - alpha) * other.weights)

    def to_json(self) -> dict:
        return {"weights": self.weights.tolist()}


def dirac(space: MetricSpace, x: int) -> DiscreteMeasure:
    w = np.zeros(space.n_points)
    w[x] = 1.0
    return DiscreteMeasure(space, w)


def uniform(space: MetricSpace, on: Sequence[int] | None = None) -> DiscreteMeasure:
    on = range(space.n_points) if on is None else list(on)
    if not len(on):
        raise InvalidMeasureError("uniform measure needs at least one point")
    w = np.zeros(space.n_points)
    w[list(on)] = 1.0 / len(on)
    return DiscreteMeasure(space, w)


def from_atoms(space: MetricSpace, atoms: dict[int, float]) -> DiscreteMeasure:
    w = np.zeros(space.n_points)
    for x, a in atoms.items():
        w[int(x)] += a
    return DiscreteMeasure(space, w)


def from_counts(space: MetricSpace, counts) -> DiscreteMeasure:
    c = np.asarray(counts, dtype=np.int64)
    n = int(c.sum())
    if n <= 0 or np.any(c < 0):
        raise InvalidMeasureError("count vector must be nonnegative with a positive total")
    return DiscreteMeasure(space, c / n, counts=c)


def empirical_measure(space: MetricSpace, samples: Sequence[int]) -> DiscreteMeasure:
    """Uniform measure on the given samples (repetitions add mass)."""
    s = np.asarray(samples, dtype=np.int64)
    if s.size == 0:
        raise InvalidMeasureError("empirical measure of an empty sample")
    if s.min() < 0 or s.max() >= space.n_points:
        raise InvalidMeasureError("sample index out of range")
    return from_counts(space, np.bincount(s, minlength=space.n_points))


def support(mu: DiscreteMeasure) -> PointSet:
    return PointSet.from_mask(mu.space, mu.weights > 0)


def fp_values(mu: DiscreteMeasure, p: float) -> np.ndarray:
    if p < 1:
        raise InvalidMeasureError(f"p must be >= 1, got {p}")
    dp = mu.space.powered(p)
    if mu.counts is not None:
        return (dp @ mu.counts.astype(float)) / mu.n
    return dp @ mu.weights


def f_p(mu: DiscreteMeasure, x: int, p: float) -> float:
    """``sum_y mu(y) d(x, y)^p``, which is also ``W_p(mu, delta_x)^p``."""
    if not 0 <= x < mu.space.n_points:
        raise InvalidMeasureError(f"point index {x} out of range")
    return float(fp_values(mu, p)[x])


def wasserstein_to_dirac(mu: DiscreteMeasure, x: int, p: float) -> float:
    """``W_p(mu, delta_x)``; the only coupling with a point mass is the product."""
    return f_p(mu, x, p) ** (1.0 / p)


def relative_entropy(nu: DiscreteMeasure, mu: DiscreteMeasure) -> float:
    """``H(nu | mu)`` in nats, ``inf`` unless ``nu`` is absolutely continuous w.r.t. ``mu``."""
    if nu.space is not mu.space and nu.space.n_points != mu.space.n_points:
        raise InvalidMeasureError("measures live on different spaces")
    return float(relative_entropy_batch(nu.weights[None, :], mu.weights)[0])


def relative_entropy_batch(nus: np.ndarray, mu_weights: np.ndarray) -> np.ndarray:
    """Row-wise ``H(nu | mu)`` for a stack of weight vectors, with ``0 log 0 = 0``."""
    nus = np.asarray(nus, dtype=float)
    mu_w = np.asarray(mu_weights, dtype=float)
    pos = nus > 0
    outside = np.any(pos & (mu_w[None, :] <= 0), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(pos, nus * np.log(np.where(pos, nus, 1.0) / np.where(mu_w > 0, mu_w, 1.0)), 0.0)
    h = terms.sum(axis=1)
    # clip tiny negative round-off; H >= 0 always
    h = np.maximum(h, 0.0)
    h[outside] = np.inf
    return h


def track_tau_wp(
    mus: Sequence[DiscreteMeasure],
    mu: DiscreteMeasure,
    p: float,
    probes: Sequence[int] | None = None,
) -> dict:
    """Convergence diagnostics for ``mu_n -> mu`` in the ``p``-Wasserstein weak topology.

    On a finite space this reduces to convergence of the weights together with
    the functionals ``f_p(., x)`` at the probe points (all points by default).
    Returns per-n functional gaps, per-n max weight gaps and their maxima.
    """
    probes = list(range(mu.space.n_points)) if probes is None else list(probes)
    target = fp_values(mu, p)[probes]
    gaps = np.array([np.abs(fp_values(m, p)[probes] - target) for m in mus])
    wgaps = np.array([np.abs(m.weights - mu.weights).max() for m in mus])
    return {
        "probes": probes,
        "fp_gaps": gaps,
        "weight_gaps": wgaps,
        "max_fp_gap": gaps.max(axis=1) if len(mus) else np.array([]),
    }


def measure_from_json(space: MetricSpace, obj) -> DiscreteMeasure:
    """Decode ``{"weights": [...]}``, ``{"uniform": [...]}`` or ``{"atoms": {"i": w}}``."""
    if isinstance(obj, list):
        return DiscreteMeasure(space, obj)
    if not isinstance(obj, dict):
        raise InvalidMeasureError("measure JSON must be an object or a weight list")
    if "weights" in obj:
        return DiscreteMeasure(space, obj["weights"])
    if "uniform" in obj:
        on = obj["uniform"]
        return uniform(space, None if on in (None, "all") else on)
    if "atoms" in obj:
        return from_atoms(space, {int(k): float(v) for k, v in dict(obj["atoms"]).items()})
    raise InvalidMeasureError("measure JSON needs one of 'weights', 'uniform' or 'atoms'")
