"""Set-valued Fréchet p-means, medoids and Voronoi-cell membership.

All solvers minimize ``f_p(mu, .)`` exhaustively over a finite candidate
set, so they always return the full set of minimizers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDomainError, FrechetSetsError
from .measures import DiscreteMeasure, fp_values, support
from .sets import PointSet

REL_TIE_TOL = 1e-9
ABS_TIE_TOL = 1e-12


def tie_tolerance(min_value: float) -> float:
    return REL_TIE_TOL * min_value if min_value > 0 else ABS_TIE_TOL


@dataclass(frozen=True)
class FrechetResult:
    argmin: PointSet
    min_value: float
    values: np.ndarray
    candidate_set: PointSet

    def to_json(self) -> dict:
        return {
            "argmin": self.argmin.to_list(),
            "min_value": self.min_value,
            "values": self.values.tolist(),
            "candidate_set": self.candidate_set.to_list(),
        }


def argmin_mask(values: np.ndarray, candidate_mask: np.ndarray) -> np.ndarray:
    """Rows of ``values`` reduced to masks of near-minimal candidates.

    Works on a single value vector or a stack of them (one per row).
    """
    vals = np.where(candidate_mask, values, np.inf)
    mins = vals.min(axis=-1, keepdims=True)
    tol = np.where(mins > 0, REL_TIE_TOL * mins, ABS_TIE_TOL)
    return vals <= mins + tol


def frechet_mean(mu: DiscreteMeasure, candidate: PointSet | None, p: float) -> FrechetResult:
    """Minimizers of ``f_p(mu, .)`` over ``candidate`` (all points when ``None``)."""
    space = mu.space
    if candidate is None:
        candidate = PointSet.full(space)
    if not candidate:
        raise EmptyDomainError("Fréchet mean over an empty candidate set")
    values = fp_values(mu, p)
    mask = argmin_mask(values, candidate.mask())
    min_value = float(values[list(candidate.indices)].min())
    return FrechetResult(PointSet.from_mask(space, mask), min_value, values, candidate)


def medoid(mu: DiscreteMeasure, p: float) -> FrechetResult:
    """Restricted Fréchet mean: minimize over the support of ``mu`` only."""
    return frechet_mean(mu, support(mu), p)


def peter_paul_constant(epsilon: float, p: float) -> float:
    """Smallest constant of the form used to bound ``(a + b)^p`` by
    ``(1 + epsilon) a^p + c b^p`` for all ``a, b >= 0``.
    """
    if epsilon <= 0:
        raise FrechetSetsError(f"epsilon must be positive, got {epsilon}")
    if p < 1:
        raise FrechetSetsError(f"p must be >= 1, got {p}")
    root = (1.0 + epsilon) ** (1.0 / p) - 1.0
    return (1.0 / root + 1.0) ** p


def in_voronoi_cell(mu: DiscreteMeasure, x: int, p: float) -> bool:
    """Is ``x`` a Fréchet p-mean of ``mu``?"""
    return x in frechet_mean(mu, None, p).argmin


def in_restricted_voronoi_cell(mu: DiscreteMeasure, x: int, p: float) -> bool:
    """Is ``x`` a restricted Fréchet p-mean (medoid) of ``mu``?"""
    if mu.weights[x] <= 0:
        return False
    return x in medoid(mu, p).argmin
