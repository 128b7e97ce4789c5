"""Indistinguishability of points through their distances to the mass of a measure.

On a finite space two points are equivalent under ``mu`` exactly when their
distance vectors agree on ``supp(mu)``. A Fréchet mean set that is a single
equivalence class is the condition under which empirical mean sets converge
in the Hausdorff metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frechet import frechet_mean, medoid
from .measures import DiscreteMeasure, support
from .metric import MetricSpace
from .sets import PointSet

COORD_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    space: MetricSpace
    blocks: tuple[PointSet, ...]

    def block_of(self, x: int) -> PointSet:
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)

    def to_json(self) -> list[list[int]]:
        return [b.to_list() for b in self.blocks]


def equivalence_classes(mu: DiscreteMeasure) -> Partition:
    space = mu.space
    supp = list(support(mu).indices)
    profiles = space.dist[:, supp]
    unassigned = list(range(space.n_points))
    blocks = []
    while unassigned:
        x = unassigned[0]
        same = [y for y in unassigned if np.all(np.abs(profiles[y] - profiles[x]) <= COORD_TOL)]
        blocks.append(PointSet(space, tuple(same)))
        unassigned = [y for y in unassigned if y not in same]
    return Partition(space, tuple(blocks))


@dataclass(frozen=True)
class HypothesisCheck:
    holds: bool
    mean_set: PointSet
    witness_class: PointSet | None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "mean_set": self.mean_set.to_list(),
            "witness_class": None if self.witness_class is None else self.witness_class.to_list(),
        }


def t2_slln_hypothesis(mu: DiscreteMeasure, p: float, restricted: bool = False) -> HypothesisCheck:
    """Check whether the (restricted) Fréchet mean set of ``mu`` is one equivalence class."""
    res = medoid(mu, p) if restricted else frechet_mean(mu, None, p)
    block = equivalence_classes(mu).block_of(res.argmin.indices[0])
    holds = block == res.argmin
    return HypothesisCheck(bool(holds), res.argmin, block if holds else None)
