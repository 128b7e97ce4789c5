"""Point sets of a finite metric space and their set-convergence diagnostics.

Infinite-sequence Kuratowski limits are estimated from a finite tail of the
sequence; see :func:`kuratowski_limits` for the estimator and its knobs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySetError, FrechetSetsError
from .metric import MetricSpace

MODES = ("K_plus", "K_minus", "H_plus", "H", "K")

DEFAULT_RECURRENCE = 3


@dataclass(frozen=True)
class PointSet:
    """An immutable, sorted set of point indices of ``space``.

    Equality and hashing only look at the indices, so sets from the same
    space compare naturally.
    """

    space: MetricSpace = field(compare=False, repr=False)
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        n = self.space.n_points
        if idx and (idx[0] < 0 or idx[-1] >= n):
            raise FrechetSetsError(f"point index out of range for a space with {n} points: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def full(cls, space: MetricSpace) -> "PointSet":
        return cls(space, tuple(range(space.n_points)))

    @classmethod
    def from_mask(cls, space: MetricSpace, mask) -> "PointSet":
        return cls(space, tuple(np.flatnonzero(mask)))

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, x):
        return int(x) in self.indices

    def __bool__(self):
        return bool(self.indices)

    def __le__(self, other: "PointSet") -> bool:
        return set(self.indices) <= set(other.indices)

    def __ge__(self, other: "PointSet") -> bool:
        return set(self.indices) >= set(other.indices)

    def __or__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, self.indices + other.indices)

    def __and__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, tuple(set(self.indices) & set(other.indices)))

    def mask(self) -> np.ndarray:
        m = np.zeros(self.space.n_points, dtype=bool)
        m[list(self.indices)] = True
        return m

    def to_list(self) -> list[int]:
        return list(self.indices)


def point_set(space: MetricSpace, indices: Iterable[int]) -> PointSet:
    return PointSet(space, tuple(indices))


def rho(C: PointSet, C2: PointSet) -> float:
    """One-sided Hausdorff excess ``max_{x in C} min_{x' in C2} d(x, x')``."""
    if not C or not C2:
        raise EmptySetError("rho is undefined for empty sets")
    sub = C.space.dist[np.ix_(C.indices, C2.indices)]
    return float(sub.min(axis=1).max())


def hausdorff(C: PointSet, C2: PointSet) -> float:
    return max(rho(C, C2), rho(C2, C))


@dataclass(frozen=True)
class LimitEstimate:
    """Tail estimate of the Kuratowski lower/upper limits of a set sequence.

    ``window`` is the 1-based inclusive range ``(n0, N)`` of sequence
    positions used; ``recurrence`` is the number of tail hits that was
    required for membership in ``ls``, after capping at the tail length.
    """

    li: PointSet
    ls: PointSet
    window: tuple[int, int]
    recurrence: int

    @property
    def lt(self) -> PointSet | None:
        """The Kuratowski limit when lower and upper estimates agree."""
        return self.li if self.li == self.ls else None

    def to_json(self) -> dict:
        lt = self.lt
        return {
            "estimator": "finite-tail (n0, r) estimate",
            "li": self.li.to_list(),
            "ls": self.ls.to_list(),
            "lt": None if lt is None else lt.to_list(),
            "window": list(self.window),
            "recurrence": self.recurrence,
        }


def _tail_start(N: int, n0: int | None) -> int:
    if n0 is None:
        return max(1, N // 2)
    if not 1 <= n0 <= N:
        raise FrechetSetsError(f"tail start n0={n0} outside [1, {N}]")
    return n0


def limits_from_masks(
    space: MetricSpace, masks: np.ndarray, n0: int | None = None, recurrence: int = DEFAULT_RECURRENCE
) -> LimitEstimate:
    """:func:`kuratowski_limits` on a ``(N, |X|)`` boolean membership array."""
    masks = np.asarray(masks, dtype=bool)
    if masks.ndim != 2 or masks.shape[0] == 0:
        raise FrechetSetsError("kuratowski_limits needs a nonempty sequence")
    if recurrence < 1:
        raise FrechetSetsError(f"recurrence threshold must be >= 1, got {recurrence}")
    N = masks.shape[0]
    start = _tail_start(N, n0)
    tail = masks[start - 1 :]
    hits = tail.sum(axis=0)
    r = min(recurrence, tail.shape[0])
    li = PointSet.from_mask(space, hits == tail.shape[0])
    ls = PointSet.from_mask(space, hits >= r)
    return LimitEstimate(li, ls, (start, N), r)


def kuratowski_limits(
    seq: Sequence[PointSet], n0: int | None = None, recurrence: int = DEFAULT_RECURRENCE
) -> LimitEstimate:
    """Estimate ``Li`` and ``Ls`` of a set sequence from its tail.

    ``li`` collects the points present in every set from position ``n0``
    (1-based) to the end; ``ls`` the points present in at least
    ``recurrence`` of those sets. ``n0`` defaults to ``N // 2``.

    When the tail is shorter than ``recurrence`` the threshold is capped at
    the tail length so that ``li`` stays inside ``ls``.
    """
    if not seq:
        raise FrechetSetsError("kuratowski_limits needs a nonempty sequence")
    return limits_from_masks(seq[0].space, np.array([s.mask() for s in seq]), n0, recurrence)


def _slope(y: np.ndarray) -> float | None:
    if len(y) < 2 or not np.all(np.isfinite(y)):
        return None
    x = np.arange(len(y), dtype=float)
    return float(np.polyfit(x, y, 1)[0])


def _json_float(v: float) -> float | None:
    return None if not np.isfinite(v) else float(v)


def default_tolerance(space: MetricSpace) -> float:
    """One grid step on discretized continua, zero on discrete spaces."""
    return float(space.resolution)


def rho_to_target(masks: np.ndarray, target: PointSet) -> np.ndarray:
    """``rho(C_n, target)`` for each row of a membership array; ``inf`` for empty rows."""
    if not target:
        raise EmptySetError("rho is undefined for an empty target")
    masks = np.asarray(masks, dtype=bool)
    nearest = target.space.dist[:, list(target.indices)].min(axis=1)
    out = np.where(masks, nearest[None, :], -np.inf).max(axis=1)
    out[~masks.any(axis=1)] = np.inf
    return out


def rho_from_target(masks: np.ndarray, target: PointSet) -> np.ndarray:
    """``rho(target, C_n)`` for each row; ``inf`` for empty rows."""
    masks = np.asarray(masks, dtype=bool)
    d = target.space.dist[list(target.indices)]  # (|T|, |X|)
    sub = np.where(masks[:, None, :], d[None, :, :], np.inf)
    return sub.min(axis=2).max(axis=1)


def detect_from_masks(
    space: MetricSpace,
    masks: np.ndarray,
    target: PointSet,
    modes: Sequence[str] = MODES,
    n0: int | None = None,
    recurrence: int = DEFAULT_RECURRENCE,
    tolerance: float | None = None,
) -> dict:
    """:func:`detect_convergence` on a ``(N, |X|)`` boolean membership array."""
    unknown = [m for m in modes if m not in MODES]
    if unknown:
        raise FrechetSetsError(f"unknown detector modes {unknown}; choose from {MODES}")
    need_rho = any(m in ("H_plus", "H") for m in modes)
    if not target and need_rho:
        raise EmptySetError("Hausdorff detectors need a nonempty target")
    tol = default_tolerance(space) if tolerance is None else float(tolerance)
    est = limits_from_masks(space, masks, n0, recurrence)
    tail = np.asarray(masks, dtype=bool)[est.window[0] - 1 :]
    report: dict = {"limits": est.to_json(), "tolerance": tol, "modes": {}}

    k_plus = est.ls <= target
    k_minus = target <= est.li
    if need_rho:
        fwd = rho_to_target(tail, target)
        both = np.maximum(fwd, rho_from_target(tail, target))
    for m in modes:
        if m == "K_plus":
            report["modes"][m] = {"passed": bool(k_plus)}
        elif m == "K_minus":
            report["modes"][m] = {"passed": bool(k_minus)}
        elif m == "K":
            report["modes"][m] = {"passed": bool(k_plus and k_minus)}
        else:
            vals = fwd if m == "H_plus" else both
            mx = float(vals.max())
            report["modes"][m] = {
                "passed": bool(mx <= tol),
                "tail_max": _json_float(mx),
                "tail_last": _json_float(float(vals[-1])),
                "trend": _slope(vals),
            }
    return report


def detect_convergence(
    seq: Sequence[PointSet],
    target: PointSet,
    modes: Sequence[str] = MODES,
    n0: int | None = None,
    recurrence: int = DEFAULT_RECURRENCE,
    tolerance: float | None = None,
) -> dict:
    """Run the requested convergence detectors over the tail of ``seq``.

    ``K_plus`` checks ``ls ⊆ target``, ``K_minus`` checks ``target ⊆ li``,
    ``H_plus`` checks that ``rho(C_n, target)`` stays within ``tolerance``
    on the tail, ``H`` does the same for the symmetric Hausdorff distance and
    ``K`` is the conjunction of ``K_plus`` and ``K_minus``. Empty sets in the
    tail count as ``H_plus`` failures and add nothing to ``ls``.

    ``tolerance`` defaults to one grid step for grid spaces and 0 otherwise.
    """
    if not seq:
        raise FrechetSetsError("detect_convergence needs a nonempty sequence")
    masks = np.array([s.mask() for s in seq])
    return detect_from_masks(target.space, masks, target, modes, n0, recurrence, tolerance)
