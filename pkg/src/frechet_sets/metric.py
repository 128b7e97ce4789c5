"""Finite metric spaces: validation, generators and JSON (de)serialization.

Points are addressed by integer index; labels only matter for display.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import InvalidMetricError

METRIC_TOL = 1e-12

SPACE_KINDS = ("explicit", "circle_grid", "interval_grid", "discrete", "star")


@dataclass(frozen=True)
class SpaceSpec:
    """Recipe for a metric space.

    ``params`` holds the keyword parameters of the chosen generator, e.g.
    ``{"N": 8}`` for ``circle_grid`` or ``{"m": 4, "p": 2}`` for ``star``.
    Explicit spaces carry ``{"dist": [[...]], "labels": [...]}``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        if self.kind == "explicit":
            out = {"kind": "explicit", "dist": self.params["dist"]}
            if self.params.get("labels") is not None:
                out["labels"] = self.params["labels"]
            return out
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_json(cls, obj: dict) -> "SpaceSpec":
        obj = dict(obj)
        if "kind" not in obj:
            if "dist" not in obj:
                raise InvalidMetricError("space JSON needs either 'kind' or 'dist'")
            obj["kind"] = "explicit"
        kind = obj.pop("kind")
        if kind not in SPACE_KINDS:
            raise InvalidMetricError(f"unknown space kind {kind!r}")
        return cls(kind, obj)


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """A finite set of points with a validated distance matrix."""

    labels: tuple
    dist: np.ndarray
    spec: SpaceSpec | None = None
    # grid spacing for discretized continua; 0.0 for genuinely discrete spaces
    resolution: float = 0.0

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if len(self.labels) != d.shape[0]:
            raise InvalidMetricError("number of labels does not match distance matrix")

    @property
    def n_points(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n_points

    @property
    def diameter(self) -> float:
        return float(self.dist.max()) if self.n_points else 0.0

    def d(self, x: int, y: int) -> float:
        return float(self.dist[x, y])

    def powered(self, p: float) -> np.ndarray:
        """Matrix of ``d(x, y) ** p``."""
        return self.dist**p

    def to_json(self) -> dict:
        if self.spec is not None and self.spec.kind != "explicit":
            return self.spec.to_json()
        return {"labels": list(self.labels), "dist": self.dist.tolist()}


def validate_metric(matrix, tol: float = METRIC_TOL) -> list[str]:
    """Return a list of human readable metric-axiom violations.

    An empty list means the matrix is a valid metric on its index set.
    Triangle violations are reported as ``(x, z, y)`` meaning
    ``d(x, z) > d(x, y) + d(y, z)``.
    """
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InvalidMetricError(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    out = []
    if not np.all(np.isfinite(d)):
        bad = np.argwhere(~np.isfinite(d))
        return [f"non-finite entry at ({i}, {j})" for i, j in bad]
    for i in range(n):
        if abs(d[i, i]) > tol:
            out.append(f"diagonal: d({i},{i}) = {d[i, i]!r} != 0")
        for j in range(i + 1, n):
            if abs(d[i, j] - d[j, i]) > tol:
                out.append(f"symmetry: d({i},{j}) = {d[i, j]!r} != d({j},{i}) = {d[j, i]!r}")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if d[i, j] < -tol:
                out.append(f"nonnegativity: d({i},{j}) = {d[i, j]!r} < 0")
            elif d[i, j] <= tol:
                out.append(f"positivity: d({i},{j}) = {d[i, j]!r} for distinct points")
    for x, z, y in triangle_violations(d, tol):
        out.append(
            f"triangle: d({x},{z}) = {d[x, z]!r} > d({x},{y}) + d({y},{z}) = {d[x, y] + d[y, z]!r}"
            f" at ({x},{z},{y})"
        )
    return out


def triangle_violations(matrix, tol: float = METRIC_TOL) -> list[tuple[int, int, int]]:
    """Triples ``(x, z, y)`` with ``x < z`` breaking the triangle inequality through ``y``."""
    d = np.asarray(matrix, dtype=float)
    excess = d[:, None, :] - (d[:, :, None] + d[None, :, :])
    return [(int(x), int(z), int(y)) for x, y, z in np.argwhere(excess > tol) if x < z]


def from_matrix(matrix, labels: Sequence | None = None) -> MetricSpace:
    d = np.asarray(matrix, dtype=float)
    problems = validate_metric(d)
    if problems:
        raise InvalidMetricError("invalid metric: " + "; ".join(problems[:5]))
    if labels is None:
        labels = range(d.shape[0])
    spec = SpaceSpec(
        "explicit",
        {"dist": d.tolist(), "labels": None if labels is None else list(labels)},
    )
    return MetricSpace(tuple(labels), d, spec=spec)


def circle_grid(N: int) -> MetricSpace:
    """``N`` equally spaced points on the circle of circumference one."""
    if N <= 0 or N % 4:
        raise InvalidMetricError(f"circle_grid needs a positive multiple of 4, got N={N}")
    idx = np.arange(N)
    gap = np.abs(idx[:, None] - idx[None, :])
    d = np.minimum(gap, N - gap) / N
    labels = tuple(f"{i}/{N}" for i in range(N))
    return MetricSpace(labels, d, spec=SpaceSpec("circle_grid", {"N": N}), resolution=1.0 / N)


def interval_grid(N: int) -> MetricSpace:
    """The ``N + 1`` points ``k/N`` of the unit interval with the Euclidean metric."""
    if N < 1:
        raise InvalidMetricError(f"interval_grid needs N >= 1, got N={N}")
    idx = np.arange(N + 1)
    d = np.abs(idx[:, None] - idx[None, :]) / N
    labels = tuple(f"{k}/{N}" for k in range(N + 1))
    return MetricSpace(labels, d, spec=SpaceSpec("interval_grid", {"N": N}), resolution=1.0 / N)


def discrete(m: int) -> MetricSpace:
    if m < 2:
        raise InvalidMetricError(f"discrete space needs m >= 2, got m={m}")
    d = 1.0 - np.eye(m)
    return MetricSpace(tuple(range(m)), d, spec=SpaceSpec("discrete", {"m": m}))


def star(m: int, p: float) -> MetricSpace:
    """Points ``{0, 1, ..., m}``: the leaves are at mutual distance one and the
    hub 0 sits at distance ``(1 - 1/m) ** (1/p)`` from every leaf.

    With ``mu`` uniform on the leaves, every point has the same ``f_p``.
    """
    if m < 2:
        raise InvalidMetricError(f"star space needs m >= 2, got m={m}")
    if p < 1:
        raise InvalidMetricError(f"star space needs p >= 1, got p={p}")
    d = 1.0 - np.eye(m + 1)
    hub = (1.0 - 1.0 / m) ** (1.0 / p)
    d[0, 1:] = hub
    d[1:, 0] = hub
    return MetricSpace(tuple(range(m + 1)), d, spec=SpaceSpec("star", {"m": m, "p": p}))


def build_space(spec: SpaceSpec | dict) -> MetricSpace:
    if isinstance(spec, dict):
        spec = SpaceSpec.from_json(spec)
    k, prm = spec.kind, spec.params
    try:
        if k == "explicit":
            return from_matrix(prm["dist"], prm.get("labels"))
        if k == "circle_grid":
            return circle_grid(int(prm["N"]))
        if k == "interval_grid":
            return interval_grid(int(prm["N"]))
        if k == "discrete":
            return discrete(int(prm["m"]))
        if k == "star":
            return star(int(prm["m"]), float(prm["p"]))
    except KeyError as exc:
        raise InvalidMetricError(f"space kind {k!r} is missing parameter {exc}") from None
    raise InvalidMetricError(f"unknown space kind {k!r}")


def random_metric(n: int, rng: np.random.Generator, density: float = 0.6) -> MetricSpace:
    """Random metric from shortest paths over a random connected weighted graph.

    A spanning path guarantees connectivity; extra edges are added with
    probability ``density``. Edge weights are drawn from ``[0.1, 1)``.
    """
    w = np.zeros((n, n))
    order = rng.permutation(n)
    for a, b in zip(order[:-1], order[1:]):
        w[a, b] = w[b, a] = rng.uniform(0.1, 1.0)
    extra = np.triu(rng.random((n, n)) < density, k=1)
    vals = rng.uniform(0.1, 1.0, size=(n, n))
    w = np.where(extra & (w == 0), vals, w)
    w = np.triu(w, 1)
    w = w + w.T
    d = shortest_path(w, method="FW", directed=False)
    # symmetrize against round-off in the path sums
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return from_matrix(d)


def space_from_json(obj: Any) -> MetricSpace:
    """Build a space from a decoded JSON object (generator recipe or explicit matrix)."""
    if not isinstance(obj, dict):
        raise InvalidMetricError("space JSON must be an object")
    return build_space(SpaceSpec.from_json(obj))
