"""Experiment configuration and its JSON schema.

A config file looks like::

    {
      "space": {"kind": "circle_grid", "N": 8},
      "measure": {"atoms": {"0": 0.5, "4": 0.5}},
      "p": 2,
      "restricted": false,
      "sampler": {"kind": "iid"},
      "n_max": 10000,
      "checkpoints": "geometric",
      "reps": 100,
      "seed": 1,
      "modes": ["K_plus", "K_minus", "H_plus", "H", "K"],
      "n0": null, "recurrence": 3, "tolerance": null,
      "target": null,
      "csv": null
    }

``checkpoints`` is ``"geometric"`` (``ceil(1.2**k)`` deduplicated, always
ending at ``n_max``), ``"all"`` or an explicit list. ``n0`` is a 1-based
position in the checkpoint list. ``sampler`` may instead be
``{"kind": "markov", "kernel": [[...]], "initial": <measure>}``; ``initial``
defaults to ``measure``. For a Markov sampler the target is the mean set
of the stationary law, not of ``measure``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import FrechetSetsError
from .sets import DEFAULT_RECURRENCE, MODES

SCHEMA_VERSION = 1


class ConfigError(FrechetSetsError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    space: dict
    measure: Any
    p: float
    seed: int
    n_max: int
    restricted: bool = False
    sampler: dict = field(default_factory=lambda: {"kind": "iid"})
    checkpoints: Any = "geometric"
    reps: int = 1
    modes: tuple = MODES
    n0: int | None = None
    recurrence: int = DEFAULT_RECURRENCE
    tolerance: float | None = None
    target: list | None = None
    csv: str | None = None

    def __post_init__(self):
        if self.p < 1:
            raise ConfigError(f"p must be >= 1, got {self.p}")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if self.sampler.get("kind") not in ("iid", "markov"):
            raise ConfigError(f"unknown sampler {self.sampler!r}")
        if self.sampler.get("kind") == "markov" and "kernel" not in self.sampler:
            raise ConfigError("markov sampler needs a 'kernel'")
        bad = [m for m in self.modes if m not in MODES]
        if bad:
            raise ConfigError(f"unknown detector modes {bad}")
        object.__setattr__(self, "modes", tuple(self.modes))

    def to_json(self) -> dict:
        out = asdict(self)
        out["modes"] = list(self.modes)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        missing = [k for k in ("space", "measure", "p", "seed", "n_max") if k not in obj]
        if missing:
            raise ConfigError(f"config is missing required keys {missing}")
        known = set(cls.__dataclass_fields__)
        extra = sorted(set(obj) - known)
        if extra:
            raise ConfigError(f"unknown config keys {extra}")
        kw = dict(obj)
        kw["p"] = float(kw["p"])
        kw["seed"] = int(kw["seed"])
        kw["n_max"] = int(kw["n_max"])
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def dumps(obj) -> str:
    """Canonical JSON used for every report so repeated runs compare byte for byte."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)
