"""Scenario configuration: JSON model specs, validation, hashing, seeding.

A model spec is a JSON object with a ``kind`` and the family's parameters:

    {"kind": "gaussian", "mean": [0.0]}
    {"kind": "intractable", "theta": [1.0, 1.0]}
    {"kind": "rbm", "weights": [[...], ...], "visible_bias": [...],
     "hidden_bias": [...], "spectral_bound": false}
    {"kind": "structured_rbm", "d": 20, "d_h": 5, "per_hidden": 5,
     "weight_shift": 0.0, "visible_bias": 0.0}

A scenario file wraps two model specs (null and data-generating) with the
test settings; see :class:`ScenarioConfig`.  Validation failures raise
:class:`~steinbet.errors.ConfigError` with the offending field named.

Replication seeding is a pure function of (base seed, replication index)
via ``SeedSequence([seed, rep])``, so parallel and serial runs, and reruns
of a single replication, agree bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .models import (
    GaussianBernoulliRbm,
    GaussianModel,
    IntractableModel,
    structured_rbm,
)

__all__ = [
    "build_model",
    "model_spec",
    "ScenarioConfig",
    "load_scenario",
    "scenario_hash",
    "replication_rng",
]


def _require(cond: bool, where: str, msg: str):
    if not cond:
        raise ConfigError(f"{where}: {msg}")


def _finite_vector(value, where: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: must be numeric") from None
    _require(np.isfinite(arr).all(), where, "must be finite")
    return arr


def build_model(spec: dict, where: str = "model"):
    """Construct a score model from its JSON spec."""
    _require(isinstance(spec, dict), where, "must be an object")
    kind = spec.get("kind")
    _require(kind is not None, f"{where}.kind", "is required")
    if kind == "gaussian":
        _require("mean" in spec, f"{where}.mean", "is required")
        return GaussianModel(mean=_finite_vector(spec["mean"], f"{where}.mean"))
    if kind == "intractable":
        _require("theta" in spec, f"{where}.theta", "is required")
        theta = _finite_vector(spec["theta"], f"{where}.theta")
        _require(theta.size == 2, f"{where}.theta", "must have length 2")
        return IntractableModel(theta=theta)
    if kind == "rbm":
        for key in ("weights", "visible_bias", "hidden_bias"):
            _require(key in spec, f"{where}.{key}", "is required")
        try:
            return GaussianBernoulliRbm(
                weights=_finite_vector(spec["weights"], f"{where}.weights"),
                visible_bias=_finite_vector(spec["visible_bias"], f"{where}.visible_bias"),
                hidden_bias=_finite_vector(spec["hidden_bias"], f"{where}.hidden_bias"),
                spectral_bound=bool(spec.get("spectral_bound", False)),
            )
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    if kind == "structured_rbm":
        try:
            return structured_rbm(
                d=int(spec.get("d", 20)),
                d_h=int(spec.get("d_h", 5)),
                per_hidden=int(spec.get("per_hidden", 5)),
                weight_shift=float(spec.get("weight_shift", 0.0)),
                visible_bias=float(spec.get("visible_bias", 0.0)),
                spectral_bound=bool(spec.get("spectral_bound", False)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(
        f"{where}.kind: unknown kind {kind!r} "
        "(expected gaussian | intractable | rbm | structured_rbm)"
    )


def model_spec(model) -> dict:
    """Round-trip a model back to its JSON spec."""
    if isinstance(model, GaussianModel):
        return {"kind": "gaussian", "mean": model.mean.tolist()}
    if isinstance(model, IntractableModel):
        return {"kind": "intractable", "theta": model.theta.tolist()}
    if isinstance(model, GaussianBernoulliRbm):
        return {
            "kind": "rbm",
            "weights": model.weights.tolist(),
            "visible_bias": model.visible_bias.tolist(),
            "hidden_bias": model.hidden_bias.tolist(),
            "spectral_bound": model.spectral_bound,
        }
    raise TypeError(f"unknown model type {type(model).__name__}")


@dataclass
class ScenarioConfig:
    """Everything needed to reproduce one simulation scenario.

    ``composite`` lists the candidate family's model specs; when present the
    scenario runs the minimum-wealth test over that family and ``null_model``
    is ignored.  ``burn_in`` and ``thin`` only affect RBM data models.
    """

    data_model: dict
    null_model: dict | None = None
    composite: list[dict] | None = None
    strategy: str = "agrapa"
    alpha: float = 0.05
    horizon: int = 100
    replications: int = 100
    seed: int = 0
    bound_scale: float = 1.0
    const_bet: float = 0.5
    burn_in: int = 1000
    thin: int = 1
    name: str = "scenario"

    def __post_init__(self):
        self.validate()

    def validate(self):
        _require(isinstance(self.data_model, dict), "data_model", "is required")
        build_model(self.data_model, "data_model")
        if self.composite is not None:
            _require(
                isinstance(self.composite, (list, tuple)) and len(self.composite) > 0,
                "composite",
                "must be a non-empty list of model specs",
            )
            for i, spec in enumerate(self.composite):
                build_model(spec, f"composite[{i}]")
        else:
            _require(
                isinstance(self.null_model, dict),
                "null_model",
                "is required unless composite is given",
            )
            build_model(self.null_model, "null_model")
        _require(
            self.strategy in ("agrapa", "lbow", "ons", "const"),
            "strategy",
            f"unknown strategy {self.strategy!r}",
        )
        _require(0.0 < self.alpha < 1.0, "alpha", "must be in (0, 1)")
        _require(self.horizon >= 1, "horizon", "must be >= 1")
        _require(self.replications >= 1, "replications", "must be >= 1")
        _require(self.seed >= 0, "seed", "must be a non-negative integer")
        _require(
            np.isfinite(self.bound_scale) and self.bound_scale >= 1.0,
            "bound_scale",
            "must be >= 1",
        )
        _require(0.0 <= self.const_bet <= 1.0, "const_bet", "must be in [0, 1]")
        _require(self.burn_in >= 0, "burn_in", "must be >= 0")
        _require(self.thin >= 1, "thin", "must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        _require(isinstance(raw, dict), "config", "must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        _require(not unknown, "config", f"unknown fields {sorted(unknown)}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigError(f"config: {exc}") from None


def load_scenario(path) -> ScenarioConfig:
    with Path(path).open(encoding="utf-8") as fh:
        return ScenarioConfig.from_dict(json.load(fh))


def load_model_file(path, where: str = "model"):
    """Read a model spec JSON file; returns (model, options).

    Besides the model parameters, a spec file may carry a ``bound_scale``
    and a ``sampler`` object with ``burn_in``, ``thin``, and ``seed``; these
    come back in the options dict (None where absent) for the caller to
    apply.
    """
    with Path(path).open(encoding="utf-8") as fh:
        raw = json.load(fh)
    _require(isinstance(raw, dict), where, "must be a JSON object")
    raw = dict(raw)
    sampler = raw.pop("sampler", {})
    _require(isinstance(sampler, dict), f"{where}.sampler", "must be an object")
    unknown = set(sampler) - {"burn_in", "thin", "seed"}
    _require(not unknown, f"{where}.sampler", f"unknown fields {sorted(unknown)}")
    options = {
        "bound_scale": raw.pop("bound_scale", None),
        "burn_in": sampler.get("burn_in"),
        "thin": sampler.get("thin"),
        "seed": sampler.get("seed"),
    }
    if options["bound_scale"] is not None:
        _require(
            float(options["bound_scale"]) >= 1.0,
            f"{where}.bound_scale",
            "must be >= 1",
        )
    return build_model(raw, where), options


def scenario_hash(cfg: ScenarioConfig) -> str:
    """Stable short key for a configuration, used to name output bundles."""
    payload = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Deterministic per-replication generator (PCG64)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(rep)]))
