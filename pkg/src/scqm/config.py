"""Run configurations: YAML in, validated :class:`RunConfig` out.

A configuration looks like::

    model:
      name: scqm_aop
      params: {dim: 16}
    algorithm:
      name: vqe
      params: {optimizer: l-bfgs-b, budget: 2000}
    seed: 7
    output: runs/aop-vqe        # optional

Validation is strict: unknown keys, wrong types and out-of-range values are
all reported together as one :class:`~scqm.exceptions.ConfigError`, and
nothing is computed or written before it passes.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .exceptions import ConfigError
from .models import MODEL_LABELS

OUTPUT_ROOT_ENV = "SCQM_OUTPUT_ROOT"
DEFAULT_OUTPUT_ROOT = "runs"

ALGORITHMS = ("diagonalize", "vqe", "eoh", "pauli_dump", "exact_oracle")

_NUM = (int, float)
_OPT_INT = (int, type(None))
_OPT_NUM = (int, float, type(None))

_SCQM_PARAMS = {"m": _NUM, "omega": _NUM, "g": _NUM, "dim": int}
MODEL_SCHEMA = {
    "scqm_basis": {**_SCQM_PARAMS, "basis": str},
    "scqm_aop": dict(_SCQM_PARAMS),
    "scqm_boson_fermion": dict(_SCQM_PARAMS),
    "cms_bosonic": {"n_particles": int, "omega": _NUM, "g": _NUM, "per_boson_dim": int,
                    "coincident": str, "penalty_value": _OPT_NUM},
}
MODEL_SCHEMA["cms_susy"] = dict(MODEL_SCHEMA["cms_bosonic"])

ALGORITHM_SCHEMA = {
    "diagonalize": {"levels": int},
    "exact_oracle": {"levels": int},
    "pauli_dump": {"prune_tol": _NUM},
    "vqe": {"optimizer": str, "reps": int, "rotation_axes": str, "restarts": int, "budget": int,
            "init_scale": _NUM, "shots": _OPT_INT, "depolarizing_p1": _NUM, "depolarizing_p2": _NUM,
            "trajectories": int, "fd_step": _NUM},
    "eoh": {"order": int, "slices": int, "splitting": str, "per_unit_time": bool, "source": int,
            "times": (list, dict)},
}
_CHOICES = {
    "basis": ("oscillator", "position", "finite_difference"),
    "coincident": ("pinv", "penalty"),
    "optimizer": ("l-bfgs-b", "spsa", "nelder-mead"),
    "rotation_axes": ("y", "yz"),
    "splitting": ("per_term", "kinetic_potential"),
    "order": (1, 2, 4),
}
_POSITIVE = {"m", "omega", "dim", "per_boson_dim", "levels", "reps", "restarts", "budget", "init_scale",
             "shots", "trajectories", "fd_step", "slices", "penalty_value"}
_UNIT = {"depolarizing_p1", "depolarizing_p2"}
TOP_LEVEL_KEYS = {"model", "algorithm", "seed", "output"}
SECTION_KEYS = {"name", "params"}


@dataclass(frozen=True)
class RunConfig:
    model: str
    algorithm: str
    model_params: dict = field(default_factory=dict)
    algorithm_params: dict = field(default_factory=dict)
    seed: int = 0
    output: str | None = None

    def to_dict(self) -> dict:
        out = {
            "model": {"name": self.model, "params": dict(self.model_params)},
            "algorithm": {"name": self.algorithm, "params": dict(self.algorithm_params)},
            "seed": self.seed,
        }
        if self.output is not None:
            out["output"] = self.output
        return out

    def with_seed(self, seed: int) -> "RunConfig":
        return RunConfig(self.model, self.algorithm, self.model_params, self.algorithm_params, int(seed), self.output)

    def output_dir(self, override: str | os.PathLike | None = None) -> Path:
        """``override``, else ``output``, else ``$SCQM_OUTPUT_ROOT/<model>-<algorithm>-seed<seed>``."""
        if override is not None:
            return Path(override)
        if self.output is not None:
            return Path(self.output)
        root = os.environ.get(OUTPUT_ROOT_ENV, DEFAULT_OUTPUT_ROOT)
        return Path(root) / f"{self.model}-{self.algorithm}-seed{self.seed}"


def _is_type(value, types) -> bool:
    types = types if isinstance(types, tuple) else (types,)
    if isinstance(value, bool) and bool not in types:
        return False
    if isinstance(value, int) and not isinstance(value, bool) and float in types:
        return True
    return isinstance(value, types)


def _check_params(where: str, params, schema: dict, errors: list[str]) -> None:
    if not isinstance(params, dict):
        errors.append(f"{where}: expected a mapping, got {type(params).__name__}")
        return
    for key, value in params.items():
        if key not in schema:
            errors.append(f"{where}.{key}: unknown key (allowed: {', '.join(sorted(schema))})")
            continue
        if not _is_type(value, schema[key]):
            errors.append(f"{where}.{key}: wrong type {type(value).__name__}")
            continue
        if key in _CHOICES and value not in _CHOICES[key]:
            errors.append(f"{where}.{key}: {value!r} not one of {_CHOICES[key]}")
        if key in _POSITIVE and value is not None and not value > 0:
            errors.append(f"{where}.{key}: must be positive, got {value!r}")
        if key in _UNIT and not 0 <= value <= 1:
            errors.append(f"{where}.{key}: must lie in [0, 1], got {value!r}")
    if "times" in params and isinstance(params["times"], (list, dict)):
        _check_times(f"{where}.times", params["times"], errors)


def _check_times(where: str, times, errors: list[str]) -> None:
    if isinstance(times, list):
        if not times or not all(_is_type(t, _NUM) for t in times):
            errors.append(f"{where}: expected a non-empty list of numbers")
        return
    extra = set(times) - {"start", "stop", "num"}
    if extra:
        errors.append(f"{where}: unknown keys {sorted(extra)} (allowed: start, stop, num)")
    for key, types in (("start", _NUM), ("stop", _NUM), ("num", int)):
        if key not in times:
            errors.append(f"{where}.{key}: required")
        elif not _is_type(times[key], types):
            errors.append(f"{where}.{key}: wrong type {type(times[key]).__name__}")
    if _is_type(times.get("num"), int) and times["num"] < 1:
        errors.append(f"{where}.num: must be >= 1")


def _section(doc: dict, key: str, errors: list[str]) -> tuple[str | None, dict]:
    sec = doc.get(key)
    if sec is None:
        errors.append(f"{key}: required")
        return None, {}
    if isinstance(sec, str):
        return sec, {}
    if not isinstance(sec, dict):
        errors.append(f"{key}: expected a mapping or a name")
        return None, {}
    extra = set(sec) - SECTION_KEYS
    if extra:
        errors.append(f"{key}: unknown keys {sorted(extra)} (allowed: name, params)")
    name = sec.get("name")
    if not isinstance(name, str):
        errors.append(f"{key}.name: required string")
        name = None
    params = sec.get("params") or {}
    return name, params


def validate_config(doc) -> RunConfig:
    """Check a parsed document and return the :class:`RunConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping at the top level")
    errors: list[str] = []
    extra = set(doc) - TOP_LEVEL_KEYS
    if extra:
        errors.append(f"unknown top-level keys {sorted(extra)} (allowed: {', '.join(sorted(TOP_LEVEL_KEYS))})")

    model, model_params = _section(doc, "model", errors)
    if model is not None and model not in MODEL_LABELS:
        errors.append(f"model.name: {model!r} not one of {MODEL_LABELS}")
    elif model is not None:
        _check_params("model.params", model_params, MODEL_SCHEMA[model], errors)

    algorithm, algorithm_params = _section(doc, "algorithm", errors)
    if algorithm is not None and algorithm not in ALGORITHMS:
        errors.append(f"algorithm.name: {algorithm!r} not one of {ALGORITHMS}")
    elif algorithm is not None:
        _check_params("algorithm.params", algorithm_params, ALGORITHM_SCHEMA[algorithm], errors)

    seed = doc.get("seed", 0)
    if not _is_type(seed, int) or seed < 0:
        errors.append(f"seed: expected a non-negative integer, got {seed!r}")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        errors.append("output: expected a path string")

    if errors:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))
    return RunConfig(model, algorithm, dict(model_params), dict(algorithm_params), int(seed), output)


def load_config(path: str | os.PathLike) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    return validate_config(doc)
