"""Execute a :class:`RunConfig` and write its artifacts.

Each run writes ``summary.yaml`` plus algorithm-specific files (a Pauli-term
dump, a convergence trace or an evolution trace). Artifacts depend only on
the configuration and seed; wall-clock time is returned in the
:class:`RunResult` but kept out of the files so reruns are byte-identical.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy
import yaml

from . import __version__
from .bases import BasisKind, make_basis
from .config import RunConfig
from .estimators import ExactDiagonalizer
from .evolution import TrotterSpec, compare_to_exact, evolve_probabilities
from .exceptions import (BasisError, ConfigError, DimensionError, NotHermitianError,
                         SingularMatrixError)
from .linalg import eigvalsh
from .models import (ModelHamiltonian, ScqmParams, build_model, cms_exact_ground_energy,
                     scqm_exact_spectrum)
from .pauli import decompose
from .simulator import AnsatzCircuit, NoiseSpec
from .vqe import vqe_minimize

DEFAULT_LEVELS = 4
DEFAULT_TIMES = {"start": 0.0, "stop": 2.0, "num": 41}


@dataclass
class RunResult:
    config: dict
    headline: dict
    artifacts: list[str]
    versions: dict
    seed: int
    wall_clock: float = 0.0
    details: dict = field(default_factory=dict)

    def summary(self) -> dict:
        """Everything except the wall-clock time (which is not reproducible)."""
        return {"config": self.config, "seed": self.seed, "headline": self.headline,
                "details": self.details, "artifacts": self.artifacts, "versions": self.versions}


def _versions() -> dict:
    return {"scqm": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def _floats(values) -> list[float]:
    return [float(v) for v in np.asarray(values).reshape(-1)]


def build_from_config(cfg: RunConfig) -> ModelHamiltonian:
    """Build the model; parameter problems surface as :class:`ConfigError`."""
    try:
        return build_model(cfg.model, **cfg.model_params)
    except (SingularMatrixError, NotHermitianError):
        raise
    except (BasisError, DimensionError, TypeError, ValueError) as exc:
        raise ConfigError(f"model.params: {exc}") from exc


def _precheck(cfg: RunConfig, model: ModelHamiltonian) -> None:
    # checks that need the built model, done before anything is written
    source = cfg.algorithm_params.get("source")
    if cfg.algorithm == "eoh" and source is not None and not 0 <= source < model.dim:
        raise ConfigError(f"algorithm.params.source: {source} outside [0, {model.dim})")


def _times(spec) -> np.ndarray:
    if isinstance(spec, list):
        return np.asarray(spec, dtype=float)
    return np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["num"]))


def _grid(model: ModelHamiltonian):
    """Position of each basis state when the model uses a diagonal grid."""
    if model.basis in (BasisKind.POSITION.value, BasisKind.FINITE_DIFFERENCE.value):
        return make_basis(model.basis, model.dim).grid
    return None


def _diagonalize(cfg, model, out):
    levels = int(cfg.algorithm_params.get("levels", DEFAULT_LEVELS))
    est = ExactDiagonalizer(n_levels=levels).fit(model)
    headline = {"ground_energy": est.ground_energy_}
    details = {"eigenvalues": _floats(est.eigenvalues_), "dim": model.dim, "n_qubits": model.n_qubits,
               "constant_shift": float(model.constant_shift), "metadata": _plain(model.metadata)}
    return headline, details, []


def _exact_oracle(cfg, model, out):
    levels = int(cfg.algorithm_params.get("levels", DEFAULT_LEVELS))
    p = model.params
    if isinstance(p, ScqmParams):
        spectrum = scqm_exact_spectrum(p, levels)
        headline = {"continuum_ground_energy": float(spectrum[0])}
        details = {"continuum_spectrum": _floats(spectrum)}
    elif cfg.model == "cms_bosonic":
        e0 = cms_exact_ground_energy(p.n_particles, p.omega, p.g)
        headline = {"continuum_ground_energy": float(e0)}
        details = {}
    else:
        headline = {"continuum_ground_energy": 0.0}
        details = {"note": "unbroken supersymmetry: the ground state has zero energy"}
    details["discrete_eigenvalues"] = _floats(eigvalsh(model.matrix)[:levels])
    headline["discrete_ground_energy"] = details["discrete_eigenvalues"][0]
    return headline, details, []


def _pauli_dump(cfg, model, out):
    tol = float(cfg.algorithm_params.get("prune_tol", 1e-10))
    s = decompose(model.matrix, prune_tol=tol)
    (out / "pauli_terms.txt").write_text(s.to_text())
    return {"n_terms": len(s)}, {"n_qubits": s.n_qubits, "prune_tol": tol}, ["pauli_terms.txt"]


def _vqe(cfg, model, out):
    p = cfg.algorithm_params
    s = decompose(model.matrix)
    circuit = AnsatzCircuit(s.n_qubits, p.get("reps", 3), p.get("rotation_axes", "y"))
    noise = NoiseSpec(shots=p.get("shots"), depolarizing_p1=float(p.get("depolarizing_p1", 0.0)),
                      depolarizing_p2=float(p.get("depolarizing_p2", 0.0)),
                      trajectories=p.get("trajectories", 16))
    kwargs = {k: p[k] for k in ("restarts", "init_scale", "fd_step") if k in p}
    result = vqe_minimize(s, circuit, p.get("optimizer", "l-bfgs-b"), noise, p.get("budget", 10_000),
                          cfg.seed, **kwargs)
    exact = float(eigvalsh(model.matrix)[0])
    (out / "vqe_trace.csv").write_text(result.trace_csv())
    headline = {"best_energy": result.best_energy, "exact_discrete_ground": exact,
                "error": result.best_energy - exact}
    details = {"optimizer": result.optimizer, "evaluations": result.evaluations, "restarts": result.restarts,
               "converged": result.converged, "reason": result.reason,
               "best_theta": _floats(result.best_theta), "ansatz": result.metadata,
               "noise": {"shots": noise.shots, "depolarizing_p1": noise.depolarizing_p1,
                         "depolarizing_p2": noise.depolarizing_p2, "trajectories": noise.trajectories}}
    return headline, details, ["vqe_trace.csv"]


def _eoh(cfg, model, out):
    p = cfg.algorithm_params
    s = decompose(model.matrix)
    source = int(p.get("source", model.dim // 2))
    spec = TrotterSpec(p.get("order", 2), p.get("slices", 100), p.get("splitting", "per_term"),
                       p.get("per_unit_time", True))
    times = _times(p.get("times", DEFAULT_TIMES))
    trace = evolve_probabilities(s, source, times, spec, grid=_grid(model))
    report = compare_to_exact(trace, s)
    (out / "evolution.csv").write_text(trace.to_csv())
    headline = {"max_abs_deviation": report.max,
                "max_probability_defect": float(np.abs(trace.probabilities.sum(axis=1) - 1).max())}
    details = {"source": source, "order": spec.order, "slices": spec.slices,
               "splitting": spec.splitting.value, "per_unit_time": spec.per_unit_time,
               "deviation_per_time": _floats(report.max_abs),
               "grid": None if trace.grid is None else _floats(trace.grid)}
    return headline, details, ["evolution.csv"]


_ALGORITHMS = {"diagonalize": _diagonalize, "exact_oracle": _exact_oracle, "pauli_dump": _pauli_dump,
               "vqe": _vqe, "eoh": _eoh}


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    return str(obj)


def run(cfg: RunConfig, out_dir: str | Path | None = None) -> RunResult:
    """Build the model, run the algorithm, write artifacts, return the result.

    Configuration problems found while building raise :class:`ConfigError`
    before the output directory is created.
    """
    start = time.perf_counter()
    model = build_from_config(cfg)
    _precheck(cfg, model)
    out = cfg.output_dir(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    headline, details, files = _ALGORITHMS[cfg.algorithm](cfg, model, out)
    result = RunResult(config=_plain(cfg.to_dict()), headline=_plain(headline),
                       artifacts=[*files, "summary.yaml"], versions=_versions(), seed=cfg.seed,
                       details=_plain(details))
    (out / "summary.yaml").write_text(yaml.safe_dump(result.summary(), sort_keys=False))
    result.wall_clock = time.perf_counter() - start
    return result
