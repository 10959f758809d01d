"""Variational minimisation of ``<psi(theta)|H|psi(theta)>``.

Three optimizers are available. ``l-bfgs-b`` is scipy's bounded quasi-Newton
method fed with central finite-difference gradients. ``spsa`` is
simultaneous-perturbation stochastic approximation with the usual power-law
gains. ``nelder-mead`` is scipy's derivative-free simplex.

Every objective evaluation counts against one shared budget and is appended
to the trace, including those made for finite-difference gradients.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .pauli import PauliSum, expectation_direct
from .simulator import EXACT, AnsatzCircuit, NoiseSpec, estimate_energy, prepare

DEFAULT_BUDGET = 10_000
DEFAULT_RESTARTS = 5
#: Half-width of the uniform initial-angle distribution.
DEFAULT_INIT_SCALE = 1.0
THETA_BOUND = 2 * np.pi
FD_STEP = 1e-5
CONVERGENCE_RTOL = 1e-9
CONVERGENCE_WINDOW = 10


class OptimizerKind(str, enum.Enum):
    QUASI_NEWTON_BOUNDED = "l-bfgs-b"
    SPSA = "spsa"
    SIMPLEX = "nelder-mead"


@dataclass(frozen=True)
class SpsaGains:
    a: float = 0.2
    c: float = 0.1
    A: float = 1.0
    alpha: float = 0.602
    gamma: float = 0.101

    def __post_init__(self):
        if min(self.a, self.c, self.A, self.alpha, self.gamma) <= 0:
            raise ValueError("SPSA gains must be positive")

    @classmethod
    def for_iterations(cls, iterations: int, **overrides) -> "SpsaGains":
        """Standard gains with the stability constant ``A`` at 10% of the run."""
        overrides.setdefault("A", max(1.0, iterations / 10))
        return cls(**overrides)

    def a_k(self, k: int) -> float:
        return self.a / (self.A + k + 1) ** self.alpha

    def c_k(self, k: int) -> float:
        return self.c / (k + 1) ** self.gamma


@dataclass
class VqeResult:
    best_energy: float
    best_theta: np.ndarray
    #: ``(evaluation, energy, stderr)`` for every objective call, in order.
    trace: list[tuple[int, float, float]]
    evaluations: int
    seed: int
    converged: bool
    reason: str
    optimizer: str = ""
    restarts: int = 1
    metadata: dict = field(default_factory=dict)

    def running_best(self) -> np.ndarray:
        return np.minimum.accumulate([e for _, e, _ in self.trace])

    def trace_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["iteration", "energy", "stderr"])
        for it, e, se in self.trace:
            writer.writerow([it, repr(float(e)), repr(float(se))])
        return buf.getvalue()


def finite_difference_gradient(objective, theta, h: float = FD_STEP) -> np.ndarray:
    """Central differences ``(f(theta + h e_i) - f(theta - h e_i)) / 2h``."""
    if h <= 0:
        raise ValueError("h must be positive")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for i in range(theta.size):
        step = np.zeros_like(theta)
        step[i] = h
        grad[i] = (objective(theta + step) - objective(theta - step)) / (2 * h)
    return grad


def spsa_step(theta, k: int, gains: SpsaGains, objective, rng: np.random.Generator) -> np.ndarray:
    """One SPSA update ``theta - a_k g_hat`` from two evaluations at ``theta +- c_k delta``."""
    theta = np.asarray(theta, dtype=float)
    delta = rng.choice((-1.0, 1.0), size=theta.shape)
    ck = gains.c_k(k)
    diff = objective(theta + ck * delta) - objective(theta - ck * delta)
    g_hat = diff / (2 * ck * delta)
    return theta - gains.a_k(k) * g_hat


class _BudgetExhausted(Exception):
    pass


class _Objective:
    """Counts calls, records the trace and enforces the evaluation budget."""

    def __init__(self, s, circuit, noise, budget, rng):
        self.s, self.circuit, self.noise = s, circuit, noise
        self.budget = budget
        self.rng = rng
        self.trace: list[tuple[int, float, float]] = []
        self.best = (np.inf, None)

    @property
    def remaining(self) -> int:
        return self.budget - len(self.trace)

    def evaluate(self, theta) -> tuple[float, float]:
        theta = np.asarray(theta, dtype=float)
        if self.noise.exact:
            return expectation_direct(self.s, prepare(self.circuit, theta)), 0.0
        return estimate_energy(self.s, None, self.noise, circuit=self.circuit, theta=theta, rng=self.rng)

    def __call__(self, theta) -> float:
        if self.remaining <= 0:
            raise _BudgetExhausted
        value, err = self.evaluate(theta)
        self.trace.append((len(self.trace) + 1, value, err))
        if value < self.best[0]:
            self.best = (value, np.array(theta, dtype=float))
        return value


def _stalled(energies, window=CONVERGENCE_WINDOW, rtol=CONVERGENCE_RTOL) -> bool:
    if len(energies) <= window:
        return False
    old, new = energies[-window - 1], energies[-1]
    return abs(old - new) <= rtol * max(abs(old), 1e-300) or old == new


def _run_lbfgsb(obj, theta0, per_run, fd_step):
    bounds = [(-THETA_BOUND, THETA_BOUND)] * theta0.size
    result = {"theta": theta0, "converged": False, "reason": "budget exhausted"}

    def jac(theta):
        return finite_difference_gradient(obj, theta, fd_step)

    try:
        res = minimize(obj, theta0, jac=jac, method="L-BFGS-B", bounds=bounds,
                       options={"maxfun": per_run, "maxiter": per_run, "ftol": 1e-15, "gtol": 1e-10})
        result.update(theta=res.x, converged=bool(res.success), reason=str(res.message))
    except _BudgetExhausted:
        result["theta"] = obj.best[1] if obj.best[1] is not None else theta0
    return result


def _run_simplex(obj, theta0, per_run):
    result = {"theta": theta0, "converged": False, "reason": "budget exhausted"}
    try:
        res = minimize(obj, theta0, method="Nelder-Mead",
                       options={"maxfev": per_run, "xatol": 1e-10, "fatol": 1e-13, "adaptive": True})
        result.update(theta=res.x, converged=bool(res.success), reason=str(res.message))
    except _BudgetExhausted:
        result["theta"] = obj.best[1] if obj.best[1] is not None else theta0
    return result


def _run_spsa(obj, theta0, per_run, rng, gains_overrides):
    iterations = max(1, per_run // 2)
    gains = SpsaGains.for_iterations(iterations, **gains_overrides)
    theta = theta0
    start = len(obj.trace)
    for k in range(iterations):
        if obj.remaining < 2:
            break
        theta = np.clip(spsa_step(theta, k, gains, obj, rng), -THETA_BOUND, THETA_BOUND)
        if obj.noise.exact:
            pair_best = np.minimum.accumulate([e for _, e, _ in obj.trace[start:]])[1::2]
            if _stalled(pair_best):
                return {"theta": theta, "converged": True,
                        "reason": f"relative energy change below {CONVERGENCE_RTOL:g} over {CONVERGENCE_WINDOW} iterations"}
    return {"theta": theta, "converged": False, "reason": "budget exhausted"}


def vqe_minimize(s: PauliSum, circuit: AnsatzCircuit, optimizer: OptimizerKind | str = OptimizerKind.QUASI_NEWTON_BOUNDED,
                 noise: NoiseSpec = EXACT, budget: int = DEFAULT_BUDGET, seed: int = 0, *,
                 restarts: int = DEFAULT_RESTARTS, init_scale: float = DEFAULT_INIT_SCALE,
                 fd_step: float = FD_STEP, spsa_gains: dict | None = None, theta0=None) -> VqeResult:
    """Minimise the ansatz energy of ``s`` within ``budget`` evaluations.

    The budget is shared evenly by ``restarts`` runs from independent random
    starting points (``theta0`` replaces the first one if given). In exact mode
    the best trace entry is reported. With shots or noise the trace minimum is
    biased low, so each run's final parameters are re-estimated once more and
    the lowest re-estimate is reported; those extra evaluations also count.
    """
    if s.n_qubits != circuit.n_qubits:
        raise ValueError(f"Hamiltonian acts on {s.n_qubits} qubits, ansatz on {circuit.n_qubits}")
    budget = int(budget)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    optimizer = OptimizerKind(optimizer)
    restarts = max(1, min(int(restarts), budget))
    seq = np.random.SeedSequence(seed)
    init_rng, opt_rng, noise_rng = (np.random.default_rng(c) for c in seq.spawn(3))
    if noise.seed is not None:
        noise_rng = np.random.default_rng(noise.seed)

    reserve = 0 if noise.exact else restarts
    total = budget - reserve if budget > reserve else budget
    obj = _Objective(s, circuit, noise, total, noise_rng)
    runs = []
    for r in range(restarts):
        per_run = (total - len(obj.trace)) // (restarts - r)
        if per_run < 1:
            break
        if r == 0 and theta0 is not None:
            start = np.asarray(theta0, dtype=float).reshape(circuit.parameter_count)
        else:
            start = init_rng.uniform(-init_scale, init_scale, circuit.parameter_count)
        first = len(obj.trace)
        obj.budget = first + per_run
        if optimizer is OptimizerKind.QUASI_NEWTON_BOUNDED:
            out = _run_lbfgsb(obj, start, per_run, fd_step)
        elif optimizer is OptimizerKind.SIMPLEX:
            out = _run_simplex(obj, start, per_run)
        else:
            out = _run_spsa(obj, start, per_run, opt_rng, spsa_gains or {})
        out["span"] = (first, len(obj.trace))
        runs.append(out)
    obj.budget = budget

    if noise.exact:
        best_energy, best_theta = obj.best
        # convergence status is that of the run which produced the best point
        idx = int(np.argmin([e for _, e, _ in obj.trace]))
        winner = next(out for out in runs if out["span"][0] <= idx < out["span"][1])
        converged, reason = winner["converged"], winner["reason"]
    else:
        finals = []
        for out in runs:
            if obj.remaining <= 0:
                break
            finals.append((obj(out["theta"]), np.asarray(out["theta"], dtype=float)))
        best_energy, best_theta = min(finals, key=lambda p: p[0]) if finals else obj.best
        converged = False
        reason = "budget exhausted (stochastic objective, no convergence test)"
    return VqeResult(
        best_energy=float(best_energy),
        best_theta=np.asarray(best_theta, dtype=float),
        trace=obj.trace,
        evaluations=len(obj.trace),
        seed=int(seed),
        converged=bool(converged),
        reason=reason,
        optimizer=optimizer.value,
        restarts=len(runs),
        metadata={"n_qubits": circuit.n_qubits, "reps": circuit.reps,
                  "rotation_axes": circuit.rotation_axes, "parameter_count": circuit.parameter_count},
    )

