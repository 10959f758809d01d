"""scikit-learn style front ends.

The "data" passed to ``fit`` is a Hamiltonian: a :class:`PauliSum`, a
:class:`ModelHamiltonian` or a dense Hermitian matrix. Hyperparameters live
in ``__init__`` so ``get_params``/``set_params``/``clone`` work as usual, and
fitted state carries a trailing underscore.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .linalg import hermitian_eigen
from .models import ModelHamiltonian
from .pauli import PauliSum, decompose
from .simulator import AnsatzCircuit, NoiseSpec, prepare
from .evolution import EvolutionTrace, TrotterSpec, compare_to_exact, evolve_probabilities
from .vqe import DEFAULT_BUDGET, DEFAULT_INIT_SCALE, DEFAULT_RESTARTS, FD_STEP, vqe_minimize


def as_pauli_sum(h) -> PauliSum:
    if isinstance(h, PauliSum):
        return h
    if isinstance(h, ModelHamiltonian):
        return decompose(h.matrix)
    return decompose(np.asarray(h))


def as_matrix(h) -> np.ndarray:
    if isinstance(h, PauliSum):
        return h.to_matrix()
    if isinstance(h, ModelHamiltonian):
        return h.matrix
    return np.asarray(h, dtype=np.complex128)


class ExactDiagonalizer(BaseEstimator):
    """Dense diagonalisation; keeps the lowest ``n_levels`` (all if None)."""

    def __init__(self, n_levels=None):
        self.n_levels = n_levels

    def fit(self, h, y=None):
        eig = hermitian_eigen(as_matrix(h))
        k = eig.eigenvalues.size if self.n_levels is None else int(self.n_levels)
        self.eigenvalues_ = eig.eigenvalues[:k]
        self.eigenvectors_ = eig.eigenvectors[:, :k]
        self.ground_energy_ = float(eig.eigenvalues[0])
        return self

    def predict(self, h=None):
        """Return the retained eigenvalues."""
        check_is_fitted(self, "eigenvalues_")
        return self.eigenvalues_


class VQE(BaseEstimator):
    """Variational ground-state search on the layered ansatz.

    ``shots=None`` with both depolarizing probabilities at 0 is the exact
    statevector mode.
    """

    def __init__(self, optimizer="l-bfgs-b", reps=3, rotation_axes="y", restarts=DEFAULT_RESTARTS,
                 budget=DEFAULT_BUDGET, init_scale=DEFAULT_INIT_SCALE, shots=None,
                 depolarizing_p1=0.0, depolarizing_p2=0.0, trajectories=16, fd_step=FD_STEP, seed=0):
        self.optimizer = optimizer
        self.reps = reps
        self.rotation_axes = rotation_axes
        self.restarts = restarts
        self.budget = budget
        self.init_scale = init_scale
        self.shots = shots
        self.depolarizing_p1 = depolarizing_p1
        self.depolarizing_p2 = depolarizing_p2
        self.trajectories = trajectories
        self.fd_step = fd_step
        self.seed = seed

    def _noise(self) -> NoiseSpec:
        return NoiseSpec(shots=self.shots, depolarizing_p1=self.depolarizing_p1,
                         depolarizing_p2=self.depolarizing_p2, trajectories=self.trajectories)

    def fit(self, h, y=None):
        s = as_pauli_sum(h)
        circuit = AnsatzCircuit(s.n_qubits, self.reps, self.rotation_axes)
        result = vqe_minimize(s, circuit, self.optimizer, self._noise(), self.budget, self.seed,
                              restarts=self.restarts, init_scale=self.init_scale, fd_step=self.fd_step)
        self.hamiltonian_ = s
        self.circuit_ = circuit
        self.result_ = result
        self.best_energy_ = result.best_energy
        self.best_params_ = result.best_theta
        self.n_evaluations_ = result.evaluations
        return self

    def predict(self, h=None):
        """Best energy found by ``fit``."""
        check_is_fitted(self, "result_")
        return self.best_energy_

    def statevector(self) -> np.ndarray:
        """Noiseless ansatz state at the best parameters."""
        check_is_fitted(self, "result_")
        return prepare(self.circuit_, self.best_params_)


class TrotterEvolution(BaseEstimator):
    """Trotterised transition probabilities out of one basis state."""

    def __init__(self, order=2, slices=100, splitting="per_term", per_unit_time=True, source=0):
        self.order = order
        self.slices = slices
        self.splitting = splitting
        self.per_unit_time = per_unit_time
        self.source = source

    def _spec(self) -> TrotterSpec:
        return TrotterSpec(self.order, self.slices, self.splitting, self.per_unit_time)

    def fit(self, h, y=None):
        self.hamiltonian_ = as_pauli_sum(h)
        self.spec_ = self._spec()
        return self

    def transform(self, times, grid=None) -> EvolutionTrace:
        check_is_fitted(self, "hamiltonian_")
        return evolve_probabilities(self.hamiltonian_, self.source, times, self.spec_, grid=grid)

    def predict(self, times) -> np.ndarray:
        """Probability matrix, one row per time."""
        return self.transform(times).probabilities

    def score(self, times, y=None) -> float:
        """Negative max absolute deviation from exact propagation."""
        return -compare_to_exact(self.transform(times), self.hamiltonian_).max
