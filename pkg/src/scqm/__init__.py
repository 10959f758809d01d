"""Finite-matrix superconformal and Calogero-type Hamiltonians on a simulated quantum register.

The package builds the Hamiltonians as dense matrices, expands them in Pauli
strings, finds ground states by dense diagonalisation or a variational
eigensolver on a statevector simulator, and propagates them in time with
Trotter-Suzuki product formulas.
"""
__version__ = "0.1.0"

from .bases import BasisKind, BasisOperators, make_basis, position_basis, finite_difference_basis, oscillator_basis
from .exceptions import (BasisError, ConfigError, ConvergenceError, DimensionError, NotHermitianError,
                         ScqmError, SingularMatrixError)
from .linalg import EigenDecomposition, bessel_i, hermitian_eigen, invert, kron, matrix_exp_i
from .models import (MODEL_LABELS, CmsParams, ModelHamiltonian, ScqmParams, build_model, bosonic_cms,
                     cms_exact_ground_energy, fermion_operators, scqm_boson_fermion, scqm_exact_spectrum,
                     scqm_one_boson, scqm_one_boson_aop, susy_cms)
from .pauli import PauliSum, decompose, expectation_direct, reconstruct
from .simulator import EXACT, AnsatzCircuit, NoiseSpec, basis_state, estimate_energy, prepare
from .vqe import OptimizerKind, SpsaGains, VqeResult, finite_difference_gradient, spsa_step, vqe_minimize
from .evolution import (EvolutionTrace, Splitting, TrotterSpec, compare_to_exact, evolve_probabilities,
                        exact_kernel, exact_probabilities, kernel_order, spectral_kernel, trotter_propagator)
from .estimators import VQE, ExactDiagonalizer, TrotterEvolution
from .config import RunConfig, load_config, validate_config
