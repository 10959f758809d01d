"""Model Hamiltonians and their exact continuum oracles.

Four families are assembled as dense matrices:

* one-boson superconformal quantum mechanics (SCQM) in any basis, or in
  the factorized ``A^dagger A`` form;
* SCQM on a boson (x) fermion Hilbert space, built from a supercharge;
* the bosonic Calogero-Moser-Sutherland (CMS) model for three particles;
* the supersymmetric CMS model for three bosons and three fermions.

Layout convention: boson factors are leftmost and fermion factors rightmost
in every Kronecker product, and qubit 0 is the rightmost factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bases import BasisKind, make_basis, oscillator_basis, position_basis, ladder_operators
from .exceptions import DimensionError
from .linalg import identity, invert, kron
from .validation import check_even_dim, check_hermitian, n_qubits_for

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

MODEL_LABELS = ("scqm_basis", "scqm_aop", "scqm_boson_fermion", "cms_bosonic", "cms_susy")


@dataclass(frozen=True)
class ScqmParams:
    """Mass, frequency and coupling of the superpotential ``m omega x - g/x``."""

    m: float = 0.5
    omega: float = 1.0
    g: float = math.sqrt(2.0)

    def __post_init__(self):
        if not self.m > 0 or not self.omega > 0:
            raise ValueError(f"m and omega must be positive, got m={self.m}, omega={self.omega}")

    @property
    def oscillator_length(self) -> float:
        return 1.0 / math.sqrt(self.m * self.omega)

    def is_default(self) -> bool:
        return self == ScqmParams()


@dataclass(frozen=True)
class CmsParams:
    """Calogero-Moser-Sutherland parameters.

    ``coincident`` selects how ``(x_i - x_j)^-2`` is defined on grid points
    where two particles coincide: ``"pinv"`` maps them to 0, ``"penalty"`` to
    ``1 / eps**2`` with ``eps`` half the grid spacing (or ``penalty_value``
    when given).
    """

    n_particles: int = 3
    omega: float = 1.0
    g: float = math.sqrt(2.0)
    per_boson_dim: int = 4
    coincident: str = "pinv"
    penalty_value: float | None = None

    def __post_init__(self):
        if self.n_particles != 3:
            raise ValueError("only n_particles == 3 is supported")
        n = self.per_boson_dim
        if n < 2 or n & (n - 1):
            raise DimensionError(f"per_boson_dim must be an even power of two, got {n}")
        if self.coincident not in ("pinv", "penalty"):
            raise ValueError(f"coincident must be 'pinv' or 'penalty', got {self.coincident!r}")


@dataclass
class ModelHamiltonian:
    matrix: np.ndarray
    label: str
    params: ScqmParams | CmsParams
    basis: str
    constant_shift: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = check_hermitian(self.matrix, name=self.label)
        self.n_qubits = n_qubits_for(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _hermitize(h: np.ndarray) -> np.ndarray:
    return 0.5 * (h + h.conj().T)


# --------------------------------------------------------------------------
# SCQM, one boson


def scqm_one_boson(params: ScqmParams = ScqmParams(), basis: BasisKind | str = BasisKind.FINITE_DIFFERENCE,
                   dim: int = 16) -> ModelHamiltonian:
    """``H = H_- / 2m`` with ``H_- = P^2 + m^2 w^2 X^2 + (g^2-g) X^-2 - (m w + 2 m w g)``."""
    dim = check_even_dim(dim, minimum=4)
    n_qubits_for(dim)
    kind = BasisKind(basis)
    b = make_basis(kind, dim, length=params.oscillator_length)
    m, w, g = params.m, params.omega, params.g
    xinv = invert(b.x)
    shift = -(m * w + 2 * m * w * g)
    h_minus = (b.p_squared + (m * w) ** 2 * (b.x @ b.x) + (g * g - g) * (xinv @ xinv)
               + shift * identity(dim))
    return ModelHamiltonian(
        _hermitize(h_minus / (2 * m)), label="scqm_basis", params=params, basis=kind.value,
        constant_shift=shift / (2 * m),
    )


def scqm_one_boson_aop(params: ScqmParams = ScqmParams(), dim: int = 16) -> ModelHamiltonian:
    """Factorized SCQM Hamiltonian ``H = A^dagger A`` in the oscillator basis.

    The oscillator matrices are expressed in units of the oscillator length
    ``1/sqrt(m omega)``. Since ``A`` already carries ``1/sqrt(2m)`` this equals
    ``(1/2m)(-ip + m w x - g/x)(ip + m w x - g/x)``.
    """
    dim = check_even_dim(dim, minimum=4)
    n_qubits_for(dim)
    b = oscillator_basis(dim, length=params.oscillator_length)
    a, a_dag = ladder_operators(b, params.m, params.omega, params.g)
    return ModelHamiltonian(_hermitize(a_dag @ a), label="scqm_aop", params=params, basis="aop")


def scqm_boson_fermion_operators(params: ScqmParams = ScqmParams(), boson_dim: int = 16):
    """Return ``(Q, C)``: the supercharge and the fermion lowering operator.

    ``C = I_boson (x) sigma_plus`` and ``Q = C (i P + X - sqrt(2) X^-1)`` at the
    default parameters. For other parameters ``Q = sqrt(2) C (A (x) I_2)`` with
    ``A`` from :func:`scqm.bases.ladder_operators`, which reduces to the former.
    """
    boson_dim = check_even_dim(boson_dim, minimum=4)
    b = oscillator_basis(boson_dim, length=params.oscillator_length)
    a, _ = ladder_operators(b, params.m, params.omega, params.g)
    i2 = identity(2)
    c = kron(identity(boson_dim), SIGMA_PLUS)
    q = math.sqrt(2.0) * c @ kron(a, i2)
    return q, c


def scqm_boson_fermion(params: ScqmParams = ScqmParams(), boson_dim: int = 16) -> ModelHamiltonian:
    """``H = (Q Q^dagger + Q^dagger Q) / 2`` on ``boson_dim * 2`` states."""
    q, _ = scqm_boson_fermion_operators(params, boson_dim)
    qd = q.conj().T
    h = 0.5 * (q @ qd + qd @ q)
    return ModelHamiltonian(
        _hermitize(h), label="scqm_boson_fermion", params=params, basis="aop",
        metadata={"extension": not params.is_default()},
    )


# --------------------------------------------------------------------------
# Calogero-Moser-Sutherland


def _place(op: np.ndarray, slot: int, n_slots: int, trailing: int = 1) -> np.ndarray:
    d = op.shape[0]
    mats = [op if k == slot else identity(d) for k in range(n_slots)]
    mats.append(identity(trailing))
    return kron(*mats)


def _coincident_fill(params: CmsParams, spacing: float, power: int) -> float:
    if params.coincident == "pinv":
        return 0.0
    if params.penalty_value is not None:
        return float(params.penalty_value)
    eps = spacing / 2.0
    return eps ** (-power)


def _inverse_diagonal_power(diff: np.ndarray, fill: float, power: int) -> np.ndarray:
    """``diff^-power`` for a real diagonal matrix, with zero entries set to ``fill``."""
    d = np.real(np.diag(diff))
    zero = np.abs(d) < 1e-12
    out = np.empty_like(d)
    out[~zero] = d[~zero] ** (-power)
    out[zero] = fill
    return np.diag(out).astype(np.complex128)


def _cms_coordinates(params: CmsParams, trailing: int = 1):
    b = position_basis(params.per_boson_dim)
    n = params.n_particles
    xs = [_place(b.x, i, n, trailing) for i in range(n)]
    ps = [_place(b.p, i, n, trailing) for i in range(n)]
    spacing = float(np.diff(b.grid)[0])
    return xs, ps, spacing


def bosonic_cms(params: CmsParams = CmsParams()) -> ModelHamiltonian:
    """``H = 1/2 sum p_i^2 + w^2/(2N) sum_{i<j} x_ij^2 + g^2 sum_{i<j} x_ij^-2`` (position basis)."""
    xs, ps, spacing = _cms_coordinates(params)
    n, w, g = params.n_particles, params.omega, params.g
    fill = _coincident_fill(params, spacing, 2)
    h = 0.5 * sum(p @ p for p in ps)
    n_coincident = 0
    for i, j in combinations(range(n), 2):
        d = xs[i] - xs[j]
        n_coincident += int(np.sum(np.abs(np.diag(d)) < 1e-12))
        h = h + (w * w / (2 * n)) * (d @ d) + g * g * _inverse_diagonal_power(d, fill, 2)
    return ModelHamiltonian(
        _hermitize(h), label="cms_bosonic", params=params, basis="position",
        metadata={"coincident": params.coincident, "coincident_entries": n_coincident},
    )


def cms_exact_ground_energy(n: int, omega: float, g: float) -> float:
    """``E0 = (N-1)(1 + N alpha) omega / 2`` with ``alpha = 1/2 + sqrt(1/4 + g^2)``."""
    alpha = 0.5 + math.sqrt(0.25 + g * g)
    return 0.5 * (n - 1) * (1 + n * alpha) * omega


def fermion_operators(n_modes: int, boson_dim: int = 1) -> list[np.ndarray]:
    """Jordan-Wigner annihilators ``theta_i`` on ``I_boson (x) (2x2)^n_modes``.

    Mode ``i`` carries ``sigma_z`` strings on modes ``0..i-1`` (to its left).
    """
    ops = []
    for i in range(n_modes):
        mats = [identity(boson_dim)]
        mats += [SIGMA_Z] * i + [SIGMA_PLUS] + [identity(2)] * (n_modes - i - 1)
        ops.append(kron(*mats))
    return ops


def _susy_cms_parts(params: CmsParams):
    n = params.n_particles
    xs, ps, spacing = _cms_coordinates(params, trailing=2 ** n)
    thetas = fermion_operators(n, boson_dim=params.per_boson_dim ** n)
    return xs, ps, thetas, spacing


def susy_cms(params: CmsParams = CmsParams()) -> ModelHamiltonian:
    """Supersymmetric CMS Hamiltonian assembled term by term.

    ``H = 1/2 sum (p_i^2 + w^2 x_i^2) + sum_{i<j} g (g - 1 + t_ij t_ij^dagger) / x_ij^2
    - (N/2)(g (N-1) - w)`` with ``t_ij = theta_i - theta_j``.
    """
    xs, ps, thetas, spacing = _susy_cms_parts(params)
    n, w, g = params.n_particles, params.omega, params.g
    dim = xs[0].shape[0]
    fill = _coincident_fill(params, spacing, 2)
    shift = -(n / 2.0) * (g * (n - 1) - w)
    h = 0.5 * sum(p @ p + w * w * (x @ x) for p, x in zip(ps, xs)) + shift * identity(dim)
    for i, j in combinations(range(n), 2):
        inv2 = _inverse_diagonal_power(xs[i] - xs[j], fill, 2)
        t = thetas[i] - thetas[j]
        h = h + g * (g - 1) * inv2 + g * (inv2 @ (t @ t.conj().T))
    return ModelHamiltonian(
        _hermitize(h), label="cms_susy", params=params, basis="position", constant_shift=shift,
        metadata={"coincident": params.coincident},
    )


def susy_cms_supercharge(params: CmsParams = CmsParams()):
    """Return ``(Q, Q_dagger)`` with ``Q = sum_j theta_j (i p_j + w x_j - g sum_k x_jk^-1)``."""
    xs, ps, thetas, spacing = _susy_cms_parts(params)
    n, w, g = params.n_particles, params.omega, params.g
    q = 0
    for j in range(n):
        inv = sum(_inverse_diagonal_power(xs[j] - xs[k], 0.0, 1) for k in range(n) if k != j)
        q = q + thetas[j] @ (1j * ps[j] + w * xs[j] - g * inv)
    return q, q.conj().T


def supercharge_deviation(params: CmsParams = CmsParams()) -> float:
    """Max-norm of ``H_direct - {Q, Q^dagger}/2``; diagnostic only.

    The constant shift is removed from ``H_direct`` first. The two do not agree
    exactly on a truncated grid because ``[X, P] != i`` there.
    """
    h = susy_cms(params)
    q, qd = susy_cms_supercharge(params)
    anti = 0.5 * (q @ qd + qd @ q)
    return float(np.abs(h.matrix - h.constant_shift * identity(h.dim) - anti).max())


# --------------------------------------------------------------------------
# exact continuum oracles


def scqm_exact_spectrum(params: ScqmParams = ScqmParams(), count: int = 4) -> np.ndarray:
    """Lowest ``count`` levels of ``H = H_-/2m`` in the continuum: ``2 omega n``.

    Holds for ``g >= 1/2`` where the ground state ``x^g exp(-m w x^2/2)`` is
    regular at the origin; for the defaults this is ``0, 2, 4, ...``.
    """
    if params.g < 0.5:
        raise ValueError("closed-form spectrum requires g >= 1/2")
    if count < 0:
        raise ValueError("count must be non-negative")
    return 2.0 * params.omega * np.arange(count, dtype=float)


def scqm_exact_ground_wavefunction(params: ScqmParams, x):
    """Unnormalized ``psi_0(x) = x^g exp(-m w x^2 / 2) / 2`` on the half line."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("the ground state is defined for x > 0 only")
    val = 0.5 * x ** params.g * np.exp(-params.m * params.omega * x * x / 2.0)
    return float(val) if val.ndim == 0 else val


def susy_cms_exact_ground_wavefunction(params: CmsParams, xs) -> float:
    """Spatial part ``prod_{j<k} |x_j - x_k|^g prod_i exp(-w x_i^2 / 2)``."""
    xs = np.asarray(xs, dtype=float)
    if xs.shape != (params.n_particles,):
        raise ValueError(f"expected {params.n_particles} coordinates, got shape {xs.shape}")
    val = 1.0
    for j, k in combinations(range(xs.size), 2):
        d = abs(xs[j] - xs[k])
        if d == 0.0:
            raise ValueError("coincident coordinates: the ground state vanishes identically there")
        val *= d ** params.g
    return float(val * np.exp(-params.omega * np.sum(xs * xs) / 2.0))


def build_model(label: str, **kwargs) -> ModelHamiltonian:
    """Construct a model by its label; ``kwargs`` are model parameters."""
    if label in ("cms_bosonic", "cms_susy"):
        params = CmsParams(**kwargs)
        return bosonic_cms(params) if label == "cms_bosonic" else susy_cms(params)
    if label not in MODEL_LABELS:
        raise ValueError(f"unknown model {label!r}; expected one of {MODEL_LABELS}")
    params = ScqmParams(**{k: kwargs.pop(k) for k in ("m", "omega", "g") if k in kwargs})
    dim = kwargs.pop("dim", 16)
    basis = kwargs.pop("basis", "finite_difference") if label == "scqm_basis" else None
    if kwargs:
        raise TypeError(f"unexpected parameters for {label}: {sorted(kwargs)}")
    if label == "scqm_basis":
        return scqm_one_boson(params, basis=basis, dim=dim)
    if label == "scqm_aop":
        return scqm_one_boson_aop(params, dim=dim)
    return scqm_boson_fermion(params, boson_dim=dim)
