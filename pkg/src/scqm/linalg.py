"""Dense complex linear algebra and the modified Bessel function.

Every matrix in the package is a plain ``numpy.ndarray`` of dtype complex128;
the helpers here add the validation and error semantics the rest of the code
relies on.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .exceptions import ConvergenceError, DimensionError, SingularMatrixError
from .validation import MAX_DIM, check_hermitian, check_matrix

#: Condition number above which :func:`invert` refuses to invert.
MAX_CONDITION = 1e12

#: Largest |z| accepted by :func:`bessel_i` (power series only).
BESSEL_MAX_ABS_Z = 50.0
BESSEL_MAX_TERMS = 2000
BESSEL_RTOL = 1e-15


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def kron(a, b, *more, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product of two or more matrices.

    Raises DimensionError when the product would exceed ``max_dim`` rows or
    columns, which signals an unreasonably large Hilbert space.
    """
    mats = [check_matrix(m, square=False) for m in (a, b, *more)]
    rows = math.prod(m.shape[0] for m in mats)
    cols = math.prod(m.shape[1] for m in mats)
    if rows > max_dim or cols > max_dim:
        raise DimensionError(f"Kronecker product of shape ({rows}, {cols}) exceeds max_dim={max_dim}")
    return reduce(np.kron, mats)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def hermitian_eigen(h) -> EigenDecomposition:
    """Full spectrum and orthonormal eigenbasis of a Hermitian matrix."""
    h = check_hermitian(h)
    h = 0.5 * (h + h.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def eigvalsh(h) -> np.ndarray:
    """Ascending eigenvalues only; same validation as :func:`hermitian_eigen`."""
    h = check_hermitian(h)
    try:
        return np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc


def matrix_exp_i(h, t: float) -> np.ndarray:
    """Return ``exp(-i h t)`` built from the eigendecomposition of ``h``."""
    eig = h if isinstance(h, EigenDecomposition) else hermitian_eigen(h)
    v = eig.eigenvectors
    phases = np.exp(-1j * eig.eigenvalues * t)
    return (v * phases) @ v.conj().T


def invert(m) -> np.ndarray:
    """Matrix inverse with a condition-number guard.

    An odd-dimensional oscillator position matrix has 0 in its spectrum and is
    rejected here rather than pseudo-inverted.
    """
    m = check_matrix(m)
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMatrixError(f"matrix is singular or ill-conditioned (cond={cond:.3e})")
    return np.linalg.inv(m)


def bessel_i(order: float, z: complex) -> complex:
    r"""Modified Bessel function of the first kind, :math:`I_\nu(z)`.

    Evaluated from the ascending power series

        I_nu(z) = sum_k (z/2)^(2k+nu) / (k! Gamma(k+nu+1))

    with the principal branch for the non-integer power. Successive terms
    are generated by the ratio (z/2)^2 / ((k+1)(k+1+nu)) and summation stops
    once a term drops below ``BESSEL_RTOL`` times the partial sum. Only
    ``|z| <= BESSEL_MAX_ABS_Z`` is accepted; far out on the imaginary axis the
    alternating series loses digits to cancellation.
    """
    nu = float(order)
    if not nu > -1.0:
        raise ValueError(f"order must be > -1, got {order}")
    z = complex(z)
    if abs(z) > BESSEL_MAX_ABS_Z:
        raise ValueError(f"|z|={abs(z):.3g} outside the series domain (<= {BESSEL_MAX_ABS_Z})")
    if z == 0:
        if nu == 0.0:
            return 1.0 + 0.0j
        if nu > 0.0:
            return 0.0j
        raise ValueError("I_nu(0) diverges for -1 < nu < 0")

    half = z / 2.0
    # Gamma(nu+1) > 0 for nu > -1, so the log-gamma route is sign-safe.
    term = cmath.exp(nu * cmath.log(half) - math.lgamma(nu + 1.0))
    quarter = half * half
    total = term
    for k in range(BESSEL_MAX_TERMS):
        term *= quarter / ((k + 1) * (k + 1 + nu))
        total += term
        if abs(term) <= BESSEL_RTOL * abs(total):
            return total
    raise ConvergenceError(f"Bessel series did not converge in {BESSEL_MAX_TERMS} terms (order={nu}, z={z})")
