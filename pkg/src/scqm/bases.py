"""Finite matrix representations of position and momentum.

Three bases are provided (oscillator, position, finite difference) plus the
ladder operators ``A`` and ``A^dagger`` built on top of the oscillator basis.
Grid indices run ``j = 1..N`` in the formulas; arrays are zero-based, so the
diagonal entry ``k`` corresponds to ``j = k + 1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import BasisError, DimensionError
from .linalg import invert
from .validation import check_even_dim


class BasisKind(str, enum.Enum):
    OSCILLATOR = "oscillator"
    POSITION = "position"
    FINITE_DIFFERENCE = "finite_difference"


@dataclass(frozen=True)
class BasisOperators:
    """Position and momentum matrices of one basis.

    The finite-difference basis only defines ``P**2``; asking it for ``p``
    raises :class:`BasisError` instead of fabricating a first-order operator.
    """

    kind: BasisKind
    x: np.ndarray
    p_squared: np.ndarray
    momentum: np.ndarray | None = None
    #: Sylvester matrix ``F`` with ``P = F^dagger X F`` (position basis only).
    sylvester: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> np.ndarray:
        if self.momentum is None:
            raise BasisError(f"the {self.kind.value} basis defines only P^2, not P")
        return self.momentum

    @property
    def grid(self) -> np.ndarray:
        """Real diagonal of ``x`` (meaningful for the diagonal bases)."""
        return np.real(np.diag(self.x)).copy()


def _centered_indices(n: int) -> np.ndarray:
    # 2j - (N+1) for j = 1..N: odd integers symmetric about zero.
    return 2.0 * np.arange(1, n + 1) - (n + 1)


def oscillator_basis(n: int, length: float = 1.0) -> BasisOperators:
    """Truncated harmonic-oscillator representation.

    ``X`` is tridiagonal with off-diagonal ``sqrt(k/2)`` and ``P`` carries the
    same magnitudes with ``-`` above and ``+`` below the diagonal, times ``i``.
    ``length`` rescales to an oscillator of that length: ``X -> length * X``
    and ``P -> P / length`` (the commutator is unchanged).
    """
    n = int(n)
    if n < 2:
        raise DimensionError(f"oscillator basis needs n >= 2, got {n}")
    if length <= 0:
        raise ValueError("length must be positive")
    off = np.sqrt(np.arange(1, n) / 2.0)
    x = (np.diag(off, 1) + np.diag(off, -1)).astype(np.complex128)
    p = 1j * (np.diag(-off, 1) + np.diag(off, -1))
    x *= length
    p /= length
    return BasisOperators(BasisKind.OSCILLATOR, x=x, p_squared=p @ p, momentum=p)


def sylvester_matrix(n: int) -> np.ndarray:
    """``F[j,k] = exp(2 pi i (2j-(N+1))(2k-(N+1)) / 4N) / sqrt(N)``."""
    c = _centered_indices(n)
    return np.exp(2j * np.pi / (4 * n) * np.outer(c, c)) / np.sqrt(n)


def position_basis(n: int) -> BasisOperators:
    """Diagonal position grid with momentum obtained by Sylvester conjugation."""
    try:
        n = check_even_dim(n)
    except DimensionError as exc:
        raise BasisError(f"position basis: {exc} (odd grids contain x = 0)") from exc
    x = np.diag(np.sqrt(2 * np.pi / (4 * n)) * _centered_indices(n)).astype(np.complex128)
    f = sylvester_matrix(n)
    p = f.conj().T @ x @ f
    p = 0.5 * (p + p.conj().T)
    return BasisOperators(BasisKind.POSITION, x=x, p_squared=p @ p, momentum=p, sylvester=f)


def finite_difference_basis(n: int) -> BasisOperators:
    """Diagonal grid with the three-point second-difference ``P**2``."""
    try:
        n = check_even_dim(n)
    except DimensionError as exc:
        raise BasisError(f"finite-difference basis: {exc} (odd grids contain x = 0)") from exc
    x = np.diag(np.sqrt(1.0 / (2 * n)) * _centered_indices(n)).astype(np.complex128)
    lap = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    return BasisOperators(BasisKind.FINITE_DIFFERENCE, x=x, p_squared=(n / 2.0) * lap.astype(np.complex128))


def make_basis(kind: BasisKind | str, n: int, length: float = 1.0) -> BasisOperators:
    kind = BasisKind(kind)
    if kind is BasisKind.OSCILLATOR:
        return oscillator_basis(n, length=length)
    if kind is BasisKind.POSITION:
        return position_basis(n)
    return finite_difference_basis(n)


def ladder_operators(basis: BasisOperators, m: float, omega: float, g: float):
    """Return ``(A, A_dagger)`` for the superpotential ``m omega x - g / x``.

    ``A = (i p + m omega x - g x^-1) / sqrt(2m)`` and ``A_dagger`` is the same
    expression with ``-i p``. The basis must be an even-dimensional oscillator
    basis; callers pick its ``length`` (see :func:`scqm.models.scqm_one_boson_aop`).
    """
    if basis.kind is not BasisKind.OSCILLATOR:
        raise BasisError("ladder operators are defined on the oscillator basis only")
    if basis.dim % 2:
        raise BasisError("ladder operators need an even dimension (odd X_osc is singular)")
    if m <= 0 or omega <= 0:
        raise ValueError("m and omega must be positive")
    x, p = basis.x, basis.p
    xinv = invert(x)
    xinv = 0.5 * (xinv + xinv.conj().T)
    pref = 1.0 / np.sqrt(2.0 * m)
    a = pref * (1j * p + m * omega * x - g * xinv)
    a_dag = pref * (-1j * p + m * omega * x - g * xinv)
    return a, a_dag
