"""Input validation helpers used across the package.

These mirror the ``check_*`` helpers of scikit-learn: each takes user input,
coerces it to the canonical numpy representation and raises a package
exception when a precondition does not hold.
"""
from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, NotHermitianError

#: Relative max-norm tolerance for accepting a matrix as Hermitian.
HERMITIAN_RTOL = 1e-9

#: Largest matrix dimension any constructor is allowed to produce.
MAX_DIM = 4096


def check_matrix(m, *, square: bool = True, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite complex128 2-D array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def hermiticity_defect(h: np.ndarray) -> float:
    """Relative max-norm distance ``|h - h^dagger|_max / |h|_max``."""
    scale = np.abs(h).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(h - h.conj().T).max() / scale)


def check_hermitian(h, *, rtol: float = HERMITIAN_RTOL, name: str = "matrix") -> np.ndarray:
    arr = check_matrix(h, name=name)
    defect = hermiticity_defect(arr)
    if defect > rtol:
        raise NotHermitianError(f"{name} is not Hermitian (relative defect {defect:.3e} > {rtol:.1e})")
    return arr


def n_qubits_for(dim: int) -> int:
    """Number of qubits for a register of dimension ``dim``; ``dim`` must be 2**n."""
    dim = int(dim)
    if dim < 1 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def check_even_dim(n: int, *, minimum: int = 2, name: str = "dimension") -> int:
    n = int(n)
    if n < minimum:
        raise DimensionError(f"{name} must be >= {minimum}, got {n}")
    if n % 2:
        raise DimensionError(f"{name} must be even, got {n}")
    return n


def check_statevector(psi, n_qubits: int | None = None) -> np.ndarray:
    """Return ``psi`` as a unit-norm complex vector of length 2**n."""
    vec = np.asarray(psi, dtype=np.complex128).reshape(-1)
    n = n_qubits_for(vec.size)
    if n_qubits is not None and n != n_qubits:
        raise DimensionError(f"statevector has {n} qubits, expected {n_qubits}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"statevector is not normalized (norm {norm:.12f})")
    return vec
