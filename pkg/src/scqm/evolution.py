"""Time evolution by Trotter-Suzuki product formulas.

A Hamiltonian given as a :class:`~scqm.pauli.PauliSum` is split into
fragments whose exponentials are exact: either one fragment per Pauli string
(``cos(c dt) I - i sin(c dt) P``) or the two groups "contains X or Y" and
"only I and Z", each exponentiated through its eigendecomposition. The
fragments are ordered by the symmetric Suzuki recursion of order 1, 2 or 4.

The module also holds the closed-form propagator of the one-particle
inverse-square oscillator and a dense spectral-sum reference for it.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError
from .linalg import bessel_i, hermitian_eigen, matrix_exp_i
from .models import ScqmParams
from .pauli import PauliSum
from .simulator import basis_state

TROTTER_ORDERS = (1, 2, 4)
SINGULAR_SIN_TOL = 1e-9


class Splitting(str, enum.Enum):
    PER_TERM = "per_term"
    KINETIC_POTENTIAL = "kinetic_potential"


@dataclass(frozen=True)
class TrotterSpec:
    """Product-formula settings.

    With ``per_unit_time`` the slice count is ``ceil(slices * |t|)`` so the
    step size stays fixed as ``t`` grows; otherwise ``slices`` is absolute.
    """

    order: int = 2
    slices: int = 1
    splitting: Splitting | str = Splitting.PER_TERM
    per_unit_time: bool = False

    def __post_init__(self):
        if self.order not in TROTTER_ORDERS:
            raise ValueError(f"order must be one of {TROTTER_ORDERS}, got {self.order}")
        if int(self.slices) < 1:
            raise ValueError("slices must be >= 1")
        object.__setattr__(self, "splitting", Splitting(self.splitting))

    def slices_for(self, t: float) -> int:
        if self.per_unit_time:
            return max(1, math.ceil(self.slices * abs(t) - 1e-12))
        return int(self.slices)


def _has_xy(label: str) -> bool:
    return any(ch in "XY" for ch in label)


def suzuki_sequence(n_fragments: int, order: int) -> list[tuple[int, float]]:
    """``(fragment, weight)`` pairs for one step; weights multiply ``dt``."""
    if order == 1:
        return [(k, 1.0) for k in range(n_fragments)]
    if order == 2:
        half = [(k, 0.5) for k in range(n_fragments - 1)]
        return half + [(n_fragments - 1, 1.0)] + half[::-1]
    if order == 4:
        p = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))
        s2 = suzuki_sequence(n_fragments, 2)
        seq = []
        for w in (p, p, 1.0 - 4.0 * p, p, p):
            seq.extend((k, w * x) for k, x in s2)
        return seq
    raise ValueError(f"unsupported order {order}")


class _Fragments:
    """Exact exponentials of the pieces of a PauliSum, applied to columns."""

    def __init__(self, s: PauliSum, splitting: Splitting):
        self.s = s
        self.splitting = splitting
        if splitting is Splitting.PER_TERM:
            flipped, phase = s._get_action() if len(s) else (np.zeros((0, s.dim), int), np.zeros((0, s.dim)))
            self.terms = list(zip(s.coeffs, flipped, phase))
            self.count = len(self.terms)
        else:
            groups = [g for g in s.split(_has_xy) if len(g)]
            self.eigs = [hermitian_eigen(g.to_matrix()) for g in groups]
            self.count = len(self.eigs)

    def apply(self, k: int, tau: float, v: np.ndarray) -> np.ndarray:
        """``exp(-i tau H_k) v`` for a vector or a matrix of columns ``v``."""
        if self.splitting is Splitting.PER_TERM:
            c, flipped, phase = self.terms[k]
            pv = np.empty_like(v)
            pv[flipped] = phase.reshape((-1,) + (1,) * (v.ndim - 1)) * v
            return math.cos(c * tau) * v - 1j * math.sin(c * tau) * pv
        return matrix_exp_i(self.eigs[k], tau) @ v


def _trotter_apply(frag: _Fragments, sequence, n_slices: int, dt: float, v: np.ndarray) -> np.ndarray:
    for _ in range(n_slices):
        for k, w in sequence:
            v = frag.apply(k, w * dt, v)
    return v


def trotter_propagator(s: PauliSum, t: float, spec: TrotterSpec = TrotterSpec()) -> np.ndarray:
    """Product-formula approximation of ``exp(-i H t)``."""
    frag = _Fragments(s, spec.splitting)
    eye = np.eye(s.dim, dtype=np.complex128)
    if frag.count == 0:
        return eye
    n = spec.slices_for(t)
    one_step = _trotter_apply(frag, suzuki_sequence(frag.count, spec.order), 1, t / n, eye)
    return np.linalg.matrix_power(one_step, n)


@dataclass
class EvolutionTrace:
    """Transition probabilities ``|<j|U(t)|source>|^2`` (rows: times)."""

    times: np.ndarray
    probabilities: np.ndarray
    source_index: int
    #: Position labels of the basis states, e.g. a finite-difference grid.
    grid: np.ndarray | None = None

    def return_probability(self) -> np.ndarray:
        return self.probabilities[:, self.source_index]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        width = self.probabilities.shape[1]
        writer.writerow(["time"] + [f"p_{j}" for j in range(width)])
        for t, row in zip(self.times, self.probabilities):
            writer.writerow([repr(float(t))] + [repr(float(p)) for p in row])
        return buf.getvalue()


def _check_source(s: PauliSum, source: int) -> int:
    if not 0 <= int(source) < s.dim:
        raise DimensionError(f"source index {source} outside [0, {s.dim})")
    return int(source)


def evolve_probabilities(s: PauliSum, source: int, times, spec: TrotterSpec = TrotterSpec(),
                         grid=None) -> EvolutionTrace:
    """Trotterised transition probabilities out of ``basis_state(source)``."""
    source = _check_source(s, source)
    times = np.asarray(times, dtype=float).reshape(-1)
    frag = _Fragments(s, spec.splitting)
    start = basis_state(s.n_qubits, source)
    rows = []
    for t in times:
        if frag.count == 0 or t == 0:
            psi = start
        else:
            n = spec.slices_for(t)
            psi = _trotter_apply(frag, suzuki_sequence(frag.count, spec.order), n, t / n, start)
        rows.append(np.abs(psi) ** 2)
    return EvolutionTrace(times, np.array(rows).reshape(times.size, s.dim), source,
                          None if grid is None else np.asarray(grid, dtype=float))


def exact_probabilities(s: PauliSum, source: int, times, grid=None) -> EvolutionTrace:
    """Same as :func:`evolve_probabilities` with the exact exponential."""
    source = _check_source(s, source)
    times = np.asarray(times, dtype=float).reshape(-1)
    eig = hermitian_eigen(s.to_matrix())
    rows = [np.abs(matrix_exp_i(eig, t)[:, source]) ** 2 for t in times]
    return EvolutionTrace(times, np.array(rows).reshape(times.size, s.dim), source,
                          None if grid is None else np.asarray(grid, dtype=float))


@dataclass(frozen=True)
class DeviationReport:
    times: np.ndarray
    max_abs: np.ndarray
    mean_abs: np.ndarray

    @property
    def max(self) -> float:
        return float(self.max_abs.max()) if self.max_abs.size else 0.0


def compare_to_exact(trace: EvolutionTrace, s: PauliSum) -> DeviationReport:
    """Per-time max and mean absolute deviation from exact propagation."""
    if trace.probabilities.shape[1] != s.dim:
        raise DimensionError("trace and Hamiltonian act on different registers")
    exact = exact_probabilities(s, trace.source_index, trace.times).probabilities
    diff = np.abs(trace.probabilities - exact)
    return DeviationReport(trace.times, diff.max(axis=1), diff.mean(axis=1))


def kernel_order(params: ScqmParams = ScqmParams(), hbar: float = 1.0) -> float:
    """Bessel order ``gamma = sqrt(1 + 8 m (g^2 - g) / (2 m hbar^2)) / 2``."""
    m, g = params.m, params.g
    arg = 1.0 + 8.0 * m * (g * g - g) / (2.0 * m * hbar * hbar)
    if arg < 0:
        raise ValueError("coupling gives a complex Bessel order")
    return 0.5 * math.sqrt(arg)


def exact_kernel(params: ScqmParams, x: float, x_prime: float, t: float, hbar: float = 1.0) -> complex:
    """Closed-form propagator ``<x|exp(-i H t / hbar)|x'>`` on the half line.

    ``K = m w sqrt(x x') / (i hbar sin wt) * exp(i m w (x^2 + x'^2) cot(wt) / 2 hbar)
    * I_gamma(m w x x' / (i hbar sin wt))``.
    """
    if x <= 0 or x_prime <= 0:
        raise ValueError("x and x_prime must be positive")
    m, w = params.m, params.omega
    s = math.sin(w * t)
    if abs(s) < SINGULAR_SIN_TOL:
        raise ValueError(f"kernel is singular at t={t} (sin(omega t) = 0)")
    pref = m * w * math.sqrt(x * x_prime) / (1j * hbar * s)
    phase = np.exp(1j * m * w * (x * x + x_prime * x_prime) * (math.cos(w * t) / s) / (2 * hbar))
    return complex(pref * phase * bessel_i(kernel_order(params, hbar), m * w * x * x_prime / (1j * hbar * s)))


def half_line_hamiltonian(params: ScqmParams, n_grid: int, spacing: float, hbar: float = 1.0):
    """Dense radial sinc-DVR Hamiltonian on ``x_j = j * spacing``, ``j = 1..n_grid``.

    The kinetic matrix is the sinc-DVR form for ``(0, inf)`` with a
    node at the origin. Returns ``(H, grid)``.
    """
    m, w, g = params.m, params.omega, params.g
    j = np.arange(1, n_grid + 1, dtype=float)
    a, b = np.meshgrid(j, j, indexing="ij")
    diff = np.where(a == b, 1.0, a - b)
    sign = np.where((a - b) % 2 == 0, 1.0, -1.0)
    t = np.where(a == b, np.pi ** 2 / 3 - 1 / (2 * a * a), sign * (2 / diff ** 2 - 2 / (a + b) ** 2))
    t *= hbar * hbar / (2 * m * spacing * spacing)
    x = j * spacing
    v = 0.5 * m * w * w * x * x + hbar * hbar * (g * g - g) / (2 * m * x * x)
    return t + np.diag(v), x


def spectral_kernel(params: ScqmParams, x: float, x_prime: float, t: float, hbar: float = 1.0,
                    n_grid: int = 512, spacing: float | None = None) -> complex:
    """Kernel from ``sum_n psi_n(x) psi_n(x') exp(-i E_n t / hbar)`` on a dense grid.

    The default spacing ``sqrt(pi hbar / (m w n_grid))`` makes the box wide
    enough that every grid eigenstate is a genuine oscillator state; it is
    then shrunk so ``x`` falls on a grid point. ``x_prime`` must also be one.
    """
    if x <= 0 or x_prime <= 0:
        raise ValueError("x and x_prime must be positive")
    if spacing is None:
        h0 = math.sqrt(math.pi * hbar / (params.m * params.omega * n_grid))
        spacing = x / math.ceil(x / h0)
    i, k = round(x / spacing) - 1, round(x_prime / spacing) - 1
    for idx, val in ((i, x), (k, x_prime)):
        if not 0 <= idx < n_grid or abs((idx + 1) * spacing - val) > 1e-9 * val:
            raise ValueError(f"{val} is not a point of the grid with spacing {spacing}")
    h, _ = half_line_hamiltonian(params, n_grid, spacing, hbar)
    eig = hermitian_eigen(h)
    v = eig.eigenvectors
    return complex(np.sum(v[i] * v[k].conj() * np.exp(-1j * eig.eigenvalues * t / hbar)) / spacing)
