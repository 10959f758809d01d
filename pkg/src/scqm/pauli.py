"""Pauli-string expansion of Hermitian operators.

A label such as ``"XIZ"`` is read left to right as tensor factors, so its
last character acts on qubit 0 (the least significant bit of a basis index).
Strings are enumerated lexicographically in ``I < X < Y < Z`` with the
rightmost qubit varying fastest.

``decompose`` uses a per-qubit tensor transform, O(n 4^n), rather than one
trace per string; ``decompose_naive`` keeps the trace formula for testing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .exceptions import DimensionError, NotHermitianError
from .validation import check_matrix, n_qubits_for

PAULI_CHARS = "IXYZ"
PAULI_MATRICES = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
DEFAULT_PRUNE_TOL = 1e-10
IMAG_TOL = 1e-9

# [M00, M01, M10, M11] -> Tr(sigma M)/2 for sigma in I, X, Y, Z
_FORWARD = 0.5 * np.array(
    [[1, 0, 0, 1],
     [0, 1, 1, 0],
     [0, 1j, -1j, 0],
     [1, 0, 0, -1]], dtype=np.complex128)
# coefficients (I, X, Y, Z) -> [M00, M01, M10, M11]
_INVERSE = np.array(
    [[1, 0, 0, 1],
     [0, 1, -1j, 0],
     [0, 1, 1j, 0],
     [1, 0, 0, -1]], dtype=np.complex128)


def _check_label(label: str, n_qubits: int | None = None) -> str:
    label = label.upper()
    if not label or any(ch not in PAULI_CHARS for ch in label):
        raise ValueError(f"invalid Pauli label {label!r}")
    if n_qubits is not None and len(label) != n_qubits:
        raise DimensionError(f"label {label!r} does not act on {n_qubits} qubits")
    return label


def pauli_matrix(label: str) -> np.ndarray:
    """Dense matrix of a Pauli string (Kronecker product, leftmost first)."""
    label = _check_label(label)
    return reduce(np.kron, (PAULI_MATRICES[ch] for ch in label))


def all_labels(n_qubits: int):
    for chars in itertools.product(PAULI_CHARS, repeat=n_qubits):
        yield "".join(chars)


def _label_index(label: str) -> int:
    """Position of ``label`` in the enumeration order of :func:`all_labels`."""
    idx = 0
    for ch in label:
        idx = 4 * idx + PAULI_CHARS.index(ch)
    return idx


def _masks(label: str) -> tuple[int, int, int]:
    """``(x_mask, z_mask, n_y)`` with bit q referring to qubit q."""
    n = len(label)
    x_mask = z_mask = n_y = 0
    for pos, ch in enumerate(label):
        bit = 1 << (n - 1 - pos)
        if ch in "XY":
            x_mask |= bit
        if ch in "ZY":
            z_mask |= bit
        n_y += ch == "Y"
    return x_mask, z_mask, n_y


@dataclass
class PauliSum:
    """Real linear combination of Pauli strings on ``n_qubits`` qubits."""

    n_qubits: int
    coeffs: np.ndarray
    labels: list[str]
    _action: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float).reshape(-1)
        self.labels = [_check_label(lab, self.n_qubits) for lab in self.labels]
        if len(self.labels) != self.coeffs.size:
            raise ValueError("coeffs and labels differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate Pauli strings; use PauliSum.from_terms to merge")

    @classmethod
    def from_terms(cls, terms, n_qubits: int | None = None, prune_tol: float = 0.0) -> "PauliSum":
        """Build from ``(coefficient, label)`` pairs, merging duplicates."""
        merged: dict[str, float] = {}
        for coeff, label in terms:
            label = _check_label(label)
            merged[label] = merged.get(label, 0.0) + float(coeff)
        if n_qubits is None:
            if not merged:
                raise ValueError("n_qubits is required for an empty sum")
            n_qubits = len(next(iter(merged)))
        kept = [(c, lab) for lab, c in merged.items() if abs(c) > prune_tol]
        return cls(n_qubits, [c for c, _ in kept], [lab for _, lab in kept])

    @property
    def terms(self) -> list[tuple[float, str]]:
        return list(zip(self.coeffs.tolist(), self.labels))

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def __len__(self) -> int:
        return len(self.labels)

    def split(self, predicate) -> tuple["PauliSum", "PauliSum"]:
        """Partition terms into (matching, rest) by ``predicate(label)``."""
        yes = [(c, lab) for c, lab in self.terms if predicate(lab)]
        no = [(c, lab) for c, lab in self.terms if not predicate(lab)]
        return PauliSum.from_terms(yes, self.n_qubits), PauliSum.from_terms(no, self.n_qubits)

    def _get_action(self):
        # Per term: source index b maps to b ^ x_mask with phase i^n_y (-1)^|b & z_mask|.
        if self._action is None:
            idx = np.arange(self.dim)
            masks = np.array([_masks(lab) for lab in self.labels], dtype=np.int64).reshape(-1, 3)
            flipped = idx[None, :] ^ masks[:, :1]
            parity = (np.bitwise_count(idx[None, :] & masks[:, 1:2]) & 1).astype(np.int64)
            phase = (1j ** masks[:, 2:3]) * (1 - 2 * parity)
            self._action = (flipped, phase.astype(np.complex128))
        return self._action

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """``H |psi>`` without forming a dense matrix."""
        psi = np.asarray(psi, dtype=np.complex128)
        if psi.shape[-1] != self.dim:
            raise DimensionError(f"state of length {psi.shape[-1]} does not match {self.n_qubits} qubits")
        out = np.zeros_like(psi)
        if not self.labels:
            return out
        flipped, phase = self._get_action()
        for c, f, ph in zip(self.coeffs, flipped, phase):
            # (P psi)[f[b]] = ph[b] psi[b]
            out[..., f] += c * ph * psi
        return out

    def term_expectations(self, psi: np.ndarray) -> np.ndarray:
        """``<psi|P|psi>`` for every string (real parts)."""
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        if psi.size != self.dim:
            raise DimensionError(f"state of length {psi.size} does not match {self.n_qubits} qubits")
        if not self.labels:
            return np.zeros(0)
        flipped, phase = self._get_action()
        vals = np.sum(np.conj(psi[flipped]) * phase * psi[None, :], axis=1)
        return vals.real

    def to_matrix(self) -> np.ndarray:
        return reconstruct(self)

    def to_text(self) -> str:
        return "".join(f"{c:+.9e} {lab}\n" for c, lab in self.terms)

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> "PauliSum":
        terms = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                coeff, label = line.split()
                terms.append((float(coeff), label))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: expected '<coefficient> <label>', got {line!r}") from exc
        return cls.from_terms(terms, n_qubits)


def _pauli_tensor(h: np.ndarray, n: int) -> np.ndarray:
    # (r_0..r_{n-1}, c_0..c_{n-1}) -> (4,)*n with per-qubit index 2*r + c
    t = h.reshape((2,) * (2 * n))
    order = [ax for k in range(n) for ax in (k, n + k)]
    t = t.transpose(order).reshape((4,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(_FORWARD, t, axes=([1], [axis])), 0, axis)
    return t


def decompose(h, prune_tol: float = DEFAULT_PRUNE_TOL) -> PauliSum:
    """Pauli coefficients ``Re Tr(P h) / 2**n``; terms with ``|c| <= prune_tol`` dropped."""
    h = check_matrix(h)
    n = n_qubits_for(h.shape[0])
    coeffs = _pauli_tensor(h, n).reshape(-1)
    scale = max(1.0, float(np.abs(h).max()))
    worst = float(np.abs(coeffs.imag).max())
    if worst > IMAG_TOL * scale:
        raise NotHermitianError(f"imaginary Pauli coefficient {worst:.3e}: input is not Hermitian")
    real = coeffs.real
    keep = np.flatnonzero(np.abs(real) > prune_tol)
    labels = list(all_labels(n))
    return PauliSum(n, real[keep], [labels[i] for i in keep])


def decompose_naive(h, prune_tol: float = DEFAULT_PRUNE_TOL) -> PauliSum:
    """Trace-formula reference for :func:`decompose` (O(8^n)); use for small n."""
    h = check_matrix(h)
    n = n_qubits_for(h.shape[0])
    terms = []
    for label in all_labels(n):
        c = np.trace(pauli_matrix(label) @ h) / 2 ** n
        if abs(c.imag) > IMAG_TOL * max(1.0, float(np.abs(h).max())):
            raise NotHermitianError(f"imaginary coefficient for {label}")
        if abs(c.real) > prune_tol:
            terms.append((c.real, label))
    return PauliSum.from_terms(terms, n)


def reconstruct(s: PauliSum) -> np.ndarray:
    """Dense ``sum_P c_P P`` via the inverse per-qubit transform."""
    n = s.n_qubits
    t = np.zeros(4 ** n, dtype=np.complex128)
    for c, lab in s.terms:
        t[_label_index(lab)] = c
    t = t.reshape((4,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(_INVERSE, t, axes=([1], [axis])), 0, axis)
    t = t.reshape((2,) * (2 * n))
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return t.transpose(order).reshape(2 ** n, 2 ** n)


def expectation_direct(s: PauliSum, psi) -> float:
    """``sum_P c_P <psi|P|psi>`` applying each string to ``psi`` directly."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.size != s.dim:
        raise DimensionError(f"state of length {psi.size} does not match {s.n_qubits} qubits")
    if not s.labels:
        return 0.0
    return float(s.coeffs @ s.term_expectations(psi))
