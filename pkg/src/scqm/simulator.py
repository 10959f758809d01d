"""Statevector simulator for the variational ansatz.

States are complex vectors of length ``2**n`` with qubit 0 the least
significant bit of the index. Gates act on a reshaped view, so a batch of
states (one per noise trajectory) can be evolved together.

Energy estimation has three regimes, selected by :class:`NoiseSpec`:

* exact: ``<psi|H|psi>`` from the Pauli action, standard error 0;
* shots: each non-identity string is measured ``shots`` times after rotating
  into its eigenbasis, and the sample mean of the parity is used;
* depolarizing noise: the ansatz is re-run along random Pauli-error
  trajectories and the estimate is averaged over them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError
from .pauli import PauliSum, expectation_direct
from .validation import check_statevector

ROTATION_AXES = ("y", "yz")

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_SDG = np.diag([1, -1j]).astype(np.complex128)
_PAULI_1Q = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.diag([1, -1]).astype(np.complex128),
)
# basis change that maps the eigenbasis of each Pauli onto the Z basis
_MEASURE_ROTATION = {"X": _H, "Y": _H @ _SDG}


def _ry(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _rz(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


@dataclass(frozen=True)
class AnsatzCircuit:
    """Layered real-amplitudes style ansatz.

    Each of the ``reps`` layers applies one rotation per qubit and axis and
    then a CNOT chain ``(0,1), (1,2), ...``; a last rotation layer follows.
    With ``rotation_axes="yz"`` every rotation slot is an RY followed by an RZ.
    """

    n_qubits: int
    reps: int = 3
    rotation_axes: str = "y"

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.rotation_axes not in ROTATION_AXES:
            raise ValueError(f"rotation_axes must be one of {ROTATION_AXES}, got {self.rotation_axes!r}")

    @property
    def parameter_count(self) -> int:
        return self.n_qubits * self.reps * len(self.rotation_axes) + self.n_qubits

    def operations(self):
        """Yield ``("ry"|"rz", qubit, parameter_index)`` and ``("cx", control, target)``."""
        k = 0
        for _ in range(self.reps):
            for q in range(self.n_qubits):
                for axis in self.rotation_axes:
                    yield ("r" + axis, q, k)
                    k += 1
            for q in range(self.n_qubits - 1):
                yield ("cx", q, q + 1)
        for q in range(self.n_qubits):
            yield ("ry", q, k)
            k += 1


@dataclass(frozen=True)
class NoiseSpec:
    """How energies are estimated.

    ``shots=None`` means exact expectation values. Depolarizing probabilities
    apply after every single-qubit (``depolarizing_p1``) and two-qubit
    (``depolarizing_p2``) gate. Use :data:`EXACT` for noiseless, shot-free
    estimation.
    """

    shots: int | None = None
    depolarizing_p1: float = 1e-3
    depolarizing_p2: float = 1e-2
    seed: int | None = None
    trajectories: int = 16

    def __post_init__(self):
        if self.shots is not None and int(self.shots) < 1:
            raise ValueError("shots must be >= 1 or None")
        for name in ("depolarizing_p1", "depolarizing_p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")

    @property
    def noisy(self) -> bool:
        return self.depolarizing_p1 > 0 or self.depolarizing_p2 > 0

    @property
    def exact(self) -> bool:
        return self.shots is None and not self.noisy


EXACT = NoiseSpec(shots=None, depolarizing_p1=0.0, depolarizing_p2=0.0)


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    dim = 2 ** n_qubits
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} outside [0, {dim})")
    psi = np.zeros(dim, dtype=np.complex128)
    psi[index] = 1.0
    return psi


def _axis(n: int, q: int) -> int:
    # axis of qubit q in a (batch, 2, ..., 2) view; qubit n-1 comes first
    return 1 + (n - 1 - q)


def apply_1q(states: np.ndarray, gate: np.ndarray, q: int, n: int) -> np.ndarray:
    """Apply a 2x2 ``gate`` to qubit ``q`` of a batch ``(B, 2**n)``."""
    view = states.reshape((-1,) + (2,) * n)
    ax = _axis(n, q)
    out = np.moveaxis(np.tensordot(gate, view, axes=([1], [ax])), 0, ax)
    return out.reshape(states.shape)


def apply_cx(states: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    view = states.reshape((-1,) + (2,) * n).copy()
    sel = [slice(None)] * (n + 1)
    sel[_axis(n, control)] = 1
    sub = view[tuple(sel)]
    t_ax = _axis(n, target) - (1 if _axis(n, target) > _axis(n, control) else 0)
    view[tuple(sel)] = np.flip(sub, axis=t_ax)
    return view.reshape(states.shape)


def _depolarize(states, qubits, p, n, rng):
    """With probability ``p`` apply a uniformly random Pauli on ``qubits``.

    Drawing from all ``4**k`` strings (identity included) makes ``p = 1`` the
    fully depolarizing channel.
    """
    if p <= 0:
        return states
    hit = rng.random(states.shape[0]) < p
    if not hit.any():
        return states
    rows = np.flatnonzero(hit)
    choice = rng.integers(0, 4, size=(rows.size, len(qubits)))
    sub = states[rows]
    for j, q in enumerate(qubits):
        for k in (1, 2, 3):
            sel = choice[:, j] == k
            if sel.any():
                sub[sel] = apply_1q(sub[sel], _PAULI_1Q[k], q, n)
    states = states.copy()
    states[rows] = sub
    return states


def prepare(circuit: AnsatzCircuit, theta, noise: NoiseSpec | None = None,
            rng: np.random.Generator | None = None, batch: int = 1) -> np.ndarray:
    """Run the ansatz on ``|0...0>``.

    Without noise the single output state is returned as a vector. With
    depolarizing noise, ``batch`` independent trajectories are simulated and
    returned as rows of a ``(batch, 2**n)`` array.
    """
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != circuit.parameter_count:
        raise DimensionError(f"expected {circuit.parameter_count} parameters, got {theta.size}")
    n = circuit.n_qubits
    noisy = noise is not None and noise.noisy
    if noisy and rng is None:
        rng = np.random.default_rng(noise.seed)
    rows = batch if noisy else 1
    states = np.zeros((rows, 2 ** n), dtype=np.complex128)
    states[:, 0] = 1.0
    for op, a, b in circuit.operations():
        if op == "cx":
            states = apply_cx(states, a, b, n)
            if noisy:
                states = _depolarize(states, (a, b), noise.depolarizing_p2, n, rng)
        else:
            gate = _ry(theta[b]) if op == "ry" else _rz(theta[b])
            states = apply_1q(states, gate, a, n)
            if noisy:
                states = _depolarize(states, (a,), noise.depolarizing_p1, n, rng)
    return states if noisy else states[0]


def rotate_to_measurement_basis(psi: np.ndarray, label: str) -> np.ndarray:
    """Rotate so that measuring Z on every qubit measures the string ``label``."""
    n = len(label)
    states = np.atleast_2d(psi)
    for pos, ch in enumerate(label):
        if ch in _MEASURE_ROTATION:
            states = apply_1q(states, _MEASURE_ROTATION[ch], n - 1 - pos, n)
    return states.reshape(np.shape(psi))


def parity_plus_probability(psi: np.ndarray, label: str):
    """Probability that measuring ``label`` yields eigenvalue +1.

    ``psi`` may be one state or a batch of rows; the result has matching shape.
    """
    probs = np.abs(rotate_to_measurement_basis(psi, label)) ** 2
    n = len(label)
    support = sum(1 << (n - 1 - pos) for pos, ch in enumerate(label) if ch != "I")
    even = (np.bitwise_count(np.arange(probs.shape[-1]) & support) & 1) == 0
    return np.clip(probs[..., even].sum(axis=-1), 0.0, 1.0)


def _split_shots(shots: int, parts: int) -> np.ndarray:
    base, extra = divmod(shots, parts)
    return np.array([base + (k < extra) for k in range(parts)], dtype=np.int64)


def estimate_energy(s: PauliSum, psi=None, noise: NoiseSpec = EXACT, *,
                    circuit: AnsatzCircuit | None = None, theta=None,
                    rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Energy estimate and its standard error.

    ``psi`` is the noiseless state. Depolarizing noise needs ``circuit`` and
    ``theta`` so the trajectories can be re-simulated; in that case ``psi``
    may be omitted. Shots are split evenly over trajectories.
    """
    if rng is None:
        rng = np.random.default_rng(noise.seed)
    if noise.noisy:
        if circuit is None or theta is None:
            raise ValueError("depolarizing noise requires circuit and theta")
        states = prepare(circuit, theta, noise, rng=rng, batch=noise.trajectories)
    else:
        if psi is None:
            if circuit is None or theta is None:
                raise ValueError("provide psi or (circuit, theta)")
            psi = prepare(circuit, theta)
        states = check_statevector(psi, s.n_qubits)[None, :]

    if noise.shots is None:
        values = np.array([expectation_direct(s, row) for row in states])
        if values.size == 1:
            return float(values[0]), 0.0
        return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))

    identity = "I" * s.n_qubits
    shots = int(noise.shots)
    per_traj = _split_shots(shots, states.shape[0])
    used = per_traj > 0
    value = 0.0
    variance = 0.0
    for c, label in s.terms:
        if label == identity:
            value += c
            continue
        p_plus = parity_plus_probability(states[used], label)
        n_plus = rng.binomial(per_traj[used], p_plus).sum()
        mean = (2.0 * n_plus - shots) / shots
        value += c * mean
        variance += c * c * max(1.0 - mean * mean, 0.0) / shots
    return float(value), float(np.sqrt(variance))
