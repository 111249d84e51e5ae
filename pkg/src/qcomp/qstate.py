"""n-qubit register states, entanglement tests and the measurement postulates.

Basis index ``i`` of an n-qubit register encodes the bit string
``x1 x2 ... xn`` with qubit 1 as the most significant bit, so ``|1001>`` is
index 9 of a 4-qubit register.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    EPS_UNITARY,
    adjoint,
    is_hermitean,
    max_abs,
    projector,
    projector_onto,
)


class StateError(ValueError):
    pass


class MeasurementError(ValueError):
    pass


@dataclass(eq=False)
class QuantumRegister:
    n_qubits: int
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.n_qubits < 1:
            raise StateError("a register needs at least one qubit")
        if self.amplitudes.size != 2**self.n_qubits:
            raise StateError(
                f"{self.n_qubits} qubits need {2**self.n_qubits} amplitudes, got {self.amplitudes.size}"
            )
        if self.normalized and abs(self.norm() - 1.0) > EPS_UNITARY:
            raise StateError(f"amplitudes are not normalized (norm {self.norm():.12g})")

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> QuantumRegister:
        a = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(math.log2(a.size))) if a.size else 0
        if a.size < 2 or 2**n != a.size:
            raise StateError(f"amplitude count {a.size} is not a power of two")
        if normalize:
            nrm = np.linalg.norm(a)
            if nrm == 0:
                raise StateError("cannot normalize the zero vector")
            a = a / nrm
        return cls(n, a)

    @classmethod
    def product(cls, qubits: Sequence[np.ndarray]) -> QuantumRegister:
        out = np.ones(1, dtype=complex)
        for q in qubits:
            out = np.kron(out, np.asarray(q, dtype=complex))
        return cls(len(qubits), out)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def bitstring(self, index: int) -> str:
        return format(index, f"0{self.n_qubits}b")

    def dump(self, tol: float = 0.0) -> str:
        """One ``index bitstring re im`` line per nonzero amplitude."""
        lines = []
        for i, a in enumerate(self.amplitudes):
            if abs(a) > tol:
                lines.append(f"{i} {self.bitstring(i)} {float(a.real)!r} {float(a.imag)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str, n_qubits: int | None = None) -> QuantumRegister:
        entries = {}
        width = n_qubits
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise StateError(f"line {lineno}: expected 'index bitstring re im'")
            try:
                idx, bits = int(parts[0]), parts[1]
                ok = int(bits, 2) == idx
                entries[idx] = complex(float(parts[2]), float(parts[3]))
            except ValueError:
                raise StateError(f"line {lineno}: malformed number") from None
            if not ok:
                raise StateError(f"line {lineno}: bit string {bits} does not encode index {idx}")
            if width is None:
                width = len(bits)
            elif len(bits) != width:
                raise StateError(f"line {lineno}: expected {width} bits")
        if width is None:
            raise StateError("empty state file")
        amps = np.zeros(2**width, dtype=complex)
        for i, a in entries.items():
            amps[i] = a
        return cls(width, amps)


def basis_state(n: int, k: int) -> QuantumRegister:
    if n < 1:
        raise StateError("a register needs at least one qubit")
    if not 0 <= k < 2**n:
        raise StateError(f"basis index {k} out of range for {n} qubits")
    amps = np.zeros(2**n, dtype=complex)
    amps[k] = 1.0
    return QuantumRegister(n, amps)


def bits_to_index(bits: Sequence[int] | str) -> int:
    if isinstance(bits, str):
        return int(bits, 2)
    idx = 0
    for b in bits:
        idx = 2 * idx + int(b)
    return idx


def as_vector(q) -> np.ndarray:
    return q.amplitudes if isinstance(q, QuantumRegister) else np.asarray(q, dtype=complex).reshape(-1)


# --------------------------------------------------------------------- Bloch


@dataclass(frozen=True)
class BlochPoint:
    theta: float
    phi: float

    def state(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta / 2), np.exp(1j * self.phi) * math.sin(self.theta / 2)],
            dtype=complex,
        )

    def cartesian(self) -> tuple[float, float, float]:
        return (
            math.sin(self.theta) * math.cos(self.phi),
            math.sin(self.theta) * math.sin(self.phi),
            math.cos(self.theta),
        )


def bloch(q, eps: float = EPS_UNITARY) -> BlochPoint:
    """(theta, phi) of a single qubit, global phase dropped."""
    if isinstance(q, QuantumRegister) and q.n_qubits != 1:
        raise StateError("bloch coordinates need a single qubit")
    v = as_vector(q)
    if v.size != 2:
        raise StateError("bloch coordinates need a single qubit")
    a, b = v
    theta = 2 * math.atan2(abs(b), abs(a))
    if math.sin(theta / 2) < eps or abs(a) < eps:
        # at the poles only one amplitude survives and phi is unconstrained
        phi = 0.0
    else:
        phi = (np.angle(b) - np.angle(a)) % (2 * math.pi)
    return BlochPoint(theta, float(phi))


# ------------------------------------------------------------- entanglement


@dataclass
class Decomposition:
    decomposable: bool
    factors: list[np.ndarray] | None = None
    # for entangled states: (qubit cut, (col_j, col_k), 2x2 rank-2 block)
    witness: tuple | None = None
    schmidt_tail: float = 0.0


def _cut_matrix(psi: np.ndarray, n: int, qubit: int) -> np.ndarray:
    t = psi.reshape((2,) * n)
    return np.moveaxis(t, qubit - 1, 0).reshape(2, -1)


def _cut_rank_data(m: np.ndarray):
    """Second singular value of a 2 x K matrix and its largest 2x2 minor.

    The Gram determinant equals the sum of squared 2x2 minors, which avoids
    the cancellation of evaluating det(M M^dagger) directly.
    """
    if m.shape[1] > 1024:
        s = np.linalg.svd(m, compute_uv=False)
        r0, r1 = np.abs(m[0]), np.abs(m[1])
        return float(s[1]), (int(np.argmax(r0)), int(np.argmax(r1)))
    r0, r1 = m[0], m[1]
    minors = np.outer(r0, r1) - np.outer(r1, r0)
    gram_det = float(np.sum(np.abs(np.triu(minors, 1)) ** 2))
    trace = float(np.sum(np.abs(m) ** 2))
    if trace == 0:
        return 0.0, None
    lam1 = 0.5 * (trace + math.sqrt(max(trace * trace - 4 * gram_det, 0.0)))
    s2 = math.sqrt(gram_det / lam1) if lam1 > 0 else 0.0
    j, k = np.unravel_index(int(np.argmax(np.abs(np.triu(minors, 1)))), minors.shape)
    return s2, (int(j), int(k))


def is_decomposable(q, eps: float = 1e-9) -> Decomposition:
    """Test whether a register state is a product of single-qubit states.

    Every single-qubit cut of the amplitude tensor must have numerical rank 1.
    On success the returned factors multiply back to the input; otherwise a
    2x2 amplitude block of rank 2 is given as a witness.
    """
    psi = as_vector(q)
    n = int(round(math.log2(psi.size)))
    scale = float(np.linalg.norm(psi))
    worst = 0.0
    for qubit in range(1, n + 1):
        m = _cut_matrix(psi, n, qubit)
        s2, cols = _cut_rank_data(m)
        worst = max(worst, s2)
        if s2 > eps * max(scale, 1.0):
            block = m[:, list(cols)]
            return Decomposition(False, witness=(qubit, cols, block), schmidt_tail=s2)
    factors = []
    for qubit in range(1, n + 1):
        m = _cut_matrix(psi, n, qubit)
        col = m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]
        factors.append(col / np.linalg.norm(col))
    prod = factors[0]
    for f in factors[1:]:
        prod = np.kron(prod, f)
    overlap = np.vdot(prod, psi)
    factors[0] = factors[0] * overlap  # carries global phase and norm
    prod = prod * overlap
    if max_abs(prod - psi) > 10 * eps * max(scale, 1.0):
        return Decomposition(False, schmidt_tail=worst)
    return Decomposition(True, factors=factors, schmidt_tail=worst)


def is_entangled(q, eps: float = 1e-9) -> bool:
    return not is_decomposable(q, eps).decomposable


# -------------------------------------------------------------- measurement


@dataclass
class MeasurementOutcome:
    index: object
    probability: float
    post_state: QuantumRegister | None = field(default=None, repr=False)


def _check_sum_identity(ops_sum: np.ndarray, what: str, eps: float):
    if max_abs(ops_sum - np.eye(ops_sum.shape[0])) > eps:
        raise MeasurementError(f"{what} do not sum to the identity")


def measure_projective(
    q: QuantumRegister,
    projectors: Sequence[np.ndarray],
    eigenvalues: Sequence | None = None,
    eps: float = EPS_UNITARY,
) -> list[MeasurementOutcome]:
    """Projective measurement of O = sum_i l_i P_i.

    Outcome ``i`` (labelled by ``eigenvalues[i]`` when given) occurs with
    probability <psi|P_i|psi> and leaves P_i|psi> renormalised.
    """
    psi = as_vector(q)
    dim = psi.size
    projectors = [np.asarray(p, dtype=complex) for p in projectors]
    for i, p in enumerate(projectors):
        if p.shape != (dim, dim):
            raise MeasurementError(f"projector {i} has shape {p.shape}, expected {(dim, dim)}")
        if not is_hermitean(p, eps) or max_abs(p @ p - p) > eps:
            raise MeasurementError(f"operator {i} is not a projector")
    for i in range(len(projectors)):
        for j in range(i + 1, len(projectors)):
            if max_abs(projectors[i] @ projectors[j]) > eps:
                raise MeasurementError(f"projectors {i} and {j} are not orthogonal")
    _check_sum_identity(sum(projectors), "projectors", eps)
    labels = list(eigenvalues) if eigenvalues is not None else list(range(len(projectors)))
    if len(labels) != len(projectors):
        raise MeasurementError("one eigenvalue per projector is required")
    return _outcomes(q, psi, projectors, labels, lambda p, v: p @ v)


def measure_general(
    q: QuantumRegister, ops: Sequence[np.ndarray], eps: float = EPS_UNITARY
) -> list[MeasurementOutcome]:
    psi = as_vector(q)
    ops = [np.asarray(m, dtype=complex) for m in ops]
    for i, m in enumerate(ops):
        if m.shape != (psi.size, psi.size):
            raise MeasurementError(f"measurement operator {i} has the wrong shape")
    _check_sum_identity(sum(adjoint(m) @ m for m in ops), "M^dagger M terms", eps)
    return _outcomes(q, psi, ops, list(range(len(ops))), lambda m, v: m @ v)


def _outcomes(q, psi, ops, labels, act) -> list[MeasurementOutcome]:
    n = int(round(math.log2(psi.size)))
    out = []
    for label, op in zip(labels, ops):
        phi = act(op, psi)
        p = float(np.vdot(phi, phi).real)
        post = QuantumRegister(n, phi / math.sqrt(p)) if p > 0 else None
        out.append(MeasurementOutcome(label, p, post))
    return out


def measure_povm(q, effects: Sequence[np.ndarray], eps: float = EPS_UNITARY) -> list[float]:
    """Outcome probabilities <psi|E_k|psi>.  No post-measurement state exists."""
    psi = as_vector(q)
    effects = [np.asarray(e, dtype=complex) for e in effects]
    for i, e in enumerate(effects):
        if e.shape != (psi.size, psi.size):
            raise MeasurementError(f"effect {i} has the wrong shape")
        if not is_hermitean(e, eps):
            raise MeasurementError(f"effect {i} is not hermitean")
        if np.min(np.linalg.eigvalsh((e + adjoint(e)) / 2)) < -eps:
            raise MeasurementError(f"effect {i} is not positive")
    _check_sum_identity(sum(effects), "effects", eps)
    return [float(np.vdot(psi, e @ psi).real) for e in effects]


def basis_projectors(n: int, basis: str = "z") -> list[np.ndarray]:
    """Rank-one projectors for measuring every qubit in the x, y or z basis."""
    dim = 2**n
    if basis == "z":
        return [projector([i], dim) for i in range(dim)]
    single = {
        "x": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
        "y": np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2),
    }.get(basis)
    if single is None:
        raise MeasurementError(f"unknown measurement basis {basis!r}")
    change = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        change = np.kron(change, single)
    return [projector_onto([change[:, i]]) for i in range(dim)]


def sample(probabilities: Sequence[float], rng: np.random.Generator, shots: int | None = None):
    """Draw outcome indices from a distribution using the supplied generator."""
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    total = p.sum()
    if total <= 0:
        raise MeasurementError("distribution has no mass")
    p = p / total
    if shots is None:
        return int(rng.choice(p.size, p=p))
    return rng.choice(p.size, size=shots, p=p)
