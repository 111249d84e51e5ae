"""Distances between unitaries and the primitivity test for two-qubit gates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..gates import SWAP
from ..linalg import EPS_UNITARY, adjoint, is_unitary
from ..qstate import is_decomposable
from .single import SynthesisError


def error_metric(u, v) -> float:
    """max over unit |psi> of ||(U - V)|psi>||, i.e. the spectral norm of U - V."""
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise SynthesisError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.linalg.norm(u - v, 2))


def phase_invariant_error(u, v) -> float:
    """min over phi of E(U, e^{i phi} V).

    The eigenphases of V^dagger U lie on the unit circle; the best phase sits
    in the middle of the shortest arc covering all of them.
    """
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise SynthesisError(f"dimension mismatch: {u.shape} vs {v.shape}")
    theta = np.sort(np.angle(np.linalg.eigvals(adjoint(v) @ u)))
    gaps = np.diff(np.concatenate([theta, [theta[0] + 2 * math.pi]]))
    arc = 2 * math.pi - float(np.max(gaps))
    return 2 * math.sin(arc / 4)


def phase_invariant_error_2x2(target: np.ndarray, stack: np.ndarray) -> np.ndarray:
    """phase_invariant_error(target, V) for every V in a (k, 2, 2) stack."""
    w = np.einsum("kji,jl->kil", np.conj(stack), target)
    det = w[:, 0, 0] * w[:, 1, 1] - w[:, 0, 1] * w[:, 1, 0]
    w = w / np.sqrt(det)[:, None, None]
    # W = [[p, -q*], [q, p*]] up to sign; the sign is fixed by Re p >= 0
    p, q = w[:, 0, 0], w[:, 1, 0]
    s = np.sqrt(np.imag(p) ** 2 + np.abs(q) ** 2)
    return 2 * np.sin(np.arcsin(np.clip(s, 0.0, 1.0)) / 2)


def realign(v: np.ndarray) -> np.ndarray:
    """R[(i1 j1), (i2 j2)] = V[(i1 i2), (j1 j2)], so V = S (x) T iff R = vec(S) vec(T)^T."""
    return np.asarray(v).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


@dataclass
class Primitivity:
    primitive: bool
    form: str | None = None  # "tensor" or "tensor_swap"
    factors: tuple[np.ndarray, np.ndarray] | None = None
    witness_input: tuple[np.ndarray, np.ndarray] | None = None
    witness_output: np.ndarray | None = None


def _tensor_factors(v: np.ndarray, eps: float):
    u_, s, vh = np.linalg.svd(realign(v))
    if s[1] > eps * s[0]:
        return None
    a = math.sqrt(s[0]) * u_[:, 0].reshape(2, 2)
    b = math.sqrt(s[0]) * vh[0].reshape(2, 2)
    return a, b


_PAULI_STATES = [
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, 1], dtype=complex) / math.sqrt(2),
    np.array([1, -1], dtype=complex) / math.sqrt(2),
    np.array([1, 1j], dtype=complex) / math.sqrt(2),
    np.array([1, -1j], dtype=complex) / math.sqrt(2),
]


def _random_qubit(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return z / np.linalg.norm(z)


def entangling_witness(v: np.ndarray, rng: np.random.Generator | None = None, extra: int = 50, eps: float = 1e-9):
    """A product input a (x) b whose image under V is entangled, or None."""
    candidates = [(a, b) for a in _PAULI_STATES for b in _PAULI_STATES]
    rng = rng if rng is not None else np.random.default_rng(0)
    candidates += [(_random_qubit(rng), _random_qubit(rng)) for _ in range(extra)]
    for a, b in candidates:
        out = v @ np.kron(a, b)
        if not is_decomposable(out, eps).decomposable:
            return (a, b), out
    return None


def is_primitive(v, eps: float = 1e-9, rng: np.random.Generator | None = None) -> Primitivity:
    """V is primitive iff V = S (x) T or V = (S (x) T) SWAP for 1-qubit S, T."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (4, 4) or not is_unitary(v, EPS_UNITARY):
        raise SynthesisError("is_primitive needs a 4x4 unitary")
    f = _tensor_factors(v, eps)
    if f is not None:
        return Primitivity(True, "tensor", f)
    f = _tensor_factors(v @ SWAP, eps)
    if f is not None:
        return Primitivity(True, "tensor_swap", f)
    res = Primitivity(False)
    w = entangling_witness(v, rng)
    if w is not None:
        res.witness_input, res.witness_output = w
    return res
