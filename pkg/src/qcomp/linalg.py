"""Dense complex linear algebra on numpy arrays.

Vectors and matrices are plain ``complex128`` ndarrays.  Comparisons use the
entrywise max-abs norm throughout.
"""
from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

EPS_UNITARY = 1e-10
EPS_RANK = 1e-8

CVector = np.ndarray
CMatrix = np.ndarray


class LinalgError(ValueError):
    pass


class RankDeficiencyError(LinalgError):
    pass


def vec(*entries) -> CVector:
    if len(entries) == 1 and not np.isscalar(entries[0]):
        entries = tuple(entries[0])
    return np.asarray(entries, dtype=complex)


def mat(rows) -> CMatrix:
    m = np.asarray(rows, dtype=complex)
    if m.ndim != 2:
        raise LinalgError(f"expected a 2-d array, got shape {m.shape}")
    return m


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose(a, b, eps: float = EPS_UNITARY) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and max_abs(a - b) <= eps


def inner(a: CVector, b: CVector) -> complex:
    """<a, b>, antilinear in the first slot."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(a: CVector) -> float:
    return math.sqrt(max(inner(a, a).real, 0.0))


def tensor_vec(a: CVector, b: CVector) -> CVector:
    # left factor varies slowest
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_mat(a: CMatrix, b: CMatrix) -> CMatrix:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1,) * np.ndim(factors[0]), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def adjoint(a: CMatrix) -> CMatrix:
    return np.conj(np.asarray(a, dtype=complex)).T


def outer(x: CVector, y: CVector) -> CMatrix:
    """|x><y|."""
    return np.outer(np.asarray(x, dtype=complex), np.conj(np.asarray(y, dtype=complex)))


def commutator(a: CMatrix, b: CMatrix) -> CMatrix:
    return a @ b - b @ a


def identity(dim: int) -> CMatrix:
    return np.eye(dim, dtype=complex)


def is_square(a: CMatrix) -> bool:
    return a.ndim == 2 and a.shape[0] == a.shape[1]


def is_unitary(a: CMatrix, eps: float = EPS_UNITARY) -> bool:
    a = np.asarray(a)
    if not is_square(a):
        return False
    return max_abs(adjoint(a) @ a - np.eye(a.shape[0])) <= eps


def is_hermitean(a: CMatrix, eps: float = EPS_UNITARY) -> bool:
    a = np.asarray(a)
    return is_square(a) and max_abs(a - adjoint(a)) <= eps


def is_normal(a: CMatrix, eps: float = EPS_UNITARY) -> bool:
    a = np.asarray(a)
    return is_square(a) and max_abs(adjoint(a) @ a - a @ adjoint(a)) <= eps


def gram_schmidt(vs: Sequence[CVector], eps_rank: float = EPS_RANK) -> list[CVector]:
    """Orthonormalise ``vs`` in order.

    Each new vector has its components along the previously built ones removed
    and is then normalised.  A residual shorter than ``eps_rank`` means the
    inputs were linearly dependent.
    """
    basis: list[CVector] = []
    for k, v in enumerate(vs):
        v = np.asarray(v, dtype=complex)
        r = v - sum((inner(e, v) * e for e in basis), np.zeros_like(v))
        n = norm(r)
        if n < eps_rank:
            raise RankDeficiencyError(f"vector {k} is linearly dependent on its predecessors")
        basis.append(r / n)
    return basis


def projector(indices, dim: int) -> CMatrix:
    """Sum of |i><i| over a subset of the computational basis."""
    p = np.zeros((dim, dim), dtype=complex)
    for i in indices:
        if not 0 <= i < dim:
            raise LinalgError(f"basis index {i} outside dimension {dim}")
        p[i, i] = 1.0
    return p


def projector_onto(vectors: Sequence[CVector]) -> CMatrix:
    """Projector onto the span of orthonormal ``vectors``."""
    vectors = [np.asarray(v, dtype=complex) for v in vectors]
    p = np.zeros((vectors[0].size,) * 2, dtype=complex)
    for v in vectors:
        p += outer(v, v)
    return p


def is_projector(p: CMatrix, eps: float = EPS_UNITARY) -> bool:
    return is_hermitean(p, eps) and max_abs(p @ p - p) <= eps


def eig2_normal(a: CMatrix, eps: float = EPS_UNITARY) -> tuple[tuple[complex, complex], tuple[CVector, CVector]]:
    """Eigen-decomposition of a normal 2x2 matrix from its secular equation.

    Returns ``(l1, l2), (v1, v2)`` with orthonormal eigenvectors.  For a
    degenerate eigenvalue the matrix is a multiple of the identity and the
    canonical basis is returned.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise LinalgError(f"expected a 2x2 matrix, got {a.shape}")
    if not is_normal(a, eps):
        raise LinalgError("matrix is not normal")
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = cmath.sqrt(tr * tr - 4 * det)
    l1, l2 = (tr + disc) / 2, (tr - disc) / 2
    scale = max(1.0, max_abs(a))
    if abs(l1 - l2) <= math.sqrt(eps) * scale and max_abs(a - l1 * np.eye(2)) <= 10 * eps * scale:
        l = tr / 2
        e0, e1 = gram_schmidt([vec(1, 0), vec(0, 1)])
        return (l, l), (e0, e1)
    v1 = _null_vector(a - l1 * np.eye(2))
    # a normal matrix has orthogonal eigenspaces; build v2 from v1
    v2 = _fix_phase(np.array([-np.conj(v1[1]), np.conj(v1[0])]))
    l2 = complex(inner(v2, a @ v2))
    l1 = complex(inner(v1, a @ v1))
    return (l1, l2), (v1, v2)


def _null_vector(b: CMatrix) -> CVector:
    # pick the row of b with the larger norm; its orthogonal complement is the kernel
    r0, r1 = b[0], b[1]
    row = r0 if np.linalg.norm(r0) >= np.linalg.norm(r1) else r1
    v = np.array([-row[1], row[0]], dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        return vec(1, 0)
    return _fix_phase(v / n)


def _fix_phase(v: CVector) -> CVector:
    # first non-negligible component made real and positive
    k = int(np.argmax(np.abs(v) > 1e-12))
    return v * (abs(v[k]) / v[k])


def principal_sqrt(z: complex) -> complex:
    """Square root with the argument taken in (-pi, pi]."""
    r, theta = abs(z), cmath.phase(z)
    if theta == -math.pi:
        theta = math.pi
    return math.sqrt(r) * cmath.exp(0.5j * theta)


def sqrt_unitary2(u: CMatrix, eps: float = EPS_UNITARY) -> CMatrix:
    """A unitary V with V @ V = u, via the principal root of each eigenvalue."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, eps):
        raise LinalgError("sqrt_unitary2 needs a 2x2 unitary")
    (l1, l2), (v1, v2) = eig2_normal(u, eps)
    return principal_sqrt(l1) * outer(v1, v1) + principal_sqrt(l2) * outer(v2, v2)
