"""Slow, independent reference implementations used as test oracles.

Nothing here imports qcomp: each helper recomputes its answer from basis
actions, string bit manipulation or brute force.
"""
import itertools
import math
from functools import reduce

import numpy as np


def haar_unitary(dim, rng):
    # QR of a complex Ginibre matrix with the R-diagonal phases divided out
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(dim, rng):
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def kron(*ms):
    return reduce(np.kron, ms, np.eye(1, dtype=complex))


def embed(u, n, targets, controls=(), conditions=None):
    """2^n matrix of ``u`` on 1-based ``targets`` under ``controls``, via bit strings."""
    if conditions is None:
        conditions = (1,) * len(controls)
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = list(format(col, f"0{n}b"))
        if any(int(bits[c - 1]) != b for c, b in zip(controls, conditions)):
            out[col, col] = 1
            continue
        local = int("".join(bits[t - 1] for t in targets), 2)
        for o in range(2 ** len(targets)):
            obits = format(o, f"0{len(targets)}b")
            new = list(bits)
            for t, b in zip(targets, obits):
                new[t - 1] = b
            out[int("".join(new), 2), col] += u[o, local]
    return out


def circuit_matrix(circ):
    """Product of embedded steps, first step rightmost."""
    n = circ.n_wires
    total = np.eye(2**n, dtype=complex)
    for s in circ.steps:
        p = s.pattern
        total = embed(s.gate.matrix, n, p.targets, p.controls, p.conditions) @ total
    return total


def spectral_norm(a):
    # largest eigenvalue of A^dagger A, not an SVD
    return math.sqrt(max(0.0, float(np.max(np.linalg.eigvalsh(a.conj().T @ a)))))


def phase_error_scan(u, v, points=4096):
    """min over phi of ||U - e^{i phi} V|| by grid search plus golden-section refine."""
    def f(phi):
        return spectral_norm(u - np.exp(1j * phi) * v)

    grid = np.linspace(0, 2 * math.pi, points, endpoint=False)
    vals = [f(p) for p in grid]
    k = int(np.argmin(vals))
    h = 2 * math.pi / points
    lo, hi = grid[k] - h, grid[k] + h
    g = (math.sqrt(5) - 1) / 2
    for _ in range(60):
        a, b = hi - g * (hi - lo), lo + g * (hi - lo)
        if f(a) < f(b):
            hi = b
        else:
            lo = a
    return f((lo + hi) / 2)


def schmidt_rank(psi, cut_left, n, tol=1e-9):
    m = np.asarray(psi).reshape(2**cut_left, 2 ** (n - cut_left))
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


def is_product_state(psi, n, tol=1e-9):
    """Fully separable iff every single-qubit cut has Schmidt rank 1."""
    t = np.asarray(psi).reshape((2,) * n)
    for q in range(n):
        m = np.moveaxis(t, q, 0).reshape(2, -1)
        s = np.linalg.svd(m, compute_uv=False)
        if s[1] > tol * s[0]:
            return False
    return True


def bits(i, k):
    return tuple(int(b) for b in format(i, f"0{k}b")) if k else ()


def all_bits(k):
    return list(itertools.product((0, 1), repeat=k))


def random_table(k, l, rng):
    return [tuple(int(b) for b in rng.integers(0, 2, size=l)) for _ in range(2**k)]


def fired_target_product(c, c1, c2, target=3):
    """Follow control bits classically through a Lambda_2 figure and multiply
    the target operators that fire."""
    bits = {1: c1, 2: c2}
    prod = np.eye(2, dtype=complex)
    for s in c.steps:
        if s.targets == (target,):
            if all(bits[w] for w in s.controls):
                prod = s.gate.matrix @ prod
        else:
            (ctl,) = s.controls
            if bits[ctl]:
                bits[s.targets[0]] ^= 1
    return prod
