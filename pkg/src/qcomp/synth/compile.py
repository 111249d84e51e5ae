"""The full pipeline: two-level factors, Gray routing, lowering."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit, to_unitary
from ..linalg import EPS_UNITARY, is_unitary
from .lower import lower
from .metrics import error_metric
from .multi import lambda_n_bound
from .single import SynthesisError
from .twolevel import TwoLevelFactor, gray_route, two_level_factorize


@dataclass
class SynthesisResult:
    factors: list[TwoLevelFactor]
    routed: Circuit
    circuit: Circuit
    gate_count: int
    reconstruction_error: float


def n_qubits_of(u: np.ndarray) -> int:
    dim = u.shape[0]
    n = int(round(math.log2(dim))) if dim > 0 else -1
    if u.ndim != 2 or u.shape[1] != dim or dim < 2 or 2**n != dim:
        raise SynthesisError(f"matrix of shape {u.shape} is not 2^n x 2^n")
    return n


def compile_unitary(u, merge: bool = True, eps: float = EPS_UNITARY) -> SynthesisResult:
    u = np.asarray(u, dtype=complex)
    n = n_qubits_of(u)
    if not is_unitary(u, eps):
        raise SynthesisError("compile needs a unitary matrix")
    factors = two_level_factorize(u, eps)
    routed = Circuit(n)
    # U = F_0 ... F_{k-1}: the last factor acts first
    for f in reversed(factors):
        routed = routed + gray_route(f, n)
    circ = lower(routed, merge=merge)
    err = error_metric(u, to_unitary(circ))
    return SynthesisResult(factors, routed, circ, len(circ), err)


def gate_count_bound(n: int) -> int:
    """Upper bound on the unmerged gate count of compile_unitary for n qubits.

    At most N(N-1)/2 two-level factors; each routes through at most 2(n-1)
    controlled-X swaps and one Lambda_{n-1}(U'), each lowered to at most
    2(n-1) X gates for zero-conditions plus a Lambda_{n-1} circuit.
    """
    dim = 2**n
    if n == 1:
        return dim * (dim - 1) // 2
    per_gate = 2 * (n - 1) + lambda_n_bound(n - 1)
    return dim * (dim - 1) // 2 * (2 * (n - 1) + 1) * per_gate
