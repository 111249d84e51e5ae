"""Multi-controlled gates: Lambda_2(U) from square roots, Lambda_m(U) recursively.

The generalized Toffoli Lambda_k(X) used inside the recursion borrows idle
wires as dirty ancillas (their value is arbitrary and restored), which keeps
its cost linear in k and the Lambda_m(U) cost quadratic in m.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..circuit import Circuit, Step
from ..gates import ControlPattern, GateSpec, named_gate
from ..linalg import EPS_UNITARY, adjoint, sqrt_unitary2
from .single import SynthesisError, _check_2x2, controlled_u_circuit

# Step bound for lambda_n_circuit(U, m): LAMBDA_C2 * (m + 1)**2 + LAMBDA_C1.
# Lambda_k(X) takes at most 8k Toffolis of 20 steps each, so the recursion
# adds at most 12 + 320(m - 1) per level.
LAMBDA_C2 = 160
LAMBDA_C1 = 0


def _ctrl(gate: GateSpec | np.ndarray, controls: Sequence[int], target: int) -> Step:
    if not isinstance(gate, GateSpec):
        gate = GateSpec("U", np.asarray(gate, dtype=complex))
    return Step(gate, ControlPattern((target,), tuple(controls)))


def lambda2_circuit(u, elementary: bool = False, eps: float = EPS_UNITARY) -> Circuit:
    """Lambda_2(U) on (controls 1, 2; target 3) with V @ V = U.

    The five-step form uses Lambda_1(V), CNOT, Lambda_1(V^dagger), CNOT,
    Lambda_1(V); ``elementary=True`` expands each Lambda_1 into six gates.
    """
    u = _check_2x2(u, eps)
    v = sqrt_unitary2(u, eps)
    vd = adjoint(v)
    xg = named_gate("X")
    fig = Circuit(3)
    fig.append(_ctrl(v, (2,), 3))
    fig.append(_ctrl(xg, (1,), 2))
    fig.append(_ctrl(vd, (2,), 3))
    fig.append(_ctrl(xg, (1,), 2))
    fig.append(_ctrl(v, (1,), 3))
    if not elementary:
        return fig
    out = Circuit(3)
    for s in fig:
        if s.is_cnot():
            out.append(s)
        else:
            out.extend(controlled_u_circuit(s.gate.matrix, eps).remap((s.controls[0], 3), 3))
    return out


@lru_cache(maxsize=None)
def _toffoli_elementary() -> Circuit:
    return lambda2_circuit(named_gate("X").matrix, elementary=True)


def _toffoli(a: int, b: int, t: int) -> Step:
    return _ctrl(named_gate("X"), (a, b), t)


def vchain(controls: Sequence[int], target: int, ancillas: Sequence[int]) -> list[Step]:
    """Lambda_m(X) from 4(m-2) Toffolis using m-2 dirty ancillas."""
    x = list(controls)
    m = len(x)
    if m < 3:
        raise SynthesisError("vchain needs at least three controls")
    a = list(ancillas)[: m - 2]
    if len(a) < m - 2:
        raise SynthesisError(f"{m} controls need {m - 2} ancillas, got {len(a)}")
    top = _toffoli(x[m - 1], a[m - 3], target)
    # x are 0-based here: x[j] is control j+1, a[j] is ancilla j+1
    down = [_toffoli(x[j], a[j - 2], a[j - 1]) for j in range(m - 2, 1, -1)]
    base = _toffoli(x[0], x[1], a[0])
    up = list(reversed(down))
    return [top] + down + [base] + up + [top] + down + [base] + up


def mcx_steps(controls: Sequence[int], target: int, free: Sequence[int]) -> list[Step]:
    """Lambda_k(X) as CNOT/Toffoli steps; ``free`` wires serve as dirty ancillas."""
    c = list(controls)
    k = len(c)
    xg = named_gate("X")
    if k == 0:
        return [Step(xg, ControlPattern((target,)))]
    if k <= 2:
        return [_ctrl(xg, c, target)]
    if len(free) >= k - 2:
        return vchain(c, target, free)
    if not free:
        raise SynthesisError(f"Lambda_{k}(X) needs at least one spare wire")
    anc = free[0]
    m1 = math.ceil(k / 2)
    g1, g2 = c[:m1], c[m1:] + [anc]
    first = mcx_steps(g1, anc, c[m1:] + [target])
    second = mcx_steps(g2, target, g1)
    return first + second + first + second


def _lower_toffolis(steps: Sequence[Step], n: int) -> Circuit:
    out = Circuit(n)
    tof = _toffoli_elementary()
    for s in steps:
        if len(s.controls) == 2:
            out.extend(tof.remap(s.controls + s.targets, n))
        else:
            out.append(s)
    return out


def mcx_circuit(k: int) -> Circuit:
    """Elementary Lambda_k(X) on controls 1..k, target k+1, plus one dirty ancilla k+2."""
    n = k + 2
    return _lower_toffolis(mcx_steps(range(1, k + 1), k + 1, [k + 2]), n)


def lambda_n_circuit(u, n_controls: int, eps: float = EPS_UNITARY) -> Circuit:
    """Lambda_m(U) on controls 1..m and target m+1, single-qubit gates and CNOTs only.

    For m >= 3, with V @ V = U::

        Lambda_1(V)            c_m -> t
        Lambda_{m-1}(X)        c_1..c_{m-1} -> c_m   (t borrowed as dirty ancilla)
        Lambda_1(V^dagger)     c_m -> t
        Lambda_{m-1}(X)        c_1..c_{m-1} -> c_m
        Lambda_{m-1}(V)        c_1..c_{m-1} -> t     (recursion)
    """
    u = _check_2x2(u, eps)
    m = int(n_controls)
    if m < 1:
        raise SynthesisError("n_controls must be at least 1")
    if m == 1:
        return controlled_u_circuit(u, eps)
    if m == 2:
        return lambda2_circuit(u, elementary=True, eps=eps)
    n = m + 1
    t = n
    v = sqrt_unitary2(u, eps)
    cv = controlled_u_circuit(v, eps).remap((m, t), n)
    cvd = controlled_u_circuit(adjoint(v), eps).remap((m, t), n)
    mcx = _lower_toffolis(mcx_steps(range(1, m), m, [t]), n)
    rest = lambda_n_circuit(v, m - 1, eps).remap(tuple(range(1, m)) + (t,), n)
    return cv + mcx + cvd + mcx + rest


def lambda_n_bound(n_controls: int) -> int:
    return LAMBDA_C2 * (n_controls + 1) ** 2 + LAMBDA_C1
