"""Two-level factorization of U(N) and Gray-code routing onto one qubit."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..circuit import Circuit, Step
from ..gates import ControlPattern, GateSpec, X, named_gate
from ..linalg import EPS_UNITARY, adjoint, is_unitary
from .single import SynthesisError

# entries below this are treated as already eliminated
_ZERO = 1e-14


@dataclass(frozen=True, eq=False)
class TwoLevelFactor:
    p: int
    q: int
    block: np.ndarray

    def __post_init__(self):
        if not 0 <= self.p < self.q:
            raise SynthesisError(f"two-level indices must satisfy 0 <= p < q, got ({self.p}, {self.q})")

    def expand(self, dim: int) -> np.ndarray:
        out = np.eye(dim, dtype=complex)
        ix = [self.p, self.q]
        out[np.ix_(ix, ix)] = self.block
        return out


def two_level_factorize(u, eps: float = EPS_UNITARY) -> list[TwoLevelFactor]:
    """Factors F_0, ..., F_{k-1} with U = F_0 @ F_1 @ ... @ F_{k-1}, k <= N(N-1)/2.

    Row N-1 is cleared right to left by multiplying on the right with
    two-level unitaries mixing columns j and N-1; the last mixing step leaves
    a 1 on the diagonal, so the leading (N-1)-block is unitary and the
    procedure recurses.  The final 2x2 block is taken as a factor whole, so
    no separate diagonal phase factor is needed.
    """
    w = np.array(u, dtype=complex)
    n = w.shape[0]
    if w.ndim != 2 or w.shape[1] != n or not is_unitary(w, eps):
        raise SynthesisError("two_level_factorize needs a square unitary")
    applied: list[TwoLevelFactor] = []

    def right_multiply(j: int, k: int, c: np.ndarray):
        cols = w[:, [j, k]] @ c
        w[:, j], w[:, k] = cols[:, 0], cols[:, 1]
        applied.append(TwoLevelFactor(j, k, c))

    for k in range(n - 1, 1, -1):
        for j in range(k - 1, -1, -1):
            a, b = w[k, j], w[k, k]
            if abs(a) <= _ZERO:
                continue
            r = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
            right_multiply(j, k, np.array([[b, np.conj(a)], [-a, np.conj(b)]]) / r)
        phase = w[k, k] / abs(w[k, k])
        if abs(phase - 1) > _ZERO:
            right_multiply(k - 1, k, np.diag([1, np.conj(phase)]))
    if n >= 2:
        blk = w[:2, :2].copy()
        if np.max(np.abs(blk - np.eye(2))) > _ZERO:
            right_multiply(0, 1, adjoint(blk))
    # U C_1 ... C_m = I, hence U = C_m^dagger ... C_1^dagger
    return [TwoLevelFactor(f.p, f.q, adjoint(f.block)) for f in reversed(applied)]


def expand_product(factors: Sequence[TwoLevelFactor], dim: int) -> np.ndarray:
    out = np.eye(dim, dtype=complex)
    for f in factors:
        out = out @ f.expand(dim)
    return out


def gray_path(s: int, t: int, n: int) -> list[int]:
    """Basis indices from s to t, flipping differing bits from wire 1 down."""
    if s == t:
        raise SynthesisError("gray path endpoints must differ")
    path = [s]
    cur = s
    for w in range(1, n + 1):
        bit = 1 << (n - w)
        if (cur ^ t) & bit:
            cur ^= bit
            path.append(cur)
    return path


def _differing_wire(a: int, b: int, n: int) -> int:
    d = a ^ b
    if d == 0 or d & (d - 1):
        raise SynthesisError(f"indices {a} and {b} do not differ in exactly one bit")
    return n - d.bit_length() + 1


def _routed(gate: GateSpec, a: int, b: int, n: int) -> Step:
    # gate on the wire where a and b differ, conditioned on all shared bits
    w = _differing_wire(a, b, n)
    others = tuple(x for x in range(1, n + 1) if x != w)
    conds = tuple((a >> (n - x)) & 1 for x in others)
    return Step(gate, ControlPattern((w,), others, conds))


def gray_route(factor: TwoLevelFactor, n_qubits: int, path: Sequence[int] | None = None) -> Circuit:
    """Circuit equal to ``factor`` expanded on n qubits.

    Controlled-X swaps walk the basis state |p> along a Gray path until it is
    one bit away from |q>, a generalized Lambda_{n-1}(U') acts on that bit,
    and the swaps are undone in reverse.
    """
    n = n_qubits
    s, t = factor.p, factor.q
    if not 0 <= s < 2**n or not 0 <= t < 2**n:
        raise SynthesisError(f"factor indices exceed {n} qubits")
    path = list(path) if path is not None else gray_path(s, t, n)
    if path[0] != s or path[-1] != t:
        raise SynthesisError("path must run from p to q")
    for a, b in zip(path, path[1:]):
        _differing_wire(a, b, n)
    xg = named_gate("X")
    swaps = [_routed(xg, path[i], path[i + 1], n) for i in range(len(path) - 2)]
    last = path[-2]
    w = _differing_wire(last, t, n)
    block = factor.block
    if (last >> (n - w)) & 1:
        # |p> now sits on the 1 side of the routed bit
        block = X @ block @ X
    core = _routed(GateSpec("U", block), last, t, n)
    return Circuit(n, swaps + [core] + list(reversed(swaps)))
