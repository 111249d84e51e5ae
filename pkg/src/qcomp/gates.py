"""Unitary gate constructors, controlled-gate builders and wire placement.

Wires are numbered from 1 and wire 1 is the most significant bit of the basis
index.  A placed gate is a dense 2^n x 2^n matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import EPS_UNITARY, adjoint, is_unitary, max_abs

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
T = np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

_PAULI = {"x": X, "y": Y, "z": Z}


class GateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GateSpec:
    name: str
    matrix: np.ndarray = field(repr=False)
    params: tuple = ()

    @property
    def arity(self) -> int:
        return int(round(math.log2(self.matrix.shape[0])))

    def adjoint(self) -> GateSpec:
        name, p = self.name, self.params
        if name in ("I", "X", "Y", "Z", "H", "SWAP"):
            return self
        if name in _ADJOINT_NAMES:
            return named_gate(_ADJOINT_NAMES[name])
        if name in ("RX", "RY", "RZ", "P", "E"):
            return named_gate(name, -p[0])
        return GateSpec("U", adjoint(self.matrix))

    def same_as(self, other: GateSpec, eps: float = 0.0) -> bool:
        return (
            self.name == other.name
            and self.matrix.shape == other.matrix.shape
            and max_abs(self.matrix - other.matrix) <= eps
        )

    def __repr__(self):
        if self.params:
            return f"{self.name}({', '.join(f'{x:.6g}' for x in self.params)})"
        return self.name


_ADJOINT_NAMES = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


def pauli(which: str) -> GateSpec:
    try:
        return GateSpec(which.upper(), _PAULI[which.lower()].copy())
    except KeyError:
        raise GateError(f"unknown Pauli {which!r}") from None


def identity_gate() -> GateSpec:
    return GateSpec("I", I2.copy())


def hadamard() -> GateSpec:
    return GateSpec("H", H.copy())


def phase_s() -> GateSpec:
    return GateSpec("S", S.copy())


def t_gate() -> GateSpec:
    return GateSpec("T", T.copy())


def swap_gate() -> GateSpec:
    return GateSpec("SWAP", SWAP.copy())


def pauli_function(f, theta: float, n: Sequence[float]) -> np.ndarray:
    """f(theta n.sigma) for a unit vector n, by the even/odd split of f."""
    ns = n[0] * X + n[1] * Y + n[2] * Z
    return (f(theta) + f(-theta)) / 2 * I2 + (f(theta) - f(-theta)) / 2 * ns


def _exp_minus_i_half(theta):
    return np.exp(-0.5j * theta)


def rotation(axis: str, theta: float) -> GateSpec:
    """R_axis(theta) = exp(-i theta sigma_axis / 2)."""
    axis = axis.lower()
    if axis not in _PAULI:
        raise GateError(f"unknown rotation axis {axis!r}")
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if axis == "x":
        m = np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    elif axis == "y":
        m = np.array([[c, -s], [s, c]], dtype=complex)
    else:
        m = np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)
    return GateSpec("R" + axis.upper(), m, (float(theta),))


def rotation_general(axis: Sequence[float], alpha: float, eps: float = EPS_UNITARY) -> GateSpec:
    nx, ny, nz = (float(a) for a in axis)
    if abs(math.sqrt(nx * nx + ny * ny + nz * nz) - 1.0) > eps:
        raise GateError("rotation axis must be a unit vector")
    m = pauli_function(_exp_minus_i_half, alpha, (nx, ny, nz))
    return GateSpec("U", m, (nx, ny, nz, float(alpha)))


def phase_p(alpha: float) -> GateSpec:
    """Global phase e^{i alpha} I."""
    return GateSpec("P", np.exp(1j * alpha) * I2, (float(alpha),))


def phase_e(alpha: float) -> GateSpec:
    """diag(1, e^{i alpha})."""
    return GateSpec("E", np.diag([1, np.exp(1j * alpha)]).astype(complex), (float(alpha),))


def unitary_gate(matrix, eps: float = EPS_UNITARY) -> GateSpec:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] & (m.shape[0] - 1) or m.shape[0] < 2:
        raise GateError(f"gate matrix must be 2^k x 2^k, got {m.shape}")
    if not is_unitary(m, eps):
        raise GateError("gate matrix is not unitary")
    return GateSpec("U", m)


_FIXED = {
    "I": identity_gate,
    "X": lambda: pauli("x"),
    "Y": lambda: pauli("y"),
    "Z": lambda: pauli("z"),
    "H": hadamard,
    "S": phase_s,
    "T": t_gate,
    "SDG": lambda: GateSpec("SDG", adjoint(S)),
    "TDG": lambda: GateSpec("TDG", adjoint(T)),
    "SWAP": swap_gate,
}
_PARAM = {
    "RX": lambda a: rotation("x", a),
    "RY": lambda a: rotation("y", a),
    "RZ": lambda a: rotation("z", a),
    "P": phase_p,
    "E": phase_e,
}


def named_gate(name: str, *params: float) -> GateSpec:
    name = name.upper()
    if name in _FIXED:
        if params:
            raise GateError(f"gate {name} takes no parameters")
        return _FIXED[name]()
    if name in _PARAM:
        if len(params) != 1:
            raise GateError(f"gate {name} takes exactly one parameter")
        return _PARAM[name](float(params[0]))
    raise GateError(f"unknown gate {name!r}")


def controlled(u, m: int) -> GateSpec:
    """Lambda_m(u): identity except for the trailing block, where u acts."""
    g = u if isinstance(u, GateSpec) else GateSpec("U", np.asarray(u, dtype=complex))
    k = g.matrix.shape[0]
    dim = k * 2**m
    out = np.eye(dim, dtype=complex)
    out[dim - k:, dim - k:] = g.matrix
    return GateSpec(f"C{m}({g.name})", out, g.params)


def cnot_matrix() -> np.ndarray:
    return controlled(X, 1).matrix


def toffoli_matrix() -> np.ndarray:
    return controlled(X, 2).matrix


# ------------------------------------------------------------------ placement


@dataclass(frozen=True)
class ControlPattern:
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    conditions: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        conds = self.conditions if self.conditions else (1,) * len(self.controls)
        object.__setattr__(self, "conditions", tuple(int(b) for b in conds))
        if len(self.conditions) != len(self.controls):
            raise GateError("one condition bit per control wire is required")
        if any(b not in (0, 1) for b in self.conditions):
            raise GateError("condition bits must be 0 or 1")
        wires = self.targets + self.controls
        if len(set(wires)) != len(wires):
            raise GateError(f"wire collision in {wires}")
        if not self.targets:
            raise GateError("a gate needs at least one target wire")

    @property
    def wires(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def check(self, n: int):
        for w in self.wires:
            if not 1 <= w <= n:
                raise GateError(f"wire {w} outside 1..{n}")


def place(gate: GateSpec | np.ndarray, pattern: ControlPattern, n: int) -> np.ndarray:
    """Full 2^n matrix of ``gate`` on ``pattern.targets`` under the controls.

    Built column by column from the basis action: a basis state whose
    control bits match the condition pattern has its target bits replaced by
    the gate's output superposition; every other basis state is left alone.
    """
    m = gate.matrix if isinstance(gate, GateSpec) else np.asarray(gate, dtype=complex)
    k = len(pattern.targets)
    if m.shape != (2**k, 2**k):
        raise GateError(f"gate of dimension {m.shape[0]} does not fit {k} target wire(s)")
    pattern.check(n)
    dim = 2**n
    cols = np.arange(dim)
    active = np.ones(dim, dtype=bool)
    for c, b in zip(pattern.controls, pattern.conditions):
        active &= ((cols >> (n - c)) & 1) == b
    out = np.zeros((dim, dim), dtype=complex)
    idle = cols[~active]
    out[idle, idle] = 1.0
    cols = cols[active]
    tshift = [n - t for t in pattern.targets]
    local_in = np.zeros_like(cols)
    base = cols.copy()
    for s in tshift:
        local_in = (local_in << 1) | ((cols >> s) & 1)
        base &= ~(1 << s)
    for local_out in range(2**k):
        rows = base.copy()
        for j, s in enumerate(tshift):
            if (local_out >> (k - 1 - j)) & 1:
                rows |= 1 << s
        out[rows, cols] += m[local_out, local_in]
    return out


def place_single(gate, wire: int, n: int) -> np.ndarray:
    return place(gate, ControlPattern((wire,)), n)


# ------------------------------------------------------------ special gates


def deutsch_gate(alpha: float) -> GateSpec:
    """Lambda_2(i R_x(pi alpha)).

    Universality needs an irrational ``alpha``; floats are always rational so
    the constructor accepts any real.
    """
    u = 1j * rotation("x", math.pi * alpha).matrix
    g = controlled(u, 2)
    return GateSpec("DEUTSCH", g.matrix, (float(alpha),))


def barenco_gate(phi: float, alpha: float, theta: float) -> GateSpec:
    c, s = math.cos(theta), math.sin(theta)
    m = np.eye(4, dtype=complex)
    m[2, 2] = np.exp(1j * alpha) * c
    m[2, 3] = -1j * np.exp(1j * (alpha - phi)) * s
    m[3, 2] = -1j * np.exp(1j * (alpha + phi)) * s
    m[3, 3] = np.exp(1j * alpha) * c
    return GateSpec("BARENCO", m, (float(phi), float(alpha), float(theta)))


def spin_ladder(which: str) -> np.ndarray:
    """Spin-1/2 raising (``plus``) or lowering (``minus``) operator."""
    if which in ("plus", "+"):
        return np.array([[0, 1], [0, 0]], dtype=complex)
    if which in ("minus", "-"):
        return np.array([[0, 0], [1, 0]], dtype=complex)
    raise GateError(f"unknown ladder operator {which!r}")


def spin_component(axis: str) -> np.ndarray:
    return _PAULI[axis.lower()] / 2
