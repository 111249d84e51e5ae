"""Single-qubit Euler factorization and the ABC form of a controlled-U."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit
from ..gates import GateSpec, named_gate, phase_e, rotation
from ..linalg import EPS_UNITARY, is_unitary


class SynthesisError(ValueError):
    pass


# below this |V10| (or |V00|) the Euler angles sit on a pole of the chart
_POLE = 1e-12


@dataclass(frozen=True)
class ZYFactors:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def matrix(self) -> np.ndarray:
        return (
            cmath.exp(1j * self.alpha)
            * rotation("z", self.beta).matrix
            @ rotation("y", self.gamma).matrix
            @ rotation("z", self.delta).matrix
        )


def _check_2x2(u, eps: float) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, eps):
        raise SynthesisError("expected a 2x2 unitary")
    return u


def _wrap(a: float) -> float:
    # into (-pi, pi]
    a = math.remainder(a, 2 * math.pi)
    return math.pi if a == -math.pi else a


def zy_decompose(u, eps: float = EPS_UNITARY) -> ZYFactors:
    """U = e^{i alpha} R_z(beta) R_y(gamma) R_z(delta) with gamma in [0, pi].

    On the poles gamma = 0 and gamma = pi only beta + delta (resp. beta - delta)
    is fixed, and beta is set to 0.
    """
    u = _check_2x2(u, eps)
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = cmath.phase(det) / 2
    v = u * cmath.exp(-1j * alpha)
    a, b = abs(v[0, 0]), abs(v[1, 0])
    gamma = 2 * math.atan2(b, a)
    if b <= _POLE:
        beta, delta = 0.0, -2 * cmath.phase(v[0, 0])
    elif a <= _POLE:
        beta, delta = 0.0, -2 * cmath.phase(v[1, 0])
    else:
        s = -2 * cmath.phase(v[0, 0])  # beta + delta
        d = 2 * cmath.phase(v[1, 0])  # beta - delta
        beta, delta = (s + d) / 2, (s - d) / 2
    return ZYFactors(_wrap(alpha), beta, gamma, delta)


@dataclass(frozen=True)
class ABC:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    alpha: float


def abc_decompose(u, eps: float = EPS_UNITARY) -> ABC:
    """A, B, C with ABC = I and e^{i alpha} A X B X C = U."""
    f = zy_decompose(u, eps)
    rz = lambda t: rotation("z", t).matrix
    ry = lambda t: rotation("y", t).matrix
    a = rz(f.beta) @ ry(f.gamma / 2)
    b = ry(-f.gamma / 2) @ rz(-(f.delta + f.beta) / 2)
    c = rz((f.delta - f.beta) / 2)
    return ABC(a, b, c, f.alpha)


def controlled_u_circuit(u, eps: float = EPS_UNITARY) -> Circuit:
    """Lambda_1(U) on (control=1, target=2) from six elementary steps."""
    f = abc_decompose(u, eps)
    xg = named_gate("X")
    circ = Circuit(2)
    circ.add(GateSpec("U", f.c), 2)
    circ.add(xg, 2, controls=(1,))
    circ.add(GateSpec("U", f.b), 2)
    circ.add(xg, 2, controls=(1,))
    circ.add(GateSpec("U", f.a), 2)
    circ.add(phase_e(f.alpha), 1)
    return circ

