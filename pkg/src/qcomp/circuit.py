"""Gate sequences over a fixed number of wires.

A circuit is an ordered list of steps, each a gate bound to target wires and
an optional control pattern.  The first step acts first, so the circuit
unitary is ``U_k ... U_2 U_1``.

Text format, one step per line::

    wires 3
    # comment
    H 1
    CNOT c+1 2
    RZ(pi/4) c-2 3
    U(0.0+0.0j, 1.0+0.0j; 1.0+0.0j, 0.0+0.0j) 2
"""
from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gates import ControlPattern, GateError, GateSpec, named_gate, place, unitary_gate
from .linalg import EPS_UNITARY
from .qstate import QuantumRegister, StateError

MATERIALIZE_MAX_WIRES = 10


class CircuitError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Step:
    gate: GateSpec
    pattern: ControlPattern

    @property
    def targets(self) -> tuple[int, ...]:
        return self.pattern.targets

    @property
    def controls(self) -> tuple[int, ...]:
        return self.pattern.controls

    def adjoint(self) -> Step:
        return Step(self.gate.adjoint(), self.pattern)

    def is_cnot(self) -> bool:
        p = self.pattern
        return self.gate.name == "X" and len(p.controls) == 1 and p.conditions == (1,)

    def is_single_qubit(self) -> bool:
        return not self.pattern.controls and len(self.pattern.targets) == 1


@dataclass(eq=False)
class Circuit:
    n_wires: int
    steps: list[Step] = field(default_factory=list)

    def __post_init__(self):
        if self.n_wires < 1:
            raise CircuitError("a circuit needs at least one wire")
        self.steps = list(self.steps)
        for s in self.steps:
            self._check(s)

    def _check(self, step: Step):
        try:
            step.pattern.check(self.n_wires)
        except GateError as e:
            raise CircuitError(str(e)) from None
        if step.gate.matrix.shape[0] != 2 ** len(step.pattern.targets):
            raise CircuitError(
                f"gate {step.gate.name} acts on {step.gate.arity} wire(s), "
                f"{len(step.pattern.targets)} target(s) given"
            )

    def append(self, step: Step) -> Circuit:
        self._check(step)
        self.steps.append(step)
        return self

    def add(self, gate: GateSpec | str, targets, controls=(), conditions=()) -> Circuit:
        if isinstance(gate, str):
            gate = named_gate(gate)
        if isinstance(targets, int):
            targets = (targets,)
        return self.append(Step(gate, ControlPattern(tuple(targets), tuple(controls), tuple(conditions))))

    def extend(self, steps: Iterable[Step]) -> Circuit:
        for s in steps:
            self.append(s)
        return self

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: Circuit) -> Circuit:
        if other.n_wires != self.n_wires:
            raise CircuitError("cannot concatenate circuits of different width")
        return Circuit(self.n_wires, self.steps + other.steps)

    def copy(self) -> Circuit:
        return Circuit(self.n_wires, list(self.steps))

    def count(self) -> dict[str, int]:
        single = sum(s.is_single_qubit() for s in self.steps)
        cnot = sum(s.is_cnot() for s in self.steps)
        return {"single": single, "cnot": cnot, "other": len(self.steps) - single - cnot, "total": len(self.steps)}

    def is_elementary(self) -> bool:
        """True when every step is an uncontrolled 1-qubit gate or a CNOT."""
        return all(s.is_single_qubit() or s.is_cnot() for s in self.steps)

    def remap(self, wires: Sequence[int], n_wires: int) -> Circuit:
        """Relabel wire ``i`` as ``wires[i-1]`` inside a wider register."""

        def m(ws):
            return tuple(wires[w - 1] for w in ws)

        out = Circuit(n_wires)
        for s in self.steps:
            p = s.pattern
            out.append(Step(s.gate, ControlPattern(m(p.targets), m(p.controls), p.conditions)))
        return out


def to_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(2**c.n_wires, dtype=complex)
    for s in c.steps:
        u = place(s.gate, s.pattern, c.n_wires) @ u
    return u


def _apply_step(psi: np.ndarray, step: Step, n: int) -> np.ndarray:
    # psi has shape (2,)*n; axis w-1 is wire w
    p = step.pattern
    idx: list = [slice(None)] * n
    for c, b in zip(p.controls, p.conditions):
        idx[c - 1] = b
    idx = tuple(idx)
    sub = psi[idx]
    free = [w for w in range(1, n + 1) if w not in p.controls]
    axes = [free.index(t) for t in p.targets]
    k = len(p.targets)
    g = step.gate.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(g, sub, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    psi[idx] = out
    return psi


def apply(c: Circuit, vector) -> np.ndarray:
    """Apply the circuit to a raw amplitude vector, normalized or not."""
    v = np.array(vector, dtype=complex).reshape(-1)
    if v.size != 2**c.n_wires:
        raise CircuitError(f"vector of length {v.size} does not fit {c.n_wires} wires")
    psi = v.reshape((2,) * c.n_wires)
    for s in c.steps:
        psi = _apply_step(psi, s, c.n_wires)
    return psi.reshape(-1)


def run(c: Circuit, state: QuantumRegister) -> QuantumRegister:
    if state.n_qubits != c.n_wires:
        raise CircuitError(f"register has {state.n_qubits} qubits, circuit has {c.n_wires} wires")
    return QuantumRegister(c.n_wires, apply(c, state.amplitudes), normalized=state.normalized)


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.n_wires, [s.adjoint() for s in reversed(c.steps)])


# ------------------------------------------------------------------ text I/O

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def _eval_param(text: str) -> float:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported parameter expression {text.strip()!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError:
        raise ValueError(f"cannot parse parameter {text.strip()!r}") from None


def _fmt_complex(z: complex) -> str:
    im = repr(float(z.imag))
    if not im.startswith("-"):
        im = "+" + im
    return f"{float(z.real)!r}{im}j"


_LINE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\((.*)\))?((?:\s+\S+)*)\s*$")


def parse(text: str, eps: float = EPS_UNITARY) -> Circuit:
    circ: Circuit | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if circ is None:
            head = line.split()
            if len(head) != 2 or head[0] != "wires":
                raise CircuitError("expected 'wires N' header", lineno)
            try:
                circ = Circuit(int(head[1]))
            except ValueError:
                raise CircuitError(f"bad wire count {head[1]!r}", lineno) from None
            continue
        try:
            circ.append(_parse_step(line, eps))
        except (CircuitError, GateError, ValueError, SyntaxError) as e:
            msg = e.args[0] if isinstance(e, CircuitError) and e.line is None else str(e)
            raise CircuitError(msg, lineno) from None
    if circ is None:
        raise CircuitError("missing 'wires N' header")
    return circ


def _parse_step(line: str, eps: float) -> Step:
    m = _LINE.match(line)
    if not m:
        raise CircuitError(f"cannot parse {line!r}")
    name, args, rest = m.group(1).upper(), m.group(2), m.group(3).split()
    controls, conds, targets = [], [], []
    for tok in rest:
        if tok[:2] in ("c+", "c-"):
            controls.append(int(tok[2:]))
            conds.append(1 if tok[1] == "+" else 0)
        else:
            targets.append(int(tok))
    if name == "U":
        if args is None:
            raise CircuitError("U needs a matrix literal")
        rows = [[complex(e.replace(" ", "")) for e in r.split(",")] for r in args.split(";")]
        gate = unitary_gate(rows, eps)
    elif name in ("CNOT", "TOFFOLI"):
        need = 1 if name == "CNOT" else 2
        if args is not None:
            raise CircuitError(f"{name} takes no parameters")
        if not controls:
            # bare form: leading wires are the controls
            controls, targets = targets[:need], targets[need:]
            conds = [1] * len(controls)
        if len(controls) != need or len(targets) != 1:
            raise CircuitError(f"{name} needs {need} control(s) and one target")
        gate = named_gate("X")
    else:
        params = [_eval_param(a) for a in args.split(",")] if args is not None else []
        gate = named_gate(name, *params)
    try:
        pattern = ControlPattern(tuple(targets), tuple(controls), tuple(conds))
    except GateError as e:
        raise CircuitError(str(e)) from None
    return Step(gate, pattern)


def emit_step(s: Step) -> str:
    g, p = s.gate, s.pattern
    ctl = [f"c{'+' if b else '-'}{c}" for c, b in zip(p.controls, p.conditions)]
    wires = " ".join(ctl + [str(t) for t in p.targets])
    if g.name == "X" and p.conditions == (1,):
        return f"CNOT {wires}"
    if g.name == "X" and p.conditions == (1, 1):
        return f"TOFFOLI {wires}"
    if g.name in ("I", "X", "Y", "Z", "H", "S", "T", "SDG", "TDG", "SWAP"):
        return f"{g.name} {wires}"
    if g.name in ("RX", "RY", "RZ", "P", "E"):
        return f"{g.name}({float(g.params[0])!r}) {wires}"
    rows = "; ".join(", ".join(_fmt_complex(z) for z in row) for row in g.matrix)
    return f"U({rows}) {wires}"


def emit(c: Circuit) -> str:
    return "\n".join([f"wires {c.n_wires}"] + [emit_step(s) for s in c.steps]) + "\n"


def canonicalize(text: str) -> str:
    return emit(parse(text))
