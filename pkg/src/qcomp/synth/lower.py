"""Lowering arbitrary circuit steps to single-qubit gates and CNOTs."""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, Step
from ..gates import ControlPattern, GateSpec, named_gate
from .multi import lambda_n_circuit

# a merged single-qubit product is dropped only when it is the identity to
# within rounding; global phases are always kept
IDENTITY_DROP = 1e-14


def _with_controls(step: Step, controls, conditions) -> Step:
    p = step.pattern
    return Step(
        step.gate,
        ControlPattern(p.targets, tuple(controls) + p.controls, tuple(conditions) + p.conditions),
    )


def lower_step(step: Step, n: int) -> Circuit:
    out = Circuit(n)
    if step.is_single_qubit() or step.is_cnot():
        return out.append(step)
    p = step.pattern
    zeros = [c for c, b in zip(p.controls, p.conditions) if b == 0]
    if zeros:
        xg = named_gate("X")
        flip = [Step(xg, ControlPattern((c,))) for c in zeros]
        positive = Step(step.gate, ControlPattern(p.targets, p.controls))
        return out.extend(flip).extend(lower_step(positive, n)).extend(flip)
    if len(p.targets) == 1:
        return out.extend(lambda_n_circuit(step.gate.matrix, len(p.controls)).remap(p.controls + p.targets, n))
    # multi-target gate: build it on its own wires, then control every step
    k = len(p.targets)
    if step.gate.name == "SWAP":
        xg = named_gate("X")
        inner = Circuit(2).add(xg, 2, (1,)).add(xg, 1, (2,)).add(xg, 2, (1,))
    else:
        from .compile import compile_unitary

        inner = compile_unitary(step.gate.matrix).circuit
    inner = inner.remap(p.targets, n)
    if not p.controls:
        return inner
    for s in inner:
        out.extend(lower_step(_with_controls(s, p.controls, p.conditions), n))
    return out


def lower(c: Circuit, merge: bool = True) -> Circuit:
    out = Circuit(c.n_wires)
    for s in c:
        out.extend(lower_step(s, c.n_wires))
    return peephole(out) if merge else out


def peephole(c: Circuit) -> Circuit:
    """Merge runs of single-qubit gates on a wire and cancel repeated CNOTs."""
    out: list[Step | None] = []
    last: dict[int, int | None] = {}
    for s in c:
        if s.is_single_qubit():
            w = s.targets[0]
            i = last.get(w)
            if i is not None and out[i] is not None and out[i].is_single_qubit():
                m = s.gate.matrix @ out[i].gate.matrix
                if np.max(np.abs(m - np.eye(2))) <= IDENTITY_DROP:
                    out[i] = None
                    last[w] = None
                else:
                    out[i] = Step(GateSpec("U", m), s.pattern)
                continue
            out.append(s)
            last[w] = len(out) - 1
            continue
        wires = s.pattern.wires
        if s.is_cnot():
            i = last.get(wires[0])
            prev = out[i] if i is not None else None
            if prev is not None and i == last.get(wires[1]) and prev.is_cnot() and prev.pattern == s.pattern:
                out[i] = None
                for w in wires:
                    last[w] = None
                continue
        out.append(s)
        for w in wires:
            last[w] = len(out) - 1
    return Circuit(c.n_wires, [s for s in out if s is not None])
