"""Classical Boolean circuits and their reversible compilation.

A :class:`BoolCircuit` is a DAG over references: ``0 .. n_in-1`` name the
inputs and ``n_in + j`` names node ``j``.  :func:`to_reversible` turns it into
NOT/CNOT/TOFFOLI steps over the register layout ``(x, ancilla, copy, y)``
that maps ``(x, 0, 0, y)`` to ``(x, 0, 0, y XOR f(x))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit
from .gates import named_gate


class LogicError(ValueError):
    pass


ARITY = {"AND": 2, "OR": 2, "XOR": 2, "NAND": 2, "NOT": 1, "FANOUT": 1, "CONST0": 0, "CONST1": 0}

Bits = tuple[int, ...]


@dataclass(frozen=True)
class Node:
    op: str
    inputs: tuple[int, ...] = ()


@dataclass
class BoolCircuit:
    n_in: int
    nodes: list[Node] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)

    def __post_init__(self):
        for j, node in enumerate(self.nodes):
            self._check(node, self.n_in + j)
        for r in self.outputs:
            self._check_ref(r, self.n_in + len(self.nodes))

    def _check_ref(self, r: int, limit: int):
        # only earlier references are legal, so the graph is acyclic
        if not 0 <= r < limit:
            raise LogicError(f"reference {r} is not defined before use")

    def _check(self, node: Node, ref: int):
        if node.op not in ARITY:
            raise LogicError(f"unknown gate {node.op!r}")
        if len(node.inputs) != ARITY[node.op]:
            raise LogicError(f"{node.op} takes {ARITY[node.op]} input(s)")
        for r in node.inputs:
            self._check_ref(r, ref)

    @property
    def n_out(self) -> int:
        return len(self.outputs)

    def add(self, op: str, *inputs: int) -> int:
        node = Node(op.upper(), tuple(inputs))
        ref = self.n_in + len(self.nodes)
        self._check(node, ref)
        self.nodes.append(node)
        return ref


def _gate(op: str, v: Sequence[int]) -> int:
    if op == "AND":
        return v[0] & v[1]
    if op == "OR":
        return v[0] | v[1]
    if op == "XOR":
        return v[0] ^ v[1]
    if op == "NAND":
        return 1 - (v[0] & v[1])
    if op == "NOT":
        return 1 - v[0]
    if op == "FANOUT":
        return v[0]
    return 1 if op == "CONST1" else 0


def eval_bool(c: BoolCircuit, bits: Sequence[int]) -> Bits:
    if len(bits) != c.n_in:
        raise LogicError(f"expected {c.n_in} input bits, got {len(bits)}")
    vals = [int(b) for b in bits]
    for node in c.nodes:
        vals.append(_gate(node.op, [vals[r] for r in node.inputs]))
    return tuple(vals[r] for r in c.outputs)


def index_bits(i: int, k: int) -> Bits:
    return tuple((i >> (k - 1 - j)) & 1 for j in range(k))


def bits_index(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = 2 * out + int(b)
    return out


# ---------------------------------------------------------------- synthesis


def synthesize_bool(table: Sequence[Sequence[int]], k: int | None = None) -> BoolCircuit:
    """Circuit for f: {0,1}^k -> {0,1}^l given row by row (row i is f(bits of i)).

    Each output bit is built by induction on the first variable,
    f(x1, rest) = (NOT x1 AND f0(rest)) XOR (x1 AND f1(rest)), where f0 and f1
    are f restricted to x1 = 0 and x1 = 1.  One-variable functions use the
    four direct circuits: a wire, NOT, AND with a constant-0 bit, and its NOT.
    Equal restrictions skip the variable, and identical subfunctions are
    built once.
    """
    rows = [tuple(int(b) for b in r) for r in table]
    if k is None:
        k = int(round(math.log2(len(rows)))) if rows else -1
    if len(rows) != 2**k or k < 0:
        raise LogicError(f"a table over {k} inputs needs {2 ** max(k, 0)} rows, got {len(rows)}")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise LogicError("all rows must have the same number of output bits")
    (l,) = width
    c = BoolCircuit(k)
    memo: dict[tuple[int, Bits], int] = {}
    negated: dict[int, int] = {}
    zero: list[int] = []

    def const0() -> int:
        if not zero:
            zero.append(c.add("CONST0"))
        return zero[0]

    def neg(r: int) -> int:
        if r not in negated:
            negated[r] = c.add("NOT", r)
        return negated[r]

    def build(var: int, f: Bits) -> int:
        # f is the truth vector over variables var..k-1 (0-based)
        key = (var, f)
        if key in memo:
            return memo[key]
        if var == k:
            ref = c.add("CONST1") if f[0] else const0()
        elif var == k - 1:
            if f == (0, 1):
                ref = var
            elif f == (1, 0):
                ref = neg(var)
            else:
                ref = c.add("AND", var, const0())
                if f == (1, 1):
                    ref = c.add("NOT", ref)
        else:
            half = len(f) // 2
            f0, f1 = f[:half], f[half:]
            if f0 == f1:
                ref = build(var + 1, f0)
            else:
                a = c.add("AND", neg(var), build(var + 1, f0))
                b = c.add("AND", var, build(var + 1, f1))
                ref = c.add("XOR", a, b)
        memo[key] = ref
        return ref

    for j in range(l):
        c.outputs.append(build(0, tuple(r[j] for r in rows)))
    return c


# -------------------------------------------------------------- reversible


REV_OPS = {"NOT": (0, 1), "CNOT": (1, 1), "TOFFOLI": (2, 1), "FREDKIN": (1, 2)}


@dataclass(frozen=True)
class RevStep:
    op: str
    controls: tuple[int, ...]
    targets: tuple[int, ...]


@dataclass
class RevCircuit:
    width: int
    steps: list[RevStep] = field(default_factory=list)
    layout: dict[str, range] = field(default_factory=dict)
    forward_len: int = 0

    def add(self, op: str, *wires: int) -> RevCircuit:
        nc, nt = REV_OPS[op]
        if len(wires) != nc + nt:
            raise LogicError(f"{op} takes {nc + nt} wires")
        if len(set(wires)) != len(wires) or not all(1 <= w <= self.width for w in wires):
            raise LogicError(f"bad wires {wires} for width {self.width}")
        self.steps.append(RevStep(op, tuple(wires[:nc]), tuple(wires[nc:])))
        return self

    def inverse(self) -> RevCircuit:
        # every step is an involution
        return RevCircuit(self.width, list(reversed(self.steps)), dict(self.layout))

    def count(self) -> dict[str, int]:
        out = {op: 0 for op in REV_OPS}
        for s in self.steps:
            out[s.op] += 1
        return out


def eval_reversible(c: RevCircuit, bits: Sequence[int]) -> Bits:
    if len(bits) != c.width:
        raise LogicError(f"expected {c.width} bits, got {len(bits)}")
    v = [int(b) for b in bits]
    for s in c.steps:
        ctl = all(v[w - 1] for w in s.controls)
        if not ctl:
            continue
        if s.op == "FREDKIN":
            a, b = s.targets
            v[a - 1], v[b - 1] = v[b - 1], v[a - 1]
        else:
            t = s.targets[0] - 1
            v[t] ^= 1
    return tuple(v)


def to_reversible(c: BoolCircuit) -> RevCircuit:
    """Compute, copy out, uncompute.

    The forward segment copies x into the copy register and evaluates each
    node into fresh ancillas; the results are CNOT-ed into y and the forward
    segment is replayed in reverse, returning ancilla and copy to 0.
    Gate count is at most 12 * nodes + 2 * n_in + n_out.
    """
    n_anc = 0
    anc_steps: list[tuple] = []

    # wires are assigned after the ancilla count is known; use symbolic names
    def fresh() -> tuple[str, int]:
        nonlocal n_anc
        n_anc += 1
        return ("a", n_anc - 1)

    where: list[tuple[str, int]] = [("c", i) for i in range(c.n_in)]
    for node in c.nodes:
        ins = [where[r] for r in node.inputs]
        op = node.op
        if op in ("FANOUT",) or (op in ("AND", "OR") and ins[0] == ins[1]):
            out = fresh()
            anc_steps.append(("CNOT", ins[0], out))
        elif op == "XOR" and ins[0] == ins[1]:
            out = fresh()
        elif op == "NOT" or (op == "NAND" and ins[0] == ins[1]):
            out = fresh()
            anc_steps += [("NOT", out), ("CNOT", ins[0], out)]
        elif op == "AND":
            out = fresh()
            anc_steps.append(("TOFFOLI", ins[0], ins[1], out))
        elif op == "NAND":
            out = fresh()
            anc_steps += [("NOT", out), ("TOFFOLI", ins[0], ins[1], out)]
        elif op == "XOR":
            out = fresh()
            anc_steps += [("CNOT", ins[0], out), ("CNOT", ins[1], out)]
        elif op == "OR":
            # De Morgan: x OR y = NAND(NOT x, NOT y)
            nx, ny, out = fresh(), fresh(), fresh()
            anc_steps += [
                ("NOT", nx), ("CNOT", ins[0], nx),
                ("NOT", ny), ("CNOT", ins[1], ny),
                ("NOT", out), ("TOFFOLI", nx, ny, out),
            ]
        elif op == "CONST0":
            out = fresh()
        else:  # CONST1
            out = fresh()
            anc_steps.append(("NOT", out))
        where.append(out)

    n_in, n_out = c.n_in, c.n_out
    x0, a0 = 1, 1 + n_in
    c0 = a0 + n_anc
    y0 = c0 + n_in
    width = y0 + n_out - 1
    rc = RevCircuit(
        width,
        layout={
            "x": range(x0, x0 + n_in),
            "ancilla": range(a0, a0 + n_anc),
            "copy": range(c0, c0 + n_in),
            "y": range(y0, y0 + n_out),
        },
    )

    def wire(sym: tuple[str, int]) -> int:
        reg, i = sym
        return (a0 if reg == "a" else c0) + i

    forward = [("CNOT", x0 + i, c0 + i) for i in range(n_in)]
    forward += [(s[0],) + tuple(wire(w) for w in s[1:]) for s in anc_steps]
    for s in forward:
        rc.add(*s)
    rc.forward_len = len(forward)
    for j, r in enumerate(c.outputs):
        rc.add("CNOT", wire(where[r]), y0 + j)
    for s in reversed(forward):
        rc.add(*s)
    return rc


def rev_to_circuit(c: RevCircuit) -> Circuit:
    out = Circuit(c.width)
    x = named_gate("X")
    for s in c.steps:
        if s.op == "FREDKIN":
            out.add(named_gate("SWAP"), s.targets, controls=s.controls)
        else:
            out.add(x, s.targets, controls=s.controls)
    return out


def classical_matrix(table: Sequence, k: int | None = None) -> np.ndarray:
    """Permutation matrix with a 1 at (f(x), x) for a bijective table."""
    rows = [bits_index(r) if isinstance(r, (tuple, list, str)) else int(r) for r in table]
    dim = len(rows)
    if dim == 0 or dim & (dim - 1):
        raise LogicError("table length must be a power of two")
    if sorted(rows) != list(range(dim)):
        raise LogicError("table is not a bijection")
    m = np.zeros((dim, dim), dtype=complex)
    m[rows, np.arange(dim)] = 1.0
    return m


def permutation_table(c: RevCircuit) -> list[int]:
    return [bits_index(eval_reversible(c, index_bits(i, c.width))) for i in range(2**c.width)]


def parse_truth_table(text: str) -> list[Bits]:
    """One row per input in index order: ``f(x)`` bits, or ``x f(x)`` with x checked."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if len(parts) == 2:
            x, line = parts
            if set(x) - {"0", "1"} or int(x, 2) != len(rows):
                raise LogicError(f"line {lineno}: input column {x!r} out of order")
        else:
            line = "".join(parts)
        if set(line) - {"0", "1"}:
            raise LogicError(f"line {lineno}: output bits must be 0 or 1")
        rows.append(tuple(int(ch) for ch in line))
    n = len(rows)
    if n == 0 or n & (n - 1):
        raise LogicError(f"truth table needs 2^k rows, got {n}")
    if len({len(r) for r in rows}) != 1:
        raise LogicError("rows have different widths")
    return rows


def format_truth_table(rows: Sequence[Sequence[int]]) -> str:
    return "".join("".join(str(b) for b in r) + "\n" for r in rows)


def verify_reversible(bc: BoolCircuit, rc: RevCircuit, table: Sequence[Sequence[int]] | None = None) -> bool:
    """Check (x, 0, 0, y) -> (x, 0, 0, y XOR f(x)) for all x and y in {0...0, 1...1}."""
    k, l = bc.n_in, bc.n_out
    lay = rc.layout
    for i in range(2**k):
        x = index_bits(i, k)
        f = tuple(table[i]) if table is not None else eval_bool(bc, x)
        for yfill in (0, 1):
            y = (yfill,) * l
            state = [0] * rc.width
            for w, b in zip(lay["x"], x):
                state[w - 1] = b
            for w, b in zip(lay["y"], y):
                state[w - 1] = b
            out = eval_reversible(rc, state)
            want = list(state)
            for w, b, fb in zip(lay["y"], y, f):
                want[w - 1] = b ^ fb
            if list(out) != want:
                return False
    return True
