import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import circuit_matrix, haar_unitary, random_state
from qcomp.circuit import (
    Circuit,
    CircuitError,
    apply,
    canonicalize,
    emit,
    inverse,
    parse,
    run,
    to_unitary,
)
from qcomp.gates import H, S, T, X, named_gate, unitary_gate
from qcomp.linalg import max_abs
from qcomp.qstate import QuantumRegister, basis_state

seeds = st.integers(0, 2**32 - 1)
ONE_QUBIT = ["H", "X", "Y", "Z", "S", "T", "SDG", "TDG"]


@st.composite
def circuits(draw, max_wires=4, max_len=12):
    n = draw(st.integers(1, max_wires))
    c = Circuit(n)
    for _ in range(draw(st.integers(0, max_len))):
        kind = draw(st.sampled_from(["one", "rot", "ctl", "swap", "u"]))
        t = draw(st.integers(1, n))
        others = [w for w in range(1, n + 1) if w != t]
        if kind == "one":
            c.add(draw(st.sampled_from(ONE_QUBIT)), t)
        elif kind == "rot":
            c.add(named_gate(draw(st.sampled_from(["RX", "RY", "RZ", "E"])), draw(st.floats(-4, 4))), t)
        elif kind == "ctl" and others:
            ctl = draw(st.lists(st.sampled_from(others), min_size=1, max_size=len(others), unique=True))
            conds = draw(st.lists(st.integers(0, 1), min_size=len(ctl), max_size=len(ctl)))
            c.add(draw(st.sampled_from(["X", "H", "T"])), t, ctl, conds)
        elif kind == "swap" and others:
            c.add("SWAP", (t, draw(st.sampled_from(others))))
        else:
            u = haar_unitary(2, np.random.default_rng(draw(seeds)))
            c.add(unitary_gate(u), t)
    return c


def test_unitary_is_reverse_product():
    a, b, cc = named_gate("H"), named_gate("T"), named_gate("RX", 0.4)
    c = Circuit(1).add(a, 1).add(b, 1).add(cc, 1)
    assert max_abs(to_unitary(c) - cc.matrix @ b.matrix @ a.matrix) < 1e-15
    assert np.array_equal(to_unitary(Circuit(3)), np.eye(8))


def test_bell_circuit():
    c = Circuit(2).add("H", 1).add("X", 2, [1])
    out = apply(c, [1, 0, 0, 0])
    assert max_abs(out - np.array([1, 0, 0, 1]) / math.sqrt(2)) < 1e-15


def test_cnot_entangles_unnormalized_input_exactly():
    # (|0> + |1>)|1>  ->  |01> + |10>
    c = Circuit(2).add("X", 2, [1])
    out = apply(c, np.array([0, 1, 0, 1]))
    assert np.array_equal(out, [0, 1, 1, 0])
    assert np.array_equal(to_unitary(c).real.astype(int) @ [0, 1, 0, 1], [0, 1, 1, 0])


def test_run_identity_and_register_type(rng):
    psi = QuantumRegister(2, random_state(4, rng))
    out = run(Circuit(2).add("I", 1), psi)
    assert isinstance(out, QuantumRegister) and np.array_equal(out.amplitudes, psi.amplitudes)
    with pytest.raises(CircuitError):
        run(Circuit(3), psi)


@given(circuits())
def test_unitary_matches_bitstring_oracle(c):
    assert max_abs(to_unitary(c) - circuit_matrix(c)) < 1e-12


@given(circuits(), seeds)
def test_streaming_apply_matches_matrix(c, seed):
    v = random_state(2**c.n_wires, np.random.default_rng(seed))
    assert max_abs(apply(c, v) - to_unitary(c) @ v) < 1e-12


@given(circuits())
def test_inverse_undoes_circuit(c):
    u = to_unitary(c + inverse(c))
    assert max_abs(u - np.eye(2**c.n_wires)) < 1e-12


def test_inverse_of_s_is_sdg():
    inv = inverse(Circuit(1).add("S", 1))
    assert inv.steps[0].gate.name == "SDG"
    assert max_abs(inv.steps[0].gate.matrix @ S - np.eye(2)) < 1e-15


@given(circuits())
def test_emit_parse_round_trip(c):
    text = emit(c)
    back = parse(text)
    assert back.n_wires == c.n_wires and len(back) == len(c)
    assert max_abs(to_unitary(back) - to_unitary(c)) < 1e-12
    assert emit(back) == text


def test_canonicalize_is_emit_of_parse():
    t = "wires 2\n# bell\nh 1\nCNOT 1 2   \n"
    assert canonicalize(t) == emit(parse(t)) == "wires 2\nH 1\nCNOT c+1 2\n"
    assert canonicalize(canonicalize(t)) == canonicalize(t)


def test_parse_forms():
    c = parse("wires 3\nTOFFOLI 1 2 3\nX c-1 c+2 3\nRZ(pi/4) 2\nU(0, 1; 1, 0) 3\n")
    s = c.steps
    assert s[0].controls == (1, 2) and s[0].targets == (3,)
    assert s[1].pattern.conditions == (0, 1)
    assert s[2].gate.params == (math.pi / 4,)
    assert max_abs(s[3].gate.matrix - X) == 0


@pytest.mark.parametrize(
    "text",
    [
        "wires 2\nCNOT c+1 1",
        "H 1",
        "wires 2\nH 3",
        "wires 2\nFOO 1",
        "wires 2\nRZ(__import__('os')) 1",
        "wires 2\nRZ(1 1",
        "wires 2\nU(1, 1; 0, 1) 1",
        "wires 2\nCNOT 1",
        "wires 2\nSWAP 1",
        "wires x",
    ],
)
def test_parse_errors(text):
    with pytest.raises(CircuitError):
        parse(text)


def test_parse_error_reports_line():
    with pytest.raises(CircuitError) as e:
        parse("wires 2\nH 1\n\nCNOT c+1 1\n")
    assert e.value.line == 4


def test_count_and_elementary():
    c = Circuit(3).add("H", 1).add("X", 2, [1]).add("X", 3, [1, 2]).add("X", 2, [1], [0])
    assert c.count() == {"single": 1, "cnot": 1, "other": 2, "total": 4}
    assert not c.is_elementary()
    assert Circuit(2).add("T", 1).add("X", 1, [2]).is_elementary()


def test_remap_moves_wires():
    c = Circuit(2).add("X", 2, [1]).remap((3, 1), 3)
    assert c.steps[0].controls == (3,) and c.steps[0].targets == (1,)
    out = apply(c, basis_state(3, 1).amplitudes)  # |001> -> |101>
    assert np.argmax(np.abs(out)) == 5


def test_circuit_rejects_bad_steps():
    with pytest.raises(CircuitError):
        Circuit(0)
    with pytest.raises(CircuitError):
        Circuit(1).add("SWAP", (1,))
    with pytest.raises(CircuitError):
        Circuit(2) + Circuit(3)


def test_gate_sequence_identity():
    c = Circuit(1)
    for g in ("H", "T", "T", "H"):
        c.add(g, 1)
    assert max_abs(to_unitary(c) - H @ S @ H) < 1e-15
    assert max_abs(T @ T - S) < 1e-15
