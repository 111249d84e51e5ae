"""Acceptance criteria 1-12.

Each criterion runs under a wall-clock budget; the module prints one
PASS/FAIL line per criterion with its elapsed time once all have run.
Also runnable directly: ``python3 tests/test_acceptance.py``.
"""
import itertools
import math
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import (  # noqa: E402
    all_bits,
    circuit_matrix,
    embed,
    fired_target_product,
    haar_unitary,
    random_state,
    random_table,
    spectral_norm,
)
from qcomp import turing  # noqa: E402
from qcomp.circuit import Circuit, apply, to_unitary  # noqa: E402
from qcomp.gates import (  # noqa: E402
    SWAP,
    H,
    S,
    T,
    X,
    Y,
    Z,
    barenco_gate,
    cnot_matrix,
    controlled,
    phase_e,
    phase_p,
    rotation,
    toffoli_matrix,
)
from qcomp.qstate import QuantumRegister, basis_projectors, basis_state, measure_povm, measure_projective  # noqa: E402
from qcomp.revclassic import (  # noqa: E402
    RevCircuit,
    eval_reversible,
    index_bits,
    synthesize_bool,
    to_reversible,
    verify_reversible,
)
from qcomp.synth import (  # noqa: E402
    STANDARD_SET,
    TwoLevelFactor,
    abc_decompose,
    approx_search,
    compile_unitary,
    controlled_u_circuit,
    error_metric,
    gate_count_bound,
    gray_route,
    is_primitive,
    lambda2_circuit,
    two_level_factorize,
)

BUDGET = {1: 0.001, 2: 1, 3: 2, 4: 5, 5: 10, 6: 60, 7: 5, 8: 2, 9: 60, 10: 30, 11: 60, 12: 5}
RESULTS: dict[int, tuple[bool, float, str]] = {}
I2, I4 = np.eye(2), np.eye(4)


def close(a, b, tol):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol


def lam(u, m):
    return embed(u, m + 1, (m + 1,), tuple(range(1, m + 1)))


def elementary_step(s):
    if len(s.targets) != 1:
        return False
    if not s.controls:
        return True
    return len(s.controls) == 1 and s.gate.name == "X" and s.pattern.conditions == (1,)


# ---------------------------------------------------------------- criteria


def criterion_1(rng):
    c = Circuit(2).add("X", 2, [1])
    v = np.array([0, 1, 0, 1])
    apply(c, v)
    elapsed = []
    for _ in range(20):
        t0 = time.perf_counter()
        out = apply(c, v)
        elapsed.append(time.perf_counter() - t0)
    assert np.all(out.imag == 0)
    ints = out.real.astype(np.int64)
    assert np.array_equal(ints, out.real) and ints.tolist() == [0, 1, 1, 0]
    return min(elapsed), "CNOT (|0>+|1>)|1> -> |01>+|10> exact"


def criterion_2(rng):
    tol = 1e-12
    cx, tof = cnot_matrix(), toffoli_matrix()
    assert close(H @ X @ H, Z, tol) and close(H @ Z @ H, X, tol) and close(H @ Y @ H, -Y, tol)
    assert close(cx @ cx, I4, tol) and close(tof @ tof, np.eye(8), tol)
    for a in rng.uniform(-np.pi, np.pi, 20):
        assert close(controlled(phase_p(a).matrix, 1).matrix, np.kron(phase_e(a).matrix, I2), tol)
    for th in rng.uniform(-2 * np.pi, 2 * np.pi, 100):
        assert close(X @ rotation("x", th).matrix @ X, rotation("x", th).matrix, tol)
        assert close(X @ rotation("y", th).matrix @ X, rotation("y", -th).matrix, tol)
        assert close(X @ rotation("z", th).matrix @ X, rotation("z", -th).matrix, tol)
    return None, "gate identities within 1e-12"


def criterion_3(rng):
    for _ in range(100):
        u = haar_unitary(2, rng)
        d = abc_decompose(u)
        assert close(d.a @ d.b @ d.c, I2, 1e-10)
        assert close(np.exp(1j * d.alpha) * d.a @ X @ d.b @ X @ d.c, u, 1e-10)
        c = controlled_u_circuit(u)
        assert len(c) == 6 and all(elementary_step(s) for s in c.steps)
        assert close(circuit_matrix(c), lam(u, 1), 1e-9)
    return None, "100 random U: ABC identities, 6-step controlled-U"


def criterion_4(rng):
    assert close(to_unitary(lambda2_circuit(X)), toffoli_matrix(), 1e-10)
    for _ in range(100):
        u = haar_unitary(2, rng)
        c = lambda2_circuit(u)
        assert close(circuit_matrix(c), lam(u, 2), 1e-10)
        v = c.steps[0].gate.matrix
        vd = v.conj().T
        assert close(fired_target_product(c, 0, 0), I2, 1e-10)
        assert close(fired_target_product(c, 1, 0), v @ vd, 1e-10)
        assert close(fired_target_product(c, 0, 1), vd @ v, 1e-10)
        assert close(fired_target_product(c, 1, 1), v @ v, 1e-10)
        assert close(v @ v, u, 1e-10)
    return None, "100 random U, Toffoli case, four control cases"


def _two_level_product(factors, dim):
    out = np.eye(dim, dtype=complex)
    for f in factors:
        g = np.eye(dim, dtype=complex)
        g[f.p, f.p], g[f.p, f.q], g[f.q, f.p], g[f.q, f.q] = f.block.ravel()
        out = out @ g
    return out


def _is_two_level(f, dim):
    g = np.eye(dim, dtype=complex)
    g[np.ix_([f.p, f.q], [f.p, f.q])] = f.block
    return close(g.conj().T @ g, np.eye(dim), 1e-10)


def criterion_5(rng):
    for i in range(200):
        dim = (2, 4, 8)[i % 3]
        u = haar_unitary(dim, rng)
        fs = two_level_factorize(u)
        assert len(fs) <= dim * (dim - 1) // 2
        assert all(_is_two_level(f, dim) for f in fs)
        assert close(_two_level_product(fs, dim), u, 1e-10)
    for dim in (2, 4, 8):
        for _ in range(10):
            d = np.diag(np.exp(1j * rng.uniform(-np.pi, np.pi, dim)))
            fs = two_level_factorize(d)
            nontrivial = [f for f in fs if not close(f.block, I2, 1e-12)]
            assert len(nontrivial) <= dim - 1
            assert close(_two_level_product(fs, dim), d, 1e-10)
    return None, "200 random U(N), N in {2,4,8}; diagonal inputs"


def criterion_6(rng):
    for i in range(50):
        n = (1, 2, 3)[i % 3]
        u = haar_unitary(2**n, rng)
        res = compile_unitary(u)
        assert all(elementary_step(s) for s in res.circuit.steps)
        assert spectral_norm(u - circuit_matrix(res.circuit)) <= 1e-8
        assert error_metric(u, to_unitary(res.circuit)) <= 1e-8
    # s = 001, t = 110 two-level example on three qubits
    a, b, c, d = haar_unitary(2, rng).ravel()
    want = np.eye(8, dtype=complex)
    want[1, 1], want[1, 6], want[6, 1], want[6, 6] = a, b, c, d
    f = TwoLevelFactor(1, 6, np.array([[a, b], [c, d]]))
    for path in ([1, 0, 2, 6], None):
        assert close(circuit_matrix(gray_route(f, 3, path)), want, 1e-12)
    fits = []
    for n in (1, 2, 3, 4):
        raw = compile_unitary(haar_unitary(2**n, rng), merge=False)
        assert len(raw.circuit) <= gate_count_bound(n)
        fits.append(f"n={n}:{len(raw.circuit)}<={gate_count_bound(n)}")
    return None, "50 compiles, Gray example; counts " + " ".join(fits)


def criterion_7(rng):
    def rand():
        return haar_unitary(2, rng)

    for _ in range(100):
        u1, u2, v1, v2 = rand(), rand(), rand(), rand()
        e = error_metric
        assert e(u1, u1) <= 1e-12
        assert abs(e(u1, v1) - e(v1, u1)) <= 1e-12
        assert e(u1, v2) <= e(u1, v1) + e(v1, v2) + 1e-12
        assert abs(e(u1, v1) - spectral_norm(u1 - v1)) <= 1e-12
        assert e(u2 @ u1, v2 @ v1) <= e(u1, v1) + e(u2, v2) + 1e-12
    for phi in np.linspace(-2 * np.pi, 2 * np.pi, 50):
        assert abs(error_metric(I2, np.exp(1j * phi) * I2) - 2 * abs(math.sin(phi / 2))) <= 1e-12
    return None, "axioms, subadditivity on 100 quadruples, phase case on 50 phi"


def _witness_ok(res, v):
    a, b = res.witness_input
    out = v @ np.kron(a, b)
    return np.linalg.svd(out.reshape(2, 2), compute_uv=False)[1] > 1e-6


def criterion_8(rng):
    for v in (cnot_matrix(), barenco_gate(0.3, 0.7, 1.1).matrix):
        res = is_primitive(v)
        assert not res.primitive and _witness_ok(res, v)
    assert is_primitive(np.kron(H, T)).primitive
    assert is_primitive(SWAP).primitive
    for _ in range(100):
        v = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
        assert is_primitive(v).primitive
    return None, "CNOT/Barenco imprimitive with witness; H(x)T, SWAP, 100 S(x)T primitive"


def criterion_9(rng):
    r = approx_search(S, ["T"], 4)
    assert r.word == "TT" and r.error < 1e-12
    for _ in range(20):
        t = haar_unitary(2, rng)
        errs = [approx_search(t, STANDARD_SET, k).error for k in (4, 8, 12)]
        assert errs[0] >= errs[1] >= errs[2]
    good = sum(approx_search(haar_unitary(2, rng), STANDARD_SET, 12).error <= 0.2 for _ in range(100))
    assert good >= 90
    return None, f"T^2=S exact, monotone on 20 targets; calibration (not a claim): {good}/100 within 0.2 at length 12"


def criterion_10(rng):
    checked = 0
    for i in range(20):
        k = 1 + i % 6
        l = 1 + int(rng.integers(0, 3))
        table = random_table(k, l, rng)
        bc = synthesize_bool(table)
        rc = to_reversible(bc)
        lay = rc.layout
        for x_index, y in itertools.product(range(2**k), ((0,) * l, (1,) * l)):
            x = index_bits(x_index, k)
            state = [0] * rc.width
            for w, bit in zip(lay["x"], x):
                state[w - 1] = bit
            for w, bit in zip(lay["y"], y):
                state[w - 1] = bit
            out = eval_reversible(rc, state)
            assert [out[w - 1] for w in lay["x"]] == list(x)
            assert all(out[w - 1] == 0 for w in list(lay["ancilla"]) + list(lay["copy"]))
            assert tuple(out[w - 1] for w in lay["y"]) == tuple(a ^ b for a, b in zip(y, table[x_index]))
            checked += 1
        assert verify_reversible(bc, rc, table)
    tof = RevCircuit(3).add("TOFFOLI", 1, 2, 3)
    nand = [((x, y, 1), (x, y, 1 - (x & y))) for x, y in all_bits(2)]
    fanout = [((1, y, 0), (1, y, y)) for y in (0, 1)]
    assert all(eval_reversible(tof, a) == b for a, b in nand + fanout)
    return None, f"20 tables k<=6, {checked} input cases; NAND/FANOUT tables"


def criterion_11(rng):
    succ = turing.load_corpus("successor")
    r = turing.run(succ, "111", 100, trace=True)
    assert (r.status, r.steps, r.max_cells, r.config.content()) == (turing.HALTED, 3, 3, "1111")
    assert [c.description() for c in r.trace] == ["_[q1]111_", "[q2]_111_", "[q3]_1111_", "_[qh]1111_"]
    add = turing.load_corpus("addition")
    for a, b in itertools.product(range(9), repeat=2):
        assert turing.output(add, turing.run(add, turing.encode_unary((a, b)), 1000)) == a + b
    parity = turing.load_corpus("parity")
    words = ["".join(w) for n in range(11) for w in itertools.product("01", repeat=n)]
    for w in words:
        assert turing.decide(parity, w, 100) == ("yes" if w.count("1") % 2 == 0 else "no")
    nd, det = turing.load_corpus("contains11_nd"), turing.load_corpus("contains11")
    for w in (w for w in words if len(w) <= 6):
        assert turing.run_nondet(nd, w, 20).accepted == (turing.decide(det, w, 20) == "yes") == ("11" in w)
    coin = turing.load_corpus("coin")
    ones = sum(turing.run_prob(coin, "", 5, np.random.default_rng(s)).config.content() == "1" for s in range(10_000))
    assert abs(ones / 10_000 - 0.5) < 0.02
    return None, f"corpus machines, {len(words)} parity words, coin frequency {ones / 10_000:.4f}"


def _random_basis(dim, rng):
    q = haar_unitary(dim, rng)
    return [np.outer(q[:, i], q[:, i].conj()) for i in range(dim)]


def criterion_12(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        psi = QuantumRegister(n, random_state(2**n, rng))
        outs = measure_projective(psi, _random_basis(2**n, rng))
        assert abs(sum(o.probability for o in outs) - 1) <= 1e-12
    p = [o.probability for o in measure_projective(basis_state(1, 0), basis_projectors(1, "x"))]
    assert close(p, [0.5, 0.5], 1e-12)
    for _ in range(100):
        n = int(rng.integers(1, 4))
        psi = QuantumRegister(n, random_state(2**n, rng))
        ps = _random_basis(2**n, rng)
        assert close(measure_povm(psi, ps), [o.probability for o in measure_projective(psi, ps)], 1e-12)
    return None, "1000 normalisations, |0> in +/- basis, 100 POVM=projective"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_criterion(i):
    rng = np.random.default_rng(1000 + i)
    t0 = time.perf_counter()
    try:
        timed, note = CRITERIA[i](rng)
        ok = True
    except AssertionError as e:
        timed, note, ok = None, f"assertion failed: {e}", False
    elapsed = time.perf_counter() - t0 if timed is None else timed
    if ok and elapsed > BUDGET[i]:
        ok, note = False, f"over budget {BUDGET[i]}s; {note}"
    RESULTS[i] = (ok, elapsed, note)
    return ok, elapsed, note


def summary_lines():
    return [
        f"{'PASS' if ok else 'FAIL'} criterion {i:2d}  {t * 1000:10.3f} ms  {note}"
        for i, (ok, t, note) in sorted(RESULTS.items())
    ]


@pytest.fixture(scope="module", autouse=True)
def _print_summary(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None and RESULTS:
        reporter.write_line("")
        for line in summary_lines():
            reporter.write_line(line)


@pytest.mark.parametrize("i", range(1, 13))
def test_criterion(i):
    ok, elapsed, note = run_criterion(i)
    assert ok, note


if __name__ == "__main__":
    for i in CRITERIA:
        run_criterion(i)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
