"""``qcomp`` command line: simulate, synthesize, approx, revcomp, tm.

Every command prints one JSON report (``schema: 1``) on stdout.  Exit codes:

    0  success / verification passed / machine halted or accepted
    2  bad command line (argparse)
    3  input file missing or malformed
    4  input rejected by validation (e.g. not unitary)
    5  internal verification failed (error above tolerance, table mismatch)
    6  Turing machine ran out of fuel
    7  Turing machine stuck in a non-halting state
    8  nondeterministic machine rejected (no accepting branch)
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import circuit as circ_mod
from . import revclassic, turing
from .circuit import Circuit, CircuitError
from .config import ConfigError, load_config
from .gates import GateError, named_gate
from .linalg import LinalgError
from .qstate import QuantumRegister, StateError, basis_state, sample
from .synth import SynthesisError, approx_search, compile_unitary

SCHEMA = 1
EXIT_OK = 0
EXIT_INPUT = 3
EXIT_INVALID = 4
EXIT_VERIFY = 5
EXIT_FUEL = 6
EXIT_STUCK = 7
EXIT_REJECT = 8


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _num(x: float) -> float | int:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, (bool, np.bool_, int, float, np.integer, np.floating)):
        return _num(obj)
    return obj


def _digest(*parts: bytes | str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode() if isinstance(p, str) else p)
        h.update(b"\0")
    return h.hexdigest()[:16]


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_INPUT) from None


def _write(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror}", EXIT_INPUT) from None


def parse_matrix(text: str) -> np.ndarray:
    """``dim N`` header, then N rows of N ``re im`` pairs."""
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0][0] != "dim" or len(lines[0]) != 2:
        raise CliError("matrix file must start with 'dim N'", EXIT_INPUT)
    try:
        n = int(lines[0][1])
        rows = [[float(v) for v in ln] for ln in lines[1:]]
    except ValueError as e:
        raise CliError(f"bad number in matrix file: {e}", EXIT_INPUT) from None
    if len(rows) != n or any(len(r) != 2 * n for r in rows):
        raise CliError(f"expected {n} rows of {2 * n} numbers", EXIT_INPUT)
    a = np.array(rows)
    return a[:, 0::2] + 1j * a[:, 1::2]


def format_matrix(m: np.ndarray) -> str:
    lines = [f"dim {m.shape[0]}"]
    for row in m:
        lines.append(" ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ commands


def _basis_change(n: int, basis: str) -> Circuit:
    c = Circuit(n)
    for w in range(1, n + 1):
        if basis == "y":
            c.add("SDG", w)
        if basis in ("x", "y"):
            c.add("H", w)
    return c


def cmd_simulate(args, cfg) -> tuple[dict, int]:
    text = _read(args.circuit)
    c = circ_mod.parse(text, cfg.eps_unitary)
    if args.state:
        state_text = _read(args.state)
        psi = QuantumRegister.load(state_text, c.n_wires)
        digest = _digest("simulate", text, state_text)
    else:
        psi = basis_state(c.n_wires, args.input)
        digest = _digest("simulate", text, str(args.input))
    out = circ_mod.run(c, psi)
    amps = {out.bitstring(i): a for i, a in enumerate(out.amplitudes) if abs(a) > 1e-15}
    metrics: dict[str, Any] = {"n_wires": c.n_wires, "gate_count": len(c), "amplitudes": amps}
    if args.measure:
        rotated = circ_mod.apply(_basis_change(c.n_wires, args.measure), out.amplitudes)
        probs = np.abs(rotated) ** 2
        metrics["basis"] = args.measure
        metrics["probabilities"] = {out.bitstring(i): p for i, p in enumerate(probs) if p > 1e-15}
        rng = cfg.generator(args.seed)
        draws = sample(probs, rng, shots=args.shots)
        counts: dict[str, int] = {}
        for d in draws:
            key = out.bitstring(int(d))
            counts[key] = counts.get(key, 0) + 1
        metrics["shots"] = args.shots
        metrics["counts"] = dict(sorted(counts.items()))
    return {"inputs_digest": digest, "metrics": metrics}, EXIT_OK


def cmd_synthesize(args, cfg) -> tuple[dict, int]:
    text = _read(args.matrix)
    u = parse_matrix(text)
    tol = args.tol if args.tol is not None else cfg.tol
    res = compile_unitary(u, eps=cfg.eps_unitary)
    artifacts = {}
    if args.out:
        _write(args.out, circ_mod.emit(res.circuit))
        artifacts["circuit"] = args.out
    counts = res.circuit.count()
    ok = res.reconstruction_error <= tol and res.circuit.is_elementary()
    metrics = {
        "factor_count": len(res.factors),
        "gate_count": res.gate_count,
        "single_qubit_count": counts["single"],
        "cnot_count": counts["cnot"],
        "error": res.reconstruction_error,
        "tol": tol,
        "verified": ok,
    }
    return {"inputs_digest": _digest("synthesize", text), "metrics": metrics, "artifacts": artifacts}, (
        EXIT_OK if ok else EXIT_VERIFY
    )


def cmd_approx(args, cfg) -> tuple[dict, int]:
    text = _read(args.matrix)
    u = parse_matrix(text)
    if u.shape != (2, 2):
        raise CliError("approx needs a 2x2 matrix", EXIT_INVALID)
    from .linalg import is_unitary

    if not is_unitary(u, cfg.eps_unitary):
        raise CliError("matrix is not unitary", EXIT_INVALID)
    names = [s.strip().upper() for s in args.set.split(",") if s.strip()]
    res = approx_search(u, [named_gate(n) for n in names], args.max_len)
    metrics = {"word": res.word, "length": len(res.letters), "error": res.error, "gate_set": names, "max_len": args.max_len}
    return {"inputs_digest": _digest("approx", text, args.set, str(args.max_len)), "metrics": metrics}, EXIT_OK


def cmd_revcomp(args, cfg) -> tuple[dict, int]:
    text = _read(args.table)
    rows = revclassic.parse_truth_table(text)
    bc = revclassic.synthesize_bool(rows)
    rc = revclassic.to_reversible(bc)
    ok = revclassic.verify_reversible(bc, rc, rows)
    artifacts = {}
    if args.out:
        _write(args.out, circ_mod.emit(revclassic.rev_to_circuit(rc)))
        artifacts["circuit"] = args.out
    metrics = {
        "inputs": bc.n_in,
        "outputs": bc.n_out,
        "nodes": len(bc.nodes),
        "width": rc.width,
        "gate_count": len(rc.steps),
        "gates": rc.count(),
        "layout": {k: [r.start, r.stop - 1] if len(r) else [] for k, r in rc.layout.items()},
        "exhaustive_check": ok,
    }
    return {"inputs_digest": _digest("revcomp", text), "metrics": metrics, "artifacts": artifacts}, (
        EXIT_OK if ok else EXIT_VERIFY
    )


def cmd_tm(args, cfg) -> tuple[dict, int]:
    text = _read(args.program)
    m = turing.parse(text)
    word = "" if args.input in ("-", "") else args.input
    digest = _digest("tm", text, word, args.mode, str(args.fuel))
    metrics: dict[str, Any] = {"mode": args.mode, "fuel": args.fuel}
    if args.mode == "nd":
        rep = turing.run_nondet(m, word, args.fuel)
        metrics.update(
            accepted=rep.accepted,
            depth=rep.depth,
            frontier_sizes=rep.frontier_sizes,
            accepting=[c.description() for c in rep.accepting],
            status="accepted" if rep.accepted else ("fuel_exhausted" if rep.exhausted else "rejected"),
        )
        code = EXIT_OK if rep.accepted else (EXIT_FUEL if rep.exhausted else EXIT_REJECT)
        return {"inputs_digest": digest, "metrics": metrics}, code
    if args.mode == "prob":
        r = turing.run_prob(m, word, args.fuel, cfg.generator(args.seed))
        metrics["path_probability"] = r.probability
        metrics["choices"] = [str(i) for i in r.choices]
    else:
        r = turing.run(m, word, args.fuel)
    metrics.update(
        status=r.status,
        state=r.state,
        steps=r.steps,
        max_cells=r.max_cells,
        tape=r.config.content(),
        configuration=r.config.description(),
        standard_terminal=turing.is_standard_terminal(m, r.config),
    )
    if metrics["standard_terminal"]:
        metrics["output"] = turing.decode_unary(r.config.tape())
    code = {turing.HALTED: EXIT_OK, turing.FUEL_EXHAUSTED: EXIT_FUEL, turing.STUCK: EXIT_STUCK}[r.status]
    return {"inputs_digest": digest, "metrics": metrics}, code


# -------------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcomp", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--config", help="key=value file naming the RNG and tolerances")
    p.add_argument("--report", help="also write the JSON report to this path")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a circuit file on a basis state or state file")
    s.add_argument("circuit")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--input", type=int, default=0, help="basis index of the input state")
    g.add_argument("--state", help="state file with 'index bitstring re im' lines")
    s.add_argument("--measure", choices=("z", "x", "y"))
    s.add_argument("--shots", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("synthesize", help="compile a unitary to single-qubit gates and CNOTs")
    s.add_argument("matrix")
    s.add_argument("--tol", type=float)
    s.add_argument("--out", help="write the circuit here")
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("approx", help="best short word over a discrete gate set")
    s.add_argument("matrix")
    s.add_argument("--set", default="H,S,T,SDG,TDG")
    s.add_argument("--max-len", type=int, default=12)
    s.set_defaults(func=cmd_approx)

    s = sub.add_parser("revcomp", help="reversible circuit for a truth table")
    s.add_argument("table")
    s.add_argument("--out", help="write the reversible circuit here")
    s.set_defaults(func=cmd_revcomp)

    s = sub.add_parser("tm", help="Turing machines")
    tsub = s.add_subparsers(dest="tm_command", required=True)
    r = tsub.add_parser("run", help="run a machine description on an input word")
    r.add_argument("program")
    r.add_argument("input", nargs="?", default="")
    r.add_argument("--fuel", type=int, required=True)
    r.add_argument("--mode", choices=("det", "nd", "prob"), default="det")
    r.add_argument("--seed", type=int, dest="tm_seed")
    r.add_argument("--report", choices=("json", "text"), default="json", dest="tm_format")
    r.set_defaults(func=cmd_tm)
    return p


_ERRORS = (
    (CliError, None),
    (ConfigError, EXIT_INPUT),
    (CircuitError, EXIT_INPUT),
    (turing.TMParseError, EXIT_INPUT),
    (revclassic.LogicError, EXIT_INPUT),
    (StateError, EXIT_INPUT),
    (SynthesisError, EXIT_INVALID),
    (GateError, EXIT_INVALID),
    (LinalgError, EXIT_INVALID),
    (turing.TMError, EXIT_INVALID),
)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tm_seed", None) is not None:
        args.seed = args.tm_seed
    report: dict[str, Any] = {"schema": SCHEMA, "command": args.command, "seed": args.seed}
    try:
        cfg = load_config(args.config)
        body, code = args.func(args, cfg)
        report.update(body)
        report["exit_code"] = code
    except Exception as e:
        for cls, default in _ERRORS:
            if isinstance(e, cls):
                code = e.code if isinstance(e, CliError) else default
                break
        else:
            raise
        report["error"] = {"type": type(e).__name__, "message": str(e)}
        report["exit_code"] = code
        print(str(e), file=sys.stderr)
    report = _clean(report)
    if getattr(args, "tm_format", "json") == "text" and "metrics" in report:
        m = report["metrics"]
        line = " ".join(f"{k}={m[k]}" for k in ("status", "steps", "max_cells", "tape", "output") if k in m)
        print(line)
    else:
        print(json.dumps(report, sort_keys=True, ensure_ascii=False))
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
        except OSError as e:
            print(f"cannot write report: {e.strerror}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
