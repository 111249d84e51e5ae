"""Deterministic, nondeterministic and probabilistic Turing machines.

A program is a list of quintuples ``q S S' q' M``: in state ``q`` scanning
``S``, write ``S'``, enter ``q'`` and move ``M`` (``L`` or ``R``).  The tape
blank ``_`` (also accepted as ``⊔``) marks tape ends; ``#`` separates tuple
entries inside the input.

A configuration is the instantaneous description ``left q right``; the
scanned symbol is ``right[0]``.  Moving past either end of the tape inserts a
blank there.

Program text::

    ; comments start with a semicolon
    states q1 q2 q3
    halting qh
    start q1
    alphabet 1
    q1 1 1 q2 L
    q2 _ 1 q3 L
    q3 _ _ qh R

A sixth column on an instruction gives its probability (``1/2`` or ``0.5``).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

BLANK = "_"
SEPARATOR = "#"
_BLANK_ALIASES = {"_", "⊔"}

HALTED = "halted"
STUCK = "stuck"
FUEL_EXHAUSTED = "fuel_exhausted"


class TMError(ValueError):
    pass


class TMParseError(TMError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _sym(s: str) -> str:
    return BLANK if s in _BLANK_ALIASES else s


@dataclass(frozen=True)
class Instruction:
    state: str
    read: str
    write: str
    next_state: str
    move: str
    weight: float = 1.0

    def __str__(self):
        base = f"{self.state} {self.read} {self.write} {self.next_state} {self.move}"
        return base if self.weight == 1.0 else f"{base} {self.weight!r}"


@dataclass(eq=False)
class TuringMachine:
    states: tuple[str, ...]
    halting: tuple[str, ...]
    start: str
    input_alphabet: tuple[str, ...]
    program: list[Instruction]
    tape_alphabet: tuple[str, ...] = ()
    probabilistic: bool = False
    eps: float = 1e-9

    def __post_init__(self):
        self.states = tuple(self.states)
        self.halting = tuple(self.halting)
        self.input_alphabet = tuple(_sym(s) for s in self.input_alphabet)
        self.program = [
            replace(i, read=_sym(i.read), write=_sym(i.write)) for i in self.program
        ]
        if BLANK in self.input_alphabet:
            raise TMError("the tape blank may not be an input symbol")
        if set(self.states) & set(self.halting):
            raise TMError("machine states and halting states must be disjoint")
        if self.start not in self.states:
            raise TMError(f"start state {self.start!r} is not a machine state")
        gamma = set(self.input_alphabet) | {BLANK, SEPARATOR} | {_sym(s) for s in self.tape_alphabet}
        for ins in self.program:
            gamma |= {ins.read, ins.write}
        self.tape_alphabet = tuple(sorted(gamma))
        known = set(self.states) | set(self.halting)
        for ins in self.program:
            if ins.state in self.halting:
                raise TMError(f"halting state {ins.state} has an outgoing instruction")
            if ins.state not in self.states or ins.next_state not in known:
                raise TMError(f"instruction {ins} uses an undeclared state")
            if ins.move not in ("L", "R"):
                raise TMError(f"instruction {ins} has move {ins.move!r}, expected L or R")
            if not 0.0 <= ins.weight <= 1.0:
                raise TMError(f"instruction {ins} has weight outside [0, 1]")
        self._table: dict[tuple[str, str], list[Instruction]] = defaultdict(list)
        for ins in self.program:
            self._table[(ins.state, ins.read)].append(ins)
        if self.probabilistic:
            for key, group in self._table.items():
                total = sum(i.weight for i in group)
                if abs(total - 1.0) > self.eps:
                    raise TMError(f"weights for {key} sum to {total}, not 1")

    @property
    def deterministic(self) -> bool:
        return all(len(g) == 1 for g in self._table.values())

    def choices(self, state: str, symbol: str) -> list[Instruction]:
        return self._table.get((state, symbol), [])

    def uses_binary_weights(self) -> bool:
        return all(i.weight in (0.0, 0.5, 1.0) for i in self.program)


@dataclass(frozen=True)
class Configuration:
    left: tuple[str, ...]
    right: tuple[str, ...]
    state: str
    steps: int = 0
    head: int = 0
    lo: int = 0
    hi: int = 0

    @property
    def scanned(self) -> str:
        return self.right[0]

    @property
    def max_cells(self) -> int:
        """Number of distinct tape cells scanned so far."""
        return self.hi - self.lo + 1

    def key(self) -> tuple:
        return (self.left, self.state, self.right)

    def description(self) -> str:
        return "".join(self.left) + f"[{self.state}]" + "".join(self.right)

    def tape(self) -> str:
        return "".join(self.left + self.right)

    def content(self) -> str:
        """Tape without the end-marking blanks."""
        return self.tape().strip(BLANK)


def initial_configuration(m: TuringMachine, word: str | Sequence[str]) -> Configuration:
    symbols = tuple(word)
    for s in symbols:
        if s in _BLANK_ALIASES:
            raise TMError("input words may not contain the tape blank")
        if s not in m.input_alphabet and s != SEPARATOR:
            raise TMError(f"symbol {s!r} is not in the input alphabet")
    return Configuration((BLANK,), symbols + (BLANK,), m.start)


def apply(c: Configuration, ins: Instruction) -> Configuration:
    left, right = c.left, c.right
    rest = right[1:]
    if ins.move == "R":
        left = left + (ins.write,)
        right = rest if rest else (BLANK,)  # off the right end: insert blank
        head = c.head + 1
    else:
        if left:
            right = (left[-1], ins.write) + rest
            left = left[:-1]
        else:
            right = (BLANK, ins.write) + rest  # off the left end: insert blank
        head = c.head - 1
    return Configuration(left, right, ins.next_state, c.steps + 1, head, min(c.lo, head), max(c.hi, head))


def step(m: TuringMachine, c: Configuration) -> Configuration | None:
    """One rewrite; None when the configuration is terminal."""
    if c.state in m.halting:
        return None
    options = m.choices(c.state, c.scanned)
    if len(options) > 1:
        raise TMError(f"nondeterministic choice at ({c.state}, {c.scanned}); use run_nondet or run_prob")
    return apply(c, options[0]) if options else None


@dataclass
class RunResult:
    status: str
    config: Configuration
    trace: list[Configuration] | None = None
    probability: float = 1.0
    choices: list[Instruction] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return self.config.steps

    @property
    def max_cells(self) -> int:
        return self.config.max_cells

    @property
    def state(self) -> str:
        return self.config.state


def run(m: TuringMachine, word, fuel: int, trace: bool = False) -> RunResult:
    c = word if isinstance(word, Configuration) else initial_configuration(m, word)
    seen = [c] if trace else None
    while True:
        if c.state in m.halting:
            return RunResult(HALTED, c, seen)
        if not m.choices(c.state, c.scanned):
            return RunResult(STUCK, c, seen)
        if c.steps >= fuel:
            return RunResult(FUEL_EXHAUSTED, c, seen)
        c = step(m, c)
        if seen is not None:
            seen.append(c)


# ------------------------------------------------------------ numeric I/O


def encode_unary(values: int | Iterable[int]) -> str:
    if isinstance(values, int):
        values = (values,)
    vals = list(values)
    if any(v < 0 for v in vals):
        raise TMError("unary encoding needs natural numbers")
    return SEPARATOR.join("1" * (v + 1) for v in vals)


def decode_tuple(tape: str) -> tuple[int, ...]:
    body = "".join(_sym(s) for s in tape).strip(BLANK)
    blocks = body.split(SEPARATOR)
    if not body or any(not b or set(b) != {"1"} for b in blocks):
        raise TMError(f"{tape!r} is not a unary tuple")
    return tuple(len(b) - 1 for b in blocks)


def decode_unary(tape: str, mode: str = "standard") -> int:
    """Read a number off a tape.

    ``standard`` requires a single block of 1s on an otherwise blank tape and
    returns n for the block n+1 ones.  ``lenient`` returns the number of 1s,
    ignoring separators and blanks.
    """
    body = "".join(_sym(s) for s in tape)
    if mode == "lenient":
        return body.count("1")
    if mode != "standard":
        raise TMError(f"unknown decode mode {mode!r}")
    core = body.strip(BLANK)
    if not core or set(core) != {"1"}:
        raise TMError(f"{tape!r} is not a single block of 1s")
    return len(core) - 1


def is_standard_terminal(m: TuringMachine, c: Configuration) -> bool:
    """Halted, scanning the leftmost 1 of a single block of 1s."""
    if c.state not in m.halting:
        return False
    core = c.content()
    return bool(core) and set(core) == {"1"} and c.scanned == "1" and set(c.left) <= {BLANK}


def output(m: TuringMachine, r: RunResult, mode: str = "standard") -> int:
    if r.status != HALTED:
        raise TMError(f"no output: run ended with status {r.status}")
    if mode == "standard" and not is_standard_terminal(m, r.config):
        raise TMError("terminal configuration is not standard")
    return decode_unary(r.config.tape(), mode)


# -------------------------------------------------------------- deciding


YES, NO = "yes", "no"


def decide(m: TuringMachine, word, fuel: int, yes_state: str = "qy", no_state: str = "qn") -> str:
    if set(m.halting) != {yes_state, no_state}:
        raise TMError(f"a decider halts exactly in {yes_state} and {no_state}")
    r = run(m, word, fuel)
    if r.status != HALTED:
        return r.status
    return YES if r.state == yes_state else NO


@dataclass
class NondetReport:
    accepted: bool
    accepting: list[Configuration]
    halted: list[Configuration]
    frontier_sizes: list[int]
    exhausted: bool

    @property
    def depth(self) -> int:
        return len(self.frontier_sizes) - 1


def run_nondet(
    m: TuringMachine,
    word,
    fuel: int,
    accept: Iterable[str] | None = None,
    dedup: bool = False,
) -> NondetReport:
    """Breadth-first traversal of the configuration tree.

    Stops after the first depth at which an accepting configuration appears,
    when the frontier dies out, or after ``fuel`` levels.  ``frontier_sizes[d]``
    counts live configurations at depth d.
    """
    if accept is None:
        accept = {"qy"} if "qy" in m.halting else set(m.halting)
    accept = set(accept)
    c0 = initial_configuration(m, word)
    frontier = [c0]
    sizes = [1]
    halted: list[Configuration] = []
    seen = {c0.key()} if dedup else None
    for depth in range(fuel + 1):
        accepting = [c for c in frontier if c.state in accept]
        nxt = []
        for c in frontier:
            if c.state in m.halting:
                halted.append(c)
                continue
            if depth == fuel:
                continue
            for ins in m.choices(c.state, c.scanned):
                child = apply(c, ins)
                if seen is not None:
                    if child.key() in seen:
                        continue
                    seen.add(child.key())
                nxt.append(child)
        if accepting:
            return NondetReport(True, accepting, halted, sizes, False)
        if depth == fuel:
            if any(c.state not in m.halting and m.choices(c.state, c.scanned) for c in frontier):
                break
            return NondetReport(False, [], halted, sizes, False)
        if not nxt:
            return NondetReport(False, [], halted, sizes, False)
        frontier = nxt
        sizes.append(len(nxt))
    return NondetReport(False, [], halted, sizes, True)


def run_prob(m: TuringMachine, word, fuel: int, rng: np.random.Generator) -> RunResult:
    """Sample one computation path; probability is the product of chosen weights."""
    c = initial_configuration(m, word)
    prob = 1.0
    chosen: list[Instruction] = []
    while True:
        if c.state in m.halting:
            return RunResult(HALTED, c, probability=prob, choices=chosen)
        options = [i for i in m.choices(c.state, c.scanned) if i.weight > 0]
        if not options:
            return RunResult(STUCK, c, probability=prob, choices=chosen)
        if c.steps >= fuel:
            return RunResult(FUEL_EXHAUSTED, c, probability=prob, choices=chosen)
        if len(options) == 1:
            ins = options[0]
        else:
            w = np.array([i.weight for i in options])
            ins = options[int(rng.choice(len(options), p=w / w.sum()))]
        prob *= ins.weight
        chosen.append(ins)
        c = apply(c, ins)


# ------------------------------------------------------------------ text


def _weight(tok: str) -> float:
    return float(Fraction(tok))


def parse(text: str) -> TuringMachine:
    header: dict[str, list[str]] = {}
    program: list[Instruction] = []
    weighted = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in ("states", "halting", "start", "alphabet", "tape"):
            if parts[0] in header:
                raise TMParseError(f"duplicate header {parts[0]!r}", lineno)
            header[parts[0]] = parts[1:]
            continue
        if len(parts) not in (5, 6):
            raise TMParseError(f"expected 'q S S' q' M [weight]', got {line!r}", lineno)
        try:
            w = _weight(parts[5]) if len(parts) == 6 else 1.0
        except (ValueError, ZeroDivisionError):
            raise TMParseError(f"bad weight {parts[5]!r}", lineno) from None
        weighted |= len(parts) == 6
        q, s, s2, q2, mv = parts[:5]
        if mv not in ("L", "R"):
            raise TMParseError(f"move must be L or R, got {mv!r}", lineno)
        program.append(Instruction(q, s, s2, q2, mv, w))
    for h in ("states", "halting", "start", "alphabet"):
        if h not in header:
            raise TMParseError(f"missing header {h!r}")
    if len(header["start"]) != 1:
        raise TMParseError("start names exactly one state")
    try:
        return TuringMachine(
            tuple(header["states"]),
            tuple(header["halting"]),
            header["start"][0],
            tuple(header["alphabet"]),
            program,
            tuple(header.get("tape", ())),
            probabilistic=weighted,
        )
    except TMError as e:
        raise TMParseError(str(e)) from None


def emit(m: TuringMachine) -> str:
    lines = [
        "states " + " ".join(m.states),
        "halting " + " ".join(m.halting),
        "start " + m.start,
        "alphabet " + " ".join(m.input_alphabet),
    ]
    extra = [s for s in m.tape_alphabet if s not in m.input_alphabet and s not in (BLANK, SEPARATOR)]
    if extra:
        lines.append("tape " + " ".join(extra))
    lines += [str(i) for i in m.program]
    return "\n".join(lines) + "\n"


def interpret(description: str, word, fuel: int, mode: str = "det", rng: np.random.Generator | None = None):
    """Parse a machine description and run it on ``word``."""
    m = parse(description)
    if mode == "det":
        return run(m, word, fuel)
    if mode == "nd":
        return run_nondet(m, word, fuel)
    if mode == "prob":
        return run_prob(m, word, fuel, rng if rng is not None else np.random.default_rng(0))
    raise TMError(f"unknown mode {mode!r}")


def load_corpus(name: str) -> TuringMachine:
    from importlib.resources import files

    return parse(files("qcomp.corpus").joinpath(f"{name}.tm").read_text(encoding="utf-8"))


def corpus_names() -> list[str]:
    from importlib.resources import files

    return sorted(p.name[:-3] for p in files("qcomp.corpus").iterdir() if p.name.endswith(".tm"))


def profile(m: TuringMachine, words: Iterable[str], fuel: int) -> list[tuple[int, int, int]]:
    """(input length, steps, cells) for each word, for TIME/SPACE fits."""
    out = []
    for w in words:
        r = run(m, w, fuel)
        out.append((len(w), r.steps, r.max_cells))
    return out


def fits_big_o(points: Sequence[tuple[float, float]], g, c: float, n0: float = 0) -> bool:
    """f(n) <= c g(n) for every sampled n >= n0."""
    return all(f <= c * g(n) + 1e-12 for n, f in points if n >= n0)


def fits_big_omega(points: Sequence[tuple[float, float]], g, c: float, n0: float = 0) -> bool:
    return all(f + 1e-12 >= c * g(n) for n, f in points if n >= n0)


def fits_theta(points, g, c_lo: float, c_hi: float, n0: float = 0) -> bool:
    return fits_big_omega(points, g, c_lo, n0) and fits_big_o(points, g, c_hi, n0)
