"""Breadth-first search for the best short word over a discrete gate set."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..gates import GateSpec, named_gate
from .metrics import phase_invariant_error_2x2
from .single import SynthesisError

DEFAULT_MAX_LEN = 14
STANDARD_SET = ("H", "S", "T", "SDG", "TDG")
_KEY_DIGITS = 9


@dataclass(frozen=True)
class Approximation:
    word: str
    letters: tuple[str, ...]
    matrix: np.ndarray
    error: float


def _phase_key(m: np.ndarray) -> bytes:
    # canonical representative of the ray {e^{i phi} m}
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    w = (m / np.sqrt(det)).ravel()
    k = int(np.argmax(np.abs(w) > 1e-6))
    if w[k].real < -1e-9 or (abs(w[k].real) <= 1e-9 and w[k].imag < 0):
        w = -w
    r = np.round(w, _KEY_DIGITS) + 0.0  # folds -0.0 into 0.0
    return r.tobytes()


@lru_cache(maxsize=8)
def _enumerate(names: tuple[str, ...], mats: tuple[bytes, ...], max_len: int):
    """All distinct rays reachable with words of length <= max_len.

    Returned in (length, lexicographic word) order so that the first hit of
    any minimum is the shortest, lexicographically smallest word.
    """
    gates = [np.frombuffer(b, dtype=complex).reshape(2, 2) for b in mats]
    order = sorted(range(len(names)), key=lambda i: names[i])
    words: list[tuple[int, ...]] = [()]
    stack = [np.eye(2, dtype=complex)]
    seen = {_phase_key(stack[0])}
    frontier = [0]
    for _ in range(max_len):
        nxt = []
        for idx in frontier:
            m = stack[idx]
            for g in order:
                p = m @ gates[g]
                key = _phase_key(p)
                if key in seen:
                    continue
                seen.add(key)
                words.append(words[idx] + (g,))
                stack.append(p)
                nxt.append(len(stack) - 1)
        if not nxt:
            break
        frontier = nxt
    return words, np.array(stack)


def approx_search(target, gate_set: Sequence[GateSpec | str] = STANDARD_SET, max_len: int = 12) -> Approximation:
    """Word w = g1 g2 ... gk (matrix g1 @ g2 @ ... @ gk) nearest to ``target``.

    Distance is the error metric minimized over a global phase.  Words are
    enumerated breadth first and words reaching an already seen ray are
    pruned, so the best error never increases with ``max_len``.
    """
    if not gate_set:
        raise SynthesisError("empty gate set")
    if max_len < 0:
        raise SynthesisError("max_len must be non-negative")
    specs = [named_gate(g) if isinstance(g, str) else g for g in gate_set]
    names = tuple(g.name for g in specs)
    mats = tuple(np.ascontiguousarray(g.matrix, dtype=complex).tobytes() for g in specs)
    words, stack = _enumerate(names, mats, int(max_len))
    target = np.asarray(target, dtype=complex)
    errors = phase_invariant_error_2x2(target, stack)
    best = int(np.argmin(errors))
    letters = tuple(names[i] for i in words[best])
    return Approximation("".join(letters), letters, stack[best], float(errors[best]))
