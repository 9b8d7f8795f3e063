"""Independent brute-force oracles the test suite checks the library against.

Everything here is deliberately written with different algorithms than the
library: probabilities by exhaustive path enumeration instead of matrix
recursions, modal truth by naive recursive semantics (and a batched
boolean-algebra variant for big sweeps) instead of the cached bitmask
evaluator.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from whmm.formulas import And, Atom, Box, Diamond, Implies, Not, Or


# --- path enumeration over Markov kernels -----------------------------------

def enumerate_paths(n_states: int, start: int, length: int):
    """All state sequences of ``length`` transitions starting at ``start``."""
    for tail in itertools.product(range(n_states), repeat=length):
        yield (start,) + tail


def path_log_prob(initial, kernel, path) -> float:
    """Left-to-right log sum of initial and transition factors."""
    total = math.log(initial[path[0]]) if initial[path[0]] > 0 else -math.inf
    for a, b in zip(path[:-1], path[1:]):
        p = kernel[a, b]
        total += math.log(p) if p > 0 else -math.inf
    return total


def transitions_log_prob(kernel, path) -> float:
    """Like :func:`path_log_prob` but conditioned on the start state."""
    total = 0.0
    for a, b in zip(path[:-1], path[1:]):
        p = kernel[a, b]
        total += math.log(p) if p > 0 else -math.inf
    return total


def reach_probability_bruteforce(kernel, start: int, targets, horizon: int) -> float:
    """P(hit targets within horizon) by summing raw path probabilities."""
    targets = set(targets)
    if start in targets:
        return 1.0
    n = kernel.shape[0]
    total = 0.0
    for path in enumerate_paths(n, start, horizon):
        prob = 1.0
        for a, b in zip(path[:-1], path[1:]):
            prob *= kernel[a, b]
        if prob > 0 and any(s in targets for s in path):
            total += prob
    return min(1.0, total)


def viterbi_bruteforce_all_ends(kernel, start: int, horizon: int):
    """Best (log-prob, path) per end state over all paths of <= horizon steps."""
    n = kernel.shape[0]
    best: dict[int, tuple[float, tuple[int, ...]]] = {}
    for length in range(horizon + 1):
        for path in enumerate_paths(n, start, length):
            lp = transitions_log_prob(kernel, path)
            if lp == -math.inf:
                continue
            end = path[-1]
            cur = best.get(end)
            if cur is None or lp > cur[0] or (lp == cur[0] and path < cur[1]):
                best[end] = (lp, path)
    return best


def viterbi_bruteforce(kernel, start: int, end: int, horizon: int):
    """Best (log-prob, path) over all paths of <= horizon transitions, or None.

    Ties break toward the lexicographically smallest path, matching the
    library's documented rule; log-probs accumulate left to right so float
    ties coincide exactly with the dynamic program's.
    """
    n = kernel.shape[0]
    best = None
    for length in range(horizon + 1):
        for path in enumerate_paths(n, start, length):
            if path[-1] != end:
                continue
            lp = transitions_log_prob(kernel, path)
            if lp == -math.inf:
                continue
            if best is None or lp > best[0] or (lp == best[0] and path < best[1]):
                best = (lp, path)
    return best


# --- naive modal semantics ---------------------------------------------------

def eval_naive(frame, world: str, formula) -> bool:
    """Textbook recursive truth evaluation over a KripkeFrame."""
    if isinstance(formula, Atom):
        return formula.name in frame.valuation[world]
    if isinstance(formula, Not):
        return not eval_naive(frame, world, formula.operand)
    if isinstance(formula, And):
        return eval_naive(frame, world, formula.left) and eval_naive(frame, world, formula.right)
    if isinstance(formula, Or):
        return eval_naive(frame, world, formula.left) or eval_naive(frame, world, formula.right)
    if isinstance(formula, Implies):
        return (not eval_naive(frame, world, formula.left)) or eval_naive(frame, world, formula.right)
    successors = [b for (a, b) in frame.access if a == world]
    if isinstance(formula, Box):
        return all(eval_naive(frame, w, formula.operand) for w in successors)
    if isinstance(formula, Diamond):
        return any(eval_naive(frame, w, formula.operand) for w in successors)
    raise TypeError(f"not a formula: {formula!r}")


# --- batched modal semantics over all valuations of a relation ---------------

class BatchedSemantics:
    """Direct semantics for one relation, evaluated over many valuations at once.

    ``relation`` is an (n, n) boolean matrix, ``atom_tables`` maps atom names
    to (V, n) boolean arrays (V parallel valuations).  ``denote`` returns a
    (V, n) truth table per formula; results are cached per formula object.
    """

    def __init__(self, relation: np.ndarray, atom_tables: dict[str, np.ndarray], v: int):
        self.relation = relation.astype(np.int8)
        self.atom_tables = atom_tables
        n = relation.shape[0]
        self.false = np.zeros((v, n), dtype=bool)
        self._cache: dict[object, np.ndarray] = {}

    def denote(self, formula) -> np.ndarray:
        hit = self._cache.get(formula)
        if hit is not None:
            return hit
        if isinstance(formula, Atom):
            out = self.atom_tables.get(formula.name, self.false)
        elif isinstance(formula, Not):
            out = ~self.denote(formula.operand)
        elif isinstance(formula, And):
            out = self.denote(formula.left) & self.denote(formula.right)
        elif isinstance(formula, Or):
            out = self.denote(formula.left) | self.denote(formula.right)
        elif isinstance(formula, Implies):
            out = ~self.denote(formula.left) | self.denote(formula.right)
        elif isinstance(formula, Box):
            # world w fails Box(f) iff it has a successor failing f
            failing = (~self.denote(formula.operand)).astype(np.int8) @ self.relation.T
            out = failing == 0
        elif isinstance(formula, Diamond):
            holding = self.denote(formula.operand).astype(np.int8) @ self.relation.T
            out = holding > 0
        else:
            raise TypeError(f"not a formula: {formula!r}")
        self._cache[formula] = out
        return out


def all_formulas(atoms: tuple[str, ...], levels: int) -> list:
    """Every formula over ``atoms`` with at most ``levels`` operator levels.

    Shared subformula objects keep downstream caches effective.
    """
    pool = [Atom(a) for a in atoms]
    for _ in range(levels):
        previous = list(pool)
        new = []
        for f in previous:
            new.extend((Not(f), Box(f), Diamond(f)))
        for f in previous:
            for g in previous:
                new.extend((And(f, g), Or(f, g), Implies(f, g)))
        seen = set(pool)
        for f in new:
            if f not in seen:
                seen.add(f)
                pool.append(f)
    return pool
