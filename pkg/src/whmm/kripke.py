"""Finite Kripke frames and a modal model checker.

Semantics are plain system K: the accessibility relation is arbitrary, Box
quantifies over all successors (vacuously true at dead ends), Diamond over
some successor.  Atoms not declared anywhere in the frame are simply false
at every world rather than an error, so formulas can mix vocabularies.

On top of the checker sit two pattern detectors:

* :func:`detect_ccb` evaluates, at one world, the necessity claim
  ``[](policy -> goal)`` against the hedged reading
  ``![](policy -> goal) & <>(policy -> goal) & <>(policy -> !goal)``
  and reports witness worlds for each possibility conjunct plus a
  counterexample for the failed necessity.
* :func:`classify_universe` sorts a frame into one of four shapes by where
  policy and non-policy worlds lead: the believed chain (policy leads only
  to the goal), its empirical inversion (policy leads only away from the
  goal), the corrected picture (the inverse action leads to the goal while
  the policy leads away), or a mixture.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidFrame, UnknownWorld
from .formulas import And, Atom, Box, Diamond, Formula, Implies, Not, Or


@dataclass(frozen=True)
class KripkeFrame:
    """Worlds in declaration order, an accessibility relation, and a valuation.

    ``valuation`` covers exactly the declared worlds; worlds omitted at
    construction get the empty atom set.  Instances are immutable and safe to
    share.
    """

    worlds: tuple[str, ...]
    access: frozenset[tuple[str, str]]
    valuation: dict[str, frozenset[str]]

    def __init__(self, worlds, access=(), valuation=None):
        worlds = tuple(worlds)
        if len(set(worlds)) != len(worlds):
            raise InvalidFrame("world names must be unique")
        declared = set(worlds)
        access = frozenset((str(a), str(b)) for a, b in access)
        for a, b in access:
            if a not in declared or b not in declared:
                raise InvalidFrame(f"edge ({a!r}, {b!r}) references an undeclared world")
        valuation = dict(valuation or {})
        for w in valuation:
            if w not in declared:
                raise InvalidFrame(f"valuation names undeclared world {w!r}")
        full = {w: frozenset(valuation.get(w, ())) for w in worlds}
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "access", access)
        object.__setattr__(self, "valuation", full)

    def successors(self, world: str) -> tuple[str, ...]:
        """R-successors of a world, in world declaration order."""
        if world not in self.valuation:
            raise UnknownWorld(f"unknown world {world!r}")
        return tuple(w for w in self.worlds if (world, w) in self.access)

    def atoms(self) -> frozenset[str]:
        out: set[str] = set()
        for atoms in self.valuation.values():
            out |= atoms
        return frozenset(out)


class Evaluator:
    """Model checker for one frame; caches subformula denotations.

    World sets are represented as integer bitmasks over the declaration
    order, which keeps repeated evaluation of structurally shared formulas
    cheap.  The cache makes instances not thread-safe; the stateless
    module-level functions are.
    """

    def __init__(self, frame: KripkeFrame):
        self.frame = frame
        n = len(frame.worlds)
        self._index = {w: i for i, w in enumerate(frame.worlds)}
        self._all = (1 << n) - 1
        succ = [0] * n
        for a, b in frame.access:
            succ[self._index[a]] |= 1 << self._index[b]
        self._succ = succ
        self._atom_masks: dict[str, int] = {}
        for w, atoms in frame.valuation.items():
            bit = 1 << self._index[w]
            for atom in atoms:
                self._atom_masks[atom] = self._atom_masks.get(atom, 0) | bit
        # cache keyed by node identity; _pins keeps cached nodes alive so a
        # recycled id can never alias a dead node's entry
        self._cache: dict[int, int] = {}
        self._pins: list[Formula] = []

    def sat_mask(self, formula: Formula) -> int:
        """Bitmask of worlds satisfying the formula."""
        hit = self._cache.get(id(formula))
        if hit is not None:
            return hit
        kind = type(formula)
        if kind is Atom:
            mask = self._atom_masks.get(formula.name, 0)
        elif kind is Not:
            mask = self._all & ~self.sat_mask(formula.operand)
        elif kind is And:
            mask = self.sat_mask(formula.left) & self.sat_mask(formula.right)
        elif kind is Or:
            mask = self.sat_mask(formula.left) | self.sat_mask(formula.right)
        elif kind is Implies:
            mask = (self._all & ~self.sat_mask(formula.left)) | self.sat_mask(formula.right)
        elif kind is Box:
            inner = self.sat_mask(formula.operand)
            mask = 0
            for i, succ in enumerate(self._succ):
                if succ & ~inner == 0:
                    mask |= 1 << i
        elif kind is Diamond:
            inner = self.sat_mask(formula.operand)
            mask = 0
            for i, succ in enumerate(self._succ):
                if succ & inner:
                    mask |= 1 << i
        else:
            raise TypeError(f"not a formula node: {formula!r}")
        self._cache[id(formula)] = mask
        self._pins.append(formula)
        return mask

    def eval(self, world: str, formula: Formula) -> bool:
        i = self._index.get(world)
        if i is None:
            raise UnknownWorld(f"unknown world {world!r}")
        return bool(self.sat_mask(formula) >> i & 1)

    def sat_worlds(self, formula: Formula) -> tuple[str, ...]:
        mask = self.sat_mask(formula)
        return tuple(w for i, w in enumerate(self.frame.worlds) if mask >> i & 1)


def eval_formula(frame: KripkeFrame, world: str, formula: Formula) -> bool:
    """Truth value of a formula at a world under standard K semantics."""
    return Evaluator(frame).eval(world, formula)


@dataclass(frozen=True)
class CcbVerdict:
    """Outcome of the necessity-versus-possibility audit at one world.

    ``witnesses`` maps the keys ``box_counterexample`` (successor refuting
    the necessity claim), ``possibly_goal`` and ``possibly_not_goal``
    (successors witnessing each possibility conjunct) to world names; a key
    is absent when no such successor exists.
    """

    world: str
    policy_atom: str
    goal_atom: str
    relaxed_claim_holds: bool
    probable_case_holds: bool
    witnesses: dict[str, str]


def detect_ccb(frame: KripkeFrame, world: str, policy_atom: str, goal_atom: str) -> CcbVerdict:
    """Check the necessity claim [](policy -> goal) against the hedged reading.

    The hedged reading is  ![](policy -> goal) & <>(policy -> goal)
    & <>(policy -> !goal), with the goal negated literally.  Witnesses are
    the first matching successors in world declaration order.
    """
    ev = Evaluator(frame)
    claim = Implies(Atom(policy_atom), Atom(goal_atom))
    hedged_bad = Implies(Atom(policy_atom), Not(Atom(goal_atom)))
    relaxed = ev.eval(world, Box(claim))
    probable = (not relaxed
                and ev.eval(world, Diamond(claim))
                and ev.eval(world, Diamond(hedged_bad)))
    witnesses: dict[str, str] = {}
    for succ in frame.successors(world):
        if "box_counterexample" not in witnesses and not ev.eval(succ, claim):
            witnesses["box_counterexample"] = succ
        if "possibly_goal" not in witnesses and ev.eval(succ, claim):
            witnesses["possibly_goal"] = succ
        if "possibly_not_goal" not in witnesses and ev.eval(succ, hedged_bad):
            witnesses["possibly_not_goal"] = succ
    return CcbVerdict(world, policy_atom, goal_atom, relaxed, probable, witnesses)


class Universe(enum.Enum):
    RELAXED = "relaxed"
    EMPIRICAL = "empirical"
    CORRECTED = "corrected"
    MIXED = "mixed"


def classify_universe(frame: KripkeFrame, policy_atom: str, goal_atom: str) -> Universe:
    """Sort a frame by where policy and non-policy worlds lead.

    * RELAXED: every policy world leads only to goal worlds (vacuously so
      when there are no policy worlds -- the belief is unfalsified).
    * CORRECTED: policy worlds lead only to non-goal worlds while some
      non-policy world has successors and every such world leads only to
      goal worlds.  Checked before EMPIRICAL, which it refines.
    * EMPIRICAL: every policy world leads only to non-goal worlds.
    * MIXED: anything else.
    """
    ev = Evaluator(frame)
    goal_mask = ev.sat_mask(Atom(goal_atom))
    policy_mask = ev.sat_mask(Atom(policy_atom))
    succ = ev._succ

    def leads_only_to(member_mask: int, target_mask: int) -> bool:
        return all(succ[i] & ~target_mask == 0
                   for i in range(len(succ)) if member_mask >> i & 1)

    non_policy = ev._all & ~policy_mask
    if leads_only_to(policy_mask, goal_mask):
        return Universe.RELAXED
    policy_inverted = leads_only_to(policy_mask, ev._all & ~goal_mask)
    non_policy_corrects = (leads_only_to(non_policy, goal_mask)
                           and any(succ[i] for i in range(len(succ)) if non_policy >> i & 1))
    if policy_inverted and non_policy_corrects:
        return Universe.CORRECTED
    if policy_inverted:
        return Universe.EMPIRICAL
    return Universe.MIXED


__all__ = [
    "KripkeFrame", "Evaluator", "eval_formula", "CcbVerdict", "detect_ccb",
    "Universe", "classify_universe",
    "Atom", "Not", "And", "Or", "Implies", "Box", "Diamond", "Formula",
]
