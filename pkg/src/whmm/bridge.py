"""Tie the probabilistic and logical layers together.

A :class:`Problem` is a four-policy decision fixture over one weighted
Markov model: ground-truth dynamics with neutral weights, plus a subjective
weight overlay standing in for the participant's somatic bias.  This module
computes per-policy outcome profiles (goal / anti-goal reach probabilities
under both kernels), compiles problems into Kripke frames so the modal
detectors can run on them, and bundles everything into an audit report.

Because the modal layer speaks about one-step accessibility while policies
play out over a horizon, frames come in three flavours:

* :func:`whmm_to_kripke` builds the main frame: state worlds connected
  wherever the true kernel exceeds a threshold, plus one commitment world
  per policy.  A commitment world accesses everything the policy can lead
  to within the horizon, and its policy atom marks the commitment world and
  each of those reachable states, so possibility/necessity claims about a
  policy's outcomes are non-vacuous at its commitment world.
* :func:`policy_subframe` restricts the main frame to one policy's
  commitment world and the one-step successors of its first action: the
  immediate causal chain the universe classifier is meant to read.
* :func:`bounded_unroll` expands the chain into a depth-limited tree with a
  chosen target set absorbing, which lets multi-step reachability be
  cross-checked exactly with nested one-step modalities (see
  :func:`eventually_all_paths` / :func:`eventually_some_path`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import WeightedMarkovModel, reach_probability
from .errors import InvalidProblem
from .formulas import Atom, Box, Diamond, Formula, Or
from .kripke import CcbVerdict, KripkeFrame, detect_ccb

POLICY_LABELS = ("A", "B", "C", "D")

FLAG_CORRECT = "correct"
FLAG_INVERSE = "inverse"
FLAG_ARBITRARY = "arbitrary"

CLASS_GOAL_REACHING = "goal_reaching"
CLASS_GOAL_INVERTING = "goal_inverting"
CLASS_ARBITRARY = "arbitrary"

GOAL_ATOM = "goal"
ANTI_GOAL_ATOM = "anti_goal"


def policy_atom(label: str) -> str:
    """Atom (and commitment-world) name for a policy."""
    return f"policy_{label}"


@dataclass(frozen=True)
class Policy:
    label: str
    text: str
    first_action_state: int
    flag: str

    def __post_init__(self):
        if self.label not in POLICY_LABELS:
            raise InvalidProblem(f"policy label must be one of {POLICY_LABELS}, got {self.label!r}")
        if self.flag not in (FLAG_CORRECT, FLAG_INVERSE, FLAG_ARBITRARY):
            raise InvalidProblem(f"unknown policy flag {self.flag!r}")


@dataclass(frozen=True, eq=False)
class Problem:
    """A decision fixture: one chain, one current state, four labeled policies."""

    problem_id: str
    description: str
    model_true: WeightedMarkovModel
    subjective_weights: np.ndarray
    current: int
    policies: tuple[Policy, ...]
    horizon: int
    model_subjective: WeightedMarkovModel = field(init=False)

    def __post_init__(self):
        model = self.model_true
        if not np.all(model.weights.weights == 1.0):
            raise InvalidProblem("ground-truth model must carry neutral weights")
        if model.initial.probs[self.current] != 1.0:
            raise InvalidProblem("the current state must have initial probability 1")
        if self.horizon < 1:
            raise InvalidProblem("horizon must be >= 1")
        policies = tuple(self.policies)
        object.__setattr__(self, "policies", policies)
        if len(policies) != 4:
            raise InvalidProblem(f"expected exactly 4 policies, got {len(policies)}")
        labels = tuple(p.label for p in policies)
        if labels != POLICY_LABELS:
            raise InvalidProblem(f"policies must be labeled {POLICY_LABELS} in order, got {labels}")
        flags = [p.flag for p in policies]
        if flags.count(FLAG_CORRECT) != 1 or flags.count(FLAG_INVERSE) != 1:
            raise InvalidProblem("need exactly one 'correct' and one 'inverse' policy")
        if not model.states.goal_states:
            raise InvalidProblem("the model declares no goal states")
        a = model.transitions.entries
        for p in policies:
            if not 0 <= p.first_action_state < model.n:
                raise InvalidProblem(f"policy {p.label} enters unknown state {p.first_action_state}")
            if a[self.current, p.first_action_state] <= 0.0:
                raise InvalidProblem(
                    f"policy {p.label} is not reachable in one step from the current state")
        subj = np.asarray(self.subjective_weights, dtype=float)
        object.__setattr__(self, "subjective_weights", subj)
        object.__setattr__(self, "model_subjective", model.with_weights(subj))

    def policy(self, label: str) -> Policy:
        for p in self.policies:
            if p.label == label:
                return p
        raise InvalidProblem(f"problem has no policy {label!r}")

    @property
    def inverse_label(self) -> str:
        return next(p.label for p in self.policies if p.flag == FLAG_INVERSE)

    @property
    def correct_label(self) -> str:
        return next(p.label for p in self.policies if p.flag == FLAG_CORRECT)


@dataclass(frozen=True)
class OutcomeProfile:
    policy: str
    p_goal_true: float
    p_antigoal_true: float
    p_goal_subjective: float
    p_antigoal_subjective: float
    baseline: float
    classification: str

    def as_dict(self) -> dict:
        return {
            "policy": self.policy,
            "p_goal_true": self.p_goal_true,
            "p_antigoal_true": self.p_antigoal_true,
            "p_goal_subjective": self.p_goal_subjective,
            "p_antigoal_subjective": self.p_antigoal_subjective,
            "baseline": self.baseline,
            "classification": self.classification,
        }


def _reach_pair(model: WeightedMarkovModel, start: int, horizon: int,
                subjective: bool) -> tuple[float, float]:
    goal = model.states.goal_states
    anti = model.states.anti_goal_states
    p_goal = reach_probability(model, start, goal, horizon, subjective=subjective) if goal else 0.0
    p_anti = reach_probability(model, start, anti, horizon, subjective=subjective) if anti else 0.0
    return p_goal, p_anti


def outcome_profiles(problem: Problem) -> dict[str, OutcomeProfile]:
    """Profiles for all four policies; the baseline is their mean true goal reach.

    A policy is classified goal_inverting when its true anti-goal reach
    exceeds its true goal reach and the goal reach falls below the
    uniform-random-policy baseline; goal_reaching is the mirror image; all
    remaining policies are arbitrary.
    """
    true_pairs = {}
    subj_pairs = {}
    for p in problem.policies:
        true_pairs[p.label] = _reach_pair(problem.model_true, p.first_action_state,
                                          problem.horizon, subjective=False)
        subj_pairs[p.label] = _reach_pair(problem.model_subjective, p.first_action_state,
                                          problem.horizon, subjective=True)
    baseline = sum(pg for pg, _ in true_pairs.values()) / len(true_pairs)
    out = {}
    for p in problem.policies:
        pg, pa = true_pairs[p.label]
        sg, sa = subj_pairs[p.label]
        if pa > pg and pg < baseline:
            cls = CLASS_GOAL_INVERTING
        elif pg > pa and pg > baseline:
            cls = CLASS_GOAL_REACHING
        else:
            cls = CLASS_ARBITRARY
        out[p.label] = OutcomeProfile(p.label, pg, pa, sg, sa, baseline, cls)
    return out


def outcome_profile(problem: Problem, label: str) -> OutcomeProfile:
    """Profile for one policy (the baseline still averages over all four)."""
    problem.policy(label)
    return outcome_profiles(problem)[label]


def _reachable_within(kernel: np.ndarray, start: int, horizon: int, theta: float) -> list[int]:
    """States reachable from ``start`` within ``horizon`` steps along >theta edges."""
    n = kernel.shape[0]
    frontier = {start}
    seen = {start}
    for _ in range(horizon):
        nxt = set()
        for i in frontier:
            for j in range(n):
                if kernel[i, j] > theta and j not in seen:
                    nxt.add(j)
        if not nxt:
            break
        seen |= nxt
        frontier = nxt
    return sorted(seen)


def whmm_to_kripke(problem: Problem, theta: float = 0.0) -> KripkeFrame:
    """Compile a problem into its possibility frame over the true kernel.

    Worlds are the model states (named by label) followed by one commitment
    world per policy.  State worlds are connected wherever the true kernel
    exceeds ``theta``; the current state accesses every commitment world; a
    commitment world accesses each state its policy can reach within the
    horizon (including the first action state itself).  Valuation: a state
    world carries its own label, a goal or anti-goal marker per its role,
    and the atom of every policy under which it is reachable; commitment
    worlds carry their policy atom.  Deterministic for fixed input.
    """
    if not 0.0 <= theta < 1.0:
        raise InvalidProblem(f"theta must lie in [0, 1), got {theta}")
    model = problem.model_true
    kernel = model.kernel(subjective=False)
    labels = model.states.labels
    commit = {p.label: policy_atom(p.label) for p in problem.policies}
    worlds = list(labels) + [commit[p.label] for p in problem.policies]

    edges = set()
    n = model.n
    for i in range(n):
        for j in range(n):
            if kernel[i, j] > theta:
                edges.add((labels[i], labels[j]))

    valuation: dict[str, set[str]] = {w: set() for w in worlds}
    for i, label in enumerate(labels):
        valuation[label].add(label)
        role = model.states.roles[i]
        if role == "goal":
            valuation[label].add(GOAL_ATOM)
        elif role == "anti_goal":
            valuation[label].add(ANTI_GOAL_ATOM)
    for p in problem.policies:
        w_commit = commit[p.label]
        valuation[w_commit].add(w_commit)
        edges.add((labels[problem.current], w_commit))
        for i in _reachable_within(kernel, p.first_action_state, problem.horizon, theta):
            edges.add((w_commit, labels[i]))
            valuation[labels[i]].add(w_commit)
    return KripkeFrame(worlds, edges, valuation)


def policy_subframe(problem: Problem, label: str, theta: float = 0.0) -> KripkeFrame:
    """One policy's immediate causal chain: commitment world plus the one-step
    successors of its first action, with the main frame's edges and valuation
    restricted to those worlds."""
    p = problem.policy(label)
    frame = whmm_to_kripke(problem, theta)
    model = problem.model_true
    kernel = model.kernel(subjective=False)
    labels = model.states.labels
    keep = {labels[j] for j in range(model.n) if kernel[p.first_action_state, j] > theta}
    keep.add(policy_atom(label))
    worlds = [w for w in frame.worlds if w in keep]
    edges = {(a, b) for a, b in frame.access if a in keep and b in keep}
    valuation = {w: frame.valuation[w] for w in worlds}
    return KripkeFrame(worlds, edges, valuation)


def bounded_unroll(model: WeightedMarkovModel, start: int, targets, horizon: int,
                   theta: float = 0.0, subjective: bool = False) -> tuple[KripkeFrame, str]:
    """Depth-limited unrolling of the chain with ``targets`` absorbing.

    Worlds are (state, step) pairs named ``label@t``.  Non-target worlds at
    step t < horizon access the >theta successors at step t+1; target worlds
    absorb (each accesses its copy one step on, and itself at the final
    step).  Returns the frame and the root world name.  Goal and anti-goal
    atoms mark state roles as in :func:`whmm_to_kripke`.
    """
    target_set = {int(t) for t in targets}
    kernel = model.kernel(subjective)
    labels = model.states.labels

    def name(s: int, t: int) -> str:
        return f"{labels[s]}@{t}"

    worlds: list[str] = []
    valuation: dict[str, set[str]] = {}
    edges: set[tuple[str, str]] = set()

    def declare(s: int, t: int):
        w = name(s, t)
        worlds.append(w)
        marks = {labels[s]}
        if model.states.roles[s] == "goal":
            marks.add(GOAL_ATOM)
        elif model.states.roles[s] == "anti_goal":
            marks.add(ANTI_GOAL_ATOM)
        valuation[w] = marks

    declare(start, 0)
    frontier = {start}
    known: set[tuple[int, int]] = {(start, 0)}
    for t in range(horizon):
        nxt: set[int] = set()
        for s in sorted(frontier):
            if s in target_set:
                edges.add((name(s, t), name(s, t + 1)))
                nxt.add(s)
                continue
            for j in range(model.n):
                if kernel[s, j] > theta:
                    edges.add((name(s, t), name(j, t + 1)))
                    nxt.add(j)
        for s in sorted(nxt):
            if (s, t + 1) not in known:
                known.add((s, t + 1))
                declare(s, t + 1)
        frontier = nxt
    for s in sorted(frontier):
        if s in target_set:
            edges.add((name(s, horizon), name(s, horizon)))
    return KripkeFrame(worlds, edges, valuation), name(start, 0)


def eventually_all_paths(atom: str, depth: int) -> Formula:
    """Nested formula: every path reaches ``atom`` within ``depth`` steps."""
    node: Formula = Atom(atom)
    for _ in range(depth):
        node = Or(Atom(atom), Box(node))
    return node


def eventually_some_path(atom: str, depth: int) -> Formula:
    """Nested formula: some path reaches ``atom`` within ``depth`` steps."""
    node: Formula = Atom(atom)
    for _ in range(depth):
        node = Or(Atom(atom), Diamond(node))
    return node


@dataclass(frozen=True)
class PolicyReport:
    policy: str
    text: str
    flag: str
    profile: OutcomeProfile
    verdict: CcbVerdict


@dataclass(frozen=True)
class AuditReport:
    """Per-policy verdicts and profiles plus the top-level footprint flag.

    ``ccb_footprint`` is true when the policy a biased agent would pick (the
    subjective goal-reach argmax) is classified goal_inverting.  When several
    policies tie for the argmax, ``tie`` is set and the footprint is true
    only if every tied policy inverts the goal.
    """

    problem_id: str
    theta: float
    policies: tuple[PolicyReport, ...]
    ccb_footprint: bool
    subjective_argmax: tuple[str, ...]
    tie: bool

    def as_dict(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "theta": self.theta,
            "ccb_footprint": self.ccb_footprint,
            "subjective_argmax": list(self.subjective_argmax),
            "tie": self.tie,
            "policies": [
                {
                    "policy": r.policy,
                    "text": r.text,
                    "flag": r.flag,
                    "profile": r.profile.as_dict(),
                    "verdict": {
                        "world": r.verdict.world,
                        "relaxed_claim_holds": r.verdict.relaxed_claim_holds,
                        "probable_case_holds": r.verdict.probable_case_holds,
                        "witnesses": dict(r.verdict.witnesses),
                    },
                }
                for r in self.policies
            ],
        }


def ccb_audit(problem: Problem, theta: float = 0.0) -> AuditReport:
    """Full audit: frame, per-policy verdict at the commitment world, profiles."""
    frame = whmm_to_kripke(problem, theta)
    profiles = outcome_profiles(problem)
    reports = []
    for p in problem.policies:
        verdict = detect_ccb(frame, policy_atom(p.label), policy_atom(p.label), GOAL_ATOM)
        reports.append(PolicyReport(p.label, p.text, p.flag, profiles[p.label], verdict))
    top = max(r.profile.p_goal_subjective for r in reports)
    argmax = tuple(r.policy for r in reports if r.profile.p_goal_subjective == top)
    tie = len(argmax) > 1
    footprint = all(profiles[lbl].classification == CLASS_GOAL_INVERTING for lbl in argmax)
    return AuditReport(problem.problem_id, theta, tuple(reports), footprint, argmax, tie)
