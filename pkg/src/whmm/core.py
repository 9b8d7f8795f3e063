"""Weighted Markov models: somatic weights modulating transition likelihoods.

A model is an ordinary Markov chain (states Q, row-stochastic transition
matrix A, initial distribution pi) augmented with one positive weight per
state.  The weights act as multiplicative boosters on the columns of A,
renormalized per row, so the "subjective" kernel seen by a biased agent is

    a~[i, j] = A[i, j] * w[j] / sum_k A[i, k] * w[k]

w[j] = 1 is neutral, w[j] > 1 boosts the pull of state j, w[j] < 1 flattens
it.  All inference ops take a ``subjective`` flag selecting between A and a~.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateRow,
    DimensionMismatch,
    EmptyTargetSet,
    HorizonZero,
    InvalidInitial,
    NonPositiveWeight,
    NoPath,
    NotRowStochastic,
    PathStateOutOfRange,
)

ROW_SUM_TOL = 1e-9

ROLE_PLAIN = "plain"
ROLE_GOAL = "goal"
ROLE_ANTI_GOAL = "anti_goal"
_ROLES = (ROLE_PLAIN, ROLE_GOAL, ROLE_ANTI_GOAL)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpace:
    """Ordered state labels with optional goal / anti-goal role tags."""

    labels: tuple[str, ...]
    roles: tuple[str, ...]

    def __init__(self, labels: Sequence[str], roles: Sequence[str] | None = None):
        labels = tuple(labels)
        if not labels:
            raise ValueError("state space needs at least one state")
        if any(not isinstance(s, str) or not s for s in labels):
            raise ValueError("state labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be unique")
        roles = tuple(roles) if roles is not None else tuple(ROLE_PLAIN for _ in labels)
        if len(roles) != len(labels):
            raise DimensionMismatch(f"{len(roles)} roles for {len(labels)} states")
        for r in roles:
            if r not in _ROLES:
                raise ValueError(f"unknown state role {r!r}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "roles", roles)

    def __len__(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown state label {label!r}") from None

    @property
    def goal_states(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r == ROLE_GOAL)

    @property
    def anti_goal_states(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r == ROLE_ANTI_GOAL)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic square matrix; rows are renormalized exactly on entry."""

    entries: np.ndarray

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"transition matrix must be square, got shape {a.shape}")
        for i, row in enumerate(a):
            if np.any(row < 0.0) or np.any(row > 1.0):
                raise NotRowStochastic(i, float(row.sum()),
                                       f"row {i} has an entry outside [0, 1]")
            s = float(row.sum())
            if abs(s - 1.0) > ROW_SUM_TOL:
                raise NotRowStochastic(i, s)
        # snap rows to exact unit mass so downstream products see clean rows
        a = a / a.sum(axis=1, keepdims=True)
        object.__setattr__(self, "entries", _frozen(a))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class InitialDistribution:
    """Probability vector for the first state; zero entries can never start a walk."""

    probs: np.ndarray

    def __init__(self, probs):
        p = np.array(probs, dtype=float)
        if p.ndim != 1:
            raise InvalidInitial(f"initial distribution must be a vector, got shape {p.shape}")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise InvalidInitial("initial probabilities must lie in [0, 1]")
        s = float(p.sum())
        if abs(s - 1.0) > ROW_SUM_TOL:
            raise InvalidInitial(f"initial probabilities sum to {s!r}, expected 1 within 1e-9")
        p = p / s
        object.__setattr__(self, "probs", _frozen(p))

    @property
    def n(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class SomaticWeights:
    """Positive per-state multipliers; 1 neutral, >1 boost, <1 flatten."""

    weights: np.ndarray

    def __init__(self, weights):
        w = np.array(weights, dtype=float)
        if w.ndim != 1:
            raise DimensionMismatch(f"weights must be a vector, got shape {w.shape}")
        for j, value in enumerate(w):
            if not np.isfinite(value) or value <= 0.0:
                raise NonPositiveWeight(j, float(value))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def neutral_weights(n: int) -> SomaticWeights:
    return SomaticWeights(np.ones(n))


@dataclass(frozen=True)
class WeightedMarkovModel:
    """Immutable bundle of states, transitions, initial distribution and weights.

    The weighted (subjective) kernel is computed eagerly at build time so that
    its validity is part of the model invariant and inference never recomputes
    it.  Instances are safe to share across threads.
    """

    states: StateSpace
    transitions: TransitionMatrix
    initial: InitialDistribution
    weights: SomaticWeights
    _weighted: TransitionMatrix = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        n = len(self.states)
        for name, got in (("transitions", self.transitions.n),
                          ("initial", self.initial.n),
                          ("weights", self.weights.n)):
            if got != n:
                raise DimensionMismatch(f"{name} has dimension {got}, state space has {n}")
        object.__setattr__(self, "_weighted", _apply_weights_raw(self.transitions, self.weights))

    @property
    def n(self) -> int:
        return len(self.states)

    def kernel(self, subjective: bool) -> np.ndarray:
        """Transition kernel as an ndarray: a~ when subjective, A otherwise."""
        return self._weighted.entries if subjective else self.transitions.entries

    def with_weights(self, weights) -> "WeightedMarkovModel":
        """Same chain, different somatic overlay."""
        w = weights if isinstance(weights, SomaticWeights) else SomaticWeights(weights)
        return WeightedMarkovModel(self.states, self.transitions, self.initial, w)


@dataclass(frozen=True)
class Trajectory:
    """A realized state path; ``states`` holds indices into the model's state space."""

    states: tuple[int, ...]

    def __init__(self, states: Iterable[int]):
        object.__setattr__(self, "states", tuple(int(s) for s in states))
        if not self.states:
            raise ValueError("a trajectory has at least one state")

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    @property
    def horizon(self) -> int:
        """Number of transitions taken (length minus one)."""
        return len(self.states) - 1


@dataclass(frozen=True)
class ViterbiResult:
    path: Trajectory
    log_prob: float


def build_model(states, transitions, initial, weights=None) -> WeightedMarkovModel:
    """Validate and assemble a weighted Markov model.

    Components may be passed as the wrapper types or as plain sequences;
    ``weights`` defaults to the neutral all-ones vector.  All invariants are
    checked eagerly: dimensions agree, rows are stochastic within 1e-9 (and are
    renormalized exactly), initial probabilities form a distribution, weights
    are positive and finite.
    """
    if not isinstance(states, StateSpace):
        states = StateSpace(states)
    if not isinstance(transitions, TransitionMatrix):
        transitions = TransitionMatrix(transitions)
    if not isinstance(initial, InitialDistribution):
        initial = InitialDistribution(initial)
    if weights is None:
        weights = neutral_weights(len(states))
    elif not isinstance(weights, SomaticWeights):
        weights = SomaticWeights(weights)
    return WeightedMarkovModel(states, transitions, initial, weights)


def _apply_weights_raw(transitions: TransitionMatrix, weights: SomaticWeights) -> TransitionMatrix:
    a = transitions.entries
    boosted = a * weights.weights[np.newaxis, :]
    mass = boosted.sum(axis=1)
    for i, m in enumerate(mass):
        if m <= 0.0:
            raise DegenerateRow(i)
    return TransitionMatrix(np.clip(boosted / mass[:, np.newaxis], 0.0, 1.0))


def apply_weights(model: WeightedMarkovModel) -> TransitionMatrix:
    """The subjective kernel a~[i,j] = A[i,j] w[j] / sum_k A[i,k] w[k].

    Neutral weights return A unchanged (up to one rounding ulp) and scaling
    all weights by a common factor leaves the result unchanged.
    """
    return model._weighted


def _validate_path(model: WeightedMarkovModel, path) -> tuple[int, ...]:
    states = tuple(path.states) if isinstance(path, Trajectory) else tuple(int(s) for s in path)
    if not states:
        raise PathStateOutOfRange("empty path")
    for s in states:
        if not 0 <= s < model.n:
            raise PathStateOutOfRange(f"state index {s} outside [0, {model.n})")
    return states


def forward_likelihood(model: WeightedMarkovModel, path, subjective: bool = False) -> float:
    """Log-probability of a state path under A (or a~ when subjective).

    Returns ``-inf`` for zero-probability paths instead of raising; the only
    error is a state index outside the model.
    """
    states = _validate_path(model, path)
    m = model.kernel(subjective)
    with np.errstate(divide="ignore"):
        total = float(np.log(model.initial.probs[states[0]]))
        for a, b in zip(states[:-1], states[1:]):
            total += float(np.log(m[a, b]))
    return total


def reach_probability(model: WeightedMarkovModel, from_state: int, targets,
                      horizon: int, subjective: bool = False) -> float:
    """Probability of hitting any target state within ``horizon`` steps.

    Computed by repeated vector-kernel products with the target set made
    absorbing, so the result is a first-passage probability and is
    non-decreasing in the horizon.
    """
    target_set = {int(t) for t in targets}
    if not target_set:
        raise EmptyTargetSet("need at least one target state")
    if horizon < 1:
        raise HorizonZero(f"horizon must be >= 1, got {horizon}")
    n = model.n
    for s in target_set | {int(from_state)}:
        if not 0 <= s < n:
            raise PathStateOutOfRange(f"state index {s} outside [0, {n})")
    if from_state in target_set:
        return 1.0
    idx = sorted(target_set)
    kernel = model.kernel(subjective).copy()
    kernel[idx, :] = 0.0
    kernel[idx, idx] = 1.0
    dist = np.zeros(n)
    dist[from_state] = 1.0
    for _ in range(horizon):
        dist = dist @ kernel
    return float(min(1.0, dist[idx].sum()))


def viterbi_decode(model: WeightedMarkovModel, from_state: int, to_state: int,
                   horizon: int, subjective: bool = False) -> ViterbiResult:
    """Most probable path of at most ``horizon`` transitions from one state to another.

    Path probability is the product of transition factors only (the start is
    conditioned on, so a zero-transition path scores probability one when the
    endpoints coincide).  Ties are broken toward the lexicographically smallest
    index sequence.  Raises ``NoPath`` when no positive-probability path exists
    within the horizon.
    """
    if horizon < 1:
        raise HorizonZero(f"horizon must be >= 1, got {horizon}")
    n = model.n
    for s in (from_state, to_state):
        if not 0 <= s < n:
            raise PathStateOutOfRange(f"state index {s} outside [0, {n})")
    m = model.kernel(subjective)
    with np.errstate(divide="ignore"):
        log_m = np.log(m)

    # best[(j)] = (log-prob, path) of the best length-t prefix ending at j;
    # equal-length prefixes make lexicographic comparison compositional.
    best: dict[int, tuple[float, tuple[int, ...]]] = {from_state: (0.0, (from_state,))}
    candidates: list[tuple[float, tuple[int, ...]]] = []
    if from_state == to_state:
        candidates.append(best[from_state])
    for _ in range(horizon):
        nxt: dict[int, tuple[float, tuple[int, ...]]] = {}
        for j, (lp, path) in best.items():
            for k in range(n):
                step = log_m[j, k]
                if step == -np.inf:
                    continue
                cand = (lp + step, path + (k,))
                cur = nxt.get(k)
                if cur is None or cand[0] > cur[0] or (cand[0] == cur[0] and cand[1] < cur[1]):
                    nxt[k] = cand
        best = nxt
        if not best:
            break
        if to_state in best:
            candidates.append(best[to_state])
    if not candidates:
        raise NoPath(f"no positive-probability path from {from_state} to {to_state} "
                     f"within {horizon} steps")
    top = max(lp for lp, _ in candidates)
    winner = min(path for lp, path in candidates if lp == top)
    return ViterbiResult(Trajectory(winner), top)


def sample_trajectory(model: WeightedMarkovModel, horizon: int, seed: int,
                      subjective: bool = False) -> Trajectory:
    """Sample a path of ``horizon`` transitions; deterministic given the seed.

    The first state is drawn from the initial distribution (zero-probability
    states never appear first), each following state from the selected kernel
    row.  Every call owns a private generator, so concurrent sampling is safe.
    """
    if horizon < 1:
        raise HorizonZero(f"horizon must be >= 1, got {horizon}")
    rng = np.random.default_rng(seed)
    m = model.kernel(subjective)
    n = model.n
    state = int(rng.choice(n, p=model.initial.probs))
    states = [state]
    for _ in range(horizon):
        state = int(rng.choice(n, p=m[state]))
        states.append(state)
    return Trajectory(states)
