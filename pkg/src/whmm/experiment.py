"""Simulated three-phase choice experiment and cohort statistics.

An agent reads a problem, scores each policy by its subjective goal-reach
probability raised to a sharpness exponent, and picks a policy by
probability matching over those scores.  A cohort is n independent agents
answering the same problem; summaries compare the frequency of the
goal-inverting policy against the uniform 0.25 baseline with an exact
two-sided binomial test.

All randomness flows from explicit seeds: agent i in a cohort draws from a
generator seeded by ``SeedSequence(master_seed).spawn(n)[i]``, and simulated
phase timestamps come from the same generator plus a fixed synthetic epoch,
so identical inputs reproduce identical records byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .bridge import POLICY_LABELS, Problem, outcome_profiles
from .core import SomaticWeights
from .errors import EmptyCohort, MixedProblemIds

SOURCE_SIMULATED = "simulated"
SOURCE_HUMAN = "human"

# fixed epoch for synthetic timestamps (keeps cohorts wall-clock free)
_SIM_EPOCH_MS = 1_600_000_000_000
_AGENT_SLOT_MS = 10_000


@dataclass(frozen=True)
class AgentConfig:
    """Simulated participant: somatic overlay plus choice sharpness.

    ``sharpness`` is the exponent applied to subjective goal-reach scores
    before normalization: 1 gives probability matching, large values
    approach argmax choice.
    """

    weights: SomaticWeights | None = None
    sharpness: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sharpness) and self.sharpness > 0):
            raise ValueError(f"sharpness must be positive and finite, got {self.sharpness}")
        if self.weights is not None and not isinstance(self.weights, SomaticWeights):
            object.__setattr__(self, "weights", SomaticWeights(self.weights))


@dataclass(frozen=True)
class ChoiceRecord:
    """One decision event, simulated or human."""

    problem_id: str
    subject_id: str
    phase_timestamps: tuple[int, int, int]
    chosen: str
    latency_ms: int
    source: str
    cohort_id: str
    occupation: str = ""
    education: str = ""

    def __post_init__(self):
        ts = tuple(int(t) for t in self.phase_timestamps)
        if len(ts) != 3 or not (ts[0] < ts[1] < ts[2]):
            raise ValueError(f"phase timestamps must be 3 strictly increasing values, got {ts}")
        object.__setattr__(self, "phase_timestamps", ts)
        if self.chosen not in POLICY_LABELS:
            raise ValueError(f"chosen policy must be one of {POLICY_LABELS}, got {self.chosen!r}")
        if self.source not in (SOURCE_SIMULATED, SOURCE_HUMAN):
            raise ValueError(f"unknown record source {self.source!r}")

    def as_dict(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "subject_id": self.subject_id,
            "phase_timestamps": list(self.phase_timestamps),
            "chosen": self.chosen,
            "latency_ms": self.latency_ms,
            "source": self.source,
            "cohort_id": self.cohort_id,
            "occupation": self.occupation,
            "education": self.education,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChoiceRecord":
        return cls(
            problem_id=data["problem_id"],
            subject_id=data["subject_id"],
            phase_timestamps=tuple(data["phase_timestamps"]),
            chosen=data["chosen"],
            latency_ms=int(data["latency_ms"]),
            source=data["source"],
            cohort_id=data["cohort_id"],
            occupation=data.get("occupation", ""),
            education=data.get("education", ""),
        )


def choice_distribution(problem: Problem, agent: AgentConfig | None = None) -> np.ndarray:
    """Choice probabilities over the four policies for one agent.

    Scores are the subjective goal-reach probabilities (under the agent's
    weights when given, else the problem's own overlay) raised to the
    sharpness exponent, then normalized.  All-zero scores degenerate to the
    uniform distribution.
    """
    agent = agent or AgentConfig()
    if agent.weights is not None:
        problem = Problem(problem.problem_id, problem.description, problem.model_true,
                          agent.weights.weights, problem.current, problem.policies,
                          problem.horizon)
    profiles = outcome_profiles(problem)
    scores = np.array([profiles[lbl].p_goal_subjective for lbl in POLICY_LABELS])
    if np.all(scores == 0.0):
        return np.full(4, 0.25)
    powered = scores ** agent.sharpness
    return powered / powered.sum()


def derive_agent_seeds(master_seed: int, n: int) -> list[np.random.SeedSequence]:
    """Per-agent seed sequences: ``SeedSequence(master_seed).spawn(n)``."""
    return np.random.SeedSequence(master_seed).spawn(n)


def run_cohort(problem: Problem, template: AgentConfig, n: int, master_seed: int,
               cohort_id: str | None = None) -> list[ChoiceRecord]:
    """Run n independent agents from one template; fully reproducible.

    Records come back in agent order.  Each agent's generator first draws
    three phase durations (500..4999 ms), then the choice, so the record
    stream is a pure function of (problem, template, master_seed).
    """
    if n < 1:
        raise EmptyCohort(f"cohort size must be >= 1, got {n}")
    cohort_id = cohort_id if cohort_id is not None else f"sim-{master_seed}"
    dist = choice_distribution(problem, template)
    records = []
    for i, seed_seq in enumerate(derive_agent_seeds(master_seed, n)):
        rng = np.random.default_rng(seed_seq)
        d1, d2, latency = (int(x) for x in rng.integers(500, 5000, size=3))
        chosen = POLICY_LABELS[int(rng.choice(4, p=dist))]
        t0 = _SIM_EPOCH_MS + i * _AGENT_SLOT_MS
        records.append(ChoiceRecord(
            problem_id=problem.problem_id,
            subject_id=f"agent-{i:05d}",
            phase_timestamps=(t0, t0 + d1, t0 + d1 + d2),
            chosen=chosen,
            latency_ms=latency,
            source=SOURCE_SIMULATED,
            cohort_id=cohort_id,
        ))
    return records


def binomial_two_sided_pvalue(k: int, n: int, p0: float = 0.25) -> float:
    """Exact two-sided binomial p-value by the minimum-likelihood rule.

    Sums the probability of every outcome whose probability does not exceed
    that of the observed count, in exact rational arithmetic, so borderline
    ties are decided exactly rather than by float rounding.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    p = Fraction(p0)
    if not 0 < p < 1:
        return 1.0 if (p == 0 and k == 0) or (p == 1 and k == n) else 0.0
    a, b = p.numerator, p.denominator
    # pmf(i) = C(n,i) a^i (b-a)^(n-i) / b^n; compare integer numerators
    weights = [math.comb(n, i) * a ** i * (b - a) ** (n - i) for i in range(n + 1)]
    observed = weights[k]
    total = sum(w for w in weights if w <= observed)
    return float(min(Fraction(total, b ** n), Fraction(1)))


@dataclass(frozen=True)
class CohortSummary:
    """Counts and the exact test of the goal-inverting choice rate."""

    problem_id: str
    cohort_id: str
    n: int
    counts: dict[str, int]
    frequencies: dict[str, float]
    ccb_label: str
    ccb_rate: float
    p_value: float
    baseline: float = 0.25

    def as_dict(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "cohort_id": self.cohort_id,
            "n": self.n,
            "counts": dict(self.counts),
            "frequencies": dict(self.frequencies),
            "ccb_label": self.ccb_label,
            "ccb_rate": self.ccb_rate,
            "baseline": self.baseline,
            "p_value": self.p_value,
        }


def summarize(records, problem: Problem) -> CohortSummary:
    """Summarize a cohort of records answering one problem.

    ``ccb_rate`` is the frequency of the policy flagged as goal-inverting in
    the problem fixture; the p-value is the exact two-sided binomial test of
    its count against the uniform 0.25 baseline.
    """
    records = list(records)
    if not records:
        raise EmptyCohort("no records to summarize")
    foreign = {r.problem_id for r in records} - {problem.problem_id}
    if foreign:
        raise MixedProblemIds(f"records reference other problems: {sorted(foreign)}")
    cohorts = {r.cohort_id for r in records}
    cohort_id = cohorts.pop() if len(cohorts) == 1 else "mixed"
    n = len(records)
    counts = {label: 0 for label in POLICY_LABELS}
    for r in records:
        counts[r.chosen] += 1
    frequencies = {label: counts[label] / n for label in POLICY_LABELS}
    ccb_label = problem.inverse_label
    k = counts[ccb_label]
    return CohortSummary(
        problem_id=problem.problem_id,
        cohort_id=cohort_id,
        n=n,
        counts=counts,
        frequencies=frequencies,
        ccb_label=ccb_label,
        ccb_rate=k / n,
        p_value=binomial_two_sided_pvalue(k, n, 0.25),
    )


def proportion_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact (Clopper-Pearson) confidence interval for a binomial proportion."""
    alpha = 1.0 - confidence
    lo = 0.0 if k == 0 else float(stats.beta.ppf(alpha / 2, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1 - alpha / 2, k + 1, n - k))
    return lo, hi


def plot_rows(summary: CohortSummary, confidence: float = 0.95) -> list[dict]:
    """Plot-data table: one row per policy with frequency and CI bounds."""
    rows = []
    for label in POLICY_LABELS:
        k = summary.counts[label]
        lo, hi = proportion_interval(k, summary.n, confidence)
        rows.append({"label": label, "count": k,
                     "frequency": summary.frequencies[label],
                     "ci_low": lo, "ci_high": hi})
    return rows


def summary_text(summary: CohortSummary) -> str:
    """Human-readable cohort report."""
    lines = [
        f"problem:     {summary.problem_id}",
        f"cohort:      {summary.cohort_id}",
        f"n:           {summary.n}",
        "choices:",
    ]
    for row in plot_rows(summary):
        lines.append(f"  {row['label']}: {row['count']:5d}  "
                     f"freq {row['frequency']:.4f}  "
                     f"ci95 [{row['ci_low']:.4f}, {row['ci_high']:.4f}]")
    lines += [
        f"inverting policy:   {summary.ccb_label}",
        f"ccb rate:           {summary.ccb_rate:.4f} (baseline {summary.baseline})",
        f"exact binomial p:   {summary.p_value:.6g}",
    ]
    return "\n".join(lines)
