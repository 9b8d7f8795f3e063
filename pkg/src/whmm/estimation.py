"""Maximum-likelihood recovery of somatic weights from observed state paths.

The transition structure and initial distribution are taken as known; only
the weight vector is free.  Because the weighted kernel is invariant to
scaling all weights by a common factor, the estimate is gauge-fixed to
w[0] = 1 and the search runs over the logs of the remaining components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .core import SomaticWeights, Trajectory, WeightedMarkovModel
from .errors import EmptyObservations

# weights are searched within [1e-6, 1e6]; wide enough for any plausible boost
_LOG_BOUND = np.log(1e6)


@dataclass(frozen=True)
class WeightEstimate:
    """Result of a weight fit.

    ``converged`` is False when the optimizer hit its iteration budget; the
    weights are then still the best point seen, per the estimation contract.
    """

    weights: SomaticWeights
    log_likelihood: float
    converged: bool
    iterations: int

    @property
    def values(self) -> np.ndarray:
        return self.weights.weights


def transition_counts(paths, n: int) -> np.ndarray:
    """Aggregate observed transitions into an n-by-n count matrix."""
    counts = np.zeros((n, n))
    for path in paths:
        states = list(path.states) if isinstance(path, Trajectory) else [int(s) for s in path]
        for a, b in zip(states[:-1], states[1:]):
            counts[a, b] += 1.0
    return counts


def path_log_likelihood(model: WeightedMarkovModel, counts: np.ndarray,
                        weights: np.ndarray) -> float:
    """Subjective log-likelihood of the counted transitions under given weights.

    Equals the sum of per-path forward likelihoods minus the (weight-free)
    initial-state terms, which the fit can therefore ignore.
    """
    a = model.transitions.entries
    mass = a @ weights
    with np.errstate(divide="ignore", invalid="ignore"):
        log_tilde = np.log(a) + np.log(weights)[np.newaxis, :] - np.log(mass)[:, np.newaxis]
    active = counts > 0
    if np.any(active & ~np.isfinite(log_tilde)):
        return -np.inf
    return float(np.sum(counts[active] * log_tilde[active]))


def estimate_weights(observed, base: WeightedMarkovModel,
                     max_iterations: int = 500) -> WeightEstimate:
    """Fit somatic weights that best explain the observed paths.

    ``observed`` is a non-empty collection of state paths (Trajectory or index
    sequences) assumed to be generated from ``base``'s transition structure
    under some unknown weight vector.  The returned weights are normalized so
    the first component is 1, and their likelihood is never below that of the
    neutral all-ones vector.
    """
    paths = list(observed)
    if not paths:
        raise EmptyObservations("need at least one observed path")
    n = base.n
    counts = transition_counts(paths, n)
    ones = np.ones(n)
    ll_ones = path_log_likelihood(base, counts, ones)
    if counts.sum() == 0 or n == 1:
        return WeightEstimate(SomaticWeights(ones), ll_ones, True, 0)

    row_totals = counts.sum(axis=1)
    col_totals = counts.sum(axis=0)
    a = base.transitions.entries

    def negative_ll(log_w_tail: np.ndarray) -> tuple[float, np.ndarray]:
        w = np.concatenate(([1.0], np.exp(log_w_tail)))
        ll = path_log_likelihood(base, counts, w)
        tilde = (a * w[np.newaxis, :])
        tilde /= tilde.sum(axis=1, keepdims=True)
        # d ll / d log w_j = (transitions into j) - sum_i row_total_i * tilde[i, j]
        grad = col_totals - row_totals @ tilde
        return -ll, -grad[1:]

    result = optimize.minimize(
        negative_ll,
        x0=np.zeros(n - 1),
        jac=True,
        method="L-BFGS-B",
        bounds=[(-_LOG_BOUND, _LOG_BOUND)] * (n - 1),
        options={"maxiter": max_iterations},
    )
    fitted = np.concatenate(([1.0], np.exp(result.x)))
    ll_fit = path_log_likelihood(base, counts, fitted)
    if ll_fit < ll_ones:
        fitted, ll_fit = ones, ll_ones
    return WeightEstimate(SomaticWeights(fitted), ll_fit, bool(result.success), int(result.nit))
