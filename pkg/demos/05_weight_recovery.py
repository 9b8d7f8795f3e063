"""Recover a planted somatic boost from sampled behaviour alone.

The inverse problem: watch trajectories from a biased walker whose chain
structure is known, and fit the per-state weights that explain them.

Run:  python demos/05_weight_recovery.py
"""

import numpy as np

from whmm import build_model, estimate_weights, sample_trajectory
from whmm.estimation import path_log_likelihood, transition_counts

base = build_model(["calm", "thrill"], [[0.6, 0.4], [0.3, 0.7]], [1.0, 0.0])
planted = base.with_weights([1.0, 3.0])
print("hidden truth: the walker feels a 3x pull toward 'thrill'")
print("subjective kernel:\n", np.round(planted.kernel(subjective=True), 4))

# Observe 100 trajectories of 100 transitions each.
paths = [sample_trajectory(planted, horizon=100, seed=i, subjective=True)
         for i in range(100)]
counts = transition_counts(paths, base.n)
print("\nobserved transition counts:\n", counts.astype(int))

estimate = estimate_weights(paths, base)
print(f"\nfitted weights (gauge w[calm]=1): {np.round(estimate.values, 4)}")
print(f"log-likelihood: {estimate.log_likelihood:.2f}   converged: {estimate.converged}")

# Exhaustive 0.01-step grid over the free weight as a sanity check.
grid = np.arange(0.1, 10.001, 0.01)
lls = [path_log_likelihood(base, counts, np.array([1.0, w])) for w in grid]
best = grid[int(np.argmax(lls))]
print(f"grid search best w[thrill]: {best:.2f}  "
      f"(fitted point beats the 0.01 grid by {estimate.log_likelihood - max(lls):.2e} nats)")
