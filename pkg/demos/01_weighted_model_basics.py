"""Build a weighted Markov model and see the somatic boost reshape its kernel.

Run:  python demos/01_weighted_model_basics.py
"""

import numpy as np

from whmm import apply_weights, build_model, forward_likelihood, sample_trajectory, viterbi_decode

# A tiny commute model: home -> (bike | bus) -> office.
# Ground truth: the bus is usually faster from home, biking is reliable.
labels = ["home", "bike", "bus", "office"]
transitions = [
    [0.0, 0.4, 0.6, 0.0],   # leaving home
    [0.0, 0.1, 0.0, 0.9],   # biking almost always arrives
    [0.0, 0.0, 0.4, 0.6],   # the bus sometimes crawls in traffic
    [0.0, 0.0, 0.0, 1.0],   # the office is absorbing
]
initial = [1.0, 0.0, 0.0, 0.0]

neutral = build_model(labels, transitions, initial)
print("true kernel:")
print(np.round(neutral.kernel(subjective=False), 3))

# Now give the commuter a somatic pull: the bike feels great (weight 4),
# waiting for the bus feels dreadful (weight 0.3).
biased = neutral.with_weights([1.0, 4.0, 0.3, 1.0])
print("\nweights:", biased.weights.weights)
print("subjective kernel (column-boosted, rows renormalized):")
print(np.round(apply_weights(biased).entries, 3))

# The same path is scored differently by the two kernels.
path = ["home", "bike", "office"]
indices = [neutral.states.index_of(s) for s in path]
print(f"\npath {' -> '.join(path)}:")
print(f"  true log-likelihood:       {forward_likelihood(biased, indices, subjective=False):.4f}")
print(f"  subjective log-likelihood: {forward_likelihood(biased, indices, subjective=True):.4f}")

# Most probable route to the office under each kernel.
for subjective in (False, True):
    result = viterbi_decode(biased, 0, 3, horizon=4, subjective=subjective)
    route = " -> ".join(biased.states.labels[s] for s in result.path.states)
    kind = "subjective" if subjective else "true      "
    print(f"best {kind} route: {route}   log-prob {result.log_prob:.4f}")

# Seeded sampling is reproducible: same seed, same morning.
print("\nthree sampled mornings (seeds 1, 2, 1):")
for seed in (1, 2, 1):
    walk = sample_trajectory(biased, horizon=3, seed=seed, subjective=True)
    print(f"  seed {seed}:", " -> ".join(biased.states.labels[s] for s in walk.states))
