"""
Least-information beliefs and annealed inference
================================================

Among all beliefs that satisfy some expectation constraints, pick the one
that moves least from a reference. The answer is an exponential tilt.
"""

# %%
import numpy as np

from beliefinfo import critical as c
from beliefinfo import measures as m

# A die whose long-run average is 4.5 rather than 3.5.
faces = np.arange(1, 7)
sol = c.max_entropy_distribution(6, [c.ExpectationConstraint(faces, 4.5)])
print("probabilities:", np.round(sol.distribution.probs, 5))
print("multiplier:", sol.multipliers, "residual:", sol.residual, "iterations:", sol.iterations)

# An impossible average is reported rather than approximated.
try:
    c.max_entropy_distribution(6, [c.ExpectationConstraint(faces, 6.5)])
except c.Infeasible as exc:
    print("infeasible:", exc)

# %%
# Constrain the information relative to a second belief instead.
q0 = np.full(4, 0.25)
state = np.array([0.55, 0.25, 0.15, 0.05])
target = 0.5 * float(m.kl(state, q0))
sol = c.constrained_info_distribution(q0, [state], [target])
print("halfway belief:", np.round(sol.distribution.probs, 4), "lambda =", sol.multipliers[0])

# %%
# Annealing: raise the likelihood to a power to cap the information gained.
prior = m.Categorical([0.2, 0.3, 0.5])
likelihood = [5.0, 1.0, 0.2]
post = c.anneal(prior, likelihood, 1.0)
full = float(m.info(post, post, prior))
lam, tempered = c.solve_annealing_lambda(prior, likelihood, 0.5 * full)
print(f"full update gains {full:.4f} nats; lambda={lam:.4f} gains half of that")
print("tempered belief:", np.round(tempered.probs, 4))
