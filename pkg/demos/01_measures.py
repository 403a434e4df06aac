"""
Information as a change of belief
=================================

Information is measured in someone's *view* (a probability distribution)
as the expected log ratio between a new belief and an old one.
"""

# %%
import numpy as np

from beliefinfo import measures as m

# A coin we believed was biased towards tails, then came to believe was
# biased towards heads. Seen from a fair-coin view, was that progress?
view = [0.5, 0.5]
old, new = [0.25, 0.75], [0.8, 0.2]
print("info from the fair view:", m.info(view, new, old).bits, "bits")

# Negative: the fair view finds the new belief slightly worse than the old.
# Someone who believes the new belief sees a gain instead.
print("info from the new belief's own view:", m.info(new, new, old).bits, "bits")

# %%
# The measure is antisymmetric and additive along a sequence of beliefs.
middle = [0.5, 0.5]
print("antisymmetry:", m.info(view, old, new) == -m.info(view, new, old))
print("additivity:", m.info(view, new, old).nats, "=", m.info(view, new, middle).nats + m.info(view, middle, old).nats)

# %%
# A lottery with one winning ticket in 2**20.
p = 2.0**-20
lottery = [p, 1 - p]
print("winning ticket:", m.info([1, 0], [1, 0], lottery).bits, "bits")
print("losing ticket:", m.realization_info(lottery, 1).bits, "bits")
print("entropy of the draw:", m.entropy(lottery).bits, "bits")
# Lindley's measure charges the winner the same tiny expected value.
print("Lindley value for the winner:", m.lindley([1, 0], lottery).bits, "bits")

# %%
# Mutual information as expected KL from prior to posterior.
joint = np.array([[0.4, 0.1], [0.1, 0.4]])
print("mutual information:", m.mutual_information(joint).bits, "bits")

# Spread of information across outcomes, and a distance between beliefs.
print("info variance:", float(m.info_variance(view, new, old)), "nats^2")
print("L2 pseudometric:", float(m.pseudometric_lp(view, new, old, 2)), "nats")
