"""
Conjugate Gaussian beliefs
==========================

Closed forms for the location model: observations y ~ N(theta, Sigma) and a
Gaussian prior on theta.
"""

# %%
import math

import numpy as np

from beliefinfo import gaussian as g

prior = g.Gaussian.standard(2)
model = g.LocationModel.isotropic(2, 0.5)

# Ten observations whose mean happens to be the origin.
post = g.posterior(prior, model, 10, [0.0, 0.0])
print("posterior covariance:\n", post.cov)  # I / 41

# %%
# Expected information from ten observations: 0.5 * log det(n Sigma^-1 A + I).
mi = g.mutual_info_gaussian(prior, model, 10)
print("mutual information:", mi.bits, "bits; log2(41) =", math.log2(41))

# %%
# However the data fall, the first posterior gains at least this much in
# its own view: the covariance shrinkage alone.
floor = g.info_gaussian_view(post, post, prior)
print("covariance-only floor:", floor.bits, "bits")

# A later, sharper posterior can disagree with the first one. Its view of
# the first inference is what the ensemble demo tracks.
later = g.posterior(post, model, 10, [0.6, -0.4])
print("first inference seen from the later posterior:", g.info_gaussian_view(later, post, prior).bits, "bits")

# %%
# In the realization limit the view is a point mass at the true parameter.
theta = np.array([0.1, -0.2])
print("realization-limit info:", g.realization_limit_info(theta, post, prior) / math.log(2), "bits")

# Predictive distribution of the mean of four fresh observations.
print("predictive covariance:\n", g.predictive(prior, model, 4).cov)
