"""
Generalized Fisher score and matrix
===================================

The gradient and Hessian of info(view, P(X|theta), q0) in theta.
"""

# %%
import numpy as np

from beliefinfo import fisher as f
from beliefinfo import gaussian as g

cov = np.array([[0.5, 0.2], [0.2, 0.3]])
family = f.ParametricFamily.gaussian_location(cov)
view = g.Gaussian([1.0, -1.0], cov)

# At the view's own parameter the score vanishes and the matrix is -Sigma^-1:
# the negative of the classical Fisher information.
theta = np.array([1.0, -1.0])
print("score:", f.fisher_score(view, family, None, theta))
print("matrix:\n", f.fisher_matrix(view, family, None, theta))
print("-inverse covariance:\n", -np.linalg.inv(cov))

# %%
# Away from it the score points back towards the view.
print("score at origin:", f.fisher_score(view, family, None, [0.0, 0.0]))

# %%
# Any family can be differentiated numerically, here a softmax over 4 outcomes.
kernel = np.array([[0.0, 1.0, 2.0, 3.0], [1.0, 0.0, 1.0, 0.0]])
soft = f.ParametricFamily.categorical_softmax(kernel)
observed = np.array([0.1, 0.2, 0.3, 0.4])
print("softmax score:", f.fisher_score(observed, soft, None, [0.2, -0.1]))
print("softmax matrix:\n", f.fisher_matrix(observed, soft, None, [0.2, -0.1]))
