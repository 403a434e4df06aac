"""Information as an expectation over changes of belief.

Submodules:

- :mod:`beliefinfo.measures`: discrete information functionals
- :mod:`beliefinfo.gaussian`: Gaussian beliefs and closed-form information
- :mod:`beliefinfo.critical`: minimal-information solvers and annealing
- :mod:`beliefinfo.fisher`: generalized Fisher score and matrix
- :mod:`beliefinfo.experiments`: Monte-Carlo negative-information study
- :mod:`beliefinfo.labelinfo`: label information for classifier outputs
"""
from .errors import (
    DomainError,
    Infeasible,
    InfoError,
    InputError,
    NoConvergence,
)
from .gaussian import (
    Gaussian,
    LocationModel,
    info_gaussian_view,
    kl_gaussian,
    mutual_info_gaussian,
    posterior,
    predictive,
    realization_limit_info,
)
from .measures import (
    BeliefWeights,
    Categorical,
    InfoValue,
    JointCategorical,
    cross_entropy,
    entropy,
    info,
    info_density,
    info_variance,
    kl,
    lindley,
    mutual_information,
    perturbation_derivative,
    pseudometric_lp,
    realization_info,
)

__version__ = "0.1.0"
