"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: :class:`InputError` -> 2,
:class:`DomainError` -> 3, :class:`Infeasible` -> 4, :class:`NoConvergence` -> 5.
"""


class InfoError(Exception):
    """Base class for all package errors."""

    code = "info_error"


class InputError(InfoError, ValueError):
    """Malformed or out-of-range input (type invariants, bad parameters)."""

    code = "input_error"


class DomainError(InfoError, ArithmeticError):
    """Input is well formed but the requested quantity is undefined."""

    code = "domain_error"


class SupportMismatch(InputError):
    code = "support_mismatch"


class DimensionMismatch(InputError):
    code = "dimension_mismatch"


class InvalidOrder(InputError):
    code = "invalid_order"


class NegativeLambda(InputError):
    code = "negative_lambda"


class EmptyInput(InputError):
    code = "empty_input"


class InconsistentClassCount(InputError):
    code = "inconsistent_class_count"


class NotSPD(InputError):
    code = "not_spd"


class UndefinedRatio(DomainError):
    code = "undefined_ratio"


class ConflictingDivergence(DomainError):
    code = "conflicting_divergence"


class ZeroDenominator(DomainError):
    code = "zero_denominator"


class UndefinedKernel(DomainError):
    code = "undefined_kernel"


class DegenerateResult(DomainError):
    code = "degenerate_result"


class TargetOutOfRange(DomainError):
    code = "target_out_of_range"


class EvaluationFailure(DomainError):
    code = "evaluation_failure"


class NonFiniteInfo(DomainError):
    code = "non_finite_info"


class Infeasible(DomainError):
    code = "infeasible"


class NoConvergence(DomainError):
    code = "no_convergence"
