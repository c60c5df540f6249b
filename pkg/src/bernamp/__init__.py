"""Privacy amplification bounds for Bernoulli-sample releases.

A mechanism whose output is a bias vector in [c, 1-c]^d is observed only
through k rounds of Bernoulli samples.  This package computes how much that
sampling step tightens a Renyi divergence budget eps: closed-form lower and
upper bounds, and an exact worst-case search over corner distributions.
"""

from .bounds import (
    BoundsBundle,
    HoeffdingBracket,
    asymptote_upper,
    bounds_report,
    hoeffding_bracket,
    ppi_upper,
    two_point_lower,
)
from .errors import BracketError, CapacityError, UsageError
from .kernels import active_backend
from .process import (
    AmpParams,
    CornerDist,
    OutcomeDist,
    bern_corner_pushforward,
    bern_mixture_pushforward,
    bern_point_pushforward,
    corner_reduce,
    log_binomial_table,
    outcome_divergence,
    two_point_pushforward,
)
from .renyi import (
    Alpha,
    log_add,
    log_sum_exp,
    r_alpha,
    r_alpha_inverse,
    renyi_divergence,
    renyi_divergence_log,
)
from .solver import (
    OptResult,
    SolverConfig,
    brute_force_post_general_support,
    conjecture_gap,
    constraint_eval,
    exact_post,
    objective_eval,
)
from .validate import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Alpha",
    "AmpParams",
    "BoundsBundle",
    "BracketError",
    "CapacityError",
    "CheckResult",
    "CornerDist",
    "HoeffdingBracket",
    "OptResult",
    "OutcomeDist",
    "SolverConfig",
    "UsageError",
    "active_backend",
    "asymptote_upper",
    "bern_corner_pushforward",
    "bern_mixture_pushforward",
    "bern_point_pushforward",
    "bounds_report",
    "brute_force_post_general_support",
    "conjecture_gap",
    "constraint_eval",
    "corner_reduce",
    "exact_post",
    "hoeffding_bracket",
    "log_add",
    "log_binomial_table",
    "log_sum_exp",
    "objective_eval",
    "outcome_divergence",
    "ppi_upper",
    "r_alpha",
    "r_alpha_inverse",
    "renyi_divergence",
    "renyi_divergence_log",
    "run_checks",
    "two_point_lower",
    "two_point_pushforward",
]
