"""Closed-form bounds on the amplified divergence.

Four quantities sandwich the exact amplification value at a given budget
eps: the post-processing bound (eps itself), the asymptote bound
d*k*r_alpha(c), the two-point lower bound obtained by pushing the
symmetric corner pair through the sampling process, and for k = 1 the
Hoeffding bracket pinning the two-point value between r_alpha(p + K) and
r_alpha(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import BracketError, UsageError
from .process import AmpParams, two_point_pushforward, outcome_divergence
from .renyi import r_alpha, r_alpha_inverse

__all__ = [
    "BoundsBundle",
    "HoeffdingBracket",
    "ppi_upper",
    "asymptote_upper",
    "two_point_lower",
    "hoeffding_bracket",
    "bounds_report",
    "classify_regime",
]

# Separation below which two bound values are treated as equal when
# classifying regimes; keeps the hint stable under roundoff.
_REGIME_GUARD = 1e-9


@dataclass(frozen=True)
class BoundsBundle:
    """All bounds at one budget, plus a coarse regime classification.

    regime_hint is "I" when the trivial upper bound eps is nearly tight,
    "III" when the lower bound has nearly reached the asymptote, "II" in
    between, and "unknown" when the inputs are inconsistent (lower above
    the asymptote beyond roundoff).
    """

    eps: float
    lower_two_point: float
    upper_ppi: float
    upper_asymptote: float
    exact: Optional[float]
    gap_upper_lower: float
    regime_hint: str


@dataclass(frozen=True)
class HoeffdingBracket:
    """Majority-vote bracket for the single-sample two-point value.

    lower = r_alpha(p + K) and upper = r_alpha(p) with
    K = exp(-2 (1/2 - c)^2 d).
    """

    p: float
    K: float
    lower: float
    upper: float


def ppi_upper(params: AmpParams) -> float:
    """Post-processing upper bound: releasing samples cannot exceed eps."""
    return params.eps


def asymptote_upper(params: AmpParams) -> float:
    """Large-eps limit of the amplification value: d*k*r_alpha(c)."""
    if params.c <= 0.0:
        raise UsageError("asymptote_upper requires c > 0 (bound is infinite at c = 0)")
    return params.d * params.k * r_alpha(params.c, params.alpha)


def two_point_lower(params: AmpParams) -> float:
    """Divergence of the pushed symmetric corner pair matched to eps.

    Inverts eps to the weight p with r_alpha(p) = eps, forms the pair
    (p, 1-p) / (1-p, p) on the antipodal corners, and evaluates the
    divergence of the two pushforwards in O(d*k) Hamming terms.
    """
    if params.c <= 0.0:
        raise UsageError("two_point_lower requires c > 0")
    if params.eps == 0.0:
        return 0.0
    p = r_alpha_inverse(params.eps, params.alpha)
    P, Q = two_point_pushforward(p, params)
    return outcome_divergence(P, Q, params.alpha)


def hoeffding_bracket(params: AmpParams, p: float) -> HoeffdingBracket:
    """Bracket the single-sample two-point divergence without enumeration.

    Majority vote over the d coordinates recovers the released corner up
    to failure probability K = exp(-2 (1/2 - c)^2 d), so the divergence
    lies between r_alpha(p + K) and r_alpha(p).
    """
    if params.k != 1:
        raise UsageError(f"hoeffding_bracket supports k = 1 only, got k = {params.k}")
    if not (0.0 < p <= 0.5):
        raise UsageError(f"hoeffding_bracket requires 0 < p <= 1/2, got {p!r}")
    K = math.exp(-2.0 * (0.5 - params.c) ** 2 * params.d)
    if p + K > 0.5:
        raise BracketError(
            f"p + K = {p + K!r} exceeds 1/2; increase d or decrease p", K=K
        )
    lower = r_alpha(p + K, params.alpha)
    upper = r_alpha(p, params.alpha)
    return HoeffdingBracket(p=p, K=K, lower=lower, upper=upper)


def classify_regime(eps: float, lower: float, asymptote: float,
                    delta: float = 0.05) -> str:
    """Coarse three-way regime classification of a bounds triple.

    "I": the trivial bound eps is within delta of the lower bound (no
    useful amplification). "III": the lower bound is within delta of the
    asymptote (saturated). "II": strictly between. "unknown": lower
    exceeds the asymptote beyond roundoff, so the inputs are inconsistent.
    """
    if asymptote + _REGIME_GUARD < lower:
        return "unknown"
    if eps - lower <= delta:
        return "I"
    if asymptote - lower <= delta:
        return "III"
    return "II"


def bounds_report(params: AmpParams, exact: Optional[float] = None,
                  delta_regime: float = 0.05) -> BoundsBundle:
    """Assemble every bound at one budget into a single bundle."""
    lower = two_point_lower(params)
    ppi = ppi_upper(params)
    asym = asymptote_upper(params)
    return BoundsBundle(
        eps=params.eps,
        lower_two_point=lower,
        upper_ppi=ppi,
        upper_asymptote=asym,
        exact=exact,
        gap_upper_lower=min(ppi, asym) - lower,
        regime_hint=classify_regime(params.eps, lower, asym, delta_regime),
    )
