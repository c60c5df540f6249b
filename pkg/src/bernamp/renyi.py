"""Renyi divergence primitives on finite supports, computed in log domain.

Probability masses are carried as natural-log values throughout the package:
a plain float holds one log mass and ``-inf`` encodes an exact zero.  All
sums of exponentials go through a max-shifted log-sum-exp so that orders as
large as alpha = 50 against eps = 5 (raw sums near e^245) stay finite.

Provided here:
  * Alpha: validated divergence order (finite real > 1).
  * log_sum_exp / log_add: stable aggregation of log-domain values.
  * renyi_divergence: divergence of order alpha between two mass vectors.
  * r_alpha: the binary symmetric divergence r_alpha(p) between (p, 1-p)
    and (1-p, p).
  * r_alpha_inverse: inverse of r_alpha on (0, 1/2] by bisection in log(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError

__all__ = [
    "Alpha",
    "alpha_value",
    "log_add",
    "log_sum_exp",
    "renyi_divergence",
    "renyi_divergence_log",
    "r_alpha",
    "r_alpha_inverse",
]

# Normalized mass vectors must sum to 1 within this (linear-domain) slack.
NORMALIZATION_TOL = 1e-12

# Smallest probability the r_alpha_inverse bisection will return.  Divergence
# targets beyond r_alpha(_P_FLOOR) (about 690 nats) saturate here: the root
# itself would underflow float64, and every downstream consumer is flat in p
# at that scale.
_P_FLOOR = 1e-300


@dataclass(frozen=True)
class Alpha:
    """Order of a Renyi divergence.  Must be a finite real > 1."""

    value: float

    def __post_init__(self):
        try:
            v = float(self.value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"alpha must be a real number, got {self.value!r}") from exc
        if not (math.isfinite(v) and v > 1.0):
            raise UsageError(f"alpha must be finite and > 1, got {v!r}")
        object.__setattr__(self, "value", v)


def alpha_value(a: Alpha | float) -> float:
    """Coerce an Alpha or bare number to a validated float order."""
    if isinstance(a, Alpha):
        return a.value
    return Alpha(a).value


def log_add(a: float, b: float) -> float:
    """log(e^a + e^b) without leaving log domain."""
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    if a == math.inf or b == math.inf:
        return math.inf
    m = a if a >= b else b
    return m + math.log1p(math.exp(-abs(a - b)))


def log_sum_exp(values) -> float:
    """log(sum(e^v for v in values)), max-shifted; -inf on an empty input."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return -math.inf
    m = float(np.max(arr))
    if m == -math.inf:
        return -math.inf
    if m == math.inf:
        return math.inf
    with np.errstate(under="ignore"):
        return m + math.log(float(np.sum(np.exp(arr - m))))


def _log_terms(lp: np.ndarray, lq: np.ndarray, alpha: float) -> np.ndarray:
    """Per-atom log of p^alpha * q^(1-alpha).

    Zero p-mass contributes nothing regardless of q (the 0^alpha * 0^(1-alpha)
    corner is 0 by convention); positive p-mass against zero q-mass makes the
    divergence infinite.
    """
    out = np.empty(lp.shape, dtype=np.float64)
    p_zero = np.isneginf(lp)
    q_zero = np.isneginf(lq)
    out[p_zero] = -np.inf
    blow_up = ~p_zero & q_zero
    out[blow_up] = np.inf
    ok = ~p_zero & ~q_zero
    out[ok] = alpha * lp[ok] + (1.0 - alpha) * lq[ok]
    return out


def _validated_log_masses(p, name: str) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise UsageError(f"{name} must be a non-empty 1-D mass vector")
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(np.isinf(arr)):
        raise UsageError(f"{name} must contain finite masses >= 0")
    total = float(np.sum(arr))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise UsageError(
            f"{name} must sum to 1 within {NORMALIZATION_TOL:g}, got {total!r}"
        )
    with np.errstate(divide="ignore"):
        return np.log(arr)


def renyi_divergence(p, q, a: Alpha | float) -> float:
    """Renyi divergence of order ``a`` between two linear-domain mass vectors.

    Args:
      p, q: 1-D arrays of probabilities over the same ordered support.  Each
        must sum to 1 within 1e-12; unnormalized input is rejected rather
        than renormalized.
      a: divergence order, > 1.

    Returns:
      (1/(alpha-1)) * log(sum_i p_i^alpha q_i^(1-alpha)), which is >= 0 and
      +inf exactly when p puts mass where q has none.
    """
    alpha = alpha_value(a)
    lp = _validated_log_masses(p, "p")
    lq = _validated_log_masses(q, "q")
    if lp.shape != lq.shape:
        raise UsageError(
            f"p and q must share support length, got {lp.size} and {lq.size}"
        )
    return renyi_divergence_log(lp, lq, alpha)


def renyi_divergence_log(lp, lq, a: Alpha | float) -> float:
    """Renyi divergence from log-domain mass vectors assumed normalized."""
    alpha = alpha_value(a)
    lp = np.asarray(lp, dtype=np.float64)
    lq = np.asarray(lq, dtype=np.float64)
    if lp.shape != lq.shape:
        raise UsageError(
            f"log-mass vectors must share support length, got {lp.size} and {lq.size}"
        )
    if np.array_equal(lp, lq):
        return 0.0
    s = log_sum_exp(_log_terms(lp, lq, alpha))
    if s == math.inf:
        return math.inf
    # sum_i p^alpha q^(1-alpha) >= 1, so s < 0 can only be rounding noise
    return max(0.0, s / (alpha - 1.0))


def r_alpha(p: float, a: Alpha | float) -> float:
    """Binary symmetric divergence r_alpha(p) = R_alpha((p,1-p), (1-p,p)).

    Decreasing on (0, 1/2], 0 at p = 1/2, +inf at p in {0, 1}.
    """
    alpha = alpha_value(a)
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise UsageError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return math.inf
    if p == 0.5:
        return 0.0
    lp = math.log(p)
    l1p = math.log1p(-p)
    t1 = alpha * lp + (1.0 - alpha) * l1p
    t2 = alpha * l1p + (1.0 - alpha) * lp
    return log_add(t1, t2) / (alpha - 1.0)


def r_alpha_inverse(eps: float, a: Alpha | float) -> float:
    """The p in (0, 1/2] with r_alpha(p) = eps, found by bisection in log(p).

    Exactly 1/2 when eps = 0.  Accurate to |r_alpha(result) - eps| <=
    1e-10 * max(1, eps), and one-sided: r_alpha(result) <= eps always, so
    a two-point pair built from the result never exceeds the eps budget.
    Targets beyond r_alpha(1e-300) (about 690 nats) saturate at the
    bracket floor, where the two-point construction downstream is already
    indistinguishable from its p -> 0 limit.
    """
    alpha = alpha_value(a)
    eps = float(eps)
    if not (eps >= 0.0 and math.isfinite(eps)):
        raise UsageError(f"eps must be finite and >= 0, got {eps!r}")
    if eps == 0.0:
        return 0.5
    if r_alpha(_P_FLOOR, alpha) <= eps:
        return _P_FLOOR
    tol = 1e-10 * max(1.0, eps)
    lo = math.log(_P_FLOOR)  # r(exp(lo)) > eps
    hi = math.log(0.5)       # r(exp(hi)) = 0 <= eps
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = r_alpha(math.exp(mid), alpha)
        if val > eps:
            lo = mid
        else:
            hi = mid
            if eps - val <= 0.5 * tol:
                break
    # hi tracks the feasible side throughout: r(exp(hi)) <= eps.
    return math.exp(hi)
