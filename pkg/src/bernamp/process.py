"""Bernoulli release process: parameter types, pushforwards, corner reduction.

The released object is k rounds of d independent Bernoulli samples whose
bias vector lives in the box [c, 1-c]^d.  Corner distributions put all mass
on the 2^d box corners; corner index bit ell = 0 means coordinate ell sits
at c, bit 1 means 1-c.  A full outcome vector indexes the 2^(dk) bit
strings little-endian, sample-major: bit (j*d + ell) is coordinate ell of
sample j, so the integer popcount of an outcome is its Hamming weight.

Outcome distributions exist in two layouts: "full" stores one log mass per
bit string; "hamming" stores the per-point log mass at each Hamming weight
j in 0..dk together with the implicit C(dk, j) multiplicities.  The hamming
layout is only valid for exchangeable sources (two-point symmetric mixtures
and d = 1), where the mass depends on the weight alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, UsageError
from .renyi import Alpha, alpha_value, log_sum_exp, _log_terms

__all__ = [
    "ENUMERATION_GUARD_DK",
    "AmpParams",
    "CornerDist",
    "OutcomeDist",
    "log_binomial_table",
    "popcount_table",
    "bern_point_pushforward",
    "bern_corner_pushforward",
    "bern_mixture_pushforward",
    "two_point_pushforward",
    "corner_reduce",
    "outcome_divergence",
]

# Full-layout pushforwards materialize 2^(dk) outcomes; 24 bits is ~16M
# entries (128MB per vector), the supported ceiling.
ENUMERATION_GUARD_DK = 24

_NORM_TOL = 1e-12


def _check_count(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise UsageError(f"{name} must be an integer >= 1, got {value!r}")
    if value < 1:
        raise UsageError(f"{name} must be >= 1, got {value!r}")
    return int(value)


def _guard_dk(d: int, k: int) -> None:
    if d * k > ENUMERATION_GUARD_DK:
        raise CapacityError(
            f"full outcome enumeration requires d*k <= {ENUMERATION_GUARD_DK}, "
            f"got d*k = {d * k}"
        )


@dataclass(frozen=True)
class AmpParams:
    """Problem parameters: box floor c, order alpha, budget eps, shape (d, k).

    c = 0 is representable so the pushforward utilities can exercise the
    degenerate box, but bound and solver entry points reject it.
    """

    c: float
    alpha: float
    eps: float
    d: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", alpha_value(self.alpha))
        c = float(self.c)
        if not (0.0 <= c < 0.5):
            raise UsageError(f"c must lie in [0, 1/2), got {self.c!r}")
        eps = float(self.eps)
        if not (eps >= 0.0 and math.isfinite(eps)):
            raise UsageError(
                f"eps must be finite and >= 0 (use 1e6 as a large-eps sentinel), "
                f"got {self.eps!r}"
            )
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "d", _check_count(self.d, "d"))
        object.__setattr__(self, "k", _check_count(self.k, "k"))


def popcount_table(d: int) -> np.ndarray:
    """Popcounts of all d-bit integers."""
    return np.array([i.bit_count() for i in range(1 << d)], dtype=np.int64)


def log_binomial_table(n: int) -> np.ndarray:
    """log C(n, j) for j = 0..n."""
    lg = math.lgamma(n + 1)
    return np.array(
        [lg - math.lgamma(j + 1) - math.lgamma(n - j + 1) for j in range(n + 1)],
        dtype=np.float64,
    )


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def _check_log_masses(lm: np.ndarray, expected: int, what: str,
                      lweights: np.ndarray | None = None) -> np.ndarray:
    if lm.ndim != 1 or lm.size != expected:
        raise UsageError(f"{what} needs {expected} log masses, got shape {lm.shape}")
    if np.any(np.isnan(lm)) or np.any(lm == np.inf):
        raise UsageError(f"{what} log masses must be finite or -inf")
    total = lm if lweights is None else lm + lweights
    err = abs(math.expm1(log_sum_exp(total)))
    if err > _NORM_TOL:
        raise UsageError(
            f"{what} masses must sum to 1 within {_NORM_TOL:g} (off by {err:.3e}); "
            f"inputs are rejected, not renormalized"
        )
    return lm


@dataclass(frozen=True, eq=False)
class CornerDist:
    """Distribution over the 2^d corners of [c, 1-c]^d, masses in log domain."""

    d: int
    c: float
    log_masses: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "d", _check_count(self.d, "d"))
        c = float(self.c)
        if not (0.0 <= c < 0.5):
            raise UsageError(f"c must lie in [0, 1/2), got {self.c!r}")
        object.__setattr__(self, "c", c)
        lm = _freeze(np.asarray(self.log_masses, dtype=np.float64))
        _check_log_masses(lm, 1 << self.d, "corner distribution")
        object.__setattr__(self, "log_masses", lm)

    @classmethod
    def from_probs(cls, d: int, c: float, probs) -> "CornerDist":
        probs = np.asarray(probs, dtype=np.float64)
        if np.any(np.isnan(probs)) or np.any(probs < 0.0):
            raise UsageError("corner masses must be >= 0")
        with np.errstate(divide="ignore"):
            return cls(d, c, np.log(probs))

    @classmethod
    def point_mass(cls, d: int, c: float, index: int) -> "CornerDist":
        if not (0 <= index < (1 << d)):
            raise UsageError(f"corner index must lie in [0, 2^d), got {index}")
        lm = np.full(1 << d, -np.inf)
        lm[index] = 0.0
        return cls(d, c, lm)

    @classmethod
    def two_point(cls, d: int, c: float, p: float) -> "CornerDist":
        """Mass p on the all-c corner (index 0), 1-p on the all-(1-c) corner."""
        p = float(p)
        if not (0.0 <= p <= 1.0):
            raise UsageError(f"p must lie in [0, 1], got {p!r}")
        lm = np.full(1 << d, -np.inf)
        with np.errstate(divide="ignore"):
            lm[0] = math.log(p) if p > 0.0 else -np.inf
            lm[-1] = math.log1p(-p) if p < 1.0 else -np.inf
        return cls(d, c, lm)


@dataclass(frozen=True, eq=False)
class OutcomeDist:
    """Distribution of the released k x d Bernoulli bits.

    kind "full": log_masses[o] over all 2^(dk) outcomes in the packed
    layout.  kind "hamming": log_masses[j] is the per-point mass of any
    single outcome with Hamming weight j; the C(dk, j) multiplicity is
    implicit and accounted for during normalization and divergences.
    """

    d: int
    k: int
    kind: str
    log_masses: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "d", _check_count(self.d, "d"))
        object.__setattr__(self, "k", _check_count(self.k, "k"))
        lm = _freeze(np.asarray(self.log_masses, dtype=np.float64))
        dk = self.d * self.k
        if self.kind == "full":
            _check_log_masses(lm, 1 << dk, "full outcome distribution")
        elif self.kind == "hamming":
            _check_log_masses(lm, dk + 1, "hamming outcome distribution",
                              lweights=log_binomial_table(dk))
        else:
            raise UsageError(f"kind must be 'full' or 'hamming', got {self.kind!r}")
        object.__setattr__(self, "log_masses", lm)

    @property
    def log_multiplicities(self) -> np.ndarray:
        if self.kind == "hamming":
            return log_binomial_table(self.d * self.k)
        return np.zeros(1 << (self.d * self.k))


def bern_point_pushforward(x, k: int) -> OutcomeDist:
    """Full distribution of k Bernoulli sample rounds at one bias vector x.

    x is a length-d array with coordinates in [0, 1]; 0 and 1 give
    deterministic bits.
    """
    k = _check_count(k, "k")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.ndim != 1 or x.size < 1:
        raise UsageError("x must be a 1-D coordinate vector")
    if np.any(np.isnan(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise UsageError(f"coordinates must lie in [0, 1], got {x!r}")
    d = x.size
    _guard_dk(d, k)
    with np.errstate(divide="ignore"):
        lx = np.log(x)
        l1x = np.log1p(-x)
    lm = kernels.point_pushforward_full(lx, l1x, d, k)
    return OutcomeDist(d, k, "full", lm)


def bern_corner_pushforward(P: CornerDist, k: int) -> OutcomeDist:
    """Full distribution of k Bernoulli sample rounds from a corner mixture."""
    k = _check_count(k, "k")
    _guard_dk(P.d, k)
    with np.errstate(divide="ignore"):
        lc = math.log(P.c) if P.c > 0.0 else -math.inf
        l1c = math.log1p(-P.c)
    lm = kernels.corner_pushforward_full(
        P.log_masses, popcount_table(P.d), P.d, k, lc, l1c
    )
    return OutcomeDist(P.d, k, "full", lm)


def bern_mixture_pushforward(points, masses, k: int) -> OutcomeDist:
    """Full pushforward of a finite mixture of bias vectors.

    points is (m, d), masses the matching linear-domain mixture weights.
    Accumulates mass by mass in log domain.
    """
    k = _check_count(k, "k")
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    masses = np.atleast_1d(np.asarray(masses, dtype=np.float64))
    if points.shape[0] != masses.size:
        raise UsageError("points and masses must have matching lengths")
    if np.any(np.isnan(masses)) or np.any(masses < 0.0):
        raise UsageError("mixture masses must be >= 0")
    if abs(float(np.sum(masses)) - 1.0) > _NORM_TOL:
        raise UsageError(f"mixture masses must sum to 1 within {_NORM_TOL:g}")
    d = points.shape[1]
    _guard_dk(d, k)
    acc = np.full(1 << (d * k), -np.inf)
    for row, mass in zip(points, masses):
        if mass == 0.0:
            continue
        part = bern_point_pushforward(row, k)
        acc = np.logaddexp(acc, math.log(mass) + part.log_masses)
    return OutcomeDist(d, k, "full", acc)


def two_point_pushforward(p: float, params: AmpParams) -> tuple[OutcomeDist, OutcomeDist]:
    """Hamming-layout pushforwards of the symmetric two-point pair.

    P puts mass p on the all-c corner and 1-p on the all-(1-c) corner; Q is
    the same pair with the masses swapped.  The released dk bits are
    exchangeable, so the mass at weight j compresses to
    p * c^j (1-c)^(dk-j) + (1-p) * c^(dk-j) (1-c)^j and its mirror.
    """
    p = float(p)
    if not (0.0 < p <= 0.5):
        raise UsageError(f"p must lie in (0, 1/2], got {p!r}")
    if params.c <= 0.0:
        raise UsageError("two_point_pushforward requires c > 0")
    n = params.d * params.k
    lc = math.log(params.c)
    l1c = math.log1p(-params.c)
    lp = math.log(p)
    l1p = math.log1p(-p)
    j = np.arange(n + 1, dtype=np.float64)
    wa = j * lc + (n - j) * l1c
    wb = wa[::-1].copy()
    lP = np.logaddexp(lp + wa, l1p + wb)
    lQ = np.logaddexp(l1p + wa, lp + wb)
    return (
        OutcomeDist(params.d, params.k, "hamming", lP),
        OutcomeDist(params.d, params.k, "hamming", lQ),
    )


def corner_reduce(points, masses, params: AmpParams) -> CornerDist:
    """Replace each support point by its matching corner mixture.

    Coordinate value x in [c, 1-c] becomes weight lam = (1-c-x)/(1-2c) on
    the c side and 1-lam on the 1-c side, independently per coordinate
    (product weights across coordinates).

    Guarantees:
      * k = 1: the joint sampling pushforward is preserved exactly
        (mixture-of-products equals product-of-mixtures when the weights
        factor per coordinate).
      * any k: each round's marginal pushforward is preserved, and the
        reduction is a post-processing of the input, so neither divergence
        R(reduce(P), reduce(Q)) nor R(reduce(Q), reduce(P)) exceeds the
        corresponding divergence of the inputs.
      * k >= 2: the joint pushforward is NOT preserved in general. The
        returned distribution draws ONE corner and reuses it for all k
        rounds, which correlates rounds; no corner mixture can reproduce
        the independent-rounds joint of an interior point. Witness: d=1,
        c=0.1, x=0.5, k=2 gives Pr[(1,1)] = 0.25 for the point but 0.41
        for any marginal-matching corner mixture.
    """
    if params.c <= 0.0:
        raise UsageError("corner_reduce requires c > 0")
    c, d = params.c, params.d
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    masses = np.atleast_1d(np.asarray(masses, dtype=np.float64))
    if points.ndim != 2 or points.shape[1] != d:
        raise UsageError(f"points must have shape (m, {d}), got {points.shape}")
    if points.shape[0] != masses.size:
        raise UsageError("points and masses must have matching lengths")
    if np.any(np.isnan(masses)) or np.any(masses < 0.0):
        raise UsageError("masses must be >= 0")
    if abs(float(np.sum(masses)) - 1.0) > _NORM_TOL:
        raise UsageError(f"masses must sum to 1 within {_NORM_TOL:g}")
    slack = 1e-15
    if np.any(points < c - slack) or np.any(points > 1.0 - c + slack):
        raise UsageError(f"support points must lie in [{c}, {1.0 - c}]^d")
    lam = np.clip((1.0 - c - points) / (1.0 - 2.0 * c), 0.0, 1.0)  # weight on c side
    with np.errstate(divide="ignore"):
        llam = np.log(lam)
        l1lam = np.log1p(-lam)
        lmass = np.log(masses)
    n = 1 << d
    bits = ((np.arange(n)[:, None] >> np.arange(d)[None, :]) & 1).astype(bool)
    # (m, n): log product weight of support point s on corner i
    sel = np.where(bits[None, :, :], l1lam[:, None, :], llam[:, None, :]).sum(axis=2)
    terms = lmass[:, None] + sel
    mx = np.max(terms, axis=0)
    with np.errstate(under="ignore", invalid="ignore"):
        out = mx + np.log(np.sum(np.exp(terms - mx[None, :]), axis=0))
    out = np.where(mx == -np.inf, -np.inf, out)
    return CornerDist(d, c, out)


def outcome_divergence(P: OutcomeDist, Q: OutcomeDist, a: Alpha | float) -> float:
    """Renyi divergence between two outcome distributions of the same layout."""
    alpha = alpha_value(a)
    if (P.d, P.k, P.kind) != (Q.d, Q.k, Q.kind):
        raise UsageError(
            f"outcome distributions must share (d, k, kind); "
            f"got {(P.d, P.k, P.kind)} and {(Q.d, Q.k, Q.kind)}"
        )
    if np.array_equal(P.log_masses, Q.log_masses):
        return 0.0
    if P.kind == "full":
        s = kernels.full_renyi_logsum(P.log_masses, Q.log_masses, alpha)
    else:
        lbinom = log_binomial_table(P.d * P.k)
        s = log_sum_exp(lbinom + _log_terms(P.log_masses, Q.log_masses, alpha))
    if s == math.inf:
        return math.inf
    return max(0.0, s / (alpha - 1.0))
