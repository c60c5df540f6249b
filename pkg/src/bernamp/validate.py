"""Self-test checks behind the validate command.

Each check exercises one verifiable property of the library against an
independent route: closed forms against brute-force enumeration, solver
output against mathematical bounds, reductions against the exact maps
they claim to implement.  fast covers the closed-form oracles and a
reduced solver sandwich in under two minutes; full adds the randomized
property suites and the general-support oracle.

Checks marked informational report diagnostics (conjecture gaps, known
approximation error of the shared-draw corner projection at k >= 2) and
never fail the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    asymptote_upper,
    classify_regime,
    hoeffding_bracket,
    two_point_lower,
)
from .process import (
    AmpParams,
    CornerDist,
    bern_corner_pushforward,
    bern_mixture_pushforward,
    corner_reduce,
    outcome_divergence,
    two_point_pushforward,
)
from .renyi import r_alpha, renyi_divergence, renyi_divergence_log
from .solver import SolverConfig, exact_post, brute_force_post_general_support

__all__ = ["CheckResult", "run_checks", "check_names"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    informational: bool = False


def _result(name, passed, detail, informational=False) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail,
                       informational=informational)


def _dk_pairs(max_product: int):
    return [(d, k) for d in range(1, max_product + 1)
            for k in range(1, max_product + 1) if d * k <= max_product]


def _two_point_corners(d: int, c: float, p: float):
    n = 1 << d
    pa = np.zeros(n)
    pa[0], pa[-1] = p, 1.0 - p
    qa = np.zeros(n)
    qa[0], qa[-1] = 1.0 - p, p
    return CornerDist.from_probs(d, c, pa), CornerDist.from_probs(d, c, qa)


def check_hamming_vs_full(seed: int) -> CheckResult:
    """Hamming-compressed two-point divergence vs full outcome enumeration."""
    worst = 0.0
    count = 0
    for (d, k) in _dk_pairs(12):
        for c in (0.01, 0.1, 0.3):
            for p in (0.05, 0.2, 0.35, 0.5):
                for alpha in (2.0, 5.0, 50.0):
                    params = AmpParams(c=c, alpha=alpha, eps=1.0, d=d, k=k)
                    hP, hQ = two_point_pushforward(p, params)
                    h = outcome_divergence(hP, hQ, alpha)
                    P, Q = _two_point_corners(d, c, p)
                    f = outcome_divergence(
                        bern_corner_pushforward(P, k),
                        bern_corner_pushforward(Q, k),
                        alpha,
                    )
                    worst = max(worst, abs(h - f) / max(abs(f), 1e-12))
                    count += 1
    ok = worst <= 1e-10
    return _result(
        "hamming-vs-full", ok,
        f"max relative gap {worst:.3e} over {count} (d,k,c,p,alpha) points "
        f"(tolerance 1e-10)",
    )


def check_binary_anchors(seed: int) -> CheckResult:
    """Spot values of r_alpha and the corner-collapse constant K."""
    v1 = r_alpha(0.01, 50.0)
    v2 = r_alpha(0.49, 50.0)
    ok1 = abs(v1 - 4.59) <= 0.01
    ok2 = abs(v2 - 0.026) <= 0.001
    worst_k = 0.0
    ok3 = True
    for c in (0.01, 0.1, 0.3):
        for d in range(1, 501):
            expo = 2.0 * (0.5 - c) ** 2 * d
            if expo > 20.0:
                K = math.exp(-expo)
                worst_k = max(worst_k, K)
                ok3 &= K < 1e-8
    ok = ok1 and ok2 and ok3
    return _result(
        "binary-anchors", ok,
        f"r_50(0.01)={v1:.6f} (want 4.59+-0.01), r_50(0.49)={v2:.6f} "
        f"(want 0.026+-0.001), max K past threshold {worst_k:.2e} (< 1e-8)",
    )


def check_hoeffding_bracket(seed: int) -> CheckResult:
    """Majority-vote bracket contains the two-point divergence."""
    worst_lo = math.inf
    worst_hi = math.inf
    ok = True
    params_d = 20
    for alpha in (5.0, 50.0):
        for p in np.arange(0.05, 0.46, 0.05):
            params = AmpParams(c=0.1, alpha=alpha, eps=1.0, d=params_d, k=1)
            br = hoeffding_bracket(params, float(p))
            mid = outcome_divergence(*two_point_pushforward(float(p), params),
                                     alpha)
            ok &= br.lower <= mid + 1e-9 and mid <= br.upper + 1e-9
            worst_lo = min(worst_lo, mid - br.lower)
            worst_hi = min(worst_hi, br.upper - mid)
    return _result(
        "hoeffding-bracket", ok,
        f"min slack lower {worst_lo:.3e}, upper {worst_hi:.3e} "
        f"(both must be >= -1e-9) at d={params_d}",
    )


def check_binary_shape(seed: int) -> CheckResult:
    """Symmetry, zero at 1/2, midpoint convexity, monotonicity of r_alpha."""
    ok = True
    notes = []
    for alpha in (2.0, 5.0, 50.0):
        if r_alpha(0.5, alpha) != 0.0:
            ok = False
            notes.append(f"r_{alpha:g}(1/2) != 0")
        ps = np.linspace(0.02, 0.98, 49)
        sym = max(abs(r_alpha(float(p), alpha) - r_alpha(float(1.0 - p), alpha))
                  for p in ps)
        if sym > 1e-12:
            ok = False
            notes.append(f"symmetry gap {sym:.2e} at alpha={alpha:g}")
        grid = np.linspace(0.01, 0.5, 100)
        vals = [r_alpha(float(p), alpha) for p in grid]
        for i in range(len(grid) - 2):
            mid_excess = (r_alpha(float(0.5 * (grid[i] + grid[i + 2])), alpha)
                          - 0.5 * (vals[i] + vals[i + 2]))
            if mid_excess > 1e-12:
                ok = False
                notes.append(f"convexity violated by {mid_excess:.2e}")
                break
        mono = all(vals[i] >= vals[i + 1] - 1e-12 for i in range(len(vals) - 1))
        if not mono:
            ok = False
            notes.append(f"not decreasing on (0,1/2] at alpha={alpha:g}")
    return _result(
        "binary-shape", ok,
        "; ".join(notes) if notes else
        "symmetry <= 1e-12, r(1/2)=0, midpoint-convex, decreasing on (0,1/2]",
    )


def _sandwich_grid(cs, alphas, dks, n_eps) -> tuple:
    worst_low = 0.0
    worst_high = 0.0
    worst_mono = 0.0
    count = 0
    for c in cs:
        for alpha in alphas:
            for (d, k) in dks:
                prev = -math.inf
                for eps in np.logspace(math.log10(0.05), math.log10(5.0), n_eps):
                    params = AmpParams(c=c, alpha=alpha, eps=float(eps), d=d, k=k)
                    val = exact_post(params).value
                    lb = two_point_lower(params)
                    ub = min(params.eps, asymptote_upper(params))
                    worst_low = max(worst_low, lb - val)
                    worst_high = max(worst_high, val - ub)
                    worst_mono = max(worst_mono, prev - val)
                    prev = val
                    count += 1
    return worst_low, worst_high, worst_mono, count


def check_solver_sandwich_fast(seed: int) -> CheckResult:
    lo, hi, mono, count = _sandwich_grid(
        (0.1,), (5.0, 50.0), ((1, 1), (2, 1)), 6
    )
    ok = lo <= 1e-3 and hi <= 1e-3 and mono <= 1e-3
    return _result(
        "solver-sandwich", ok,
        f"{count} solves: max lower-bound deficit {lo:.2e}, upper-bound "
        f"excess {hi:.2e}, monotonicity violation {mono:.2e} (all <= 1e-3)",
    )


def check_solver_sandwich_full(seed: int) -> CheckResult:
    lo, hi, mono, count = _sandwich_grid(
        (0.01, 0.1, 0.3), (5.0, 50.0), ((1, 1), (1, 2), (2, 1), (2, 2)), 20
    )
    ok = lo <= 1e-3 and hi <= 1e-3 and mono <= 1e-3
    return _result(
        "solver-sandwich", ok,
        f"{count} solves: max lower-bound deficit {lo:.2e}, upper-bound "
        f"excess {hi:.2e}, monotonicity violation {mono:.2e} (all <= 1e-3)",
    )


def check_regime_ordering(seed: int) -> CheckResult:
    """Regime labels along an eps sweep run I, then II, then III."""
    ok = True
    bad = ""
    order = {"I": 0, "II": 1, "III": 2}
    for c in (0.01, 0.1, 0.3):
        for alpha in (5.0, 50.0):
            for d in (1, 2, 3, 5, 15):
                seq = []
                for eps in np.logspace(-2, 2, 60):
                    params = AmpParams(c=c, alpha=alpha, eps=float(eps), d=d, k=1)
                    seq.append(classify_regime(
                        params.eps, two_point_lower(params),
                        asymptote_upper(params),
                    ))
                codes = [order.get(s, -1) for s in seq]
                if min(codes) < 0 or any(a > b for a, b in zip(codes, codes[1:])):
                    ok = False
                    bad = f"c={c} alpha={alpha:g} d={d}: {'-'.join(seq)}"
    return _result(
        "regime-ordering", ok,
        bad if bad else "30 sweeps, each a run of I then II then III",
    )


def check_pushforward_dpi(seed: int) -> CheckResult:
    """Sampling never increases the divergence between corner mixtures."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, 8)))
    worst = -math.inf
    trials = 500
    for _ in range(trials):
        d = int(rng.integers(1, 3))
        k = int(rng.integers(1, 3))
        c = float(rng.uniform(0.01, 0.4))
        alpha = float(rng.choice([2.0, 5.0, 50.0]))
        n = 1 << d
        P = CornerDist.from_probs(d, c, rng.dirichlet(np.ones(n)))
        Q = CornerDist.from_probs(d, c, rng.dirichlet(np.ones(n)))
        base = renyi_divergence_log(P.log_masses, Q.log_masses, alpha)
        pushed = outcome_divergence(
            bern_corner_pushforward(P, k), bern_corner_pushforward(Q, k), alpha
        )
        worst = max(worst, pushed - base)
    ok = worst <= 1e-9
    return _result(
        "pushforward-dpi", ok,
        f"max pushed-minus-input divergence {worst:.3e} over {trials} "
        f"random corner pairs (tolerance 1e-9)",
    )


def check_corner_projection(seed: int) -> list:
    """Corner projection: exact joint at k=1, divergence contraction always.

    Also reports, informationally, how far the shared-draw projection sits
    from the independent-rounds joint at k=2; the projection redraws one
    corner for all rounds, so this deviation is structural, not a bug.
    """
    rng = np.random.default_rng(np.random.SeedSequence((seed, 7)))
    trials = 500
    worst_push1 = 0.0
    worst_div = -math.inf
    worst_push2 = 0.0
    for _ in range(trials):
        d = int(rng.integers(1, 3))
        c = float(rng.uniform(0.01, 0.4))
        alpha = float(rng.choice([2.0, 5.0, 50.0]))
        m = int(rng.integers(1, 5))
        points = rng.uniform(c, 1.0 - c, size=(m, d))
        mp = rng.dirichlet(np.ones(m))
        mq = rng.dirichlet(np.ones(m))
        params = AmpParams(c=c, alpha=alpha, eps=1.0, d=d, k=1)
        redP = corner_reduce(points, mp, params)
        redQ = corner_reduce(points, mq, params)

        base = renyi_divergence(mp, mq, alpha)
        contracted = renyi_divergence_log(redP.log_masses, redQ.log_masses, alpha)
        worst_div = max(worst_div, contracted - base)

        mix1 = bern_mixture_pushforward(points, mp, 1)
        red1 = bern_corner_pushforward(redP, 1)
        worst_push1 = max(worst_push1, float(np.max(np.abs(
            np.exp(mix1.log_masses) - np.exp(red1.log_masses)))))

        mix2 = bern_mixture_pushforward(points, mp, 2)
        red2 = bern_corner_pushforward(redP, 2)
        worst_push2 = max(worst_push2, float(np.max(np.abs(
            np.exp(mix2.log_masses) - np.exp(red2.log_masses)))))
    ok = worst_push1 <= 1e-12 and worst_div <= 1e-9
    return [
        _result(
            "corner-projection", ok,
            f"k=1 joint preserved to {worst_push1:.3e} (<= 1e-12); "
            f"divergence contraction slack {worst_div:.3e} (<= 1e-9) "
            f"over {trials} random supports",
        ),
        _result(
            "corner-projection-joint-k2", True,
            f"shared-draw projection deviates from the independent-rounds "
            f"joint by up to {worst_push2:.3f} at k=2 (structural; the k=1 "
            f"joint and all divergence contractions above are exact)",
            informational=True,
        ),
    ]


def check_asymptote_convergence(seed: int) -> CheckResult:
    """Solver reaches the large-budget ceiling d*k*r_alpha(c)."""
    worst = 0.0
    for k in (1, 2, 4):
        params = AmpParams(c=0.1, alpha=50.0, eps=1e6, d=1, k=k)
        worst = max(worst, abs(exact_post(params).value
                               - asymptote_upper(params)))
    ok = worst <= 1e-3
    return _result(
        "asymptote-convergence", ok,
        f"max |exact - ceiling| {worst:.3e} at eps=1e6, k in (1,2,4) "
        f"(tolerance 1e-3)",
    )


def check_general_support_oracle(seed: int) -> CheckResult:
    """Randomized general-support search never beats the corner solver."""
    worst = -math.inf
    count = 0
    cfg = SolverConfig(seed=seed)
    for k in (1, 2):
        for c in (0.1, 0.3):
            for alpha in (2.0, 50.0):
                for eps in (0.5, 2.0):
                    params = AmpParams(c=c, alpha=alpha, eps=eps, d=1, k=k)
                    bf = brute_force_post_general_support(
                        params, support_steps=9, cfg=cfg
                    )
                    ex = exact_post(params, cfg).value
                    worst = max(worst, bf - ex)
                    count += 1
    ok = worst <= 1e-6
    return _result(
        "general-support-oracle", ok,
        f"max general-support excess over corner solver {worst:.3e} "
        f"across {count} configurations (tolerance 1e-6)",
    )


def check_saturation_point(seed: int) -> CheckResult:
    """Amplified value far below the budget at a known saturated setting."""
    params = AmpParams(c=0.3, alpha=50.0, eps=5.0, d=1, k=1)
    val = exact_post(params).value
    ceiling = r_alpha(0.3, 50.0)
    ok = val <= 0.841 + 1e-3
    return _result(
        "saturation-point", ok,
        f"exact(eps=5, c=0.3, alpha=50) = {val:.6f} <= 0.841 + 1e-3 "
        f"(ceiling r_50(0.3) = {ceiling:.6f}, far below eps = 5)",
    )


def check_conjecture_gap(seed: int) -> CheckResult:
    """Reported gap between the solver maximum and the two-point value.

    Informational: a gap above 1e-3 would mean the symmetric two-point
    pair is not the worst case somewhere, a finding to surface, not an
    error in this artifact.
    """
    worst = -math.inf
    at = ""
    for c in (0.01, 0.1, 0.3):
        for alpha in (5.0, 50.0):
            for eps in np.logspace(math.log10(0.05), math.log10(5.0), 20):
                params = AmpParams(c=c, alpha=alpha, eps=float(eps), d=1, k=1)
                gap = exact_post(params).value - two_point_lower(params)
                if gap > worst:
                    worst = gap
                    at = f"c={c} alpha={alpha:g} eps={eps:.4f}"
    flag = "" if worst <= 1e-3 else " EXCEEDS 1e-3: two-point pair beaten"
    return _result(
        "conjecture-gap", True,
        f"max(exact - two_point_lower) = {worst:.3e} at {at} over the "
        f"d=1, k=1 grid{flag}",
        informational=True,
    )


_FAST = (
    check_hamming_vs_full,
    check_binary_anchors,
    check_hoeffding_bracket,
    check_binary_shape,
    check_solver_sandwich_fast,
    check_regime_ordering,
)

_FULL = (
    check_hamming_vs_full,
    check_binary_anchors,
    check_hoeffding_bracket,
    check_binary_shape,
    check_solver_sandwich_full,
    check_regime_ordering,
    check_pushforward_dpi,
    check_corner_projection,
    check_asymptote_convergence,
    check_general_support_oracle,
    check_saturation_point,
    check_conjecture_gap,
)


def check_names(level: str = "fast") -> list:
    table = _FAST if level == "fast" else _FULL
    return [fn.__name__.replace("check_", "").replace("_", "-") for fn in table]


def run_checks(level: str = "fast", seed: int = 0, emit=None) -> list:
    """Run the named checks for a level; returns the flat result list.

    emit, when given, is called with each CheckResult as it completes so
    callers can stream progress.
    """
    if level not in ("fast", "full"):
        raise ValueError(f"level must be fast or full, got {level!r}")
    table = _FAST if level == "fast" else _FULL
    results = []
    for fn in table:
        out = fn(seed)
        for res in (out if isinstance(out, list) else [out]):
            results.append(res)
            if emit is not None:
                emit(res)
    return results
