"""Search for the worst-case amplified divergence over corner supports.

The program: maximize R_alpha(push(P), push(Q)) over pairs of corner
distributions subject to R_alpha(P, Q) <= eps and R_alpha(Q, P) <= eps,
where push is the k-round sampling pushforward.  The exponentiated
objective is convex in the pair of mass vectors and both constraints are
convex, so this is a maximization of a convex function over a convex set:
maxima sit on the feasible boundary and local search can stall, which is
why the solver layers a dense grid (d = 1), multi-start penalty ascent,
and line polish toward vertex pairs, then merges deterministically.

Internally outcomes are compressed by their per-coordinate success
counts: for corner-supported mixtures the per-outcome probability
depends on the outcome only through how many of the k rounds hit 1 in
each coordinate, shrinking 2^(d*k) outcomes to (k+1)^d classes with
binomial multiplicities.  The d = 1 case is the usual Hamming-weight
compression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .bounds import two_point_lower
from .errors import CapacityError, UsageError
from .process import (
    AmpParams,
    CornerDist,
    ENUMERATION_GUARD_DK,
    log_binomial_table,
    popcount_table,
)
from .renyi import _log_terms, log_sum_exp, r_alpha_inverse, renyi_divergence_log

__all__ = [
    "SolverConfig",
    "OptResult",
    "exact_post",
    "objective_eval",
    "constraint_eval",
    "brute_force_post_general_support",
    "conjecture_gap",
]

_STRATEGIES = ("dense_grid", "multistart_ascent", "both")

# Softplus parameterization bounds; softplus(-40) ~ 4e-18 keeps ascent
# iterates strictly positive and every gradient exponent finite.
_U_LO, _U_HI = -40.0, 40.0

# Exponential line-polish range: s = 750 scales off-target masses by
# e^-750, far below anything a linear parameter could represent, which
# is what lets polished iterates approach vertex pairs closely enough
# for large-eps asymptote checks.
_S_MAX = 750.0

_D_GUARD = 10


@dataclass(frozen=True)
class SolverConfig:
    """Search budget and tolerances for exact_post.

    strategy: dense_grid scans the two free variables (d = 1 only),
    multistart_ascent runs penalty ascent from random and structured
    seeds, both runs whichever of the two apply.  feas_tol is slack on
    the log-domain constraint values, value_tol the comparison slack on
    reported values.
    """

    strategy: str = "both"
    grid_steps: int = 400
    restarts: int = 64
    max_iters: int = 2000
    feas_tol: float = 1e-9
    value_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in _STRATEGIES:
            raise UsageError(
                f"strategy must be one of {_STRATEGIES}, got {self.strategy!r}"
            )
        if int(self.grid_steps) < 2:
            raise UsageError(f"grid_steps must be >= 2, got {self.grid_steps!r}")
        if int(self.restarts) < 1:
            raise UsageError(f"restarts must be >= 1, got {self.restarts!r}")
        if int(self.max_iters) < 1:
            raise UsageError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if not (self.feas_tol > 0.0 and self.value_tol > 0.0):
            raise UsageError("feas_tol and value_tol must be > 0")
        object.__setattr__(self, "grid_steps", int(self.grid_steps))
        object.__setattr__(self, "restarts", int(self.restarts))
        object.__setattr__(self, "max_iters", int(self.max_iters))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class OptResult:
    """Solver outcome: value, witness pair, and bookkeeping.

    feasibility_residuals are the two log-domain constraint slacks
    G_i - (alpha - 1) * eps evaluated at the witness; <= feas_tol means
    feasible.  value is reproducible from the witness pair through the
    pushforward plus divergence route to 1e-10.
    """

    value: float
    argmax_p: CornerDist
    argmax_q: CornerDist
    feasibility_residuals: tuple
    status: str
    iterations: int
    strategy_used: str


def _lse_axis(a: np.ndarray, axis: int) -> np.ndarray:
    m = np.max(a, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    s = np.sum(np.exp(a - m), axis=axis)
    with np.errstate(divide="ignore"):
        return np.log(s) + np.squeeze(m, axis=axis)


class _Engine:
    """Objective evaluator over compressed outcome classes.

    logM[i, c] is the per-outcome log probability of class c under
    mixture component i; lmult[c] is the log number of outcomes in the
    class.  Row-batched variants operate on (R, n) stacks of log-mass
    vectors.  Gradients are with respect to the component masses and are
    finite whenever every mass exceeds ~e^-700 (the ascent's softplus
    floor guarantees that).
    """

    def __init__(self, logM: np.ndarray, lmult: np.ndarray, alpha: float):
        self.logM = logM
        self.lmult = lmult
        self.alpha = alpha
        self.n = logM.shape[0]

    def push(self, lx: np.ndarray) -> np.ndarray:
        return _lse_axis(lx[:, None] + self.logM, axis=0)

    def logsum(self, lx: np.ndarray, ly: np.ndarray) -> float:
        a = self.alpha
        lX = self.push(lx)
        lY = self.push(ly)
        return float(log_sum_exp(self.lmult + a * lX + (1.0 - a) * lY))

    def value(self, lx: np.ndarray, ly: np.ndarray) -> float:
        if np.array_equal(lx, ly):
            return 0.0
        return max(0.0, self.logsum(lx, ly) / (self.alpha - 1.0))

    def push_rows(self, LX: np.ndarray) -> np.ndarray:
        return _lse_axis(LX[:, :, None] + self.logM[None, :, :], axis=1)

    def logsum_rows(self, LP: np.ndarray, LQ: np.ndarray) -> np.ndarray:
        a = self.alpha
        lX = self.push_rows(LP)
        lY = self.push_rows(LQ)
        return _lse_axis(self.lmult[None, :] + a * lX + (1.0 - a) * lY, axis=1)

    def logsum_grad_rows(self, LP: np.ndarray, LQ: np.ndarray):
        a = self.alpha
        lX = self.push_rows(LP)
        lY = self.push_rows(LQ)
        t = self.lmult[None, :] + a * lX + (1.0 - a) * lY
        S = _lse_axis(t, axis=1)
        w = np.exp(t - S[:, None])
        gx = a * np.einsum("rnc,rc->rn",
                           np.exp(self.logM[None, :, :] - lX[:, None, :]), w)
        gy = (1.0 - a) * np.einsum("rnc,rc->rn",
                                   np.exp(self.logM[None, :, :] - lY[:, None, :]), w)
        return S, gx, gy


def _corner_engine(d: int, k: int, c: float, alpha: float) -> _Engine:
    """Compressed-class engine for the 2^d corner mixture components."""
    lc, l1c = math.log(c), math.log1p(-c)
    counts = np.indices((k + 1,) * d).reshape(d, -1)  # (d, (k+1)^d)
    lbk = log_binomial_table(k)
    lmult = lbk[counts].sum(axis=0).astype(np.float64)
    n = 1 << d
    bits = ((np.arange(n)[:, None] >> np.arange(d)[None, :]) & 1).astype(np.int64)
    # success count matching the c side: coordinate at c contributes its
    # hit count m, coordinate at 1-c contributes k - m
    total = counts.sum(axis=0)
    nc = total[None, :] + bits @ (k - 2 * counts)
    logM = nc * lc + (d * k - nc) * l1c
    return _Engine(logM.astype(np.float64), lmult, alpha)


def _support_engine(xs: np.ndarray, k: int, alpha: float) -> _Engine:
    """Hamming-weight engine for general d = 1 support points xs."""
    j = np.arange(k + 1, dtype=np.float64)
    lx = np.log(xs)[:, None]
    l1x = np.log1p(-xs)[:, None]
    logM = j[None, :] * lx + (k - j)[None, :] * l1x
    lmult = log_binomial_table(k)
    return _Engine(logM, lmult, alpha)


def _constraint_logsum(lx, ly, alpha: float) -> float:
    return float(log_sum_exp(_log_terms(lx, ly, alpha)))


def _g_rows(la: np.ndarray, lb: np.ndarray, alpha: float,
            guard: bool = True) -> np.ndarray:
    """Row-wise constraint logsums with zero-mass conventions.

    guard=False skips the zero-mass handling; callers may use it only
    when every mass is strictly positive (the ascent's softplus floor).
    """
    if not guard:
        return _lse_axis(alpha * la + (1.0 - alpha) * lb, axis=1)
    with np.errstate(invalid="ignore"):
        t = alpha * la + (1.0 - alpha) * lb
    t = np.where(np.isneginf(la), -np.inf, t)
    t = np.where(np.isneginf(lb) & ~np.isneginf(la), np.inf, t)
    return _lse_axis(t, axis=1)


def _mix_rows(l: np.ndarray, t: np.ndarray, lu: float) -> np.ndarray:
    """Row-wise log-domain mix (1 - t) * masses + t * uniform."""
    t = t[:, None]
    with np.errstate(divide="ignore"):
        return np.logaddexp(np.log1p(-np.minimum(t, 1.0)) + l,
                            np.log(t) + lu)


def _shrink_rows(LP: np.ndarray, LQ: np.ndarray, cap: float, alpha: float,
                 iters: int = 80):
    """Pull each row pair onto the feasible side along its line to uniform.

    Both constraint exponentials are convex along the mixing line and the
    uniform pair is strictly feasible for cap > 0, so per-row bisection
    of the smallest feasible mix weight is exact.
    """
    R, n = LP.shape
    lu = -math.log(n)

    def feas(A, B):
        return (_g_rows(A, B, alpha) <= cap) & (_g_rows(B, A, alpha) <= cap)

    t_hi = np.ones(R)
    t_lo = np.zeros(R)
    need = ~feas(LP, LQ)
    t_hi[~need] = 0.0
    for _ in range(iters):
        if not np.any(need):
            break
        mid = 0.5 * (t_lo + t_hi)
        sub = np.where(need)[0]
        ok = feas(_mix_rows(LP[sub], mid[sub], lu), _mix_rows(LQ[sub], mid[sub], lu))
        t_hi[sub[ok]] = mid[sub[ok]]
        t_lo[sub[~ok]] = mid[sub[~ok]]
    moved = t_hi > 0.0
    if np.any(moved):
        LP = LP.copy()
        LQ = LQ.copy()
        LP[moved] = _mix_rows(LP[moved], t_hi[moved], lu)
        LQ[moved] = _mix_rows(LQ[moved], t_hi[moved], lu)
    return LP, LQ


def _softmass_rows(U: np.ndarray):
    sp = np.logaddexp(0.0, U)  # softplus
    Z = sp.sum(axis=1, keepdims=True)
    x = sp / Z
    lx = np.log(sp) - np.log(Z)
    sig = np.exp(-np.logaddexp(0.0, -U))  # sigmoid
    return lx, x, sig, Z


def _softmass_logs(U: np.ndarray) -> np.ndarray:
    sp = np.logaddexp(0.0, U)
    return np.log(sp) - np.log(sp.sum(axis=1, keepdims=True))


def _mass_to_u(masses: np.ndarray) -> np.ndarray:
    # softplus(u) proportional to the mass: u = log(expm1(10 * mass))
    m = np.clip(masses, 1e-16, None) * 10.0
    return np.clip(np.log(np.expm1(m)), _U_LO, _U_HI)


def _phi_rows(UP, UQ, engine: _Engine, cap: float, mu: float, want_grad: bool):
    alpha = engine.alpha
    if not want_grad:
        lx = _softmass_logs(UP)
        ly = _softmass_logs(UQ)
        v1 = np.maximum(0.0, _g_rows(lx, ly, alpha, guard=False) - cap)
        v2 = np.maximum(0.0, _g_rows(ly, lx, alpha, guard=False) - cap)
        return engine.logsum_rows(lx, ly) - mu * (v1 * v1 + v2 * v2)
    lx, x, sigp, Zp = _softmass_rows(UP)
    ly, y, sigq, Zq = _softmass_rows(UQ)
    G1 = _g_rows(lx, ly, alpha, guard=False)
    G2 = _g_rows(ly, lx, alpha, guard=False)
    v1 = np.maximum(0.0, G1 - cap)
    v2 = np.maximum(0.0, G2 - cap)
    pen = mu * (v1 * v1 + v2 * v2)
    S, gx, gy = engine.logsum_grad_rows(lx, ly)
    phi = S - pen
    # constraint gradients; each exponent is a term minus the row logsum
    # minus one log mass, so it is bounded by -min(log mass)
    e1 = np.exp((alpha - 1.0) * lx + (1.0 - alpha) * ly - G1[:, None])
    e2 = np.exp(alpha * (lx - ly) - G1[:, None])
    f1 = np.exp((alpha - 1.0) * ly + (1.0 - alpha) * lx - G2[:, None])
    f2 = np.exp(alpha * (ly - lx) - G2[:, None])
    c1 = (2.0 * mu * v1)[:, None]
    c2 = (2.0 * mu * v2)[:, None]
    gx = gx - c1 * alpha * e1 - c2 * (1.0 - alpha) * f2
    gy = gy - c1 * (1.0 - alpha) * e2 - c2 * alpha * f1
    # chain through the normalized softplus
    gup = sigp / Zp * (gx - np.sum(x * gx, axis=1, keepdims=True))
    guq = sigq / Zq * (gy - np.sum(y * gy, axis=1, keepdims=True))
    return phi, gup, guq


def _ascend_rows(U0p, U0q, engine: _Engine, cap: float, budget: int):
    """Batched penalty ascent with continuation over all starts at once.

    Basin-level accuracy is enough here: the feasibility snap and the
    vertex-line polish downstream recover the boundary precisely, so the
    exit thresholds are deliberately coarse and each row carries its
    accepted step size between iterations to keep backtracking short.
    Rows stop independently; finished rows are frozen.
    """
    UP, UQ = U0p.copy(), U0q.copy()
    R = UP.shape[0]
    iters_total = 0
    converged = np.ones(R, dtype=bool)
    stages = (1e2, 1e4)
    stage_budget = max(25, budget // len(stages))
    for mu in stages:
        phi, gup, guq = _phi_rows(UP, UQ, engine, cap, mu, True)
        alive = np.ones(R, dtype=bool)
        small = np.zeros(R, dtype=np.int64)
        steps = np.ones(R)
        stage_best = -np.inf
        stall = 0
        it = 0
        while it < stage_budget and alive.any():
            it += 1
            iters_total += int(alive.sum())
            gn = np.sqrt(np.sum(gup * gup, axis=1) + np.sum(guq * guq, axis=1))
            alive &= gn > 1e-12
            if not alive.any():
                break
            safe_gn = np.where(gn > 0.0, gn, 1.0)[:, None]
            dirp, dirq = gup / safe_gn, guq / safe_gn
            steps = np.minimum(4.0 * steps, 2.0)
            trying = alive.copy()
            accepted = np.zeros(R, dtype=bool)
            new_phi = phi.copy()
            for _ in range(50):
                if not trying.any():
                    break
                cand_p = np.clip(UP + steps[:, None] * dirp, _U_LO, _U_HI)
                cand_q = np.clip(UQ + steps[:, None] * dirq, _U_LO, _U_HI)
                phin = _phi_rows(cand_p, cand_q, engine, cap, mu, False)
                good = trying & (phin > phi + 1e-14)
                if good.any():
                    UP[good] = cand_p[good]
                    UQ[good] = cand_q[good]
                    new_phi[good] = phin[good]
                    accepted |= good
                    trying &= ~good
                steps[trying] *= 0.5
                trying &= steps > 1e-13
            alive &= accepted
            dphi = new_phi - phi
            tiny = dphi < 1e-6 * np.maximum(1.0, np.abs(new_phi))
            small = np.where(alive & tiny, small + 1, 0)
            alive &= small < 2
            if it > 25 and alive.any():
                # a row far below the batch leader cannot win after the
                # downstream snap and polish; stop spending passes on it
                alive &= new_phi > new_phi.max() - 6.0
            # whole-batch stall: when the leader stops moving, remaining
            # rows are crawling the penalty wall at rates far below
            # value_tol; the boundary walk belongs to the polish stage
            cur_best = float(new_phi.max())
            if cur_best > stage_best + 1e-7 * max(1.0, abs(cur_best)):
                stage_best = cur_best
                stall = 0
            else:
                stall += 1
                if stall >= 12:
                    alive[:] = False
            if not alive.any():
                break
            phi, gup, guq = _phi_rows(UP, UQ, engine, cap, mu, True)
        converged &= ~alive  # rows still running when the budget ran out
    return UP, UQ, iters_total, converged


def _snap_feasible(lx, ly, cap: float, alpha: float):
    """Pull one iterate pair onto the feasible side (row helper wrapper)."""
    LP, LQ = _shrink_rows(lx[None, :], ly[None, :], cap, alpha)
    return LP[0], LQ[0]


def _shift_toward_vertex(l: np.ndarray, a: int, s: float) -> np.ndarray:
    """Move masses along (1 - e^-s) of the way to the point mass at a."""
    out = l - s
    rest = l.copy()
    rest[a] = -np.inf
    lrest = float(log_sum_exp(rest))
    w = lrest - s
    out[a] = math.log1p(-math.exp(w)) if w > -745.0 else 0.0
    return out


def _line_polish(lx, ly, engine: _Engine, cap: float, targets, sweeps: int = 6):
    """Greedy improvement along lines toward vertex pairs.

    Both the exponentiated objective and the constraints are convex
    along any segment in mass space, so the feasible stretch of each
    line is an interval and the objective max over it sits at an end;
    bisection finds the far end and the move is kept only if it helps.
    targets is a list of (a, b, move_p, move_q).  56 bisection rounds
    pin s to about 1e-14, far inside every downstream tolerance.
    """
    alpha = engine.alpha
    best = engine.logsum(lx, ly)

    def at(a, b, move_p, move_q, s):
        nlx = _shift_toward_vertex(lx, a, s) if move_p else lx
        nly = _shift_toward_vertex(ly, b, s) if move_q else ly
        return nlx, nly

    def feasible(pair):
        return (_constraint_logsum(pair[0], pair[1], alpha) <= cap
                and _constraint_logsum(pair[1], pair[0], alpha) <= cap)

    for _ in range(sweeps):
        improved = False
        for (a, b, move_p, move_q) in targets:
            if feasible(at(a, b, move_p, move_q, _S_MAX)):
                s_star = _S_MAX
            else:
                lo, hi = 0.0, _S_MAX
                for _ in range(56):
                    mid = 0.5 * (lo + hi)
                    if feasible(at(a, b, move_p, move_q, mid)):
                        lo = mid
                    else:
                        hi = mid
                s_star = lo
            if s_star <= 0.0:
                continue
            cand = at(a, b, move_p, move_q, s_star)
            val = engine.logsum(cand[0], cand[1])
            if val > best + 1e-15:
                lx, ly = cand
                best = val
                improved = True
        if not improved:
            break
    return lx, ly, best


def _polish_targets(n: int, expanded: bool):
    pairs = []
    if n > 16:
        anti = n - 1
        base = [(a, a ^ anti) for a in range(n)]
    else:
        base = [(a, b) for a in range(n) for b in range(n) if a != b]
    for (a, b) in base:
        pairs.append((a, b, True, True))
        if expanded:
            pairs.append((a, b, True, False))
            pairs.append((a, b, False, True))
    return pairs


def _candidate_key(val: float, lx: np.ndarray, ly: np.ndarray):
    return (val, lx.tobytes() + ly.tobytes())


def _normalize_logs(l: np.ndarray) -> np.ndarray:
    return l - float(log_sum_exp(l))


def objective_eval(P: CornerDist, Q: CornerDist, params: AmpParams) -> float:
    """Divergence of the k-round pushforwards of two corner mixtures.

    d = 1 uses the O(k) Hamming form; otherwise the full 2^(d*k) outcome
    enumeration (guarded at d*k <= 24).  The two agree to 1e-12 where
    both apply.
    """
    if P.d != Q.d or P.c != Q.c:
        raise UsageError("objective_eval requires P, Q on the same corner set")
    if P.d != params.d or P.c != params.c:
        raise UsageError("objective_eval requires P, Q matching params (d, c)")
    if np.array_equal(P.log_masses, Q.log_masses):
        return 0.0
    d, k, c, alpha = params.d, params.k, params.c, params.alpha
    lc, l1c = math.log(c), math.log1p(-c)
    if d == 1:
        s = kernels.hamming_renyi_logsum(
            float(P.log_masses[0]), float(P.log_masses[1]),
            float(Q.log_masses[0]), float(Q.log_masses[1]),
            k, lc, l1c, alpha, log_binomial_table(k),
        )
    else:
        if d * k > ENUMERATION_GUARD_DK:
            raise CapacityError(
                f"objective_eval full enumeration requires d*k <= "
                f"{ENUMERATION_GUARD_DK}, got d*k = {d * k}"
            )
        pop = popcount_table(d)
        lX = kernels.corner_pushforward_full(P.log_masses, pop, d, k, lc, l1c)
        lY = kernels.corner_pushforward_full(Q.log_masses, pop, d, k, lc, l1c)
        s = kernels.full_renyi_logsum(lX, lY, alpha)
    return max(0.0, float(s) / (alpha - 1.0))


def constraint_eval(P: CornerDist, Q: CornerDist, a) -> tuple:
    """Both constraint divergences (R(P, Q), R(Q, P)) in nats."""
    if P.d != Q.d or P.c != Q.c:
        raise UsageError("constraint_eval requires P, Q on the same corner set")
    return (
        renyi_divergence_log(P.log_masses, Q.log_masses, a),
        renyi_divergence_log(Q.log_masses, P.log_masses, a),
    )


def _guards(params: AmpParams):
    if params.c <= 0.0:
        raise UsageError("exact_post requires c > 0")
    if params.d > _D_GUARD:
        raise CapacityError(f"exact_post requires d <= {_D_GUARD}, got d = {params.d}")
    if params.d * params.k > ENUMERATION_GUARD_DK:
        raise CapacityError(
            f"exact_post requires d*k <= {ENUMERATION_GUARD_DK}, "
            f"got d*k = {params.d * params.k}"
        )


def _result(params: AmpParams, cfg: SolverConfig, lx, ly, status: str,
            iterations: int, strategy_used: str) -> OptResult:
    alpha = params.alpha
    cap = (alpha - 1.0) * params.eps
    lx = _normalize_logs(lx)
    ly = _normalize_logs(ly)
    P = CornerDist(d=params.d, c=params.c, log_masses=lx)
    Q = CornerDist(d=params.d, c=params.c, log_masses=ly)
    value = objective_eval(P, Q, params)
    g1 = _constraint_logsum(P.log_masses, Q.log_masses, alpha)
    g2 = _constraint_logsum(Q.log_masses, P.log_masses, alpha)
    return OptResult(
        value=value,
        argmax_p=P,
        argmax_q=Q,
        feasibility_residuals=(g1 - cap, g2 - cap),
        status=status,
        iterations=iterations,
        strategy_used=strategy_used,
    )


def exact_post(params: AmpParams, cfg: Optional[SolverConfig] = None) -> OptResult:
    """Worst-case pushforward divergence over budget-feasible corner pairs."""
    if cfg is None:
        cfg = SolverConfig()
    _guards(params)
    d, k, c, alpha, eps = params.d, params.k, params.c, params.alpha, params.eps
    n = 1 << d
    cap = (alpha - 1.0) * eps

    if cfg.strategy == "dense_grid" and d != 1:
        raise UsageError("dense_grid strategy supports d = 1 only")

    run_grid = d == 1 and cfg.strategy in ("dense_grid", "both")
    run_ascent = cfg.strategy in ("multistart_ascent", "both")
    used = "+".join((["dense_grid"] if run_grid else [])
                    + (["multistart_ascent"] if run_ascent else []))

    if eps == 0.0:
        # zero budget forces P = Q, and every feasible pair scores zero
        lu = np.full(n, -math.log(n))
        return _result(params, cfg, lu, lu, "converged", 0, used)

    engine = _corner_engine(d, k, c, alpha)
    candidates = []  # (value_logsum, lx, ly, converged_flag)
    seeds = []

    # matched symmetric two-point pair is always one start
    p_star = r_alpha_inverse(eps, alpha)
    tp = CornerDist.two_point(d, c, p_star)
    lxp = tp.log_masses.copy()
    lyq = lxp[::-1].copy()  # mirrored masses: antipodal corner swap
    seeds.append((lxp, lyq))
    lu = np.full(n, -math.log(n))
    seeds.append((lu.copy(), lu.copy()))

    grid_pair = None
    if run_grid:
        g = np.linspace(0.0, 1.0, cfg.grid_steps)
        with np.errstate(divide="ignore"):
            lg0 = np.log(g)
            lg1 = np.log1p(-g)
        lc, l1c = math.log(c), math.log1p(-c)
        best, bi, bj = kernels.d1_grid_scan(
            lg0, lg1, k, lc, l1c, alpha, cap, log_binomial_table(k)
        )
        if bi >= 0:
            grid_pair = (np.array([lg0[bi], lg1[bi]]), np.array([lg0[bj], lg1[bj]]))
            seeds.append((grid_pair[0].copy(), grid_pair[1].copy()))

    total_iters = 0
    targets = _polish_targets(n, expanded=False)
    n_structured = len(seeds)
    if run_ascent:
        ss = np.random.SeedSequence(cfg.seed)
        children = ss.spawn(cfg.restarts)
        u0p = [_mass_to_u(np.exp(sx)) for sx, _ in seeds]
        u0q = [_mass_to_u(np.exp(sy)) for _, sy in seeds]
        for child in children:
            rng = np.random.default_rng(child)
            u0p.append(rng.uniform(-14.0, 4.0, size=n))
            u0q.append(rng.uniform(-14.0, 4.0, size=n))
        UP, UQ, total_iters, conv_rows = _ascend_rows(
            np.stack(u0p), np.stack(u0q), engine, cap, cfg.max_iters
        )
        LP = _softmass_rows(UP)[0]
        LQ = _softmass_rows(UQ)[0]
        LP, LQ = _shrink_rows(LP, LQ, cap, alpha)
        vals = engine.logsum_rows(LP, LQ)
        for r in range(LP.shape[0]):
            candidates.append((float(vals[r]), LP[r], LQ[r], bool(conv_rows[r])))

    # the raw structured seeds are candidates too: the matched two-point
    # pair in particular carries the known lower bound at full log-domain
    # precision, below the ascent's mass floor
    SX = np.stack([sx for sx, _ in seeds])
    SY = np.stack([sy for _, sy in seeds])
    SX, SY = _shrink_rows(SX, SY, cap, alpha)
    svals = engine.logsum_rows(SX, SY)
    for r in range(SX.shape[0]):
        candidates.append((float(svals[r]), SX[r], SY[r], True))

    # polish the strongest few and every structured candidate; each line
    # move preserves feasibility and only improves the objective
    ranked = sorted(
        range(len(candidates)),
        key=lambda i: _candidate_key(candidates[i][0], candidates[i][1],
                                     candidates[i][2]),
        reverse=True,
    )
    polish_set = set(ranked[:4]) | set(range(len(candidates) - n_structured,
                                             len(candidates)))
    polished = []
    for i in sorted(polish_set):
        s_val, lx, ly, conv = candidates[i]
        lx, ly, s_val = _line_polish(lx, ly, engine, cap, targets, sweeps=3)
        polished.append((s_val, lx, ly, conv))

    best = max(polished, key=lambda cnd: _candidate_key(cnd[0], cnd[1], cnd[2]))
    s_val, lx, ly, conv = best

    # expanded polish on the winner: one-sided moves included
    lx, ly, s_val = _line_polish(lx, ly, engine, cap,
                                 _polish_targets(n, expanded=True))

    if run_ascent:
        status = "converged" if conv else ("grid_only" if run_grid else "max_iters")
    else:
        status = "grid_only"
    return _result(params, cfg, lx, ly, status, total_iters, used)


def brute_force_post_general_support(params: AmpParams, support_steps: int,
                                     cfg: Optional[SolverConfig] = None,
                                     n_candidates: int = 10000) -> float:
    """Search over general (non-corner) supports at small scale.

    d = 1 only, k <= 2, at most 9 evenly spaced support points spanning
    [c, 1-c].  Samples feasible mass pairs, shrinks violators toward the
    uniform pair, polishes the best by ascent and vertex lines, and
    returns the best divergence found.  Serves as the independent oracle
    for corner-support optimality.
    """
    if cfg is None:
        cfg = SolverConfig()
    if params.d != 1:
        raise CapacityError(
            f"brute_force_post_general_support requires d = 1, got d = {params.d}"
        )
    if params.k > 2:
        raise CapacityError(
            f"brute_force_post_general_support requires k <= 2, got k = {params.k}"
        )
    m = int(support_steps)
    if m < 2:
        raise UsageError(f"support_steps must be >= 2, got {support_steps!r}")
    if m > 9:
        raise CapacityError(f"support_steps must be <= 9, got {support_steps!r}")
    if params.c <= 0.0:
        raise UsageError("brute_force_post_general_support requires c > 0")
    if params.eps == 0.0:
        return 0.0

    alpha, k, eps = params.alpha, params.k, params.eps
    cap = (alpha - 1.0) * eps
    xs = np.linspace(params.c, 1.0 - params.c, m)
    engine = _support_engine(xs, k, alpha)

    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    N = int(n_candidates)
    with np.errstate(divide="ignore"):
        lp = np.log(rng.dirichlet(np.ones(m), size=N))
        lq = np.log(rng.dirichlet(np.ones(m), size=N))

    lp, lq = _shrink_rows(lp, lq, cap, alpha, iters=60)
    obj = engine.logsum_rows(lp, lq)

    order = np.argsort(obj)[::-1]
    best_val = float(np.max(obj))

    # structured seed: corner-style two-point pair on the support ends
    p_star = r_alpha_inverse(eps, alpha)
    tp = np.full(m, -np.inf)
    tq = np.full(m, -np.inf)
    tp[0], tp[-1] = math.log(p_star), math.log1p(-p_star)
    tq[0], tq[-1] = math.log1p(-p_star), math.log(p_star)

    u0p = [_mass_to_u(np.exp(tp))] + [_mass_to_u(np.exp(lp[i])) for i in order[:40]]
    u0q = [_mass_to_u(np.exp(tq))] + [_mass_to_u(np.exp(lq[i])) for i in order[:40]]
    UP, UQ, _, _ = _ascend_rows(np.stack(u0p), np.stack(u0q), engine, cap,
                                max(200, cfg.max_iters // 4))
    LPa = _softmass_rows(UP)[0]
    LQa = _softmass_rows(UQ)[0]
    LPa, LQa = _shrink_rows(LPa, LQa, cap, alpha)
    avals = engine.logsum_rows(LPa, LQa)
    best_val = max(best_val, float(np.max(avals)))

    # line polish: expanded targets on the strongest ascent outputs and
    # on the two-point seed (row 0), plain targets on the next tier;
    # every accepted move is feasible and improves the value
    rank_order = [0] + [int(r) for r in np.argsort(avals)[::-1] if r != 0]
    for pos, row in enumerate(rank_order[:16]):
        tgt = _polish_targets(m, expanded=pos < 4)
        _, _, s_val = _line_polish(LPa[row], LQa[row], engine, cap, tgt,
                                   sweeps=3 if pos < 4 else 2)
        if s_val > best_val:
            best_val = s_val
    return max(0.0, best_val / (alpha - 1.0))


def conjecture_gap(params: AmpParams, cfg: Optional[SolverConfig] = None) -> float:
    """exact_post minus the matched two-point lower bound (diagnostic)."""
    if cfg is None:
        cfg = SolverConfig()
    return exact_post(params, cfg).value - two_point_lower(params)
