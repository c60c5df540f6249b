"""Tests for the constrained worst-pair maximization.

The frozen optimum at (c=0.1, alpha=50, eps=1, d=k=1) agrees with the
two-point supremum computed by independent high-precision root finding:
the optimizer must land on it from the full corner-pair search space.
"""

import numpy as np
import pytest

from bernamp import (
    AmpParams,
    CapacityError,
    CornerDist,
    SolverConfig,
    UsageError,
    asymptote_upper,
    bern_corner_pushforward,
    brute_force_post_general_support,
    conjecture_gap,
    constraint_eval,
    exact_post,
    objective_eval,
    outcome_divergence,
    ppi_upper,
    renyi_divergence_log,
    two_point_lower,
)

EXACT_EPS1_D1K1 = 0.7730714246441413  # true two-point supremum


def params(c=0.1, alpha=50.0, eps=1.0, d=1, k=1):
    return AmpParams(c=c, alpha=alpha, eps=eps, d=d, k=k)


def test_solver_config_validation():
    cfg = SolverConfig()
    assert cfg.strategy == "both"
    with pytest.raises(UsageError):
        SolverConfig(strategy="newton")
    with pytest.raises(UsageError):
        SolverConfig(grid_steps=1)
    with pytest.raises(UsageError):
        SolverConfig(restarts=0)
    with pytest.raises(UsageError):
        SolverConfig(feas_tol=0.0)


def test_objective_matches_pushforward_divergence():
    rng = np.random.default_rng(31)
    for d, k in [(1, 3), (2, 2)]:
        pp = params(d=d, k=k)
        pm = rng.dirichlet(np.ones(1 << d))
        qm = rng.dirichlet(np.ones(1 << d))
        P = CornerDist.from_probs(d=d, c=pp.c, probs=pm)
        Q = CornerDist.from_probs(d=d, c=pp.c, probs=qm)
        via_full = outcome_divergence(
            bern_corner_pushforward(P, k), bern_corner_pushforward(Q, k), pp.alpha
        )
        assert objective_eval(P, Q, pp) == pytest.approx(via_full, abs=1e-12)


def test_objective_zero_on_identical_pair():
    pp = params(d=2, k=2)
    P = CornerDist.two_point(d=2, c=0.1, p=0.3)
    assert objective_eval(P, P, pp) == 0.0


def test_objective_rejects_mismatched_pair():
    pp = params(d=2)
    P = CornerDist.two_point(d=2, c=0.1, p=0.3)
    Q = CornerDist.two_point(d=1, c=0.1, p=0.3)
    with pytest.raises(UsageError):
        objective_eval(P, Q, pp)
    R = CornerDist.two_point(d=2, c=0.2, p=0.3)
    with pytest.raises(UsageError):
        objective_eval(P, R, pp)


def test_constraint_eval_both_directions():
    P = CornerDist.two_point(d=1, c=0.1, p=0.3)
    Q = CornerDist.two_point(d=1, c=0.1, p=0.7)
    fwd, bwd = constraint_eval(P, Q, 50.0)
    assert fwd == pytest.approx(
        renyi_divergence_log(P.log_masses, Q.log_masses, 50.0), abs=1e-15
    )
    assert bwd == pytest.approx(
        renyi_divergence_log(Q.log_masses, P.log_masses, 50.0), abs=1e-15
    )


def test_constraint_eval_blows_up_on_missing_support():
    P = CornerDist.point_mass(d=1, c=0.1, index=0)
    Q = CornerDist.point_mass(d=1, c=0.1, index=1)
    fwd, bwd = constraint_eval(P, Q, 50.0)
    assert fwd == np.inf and bwd == np.inf


def test_exact_post_zero_budget():
    r = exact_post(params(eps=0.0))
    assert r.value == 0.0
    assert r.status == "converged"


def test_exact_post_frozen_optimum():
    r = exact_post(params(eps=1.0))
    assert r.value == pytest.approx(EXACT_EPS1_D1K1, abs=5e-13)
    assert r.status == "converged"
    assert max(r.feasibility_residuals) <= 1e-9


def test_exact_post_witness_reproduces_value():
    pp = params(eps=1.0, d=2, k=1)
    r = exact_post(pp)
    assert objective_eval(r.argmax_p, r.argmax_q, pp) == pytest.approx(
        r.value, abs=1e-10
    )
    fwd, bwd = constraint_eval(r.argmax_p, r.argmax_q, pp.alpha)
    assert fwd <= pp.eps + 1e-9
    assert bwd <= pp.eps + 1e-9


def test_exact_post_saturates_at_sentinel():
    for k in (1, 2):
        pp = params(eps=1e6, k=k)
        r = exact_post(pp)
        assert r.value == pytest.approx(asymptote_upper(pp), abs=1e-9)


def test_exact_post_sandwiched_by_bounds():
    for d, k, eps in [(1, 2, 0.5), (2, 1, 2.0)]:
        pp = params(eps=eps, d=d, k=k)
        r = exact_post(pp)
        assert r.value >= two_point_lower(pp) - 1e-12
        assert r.value <= min(ppi_upper(pp), asymptote_upper(pp)) + 1e-9


def test_exact_post_deterministic_under_seed():
    pp = params(eps=0.7, d=1, k=2)
    a = exact_post(pp, SolverConfig(seed=123))
    b = exact_post(pp, SolverConfig(seed=123))
    assert a.value == b.value
    assert np.array_equal(a.argmax_p.log_masses, b.argmax_p.log_masses)
    assert np.array_equal(a.argmax_q.log_masses, b.argmax_q.log_masses)
    assert a.iterations == b.iterations


def test_exact_post_monotone_in_budget():
    vals = [exact_post(params(eps=e)).value for e in (0.2, 0.5, 1.0, 2.0, 4.0)]
    for lo, hi in zip(vals, vals[1:]):
        assert hi >= lo - 1e-6


def test_exact_post_grid_strategy_single_coordinate_only():
    r = exact_post(params(eps=1.0), SolverConfig(strategy="dense_grid"))
    assert r.value == pytest.approx(EXACT_EPS1_D1K1, abs=1e-9)
    assert r.status == "grid_only"
    assert r.strategy_used == "dense_grid"
    with pytest.raises(UsageError):
        exact_post(params(eps=1.0, d=2), SolverConfig(strategy="dense_grid"))


def test_exact_post_capacity_guards():
    with pytest.raises(CapacityError):
        exact_post(params(d=11))
    with pytest.raises(CapacityError):
        exact_post(params(d=9, k=3))  # dk = 27 > 24
    with pytest.raises(UsageError):
        exact_post(params(c=0.0))


def test_brute_force_guards():
    pp = params()
    with pytest.raises(UsageError):
        brute_force_post_general_support(pp, 1)
    with pytest.raises(CapacityError):
        brute_force_post_general_support(pp, 10)
    with pytest.raises(CapacityError):
        brute_force_post_general_support(params(d=2), 5)
    with pytest.raises(CapacityError):
        brute_force_post_general_support(params(k=3), 5)


def test_brute_force_zero_budget():
    assert brute_force_post_general_support(params(eps=0.0), 5, n_candidates=50) == 0.0


def test_brute_force_never_beats_corner_search():
    pp = params(c=0.3, alpha=2.0, eps=0.5, d=1, k=2)
    cfg = SolverConfig(seed=7)
    bf = brute_force_post_general_support(pp, 5, cfg, n_candidates=800)
    ex = exact_post(pp, cfg).value
    assert bf <= ex + 1e-6
    # and the interior search does find the scale of the optimum
    assert bf >= 0.5 * ex


def test_conjecture_gap_nonnegative_and_tiny_here():
    g = conjecture_gap(params(eps=1.0))
    assert g >= -1e-12
    assert g <= 1e-6
