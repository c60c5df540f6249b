"""Acceptance checks: twelve end-to-end properties with frozen tolerances.

Each check prints one [PASS]/[FAIL] verdict line outside pytest's capture
so the full scorecard is visible in any run.  Runtime budgets are asserted
where a check carries one.

Check 7 asserts that replacing interior support points by marginal-matched
corner mixtures preserves the sampling pushforward for all k <= 2.  That
identity holds only for single-round sampling; for k >= 2 the mixture
correlates rounds and no corner mixture reproduces an interior point's
independent-rounds joint.  The check is asserted as stated and fails with
an explicit counterexample rather than being weakened to pass; the valid
single-round and contraction sub-properties are asserted separately first.
"""

import math
import subprocess
import time

import numpy as np
import pytest

import bernamp.cli as cli
from bernamp import (
    AmpParams,
    CornerDist,
    SolverConfig,
    asymptote_upper,
    bern_corner_pushforward,
    bern_mixture_pushforward,
    brute_force_post_general_support,
    corner_reduce,
    exact_post,
    hoeffding_bracket,
    outcome_divergence,
    r_alpha,
    renyi_divergence_log,
    two_point_lower,
    two_point_pushforward,
)


def report(capsys, ok, label, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    with capsys.disabled():
        print(line, flush=True)
    return line


def dk_pairs(limit=12):
    return [(d, k) for d in range(1, limit + 1) for k in range(1, limit + 1)
            if d * k <= limit]


def test_check_01_weight_compression_matches_enumeration(capsys):
    t0 = time.time()
    worst = 0.0
    n = 0
    for c in (0.01, 0.1, 0.3):
        for p in (0.05, 0.2, 0.35, 0.5):
            for a in (2.0, 5.0, 50.0):
                for d, k in dk_pairs(12):
                    pp = AmpParams(c=c, alpha=a, eps=1.0, d=d, k=k)
                    P, Q = two_point_pushforward(p, pp)
                    hamming = outcome_divergence(P, Q, a)
                    CP = CornerDist.two_point(d=d, c=c, p=p)
                    CQ = CornerDist.two_point(d=d, c=c, p=1.0 - p)
                    full = outcome_divergence(
                        bern_corner_pushforward(CP, k),
                        bern_corner_pushforward(CQ, k), a)
                    worst = max(worst, abs(hamming - full) / max(1.0, abs(full)))
                    n += 1
    elapsed = time.time() - t0
    ok = worst <= 1e-10 and elapsed < 30.0
    line = report(capsys, ok, "check 1",
                  f"weight-compressed vs enumerated divergence on {n} cases, "
                  f"max rel gap {worst:.3e} (tol 1e-10), {elapsed:.1f}s (budget 30s)")
    assert ok, line


def test_check_02_binary_anchor_values(capsys):
    t0 = time.time()
    a1 = abs(r_alpha(0.01, 50.0) - 4.59)
    a2 = abs(r_alpha(0.49, 50.0) - 0.026)
    worst_k = 0.0
    for c in (0.01, 0.1, 0.3):
        for d in range(1, 501):
            expo = 2.0 * (0.5 - c) ** 2 * d
            if expo > 20.0:
                worst_k = max(worst_k, math.exp(-expo))
    elapsed = time.time() - t0
    ok = a1 <= 0.01 and a2 <= 0.001 and worst_k < 1e-8 and elapsed < 1.0
    line = report(capsys, ok, "check 2",
                  f"r_50(0.01) off 4.59 by {a1:.2e} (tol 1e-2), r_50(0.49) off "
                  f"0.026 by {a2:.2e} (tol 1e-3), K<1e-8 scan max {worst_k:.2e}, "
                  f"{elapsed:.2f}s (budget 1s)")
    assert ok, line


def test_check_03_majority_vote_bracket(capsys):
    t0 = time.time()
    worst = -math.inf
    for a in (5.0, 50.0):
        for p in np.arange(0.05, 0.46, 0.05):
            pp = AmpParams(c=0.1, alpha=a, eps=1.0, d=20, k=1)
            hb = hoeffding_bracket(pp, float(p))
            P, Q = two_point_pushforward(float(p), pp)
            div = outcome_divergence(P, Q, a)
            worst = max(worst, hb.lower - div, div - hb.upper)
    elapsed = time.time() - t0
    ok = worst <= 1e-9 and elapsed < 5.0
    line = report(capsys, ok, "check 3",
                  f"bracket containment at d=20, worst violation {worst:.3e} "
                  f"(tol 1e-9), {elapsed:.1f}s (budget 5s)")
    assert ok, line


def test_check_04_solver_sandwich_and_monotonicity(capsys):
    t0 = time.time()
    eps_grid = np.logspace(math.log10(0.05), math.log10(5.0), 20)
    worst_lo = 0.0
    worst_hi = 0.0
    worst_mono = 0.0
    n = 0
    for c in (0.01, 0.1, 0.3):
        for a in (5.0, 50.0):
            for d in (1, 2):
                for k in (1, 2):
                    prev = -math.inf
                    for eps in eps_grid:
                        pp = AmpParams(c=c, alpha=a, eps=float(eps), d=d, k=k)
                        val = exact_post(pp).value
                        lb = two_point_lower(pp)
                        ub = min(float(eps), asymptote_upper(pp))
                        worst_lo = max(worst_lo, lb - val)
                        worst_hi = max(worst_hi, val - ub)
                        worst_mono = max(worst_mono, prev - val)
                        prev = val
                        n += 1
    elapsed = time.time() - t0
    ok = worst_lo <= 1e-3 and worst_hi <= 1e-3 and worst_mono <= 1e-3 and elapsed < 600.0
    line = report(capsys, ok, "check 4",
                  f"solver sandwich over {n} solves: max lower-bound deficit "
                  f"{worst_lo:.3e}, max upper overshoot {worst_hi:.3e}, max "
                  f"monotonicity drop {worst_mono:.3e} (tol 1e-3 each), "
                  f"{elapsed:.0f}s (budget 600s)")
    assert ok, line


def test_check_05_asymptote_convergence(capsys):
    t0 = time.time()
    worst = 0.0
    for k in (1, 2, 4):
        pp = AmpParams(c=0.1, alpha=50.0, eps=1e6, d=1, k=k)
        val = exact_post(pp).value
        worst = max(worst, abs(val - asymptote_upper(pp)))
    elapsed = time.time() - t0
    ok = worst <= 1e-3 and elapsed < 60.0
    line = report(capsys, ok, "check 5",
                  f"saturation at eps=1e6 for k in (1,2,4): max |value - k*r_50(0.1)| "
                  f"= {worst:.3e} (tol 1e-3), {elapsed:.1f}s (budget 60s)")
    assert ok, line


def test_check_06_interior_support_oracle(capsys):
    t0 = time.time()
    cfg = SolverConfig(seed=0)
    worst = -math.inf
    n = 0
    for k in (1, 2):
        for c in (0.1, 0.3):
            for a in (2.0, 50.0):
                for eps in (0.5, 2.0):
                    pp = AmpParams(c=c, alpha=a, eps=eps, d=1, k=k)
                    bf = brute_force_post_general_support(
                        pp, 9, cfg, n_candidates=10000)
                    ex = exact_post(pp, cfg).value
                    worst = max(worst, bf - ex)
                    n += 1
    elapsed = time.time() - t0
    ok = worst <= 1e-6 and elapsed < 300.0
    line = report(capsys, ok, "check 6",
                  f"9-point interior supports never beat the corner search over "
                  f"{n} configs: max excess {worst:.3e} (tol 1e-6), "
                  f"{elapsed:.0f}s (budget 300s)")
    assert ok, line


def test_check_07_corner_reduction_identities(capsys):
    rng = np.random.default_rng(np.random.SeedSequence((0, 7)))
    push_dev_k1 = 0.0
    push_dev_all = 0.0
    dpi_slack = -math.inf
    witness = None
    for _ in range(500):
        d = int(rng.integers(1, 3))
        k = int(rng.integers(1, 3))
        m = int(rng.integers(2, 5))
        pts = rng.uniform(0.1 + 1e-6, 0.9 - 1e-6, size=(m, d))
        wp = rng.dirichlet(np.ones(m))
        wq = rng.dirichlet(np.ones(m))
        pp = AmpParams(c=0.1, alpha=50.0, eps=1.0, d=d, k=k)
        RP = corner_reduce(pts, wp, pp)
        RQ = corner_reduce(pts, wq, pp)
        direct = np.exp(bern_mixture_pushforward(pts, wp, k).log_masses)
        reduced = np.exp(bern_corner_pushforward(RP, k).log_masses)
        dev = float(np.max(np.abs(direct - reduced)))
        if k == 1:
            push_dev_k1 = max(push_dev_k1, dev)
        if dev > push_dev_all:
            push_dev_all = dev
            witness = (d, k, dev)
        base_pq = renyi_divergence_log(np.log(wp), np.log(wq), pp.alpha)
        base_qp = renyi_divergence_log(np.log(wq), np.log(wp), pp.alpha)
        dpi_slack = max(
            dpi_slack,
            renyi_divergence_log(RP.log_masses, RQ.log_masses, pp.alpha) - base_pq,
            renyi_divergence_log(RQ.log_masses, RP.log_masses, pp.alpha) - base_qp,
        )
    sub_ok = push_dev_k1 <= 1e-12 and dpi_slack <= 1e-9
    ok = sub_ok and push_dev_all <= 1e-12
    line = report(
        capsys, ok, "check 7",
        f"corner reduction on 500 random supports: single-round pushforward "
        f"preserved to {push_dev_k1:.3e} (tol 1e-12) and divergence contraction "
        f"slack {dpi_slack:.3e} (tol 1e-9), but multi-round preservation fails "
        f"with max |mass delta| {push_dev_all:.3e} at (d={witness[0]}, "
        f"k={witness[1]}); one shared corner draw correlates the rounds, e.g. "
        f"d=1, c=0.1, x=0.5, k=2 gives Pr[(1,1)] 0.41 vs 0.25")
    assert sub_ok, line
    assert push_dev_all <= 1e-12, line


def test_check_08_sampling_dpi(capsys):
    rng = np.random.default_rng(np.random.SeedSequence((0, 8)))
    worst = -math.inf
    for _ in range(500):
        d = int(rng.integers(1, 4))
        k = int(rng.integers(1, 3))
        a = float(rng.choice([2.0, 5.0, 50.0]))
        pm = rng.dirichlet(np.ones(1 << d))
        qm = rng.dirichlet(np.ones(1 << d))
        P = CornerDist.from_probs(d=d, c=0.1, probs=pm)
        Q = CornerDist.from_probs(d=d, c=0.1, probs=qm)
        base = renyi_divergence_log(P.log_masses, Q.log_masses, a)
        pushed = outcome_divergence(
            bern_corner_pushforward(P, k), bern_corner_pushforward(Q, k), a)
        worst = max(worst, pushed - base)
    ok = worst <= 1e-9
    line = report(capsys, ok, "check 8",
                  f"sampling is a divergence contraction on 500 corner pairs: "
                  f"max increase {worst:.3e} (tol 1e-9)")
    assert ok, line


def test_check_09_binary_divergence_shape(capsys):
    rng = np.random.default_rng(np.random.SeedSequence((0, 9)))
    sym_dev = 0.0
    mono_dev = 0.0
    conv_dev = -math.inf
    for a in (2.0, 5.0, 50.0):
        grid = np.linspace(0.01, 0.99, 99)
        for p in grid:
            sym_dev = max(sym_dev, abs(r_alpha(p, a) - r_alpha(1.0 - p, a)))
        half = [r_alpha(p, a) for p in grid if p <= 0.5]
        for lo, hi in zip(half, half[1:]):
            mono_dev = max(mono_dev, hi - lo)
        ps = rng.uniform(0.01, 0.99, size=100)
        qs = rng.uniform(0.01, 0.99, size=100)
        for p, q in zip(ps, qs):
            conv_dev = max(conv_dev, r_alpha(0.5 * (p + q), a)
                           - 0.5 * (r_alpha(p, a) + r_alpha(q, a)))
    exact_zero = r_alpha(0.5, 50.0) == 0.0
    ok = (sym_dev <= 1e-12 and exact_zero and conv_dev <= 1e-12
          and mono_dev <= 1e-12)
    line = report(capsys, ok, "check 9",
                  f"binary divergence shape: symmetry dev {sym_dev:.2e} (tol 1e-12), "
                  f"r(1/2)=0 {'exact' if exact_zero else 'VIOLATED'}, midpoint "
                  f"convexity dev {conv_dev:.2e}, monotone dev {mono_dev:.2e}")
    assert ok, line


def test_check_10_conjecture_diagnostic(capsys):
    t0 = time.time()
    eps_grid = np.logspace(math.log10(0.05), math.log10(5.0), 20)
    worst = -math.inf
    where = None
    for c in (0.01, 0.1, 0.3):
        for a in (5.0, 50.0):
            for eps in eps_grid:
                pp = AmpParams(c=c, alpha=a, eps=float(eps), d=1, k=1)
                gap = exact_post(pp).value - two_point_lower(pp)
                if gap > worst:
                    worst = gap
                    where = (c, a, float(eps))
    elapsed = time.time() - t0
    exceeded = worst > 1e-3
    # informational: a large gap is surfaced, not failed
    line = report(capsys, True, "check 10",
                  f"two-point optimality diagnostic over 120 single-coordinate "
                  f"solves: max(exact - lower) = {worst:.3e} at (c={where[0]}, "
                  f"alpha={where[1]}, eps={where[2]:.4g}); informational threshold "
                  f"1e-3 {'EXCEEDED' if exceeded else 'not exceeded'}, "
                  f"{elapsed:.0f}s")
    assert worst >= -1e-9, line


def test_check_11_regime_reproduction(capsys, tmp_path):
    pp = AmpParams(c=0.3, alpha=50.0, eps=5.0, d=1, k=1)
    val = exact_post(pp).value
    head_ok = val <= 0.841 + 1e-3
    out = tmp_path / "regimes.csv"
    rc = cli.main(["sweep", "--c", "0.3", "--alpha", "50", "--d", "1", "--k", "1",
                   "--exact", "never", "--out", str(out)])
    rows = [l.split(",") for l in out.read_text().splitlines()
            if l and not l.startswith("#")][1:]
    labels = [r[10] for r in rows]
    order = {"I": 0, "II": 1, "III": 2}
    ranks = [order[l] for l in labels]
    seq_ok = rc == 0 and ranks == sorted(ranks) and set(labels) == {"I", "II", "III"}
    ok = head_ok and seq_ok
    line = report(capsys, ok, "check 11",
                  f"exact(5) = {val:.6f} <= 0.841+1e-3 at (d,k,c,alpha)=(1,1,0.3,50) "
                  f"{'holds' if head_ok else 'VIOLATED'}; emitted regimes over 60 "
                  f"budgets run I->II->III without interleaving "
                  f"({'yes' if seq_ok else 'NO'})")
    assert ok, line


def test_check_12_cli_contract(capsys, tmp_path):
    t0 = time.time()
    proc = subprocess.run(["bernamp", "validate", "--level", "fast"],
                          capture_output=True, text=True)
    validate_elapsed = time.time() - t0
    validate_ok = proc.returncode == 0 and validate_elapsed < 120.0

    counts = {}
    for preset, want in (("paper-k1", 1800), ("paper-multik", 540)):
        out = tmp_path / f"{preset}.csv"
        rc = cli.main(["sweep", "--preset", preset, "--exact", "never",
                       "--out", str(out)])
        got = sum(1 for l in out.read_text().splitlines()
                  if l and not l.startswith("#")) - 1
        counts[preset] = (rc, got, want)
    counts_ok = all(rc == 0 and got == want for rc, got, want in counts.values())

    r1 = tmp_path / "rerun1.csv"
    r2 = tmp_path / "rerun2.csv"
    args = ["sweep", "--preset", "paper-multik", "--exact", "never", "--seed", "42"]
    cli.main(args + ["--out", str(r1)])
    cli.main(args + ["--out", str(r2)])
    rerun_ok = r1.read_bytes() == r2.read_bytes()

    ok = validate_ok and counts_ok and rerun_ok
    line = report(capsys, ok, "check 12",
                  f"validate --level fast rc={proc.returncode} in "
                  f"{validate_elapsed:.0f}s (budget 120s); preset rows "
                  f"{counts['paper-k1'][1]}/1800 and {counts['paper-multik'][1]}/540; "
                  f"fixed-seed reruns byte-identical: {rerun_ok}")
    assert ok, line
