"""Command-line front end: bounds, exact, sweep, validate.

Exit codes: 0 success, 1 validation failure, 2 bad flags or config,
3 capacity guard, 4 solver non-convergence (value still printed),
5 output I/O failure.

Output is deterministic for a fixed seed: rows are computed in whatever
order the BERNAMP_THREADS work pool finishes them, then emitted sorted
by (c, alpha, d, k, epsilon).  Numbers serialize with 17 significant
digits so a parsed file reproduces the in-memory values exactly.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .bounds import bounds_report
from .errors import CapacityError, UsageError
from .process import AmpParams
from .solver import SolverConfig, exact_post
from .validate import run_checks

__all__ = ["main"]

_SWEEP_COLUMNS = ("c", "alpha", "d", "k", "epsilon", "lower", "exact",
                  "asymptote", "ppi", "gap", "regime", "solver_status")

_BOUNDS_COLUMNS = ("eps", "lower_two_point", "upper_ppi", "upper_asymptote",
                   "exact", "gap_upper_lower", "regime_hint")

_PRESETS = {
    "paper-k1": {
        "c": (0.01, 0.10, 0.30),
        "alpha": (5.0, 50.0),
        "d": (1, 2, 3, 5, 15),
        "k": (1,),
    },
    "paper-multik": {
        "c": (0.1,),
        "alpha": (50.0,),
        "d": (1, 3, 5),
        "k": (1, 2, 4),
    },
}

_SOLVER_NAMES = {"grid": "dense_grid", "multistart": "multistart_ascent",
                 "both": "both"}

# exact is included automatically only at small shapes; beyond this the
# solver cost dominates the sweep and the row keeps a null exact
_AUTO_EXACT_D = 3
_AUTO_EXACT_DK = 12

# default guard for the exact command; --allow-large lifts it up to the
# solver's own capacity limits
_EXACT_CMD_D = 3


class _Parser(argparse.ArgumentParser):
    """argparse with a one-line error diagnostic and exit code 2."""

    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _threads() -> int:
    raw = os.environ.get("BERNAMP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _float_list(text: str):
    return tuple(float(tok) for tok in text.split(",") if tok != "")


def _int_list(text: str):
    return tuple(int(tok) for tok in text.split(",") if tok != "")


_CONFIG_KEYS = {
    "c": str, "alpha": str, "d": str, "k": str, "eps": float,
    "eps-min": float, "eps-max": float, "eps-steps": int,
    "eps-scale": str, "preset": str, "exact": str, "solver": str,
    "grid-steps": int, "restarts": int, "seed": int, "format": str,
    "out": str, "allow-large": bool, "level": str,
}


def _load_config(path: str) -> dict:
    """Flat key = value lines mirroring the flags; '#' starts a comment."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        print(f"error: --config: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)
    out = {}
    for ln, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            print(f"error: --config: line {ln} is not key = value: {raw.strip()!r}",
                  file=sys.stderr)
            raise SystemExit(2)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            print(f"error: --config: unknown key {key!r}", file=sys.stderr)
            raise SystemExit(2)
        conv = _CONFIG_KEYS[key]
        try:
            if conv is bool:
                if value.lower() not in ("true", "false", "1", "0"):
                    raise ValueError(value)
                out[key] = value.lower() in ("true", "1")
            else:
                out[key] = conv(value)
        except ValueError:
            print(f"error: --config: bad value for {key!r}: {value!r}",
                  file=sys.stderr)
            raise SystemExit(2)
    return out


def _merge_config(args, mapping: dict):
    """Config fills only options left at None; flags keep precedence."""
    for key, value in mapping.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None and hasattr(args, attr):
            setattr(args, attr, value)


def _write_text(path, text: str) -> int:
    if path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: --out: cannot write {path}: {exc}", file=sys.stderr)
        return 5
    return 0


def _config_hash(payload) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def _solver_config(args) -> SolverConfig:
    kw = {}
    if getattr(args, "solver", None) is not None:
        kw["strategy"] = _SOLVER_NAMES[args.solver]
    if getattr(args, "grid_steps", None) is not None:
        kw["grid_steps"] = args.grid_steps
    if getattr(args, "restarts", None) is not None:
        kw["restarts"] = args.restarts
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    return SolverConfig(**kw)


def _require(args, names) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            print(f"error: --{name} is required", file=sys.stderr)
            raise SystemExit(2)


def _params_from_args(args) -> AmpParams:
    _require(args, ("c", "alpha", "eps", "d", "k"))
    parsed = {}
    for name, conv in (("c", float), ("alpha", float), ("eps", float),
                       ("d", int), ("k", int)):
        raw = getattr(args, name)
        try:
            parsed[name] = conv(raw)
        except ValueError:
            print(f"error: --{name}: bad value {raw!r}", file=sys.stderr)
            raise SystemExit(2)
    return AmpParams(**parsed)


def cmd_bounds(args) -> int:
    params = _params_from_args(args)
    bundle = bounds_report(params)
    values = {
        "eps": bundle.eps,
        "lower_two_point": bundle.lower_two_point,
        "upper_ppi": bundle.upper_ppi,
        "upper_asymptote": bundle.upper_asymptote,
        "exact": bundle.exact,
        "gap_upper_lower": bundle.gap_upper_lower,
        "regime_hint": bundle.regime_hint,
    }
    if args.format == "json":
        text = json.dumps(values, indent=2) + "\n"
    else:
        row = [("" if values[name] is None
                else values[name] if isinstance(values[name], str)
                else _fmt(values[name])) for name in _BOUNDS_COLUMNS]
        text = ",".join(_BOUNDS_COLUMNS) + "\n" + ",".join(row) + "\n"
    return _write_text(args.out, text)


def cmd_exact(args) -> int:
    params = _params_from_args(args)
    if params.d > _EXACT_CMD_D and not args.allow_large:
        print(
            f"error: d = {params.d} exceeds the default exact guard "
            f"d <= {_EXACT_CMD_D}; pass --allow-large to run anyway",
            file=sys.stderr,
        )
        return 3
    cfg = _solver_config(args)
    result = exact_post(params, cfg)
    masses_p = [_fmt(v) for v in np.exp(result.argmax_p.log_masses)]
    masses_q = [_fmt(v) for v in np.exp(result.argmax_q.log_masses)]
    if args.format == "json":
        text = json.dumps({
            "value": result.value,
            "argmax_p": [float(v) for v in np.exp(result.argmax_p.log_masses)],
            "argmax_q": [float(v) for v in np.exp(result.argmax_q.log_masses)],
            "feasibility_residuals": list(result.feasibility_residuals),
            "status": result.status,
            "iterations": result.iterations,
            "strategy_used": result.strategy_used,
        }, indent=2) + "\n"
    else:
        header = ("value,status,iterations,strategy_used,"
                  "residual_pq,residual_qp,argmax_p,argmax_q")
        row = ",".join([
            _fmt(result.value), result.status, str(result.iterations),
            result.strategy_used,
            _fmt(result.feasibility_residuals[0]),
            _fmt(result.feasibility_residuals[1]),
            ";".join(masses_p), ";".join(masses_q),
        ])
        text = header + "\n" + row + "\n"
    code = _write_text(args.out, text)
    if code != 0:
        return code
    return 0 if result.status in ("converged", "grid_only") else 4


def _sweep_grids(args):
    if args.preset is not None:
        for name in ("c", "alpha", "d", "k"):
            if getattr(args, name) is not None:
                print(f"error: --preset conflicts with --{name}",
                      file=sys.stderr)
                raise SystemExit(2)
        preset = _PRESETS[args.preset]
        return preset["c"], preset["alpha"], preset["d"], preset["k"]
    try:
        cs = _float_list(args.c) if args.c is not None else (0.1,)
        alphas = _float_list(args.alpha) if args.alpha is not None else (50.0,)
        ds = _int_list(args.d) if args.d is not None else (1,)
        ks = _int_list(args.k) if args.k is not None else (1,)
    except ValueError as exc:
        print(f"error: bad grid value: {exc}", file=sys.stderr)
        raise SystemExit(2)
    if not (cs and alphas and ds and ks):
        print("error: parameter grids must be non-empty", file=sys.stderr)
        raise SystemExit(2)
    return cs, alphas, ds, ks


def _eps_grid(args):
    lo = args.eps_min if args.eps_min is not None else 0.01
    hi = args.eps_max if args.eps_max is not None else 100.0
    steps = args.eps_steps if args.eps_steps is not None else 60
    scale = args.eps_scale if args.eps_scale is not None else "log"
    if not (lo > 0.0 and lo < hi):
        print(f"error: --eps-min/--eps-max: need 0 < min < max, "
              f"got {lo!r}, {hi!r}", file=sys.stderr)
        raise SystemExit(2)
    if steps < 2:
        print(f"error: --eps-steps: need >= 2, got {steps!r}", file=sys.stderr)
        raise SystemExit(2)
    if scale == "log":
        return np.logspace(math.log10(lo), math.log10(hi), steps)
    return np.linspace(lo, hi, steps)


def _sweep_row(task):
    c, alpha, d, k, eps, include_exact, cfg = task
    params = AmpParams(c=c, alpha=alpha, eps=eps, d=d, k=k)
    exact_value = None
    status = None
    want = (include_exact == "always"
            or (include_exact == "auto"
                and d <= _AUTO_EXACT_D and d * k <= _AUTO_EXACT_DK))
    if want:
        try:
            result = exact_post(params, cfg)
            exact_value = result.value
            status = result.status
        except CapacityError:
            status = "capacity_error"
        except UsageError:
            status = "usage_error"
    bundle = bounds_report(params, exact=exact_value)
    return {
        "c": c, "alpha": alpha, "d": d, "k": k, "epsilon": eps,
        "lower": bundle.lower_two_point,
        "exact": exact_value,
        "asymptote": bundle.upper_asymptote,
        "ppi": bundle.upper_ppi,
        "gap": bundle.gap_upper_lower,
        "regime": bundle.regime_hint,
        "solver_status": status,
    }


def cmd_sweep(args) -> int:
    cs, alphas, ds, ks = _sweep_grids(args)
    eps_values = _eps_grid(args)
    include_exact = args.exact if args.exact is not None else "auto"
    cfg = _solver_config(args)
    out_format = args.format

    tasks = [
        (c, alpha, d, k, float(eps), include_exact, cfg)
        for c in sorted(cs)
        for alpha in sorted(alphas)
        for d in sorted(ds)
        for k in sorted(ks)
        for eps in eps_values
    ]

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(task) for task in tasks]
    rows.sort(key=lambda r: (r["c"], r["alpha"], r["d"], r["k"], r["epsilon"]))

    meta_payload = {
        "c": sorted(cs), "alpha": sorted(alphas), "d": sorted(ds),
        "k": sorted(ks),
        "eps": [float(e) for e in eps_values],
        "include_exact": include_exact,
        "solver": {
            "strategy": cfg.strategy, "grid_steps": cfg.grid_steps,
            "restarts": cfg.restarts, "max_iters": cfg.max_iters,
            "feas_tol": cfg.feas_tol, "value_tol": cfg.value_tol,
            "seed": cfg.seed,
        },
        "format": out_format,
    }
    digest = _config_hash(meta_payload)

    if out_format == "json":
        text = json.dumps({
            "metadata": {"tool": "bernamp", "version": __version__,
                         "seed": cfg.seed, "config": digest},
            "rows": rows,
        }, indent=2) + "\n"
    else:
        lines = [
            f"# bernamp {__version__}",
            f"# seed={cfg.seed}",
            f"# config={digest}",
            ",".join(_SWEEP_COLUMNS),
        ]
        for row in rows:
            cells = []
            for name in _SWEEP_COLUMNS:
                value = row[name]
                if value is None:
                    cells.append("")
                elif name in ("d", "k"):
                    cells.append(str(value))
                elif isinstance(value, str):
                    cells.append(value)
                else:
                    cells.append(_fmt(value))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    return _write_text(args.out, text)


def cmd_validate(args) -> int:
    level = args.level if args.level is not None else "fast"
    seed = args.seed if args.seed is not None else 0

    def emit(res):
        tag = "INFO" if res.informational else ("PASS" if res.passed else "FAIL")
        print(f"[{tag}] {res.name}: {res.detail}", flush=True)

    results = run_checks(level=level, seed=seed, emit=emit)
    hard = [r for r in results if not r.informational]
    failed = [r for r in hard if not r.passed]
    print(f"{len(hard) - len(failed)}/{len(hard)} checks passed "
          f"({len(results) - len(hard)} informational)")
    return 0 if not failed else 1


def _add_common_point_flags(sub):
    sub.add_argument("--c", help="box floor in [0, 1/2)")
    sub.add_argument("--alpha", help="divergence order, > 1")
    sub.add_argument("--d", help="coordinate count")
    sub.add_argument("--k", help="sample rounds")


def _add_output_flags(sub):
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--out", default=None, metavar="PATH")
    sub.add_argument("--config", default=None, metavar="PATH",
                     help="flat key = value file mirroring the flags; "
                          "flags take precedence")


def _add_solver_flags(sub):
    sub.add_argument("--solver", choices=("grid", "multistart", "both"),
                     default=None)
    sub.add_argument("--grid-steps", type=int, default=None)
    sub.add_argument("--restarts", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bernamp",
                     description="Privacy amplification bounds for "
                                 "Bernoulli-sample releases")
    parser.add_argument("--version", action="version",
                        version=f"bernamp {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("bounds", help="closed-form bounds at one budget")
    _add_common_point_flags(b)
    b.add_argument("--eps", help="divergence budget in nats")
    _add_output_flags(b)
    b.set_defaults(func=cmd_bounds)

    e = subs.add_parser("exact", help="worst-case solver at one budget")
    _add_common_point_flags(e)
    e.add_argument("--eps", help="divergence budget in nats")
    e.add_argument("--allow-large", action="store_true", default=None,
                   help=f"lift the default d <= {_EXACT_CMD_D} guard "
                        f"(solver capacity limits still apply)")
    _add_solver_flags(e)
    _add_output_flags(e)
    e.set_defaults(func=cmd_exact)

    s = subs.add_parser("sweep", help="bounds (and optionally exact) over "
                                      "a parameter grid and eps range")
    _add_common_point_flags(s)
    s.add_argument("--eps-min", type=float, default=None)
    s.add_argument("--eps-max", type=float, default=None)
    s.add_argument("--eps-steps", type=int, default=None)
    s.add_argument("--eps-scale", choices=("log", "linear"), default=None)
    s.add_argument("--preset", choices=tuple(_PRESETS), default=None)
    s.add_argument("--exact", choices=("auto", "always", "never"),
                   default=None)
    _add_solver_flags(s)
    _add_output_flags(s)
    s.set_defaults(func=cmd_sweep)

    v = subs.add_parser("validate", help="run the self-test checks")
    v.add_argument("--level", choices=("fast", "full"), default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--config", default=None, metavar="PATH")
    v.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "config", None) is not None:
        try:
            mapping = _load_config(args.config)
        except SystemExit as exc:
            return int(exc.code or 0)
        _merge_config(args, mapping)
    if getattr(args, "allow_large", None) is None and hasattr(args, "allow_large"):
        args.allow_large = False
    if getattr(args, "format", None) is None and hasattr(args, "format"):
        args.format = "csv"
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except BrokenPipeError:
        return 5
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
