"""Command-line front end.

Examples:
  linmeas family --kind A --mu 0.5
  linmeas solve --mu 0.5 --gamma 1 --D -1
  linmeas sweep --kind C --mu-grid 0.01 0.99 99 -o sweep_C.csv
  linmeas posterior --kind B --mu 0.5 --y 1 --y 2
  linmeas verify --seed 0 --n 1000000
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .distributions import Interval, NullEventError, mixture_moments, posterior_family
from .dynamics import momentum_transfer
from .gaussian import GaussianState
from .measurement import edr_report
from .optimal import (
    InfeasibleError,
    SolverInput,
    family,
    is_minimum_error_disturbance,
    solve_params,
    solver_residuals,
)
from .oracle import DEFAULT_N, SE_BAND
from .verification import run_suite, summarize

OUTPUT_DIR_ENV = "LINMEAS_OUTPUT_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

SWEEP_COLUMNS = (
    "mu", "epsilon_q", "eta_p", "eta_q", "sigma_q1", "sigma_p1", "edr_lhs",
    "heisenberg_product", "a", "b", "c", "d", "tau", "alpha", "beta", "gamma", "D",
)


class UsageError(Exception):
    pass


def _finite(value):
    x = float(value)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"{value!r} is not a finite number")
    return x


def _positive(value):
    x = _finite(value)
    if x <= 0:
        raise argparse.ArgumentTypeError(f"{value!r} must be positive")
    return x


def _fmt(x):
    return format(float(x) + 0.0, ".17g")


def _resolve_output(path):
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
        return
    p = _resolve_output(output)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _psi(args):
    return GaussianState.minimum_uncertainty(args.q1, args.p1, args.sigma1, args.hbar)


def _check_mu(mu):
    if not 0 < mu < 1:
        raise UsageError(f"mu must lie in (0, 1), got {mu}")


def _measurement_record(kind, mu, psi):
    m = family(kind, mu, psi)
    t = m.transfer()
    rep = edr_report(m, psi)
    p = m.params
    return {
        "kind": kind,
        "mu": mu,
        "tau": m.tau,
        "alpha": p.alpha,
        "beta": p.beta,
        "gamma": p.gamma,
        "D": p.discriminant(),
        "transfer": {"a": t.a, "b": t.b, "c": t.c, "d": t.d},
        "momentum_transfer": momentum_transfer(t).tolist(),
        "probe": {"mean_q": m.probe.mean_q, "mean_p": m.probe.mean_p,
                  "sigma_q": m.probe.sigma_q, "sigma_p": m.probe.sigma_p},
        "report": asdict(rep),
        "minimum_error_disturbance": is_minimum_error_disturbance(m, psi),
    }


def _text_block(title, items):
    lines = [title]
    width = max(len(k) for k, _ in items)
    for k, v in items:
        if isinstance(v, float):
            v = f"{v:.10g}"
        lines.append(f"  {k:<{width}}  {v}")
    return "\n".join(lines) + "\n"


def cmd_family(args):
    _check_mu(args.mu)
    rec = _measurement_record(args.kind, args.mu, _psi(args))
    if args.format == "json":
        return _json(rec)
    if args.format == "csv":
        return _sweep_csv([_sweep_row(args.kind, args.mu, args.q1, args.p1, args.sigma1, args.hbar)])
    t, r, pr = rec["transfer"], rec["report"], rec["probe"]
    out = _text_block(f"family {args.kind}, mu = {args.mu}", [
        ("tau", rec["tau"]), ("alpha", rec["alpha"]), ("beta", rec["beta"]),
        ("gamma", rec["gamma"]), ("D", rec["D"]),
    ])
    out += _text_block("transfer exp(tau S)", list(t.items()))
    out += _text_block("probe", list(pr.items()))
    out += _text_block("error / disturbance", [
        ("epsilon_q", r["epsilon_q"]), ("epsilon_q^2", r["epsilon_q"] ** 2),
        ("eta_p", r["eta_p"]), ("eta_p^2", r["eta_p"] ** 2), ("eta_q", r["eta_q"]),
        ("edr_lhs", r["edr_lhs"]), ("edr_bound", r["edr_bound"]),
        ("heisenberg_product", r["heisenberg_product"]), ("saturated", r["saturated"]),
    ])
    return out


def cmd_solve(args):
    _check_mu(args.mu)
    inp = SolverInput(args.mu, args.gamma, args.D)
    try:
        out = solve_params(inp)
    except InfeasibleError as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(f"precondition violated: {exc}") from exc
    rec = {"mu": args.mu, "gamma": args.gamma, "D": args.D, "alpha": out.alpha,
           "beta": out.beta, "tau": out.tau, "regime": out.regime.value,
           "residuals": solver_residuals(inp, out)}
    if args.format == "json":
        return _json(rec)
    if args.format == "csv":
        keys = ["mu", "gamma", "D", "alpha", "beta", "tau", "regime"]
        row = [rec[k] if k == "regime" else _fmt(rec[k]) for k in keys]
        return _csv_text(keys, [row])
    out_text = _text_block(f"solve mu = {args.mu}, gamma = {args.gamma}, D = {args.D}", [
        ("regime", rec["regime"]), ("alpha", out.alpha), ("beta", out.beta), ("tau", out.tau),
    ])
    out_text += _text_block("residuals", [(k, f"{v:.3e}") for k, v in rec["residuals"].items()])
    return out_text


def _sweep_row(kind, mu, q1, p1, sigma1, hbar):
    psi = GaussianState.minimum_uncertainty(q1, p1, sigma1, hbar)
    m = family(kind, mu, psi)
    t = m.transfer()
    r = edr_report(m, psi)
    p = m.params
    return (mu, r.epsilon_q, r.eta_p, r.eta_q, r.sigma_q1, r.sigma_p1, r.edr_lhs,
            r.heisenberg_product, t.a, t.b, t.c, t.d, m.tau, p.alpha, p.beta, p.gamma,
            p.discriminant())


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _sweep_csv(rows):
    return _csv_text(SWEEP_COLUMNS, [[_fmt(v) for v in row] for row in rows])


def _mu_grid(args):
    if args.mu:
        grid = list(args.mu)
    else:
        start, stop, num = args.mu_grid
        grid = np.linspace(float(start), float(stop), int(num)).tolist()
    for mu in grid:
        _check_mu(mu)
    return grid


def cmd_sweep(args):
    grid = _mu_grid(args)
    jobs = [(args.kind, mu, args.q1, args.p1, args.sigma1, args.hbar) for mu in grid]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            rows = list(ex.map(_sweep_row, *zip(*jobs)))
    else:
        rows = [_sweep_row(*job) for job in jobs]
    if args.format == "json":
        return _json([dict(zip(SWEEP_COLUMNS, row)) for row in rows])
    return _sweep_csv(rows)


def _json_bound(x):
    # JSON has no infinity literal
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def cmd_posterior(args):
    _check_mu(args.mu)
    psi = _psi(args)
    m = family(args.kind, args.mu, psi)
    fam = posterior_family(m, psi)
    rec = {
        "kind": args.kind,
        "mu": args.mu,
        "family": {"slope": fam.slope, "mean_p": fam.mean_p, "sigma_q": fam.sigma_q,
                   "sigma_p": fam.sigma_p, "weight_mean": fam.weight.mean,
                   "weight_variance": fam.weight.variance},
    }
    if args.y:
        rec["posteriors"] = [
            {"y": y, "mean_q": fam.slope * y, "mean_p": fam.mean_p,
             "sigma_q": fam.sigma_q, "sigma_p": fam.sigma_p}
            for y in args.y
        ]
    if args.lower is not None or args.upper is not None:
        lower = -math.inf if args.lower is None else args.lower
        upper = math.inf if args.upper is None else args.upper
        try:
            J = Interval(lower, upper)
            mm = mixture_moments(m, psi, J)
        except NullEventError as exc:
            raise UsageError(f"conditioning on a null event: {exc}") from exc
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rec["mixture"] = {"lower": _json_bound(J.lower), "upper": _json_bound(J.upper), **asdict(mm)}
    if "posteriors" not in rec and "mixture" not in rec:
        raise UsageError("give at least one --y value, or --lower/--upper")
    return _json(rec)


def cmd_verify(args):
    checks = run_suite(seed=args.seed, n=args.n, n_random=args.random, hbar=args.hbar,
                       tamper=args.tamper_epsilon)
    summary = summarize(checks)
    lines = [f"{'quantity':<16}{'checks':>8}{'passed':>8}{'max|z|':>10}"]
    for q, row in summary.items():
        lines.append(f"{q:<16}{row['checks']:>8}{row['passed']:>8}{row['max_abs_z']:>10.3f}")
    failed = [c for c in checks if not c.passed]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks within {SE_BAND:g} standard errors "
                 f"(n = {args.n}, seed = {args.seed})")
    for c in failed[:20]:
        lines.append(f"FAIL {c.case} {c.quantity}: expected {c.expected:.10g}, "
                     f"estimate {c.estimate:.10g} +- {c.se:.3g}")
    text = "\n".join(lines) + "\n"
    if args.output:
        header = ["case", "quantity", "expected", "estimate", "se", "passed"]
        rows = [[c.case, c.quantity, _fmt(c.expected), _fmt(c.estimate), _fmt(c.se), int(c.passed)]
                for c in checks]
        _emit(_csv_text(header, rows), args.output)
        args.output = None
    return text, (EXIT_OK if not failed else EXIT_VERIFY_FAILED)


def _add_state_args(p):
    p.add_argument("--hbar", type=_positive, default=1.0)
    p.add_argument("--q1", type=_finite, default=0.0, help="system position mean")
    p.add_argument("--p1", type=_finite, default=0.0, help="system momentum mean")
    p.add_argument("--sigma1", type=_positive, default=1.0, help="system position spread")
    p.add_argument("-o", "--output", default=None,
                   help=f"output file (relative paths resolve under ${OUTPUT_DIR_ENV} if set)")


def build_parser():
    parser = argparse.ArgumentParser(prog="linmeas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="one member of family A, B or C")
    p.add_argument("--kind", choices="ABC", required=True)
    p.add_argument("--mu", type=_finite, required=True)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    _add_state_args(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("solve", help="interaction parameters for given mu, gamma, D")
    p.add_argument("--mu", type=_finite, required=True)
    p.add_argument("--gamma", type=_finite, required=True)
    p.add_argument("--D", type=_finite, required=True, help="discriminant -(gamma^2 + alpha beta)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="error/disturbance table over a grid of mu")
    p.add_argument("--kind", choices="ABC", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--mu-grid", nargs=3, metavar=("START", "STOP", "NUM"), default=("0.01", "0.99", "99"))
    g.add_argument("--mu", type=_finite, action="append", help="explicit grid point (repeatable)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    _add_state_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("posterior", help="posterior states per meter value, or the state conditioned on an interval")
    p.add_argument("--kind", choices="ABC", required=True)
    p.add_argument("--mu", type=_finite, required=True)
    p.add_argument("--y", type=_finite, action="append", help="meter value (repeatable)")
    p.add_argument("--lower", type=float, default=None,
                   help="lower end of the meter interval (default -inf; write --lower=-inf)")
    p.add_argument("--upper", type=float, default=None, help="upper end of the meter interval (default inf)")
    _add_state_args(p)
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("verify", help="closed forms against phase-space Monte Carlo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=DEFAULT_N, help="samples per measurement")
    p.add_argument("--random", type=int, default=100, help="number of random measurements")
    p.add_argument("--hbar", type=_positive, default=1.0)
    p.add_argument("-o", "--output", default=None, help="CSV of individual checks")
    p.add_argument("--tamper-epsilon", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        result = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.output)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
