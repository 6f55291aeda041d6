"""Command-line interface: ``stabadams <subcommand> [options]``.

Exit codes: 0 ok, 1 verification failed, 2 optimizer did not converge,
3 a table cell failed that should have converged, 4 every run diverged,
64 usage error.
"""

import argparse
import csv
import math
import sys

import numpy as np

from .exceptions import NotConverged
from .integrate import converge_study, run_fixed, steps_for
from .plotting import locus_svg, loglog_svg
from .polycore import eval_nu, order_system
from .problems import get_problem
from .stability import error_constant, measure_interval, trace_locus
from .synth import MethodSpec, damping_increments, first_order, order_residuals, synthesize

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NOT_CONVERGED = 2
EXIT_PARTIAL = 3
EXIT_ALL_DIVERGED = 4
EXIT_USAGE = 64

MAX_K = 15

# (k, p) cells the published tables list as not converged
PUBLISHED_NOT_CONVERGED = {(7, 6), (8, 7), (9, 7), (9, 8), (10, 7), (10, 8), (10, 9)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _g(x):
    return f"{x:.17g}"


# --- shared option groups ----------------------------------------------------


def _add_method_args(p, required=False):
    g = p.add_argument_group("method")
    g.add_argument("--method", metavar="FILE", help="method JSON written by `synth`")
    g.add_argument("--k", type=int, help="step count (synthesize on the fly)")
    g.add_argument("--p", type=int, default=1, help="order (default 1)")
    g.add_argument("--epsilon", type=float, default=0.0, help="damping, first order only")
    g.add_argument("--attempts", type=int, default=64)
    g.add_argument("--seed", type=int, default=0)


def _check_synth_args(k, p, epsilon, attempts=1):
    if k is None:
        raise UsageError("give --method FILE or --k")
    if not 1 <= k <= MAX_K:
        raise UsageError(f"--k must be in 1..{MAX_K}")
    if not 1 <= p <= k:
        raise UsageError("--p must satisfy 1 <= p <= k")
    if not epsilon >= 0 or not math.isfinite(epsilon):
        raise UsageError("--epsilon must be a finite non-negative number")
    if epsilon > 0 and p != 1:
        raise UsageError("damping (--epsilon > 0) is only defined for first-order methods")
    if attempts < 1:
        raise UsageError("--attempts must be positive")


def _resolve_method(args):
    if args.method:
        if args.k is not None:
            raise UsageError("--method and --k are mutually exclusive")
        try:
            return MethodSpec.load(args.method)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read method file {args.method!r}: {exc}") from None
    _check_synth_args(args.k, args.p, args.epsilon, args.attempts)
    return synthesize(args.k, args.p, args.epsilon, attempts=args.attempts, seed=args.seed)


def _add_problem_args(p):
    g = p.add_argument_group("problem")
    g.add_argument("--problem", required=True, choices=["linear", "hires", "burgers"])
    g.add_argument("--mu", type=float, help="Burgers viscosity (default 0.005)")
    g.add_argument("--n", type=int, help="Burgers interior nodes (default 500)")
    g.add_argument("--lam", type=float, help="linear problem rate (default -1)")
    g.add_argument("--t-end", type=float, help="linear problem end time (default 1)")


def _resolve_problem(args):
    kw = {}
    if args.problem == "burgers":
        if args.mu is not None:
            if not args.mu > 0:
                raise UsageError("--mu must be positive")
            kw["mu"] = args.mu
        if args.n is not None:
            if args.n < 1:
                raise UsageError("--n must be positive")
            kw["n_interior"] = args.n
    elif args.mu is not None or args.n is not None:
        raise UsageError("--mu/--n apply to the burgers problem only")
    if args.problem == "linear":
        kw["lam"] = -1.0 if args.lam is None else args.lam
        if args.t_end is not None:
            if not args.t_end > 0:
                raise UsageError("--t-end must be positive")
            kw["t_end"] = args.t_end
    elif args.lam is not None or args.t_end is not None:
        raise UsageError("--lam/--t-end apply to the linear problem only")
    return get_problem(args.problem, **kw)


def _step_sizes(args, problem):
    span = problem.t_end - problem.t0
    if args.steps:
        if any(n < 1 for n in args.steps):
            raise UsageError("--steps entries must be positive")
        taus = [span / n for n in args.steps]
    elif args.taus:
        taus = list(args.taus)
        for tau in taus:
            try:
                steps_for(problem, tau)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    else:
        raise UsageError("give --taus or --steps")
    return taus


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _summary(m):
    eps = f" epsilon={m.epsilon:g}" if m.epsilon else ""
    return f"k={m.k} p={m.p}{eps} ell={m.ell:.16g} C={m.error_const:.6g}"


# --- subcommands -------------------------------------------------------------


def cmd_synth(args):
    _check_synth_args(args.k, args.p, args.epsilon, args.attempts)
    try:
        m = synthesize(args.k, args.p, args.epsilon, attempts=args.attempts, seed=args.seed)
    except NotConverged as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_CONVERGED
    if args.out:
        m.save(args.out)
        print(_summary(m))
    else:
        sys.stdout.write(m.to_json())
        print(_summary(m), file=sys.stderr)
    return EXIT_OK


def cmd_damp(args):
    _check_synth_args(args.k, 1, args.epsilon)
    base = first_order(args.k)
    inc = damping_increments(base.beta)
    m = synthesize(args.k, 1, args.epsilon)
    print("Delta = " + " ".join(_g(v) for v in inc))
    print(_summary(m))
    if args.out:
        m.save(args.out)
    return EXIT_OK


def cmd_stability(args):
    m = _resolve_method(args)
    if args.n_points < 8:
        raise UsageError("--n-points must be at least 8")
    curve = trace_locus(m.beta, args.n_points)
    if args.csv in (None, "-"):
        curve.write_csv(sys.stdout)
    else:
        with open(args.csv, "w", newline="") as fh:
            curve.write_csv(fh)
    if args.svg:
        label = f"k={m.k}, p={m.p}" + (f", eps={m.epsilon:g}" if m.epsilon else "")
        _write_text(args.svg, locus_svg([(label, curve.mu.tolist())], title="root locus curve"))
    return EXIT_OK


def cmd_interval(args):
    m = _resolve_method(args)
    r = measure_interval(m.beta)
    print(f"ell_formula={_g(r.ell_formula)}")
    print(f"ell_oracle={_g(r.ell_oracle)}")
    print(f"agree={'yes' if r.agree else 'no'}")
    return EXIT_OK


def cmd_verify(args):
    m = _resolve_method(args)
    res = np.abs(order_residuals(m.beta, m.p))
    # high-k rows have entries up to (k-1)**(p-1); allow rounding at that scale
    W, _ = order_system(m.k, m.p)
    order_ok = bool(np.all((res <= 1e-10) | (res <= 1e-14 * (np.abs(W) @ np.abs(m.beta.beta)))))
    phi = np.pi * np.arange(1, 2049) / 2049
    nu_min = float(np.min(eval_nu(m.beta, phi)))
    interval = measure_interval(m.beta)
    checks = [
        ("order residuals", order_ok, f"max {np.max(res):.3g}"),
        ("locus in upper half-plane (nu >= -1e-9)", nu_min >= -1e-9, f"min nu {nu_min:.3g}"),
        ("interval formula vs oracle", interval.agree, f"{interval.ell_formula:.12g} vs {interval.ell_oracle:.12g}"),
        ("stored ell", abs(m.ell - interval.ell_oracle) <= 1e-6 * (1 + m.ell), f"{m.ell:.12g}"),
    ]
    try:
        c = error_constant(m.beta, m.p)
        checks.append(("stored error constant", abs(c - m.error_const) <= 1e-9 * (1 + abs(c)), f"{c:.8g}"))
    except ValueError as exc:
        checks.append(("stored error constant", False, str(exc)))
    ok = True
    for name, passed, detail in checks:
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_integrate(args):
    problem = _resolve_problem(args)
    m = _resolve_method(args)
    if args.steps:
        tau = (problem.t_end - problem.t0) / args.steps
    elif args.tau:
        tau = args.tau
        try:
            steps_for(problem, tau)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError("give --tau or --steps")
    run = run_fixed(problem, m, tau)
    print(f"status={run.status} tau={_g(run.tau)} steps={run.steps} f_evals={run.f_evals} starter_evals={run.starter_evals}")
    if not run.diverged:
        err = float(np.max(np.abs(run.endpoint - problem.reference(problem.t_end))))
        print(f"endpoint_error={_g(err)}")
        return EXIT_OK
    return EXIT_ALL_DIVERGED


def cmd_converge(args):
    problem = _resolve_problem(args)
    m = _resolve_method(args)
    taus = _step_sizes(args, problem)
    taus = sorted(set(taus), reverse=True)
    report = converge_study(problem, m, taus)
    if args.out in (None, "-"):
        report.write_csv(sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            report.write_csv(fh)
    if args.svg:
        label = f"k={m.k}, p={m.p}" + (f", eps={m.epsilon:g}" if m.epsilon else "")
        _write_text(args.svg, loglog_svg([(label, report.taus, report.errors)], title=f"{problem.name} convergence"))
    order = report.observed_order
    print(f"observed_order={'nan' if math.isnan(order) else f'{order:.4f}'}", file=sys.stderr)
    return EXIT_ALL_DIVERGED if report.all_diverged else EXIT_OK


def _table_delta():
    header = ["k", "p"] + [f"Delta_{j}" for j in range(10)]
    rows = []
    for k in range(2, 11):
        inc = damping_increments(first_order(k).beta)
        rows.append([k, 1] + [_g(v) for v in inc] + [""] * (10 - k))
    return header, rows, 0


def _table_errconst(attempts, seed):
    header = ["k", "p", "value"]
    rows, failures = [], 0
    for k in range(2, 11):
        for p in range(1, min(k - 1, 6) + 1):
            try:
                m = synthesize(k, p, attempts=attempts, seed=seed)
            except NotConverged:
                failures += (k, p) not in PUBLISHED_NOT_CONVERGED
                rows.append([k, p, "NOT CONVERGED"])
                continue
            rows.append([k, p, _g(m.error_const)])
    return header, rows, failures


def _table_coeffs(attempts, seed):
    header = ["k", "p", "ell"] + [f"beta_{j}" for j in range(10)]
    rows, failures = [], 0
    for k in range(3, 11):
        for p in range(2, min(k, 9) + 1):
            try:
                m = synthesize(k, p, attempts=attempts, seed=seed)
            except NotConverged:
                failures += (k, p) not in PUBLISHED_NOT_CONVERGED
                rows.append([k, p, "NOT CONVERGED"] + [""] * 10)
                continue
            rows.append([k, p, _g(m.ell)] + [_g(b) for b in m.beta.beta] + [""] * (10 - k))
    return header, rows, failures


def cmd_tables(args):
    if args.attempts < 1:
        raise UsageError("--attempts must be positive")
    if args.which == "delta":
        header, rows, failures = _table_delta()
    elif args.which == "errconst":
        header, rows, failures = _table_errconst(args.attempts, args.seed)
    else:
        header, rows, failures = _table_coeffs(args.attempts, args.seed)
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if failures:
        print(f"{failures} cell(s) failed to converge", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="stabadams", description="Stabilized explicit Adams-type methods.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="synthesize a method and write its JSON")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--attempts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("damp", help="damped first-order method and its Delta values")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_damp)

    p = sub.add_parser("stability", help="root-locus curve as CSV (and SVG)")
    _add_method_args(p)
    p.add_argument("--n-points", type=int, default=512)
    p.add_argument("--csv", metavar="FILE")
    p.add_argument("--svg", metavar="FILE")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("interval", help="stability interval by formula and root-condition oracle")
    _add_method_args(p)
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("verify", help="check order, feasibility, interval and error constant")
    _add_method_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="one fixed-step run")
    _add_problem_args(p)
    _add_method_args(p)
    p.add_argument("--tau", type=float)
    p.add_argument("--steps", type=int)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("converge", help="convergence study over several step sizes")
    _add_problem_args(p)
    _add_method_args(p)
    p.add_argument("--taus", type=float, nargs="+")
    p.add_argument("--steps", type=int, nargs="+", help="step counts N, tau = span/N")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--svg", metavar="FILE")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("tables", help="regenerate a published table as CSV")
    p.add_argument("--which", required=True, choices=["delta", "errconst", "coeffs"])
    p.add_argument("--attempts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"stabadams {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
