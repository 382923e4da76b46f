"""Command-line entry point: ``python3 -m blissmoser <command> ...``.

Output is CSV at full precision (the optimizer report is a JSON object).
Exit codes: 0 success, 2 usage or validation, 3 numerical non-convergence,
4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gridfn, special, suites
from .functionals import eval_functional
from .optimize import maximize_gridfn
from .quad import QuadConfig, QuadratureError
from .sequences import parse_schedule, sweep
from .series import series_bound, series_csv
from .weights import PERTURBATIONS, WeightSpec

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _weight(args) -> WeightSpec:
    gamma = args.gamma
    if gamma is None:
        gamma = 1.0 if args.perturb == "triple_log" else 0.0
    return WeightSpec(beta=args.beta, gamma=gamma, perturbation=args.perturb)


def _cfg(args) -> QuadConfig:
    return QuadConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_constants(args) -> int:
    ks = _floats(args.k)
    if any(k < 1 for k in ks):
        raise UsageError("k values must be >= 1")
    lines = ["N,k,C,kC,C_N_limit"]
    for r in special.bliss_table(gridfn._check_N(args.N), ks):
        lines.append(f"{r.N},{r.k:.17g},{r.c_value:.17g},{r.k_times_c:.17g},{r.limit:.17g}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    table = sweep(_weight(args), args.N, parse_schedule(args.j), _cfg(args))
    _emit(table.to_csv(), args.out)
    return EXIT_OK if all(r.converged for r in table.rows) else EXIT_NUMERIC


def cmd_eval(args) -> int:
    if not args.fn:
        raise UsageError("eval needs --fn PATH")
    try:
        f = gridfn.loads(Path(args.fn).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {args.fn}: {exc}") from exc
    res = eval_functional(f, _weight(args), args.N, _cfg(args))
    _emit("value,error_estimate,converged\n"
          f"{res.value:.17g},{res.error_estimate:.17g},{'true' if res.converged else 'false'}\n",
          args.out)
    return EXIT_OK if res.converged else EXIT_NUMERIC


def cmd_series(args) -> int:
    N = gridfn._check_N(args.N)
    if args.k is not None:
        K = int(float(args.k))
        if K < 1:
            raise UsageError("--k must be >= 1")
        _emit(series_csv(N, args.beta, K), args.out)
        return EXIT_OK
    if args.beta >= 1.0:
        raise UsageError("the series bound needs beta < 1; pass --k K for the term table")
    sb = series_bound(N, args.beta)
    _emit("N,beta,bound,terms_used,tail_bound,tail_ratio,converged\n"
          f"{N},{args.beta:.17g},{sb.value:.17g},{sb.terms_used},{sb.tail_bound:.17g},"
          f"{sb.tail_ratio:.17g},{'true' if sb.converged else 'false'}\n", args.out)
    return EXIT_OK if sb.converged else EXIT_NUMERIC


def cmd_optimize(args) -> int:
    rep = maximize_gridfn(_weight(args), args.N, segments=args.segments, init=args.seed,
                          iters=args.iters, cfg=_cfg(args))
    sys.stdout.write(rep.to_json() + "\n")
    if args.out:
        Path(args.out).write_text(rep.trace_csv())
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        checks = suites.run(args.suite, quick=args.quick)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    lines = ["suite,check,violations,status,detail"]
    for c in checks:
        detail = c.detail.replace('"', "'")
        lines.append(f'{c.suite},{c.name},{c.violations},{"pass" if c.passed else "FAIL"},"{detail}"')
    failed = [c for c in checks if not c.passed]
    _emit("\n".join(lines) + "\n", args.out)
    if failed:
        sys.stderr.write(f"{len(failed)} failed check(s):\n")
        for c in failed:
            sys.stderr.write(f"  {c.suite}: {c.name} ({c.detail})\n")
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blissmoser", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, functional=True, quad=True):
        sp.add_argument("--N", type=int, default=2)
        sp.add_argument("--out")
        if functional:
            sp.add_argument("--beta", type=float, default=1.0)
            sp.add_argument("--gamma", type=float, default=None)
            sp.add_argument("--perturb", choices=PERTURBATIONS, default="none")
        if quad:
            sp.add_argument("--rel-tol", type=float, default=1e-9)
            sp.add_argument("--abs-tol", type=float, default=1e-12)

    sp = sub.add_parser("constants", help="Bliss constants C_{N,k} and the limit C_N")
    common(sp, functional=False, quad=False)
    sp.add_argument("--k", default="1,2,10,100,1e4,1e6")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("sweep", help="functional along w_j")
    common(sp)
    sp.add_argument("--j", default="1e2:1e8:x10")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("eval", help="functional of a GridFn file")
    common(sp)
    sp.add_argument("--fn")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("series", help="Taylor-series bound or term table")
    common(sp, functional=False, quad=False)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--k", default=None, help="emit k,term,partial_sum,ratio for k = 1..K")
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("optimize", help="projected gradient ascent over E_N")
    common(sp)
    sp.add_argument("--segments", type=int, default=64)
    sp.add_argument("--iters", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("verify", help="run property suites")
    sp.add_argument("--suite", default="all",
                    help=f"one or more of {', '.join(suites.SUITES)} (comma list) or all")
    sp.add_argument("--quick", action="store_true", help="smaller corpora")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except QuadratureError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
