"""Command-line interface.

Nine subcommands tie the library together: gen, check, super, count,
solve, theory, lemma, bounds, sweep.  Every experiment takes a mandatory
--seed and is fully replayable; results go to stdout, diagnostics to
stderr.  Exit codes: 0 success, 1 negative/absent result, 2 usage error,
3 exhausted resource budget.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import core, fileio, montecarlo, search, theory

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _real(x: float) -> str:
    return fileio.fmt_real(x)


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_instance(path: str) -> core.Instance:
    return fileio.parse_instance(_read(path))


def _load_assignment(path: str, params: core.RBParams) -> tuple[int, ...]:
    return fileio.parse_assignment(_read(path), n=params.n, d=params.d)


def _print_estimate(est: montecarlo.MCEstimate) -> None:
    print(
        f"mean={_real(est.mean)} stderr={_real(est.stderr)} "
        f"trials={est.trials} seed={est.seed} resamples={est.resamples}"
    )


def _cmd_gen(args: argparse.Namespace) -> int:
    params = core.derive_params(args.n, args.k, args.alpha, args.r, args.p, args.mode)
    inst = core.generate(params, args.seed)
    data = fileio.serialize_instance(inst)
    if args.out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(args.out).write_bytes(data)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    assignment = _load_assignment(args.assignment, inst.params)
    ok = core.satisfies(inst, assignment)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def _cmd_super(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    if args.assignment is not None:
        assignment = _load_assignment(args.assignment, inst.params)
        ok = core.is_super_solution(inst, assignment, args.level)
        print("true" if ok else "false")
        return EXIT_OK if ok else EXIT_FALSE
    witness = search.find_super(inst, args.level, cap=args.cap)
    if witness is None:
        print("false")
        return EXIT_FALSE
    print(" ".join(str(v) for v in witness))
    return EXIT_OK


def _cmd_count(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    report = search.count_all(inst, cap=args.cap, workers=args.workers)
    print(f"n_solutions={report.n_solutions}")
    print(f"n_super10={report.n_super10}")
    print(f"n_super11={report.n_super11}")
    print(f"enumerated={report.enumerated}")
    print(f"capped={'true' if report.capped else 'false'}")
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    solution = search.backtrack_solve(inst)
    if solution is None:
        print("false")
        return EXIT_FALSE
    print(" ".join(str(v) for v in solution))
    return EXIT_OK


def _cmd_theory(args: argparse.Namespace) -> int:
    print(f"threshold={_real(theory.threshold(args.alpha, args.p))}")
    if args.n is None and args.k is None:
        return EXIT_OK
    if args.n is None or args.k is None:
        raise core.ParameterError("--n and --k must be given together")
    if args.r is None:
        # domain size suffices for the per-constraint probabilities
        d = core.derive_params(args.n, args.k, args.alpha, 1.0, args.p).d
        print(f"rho={_real(theory.repair_sat_prob(args.p, d, args.k))}")
        print(f"pair_sat_prob={_real(theory.pair_repair_sat_prob(args.p, d, args.k))}")
        return EXIT_OK
    params = core.derive_params(args.n, args.k, args.alpha, args.r, args.p, args.mode)
    print(f"rho={_real(theory.repair_sat_prob(args.p, params.d, params.k))}")
    print(
        f"pair_sat_prob={_real(theory.pair_repair_sat_prob(args.p, params.d, params.k))}"
    )
    report = theory.log_expected_super_bounds(params, core.regular_profile(params))
    print(f"log_base={_real(report.log_base)}")
    print(f"correction_lower={_real(report.correction_lower)}")
    print(f"correction_upper={_real(report.correction_upper)}")
    print(f"log_lower={_real(report.log_lower)}")
    print(f"log_upper={_real(report.log_upper)}")
    print(f"rho_effective={_real(report.repair_sat_prob)}")
    return EXIT_OK


def _cmd_lemma(args: argparse.Namespace) -> int:
    est = montecarlo.mc_repair_prob(
        args.which, args.p, args.d, args.k, args.trials, args.seed
    )
    _print_estimate(est)
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    result = montecarlo.mc_repair_bounds(
        args.n, args.k, args.d, args.m, args.p, args.trials, args.seed
    )
    print(f"lower={_real(result.lower)}")
    print(f"upper={_real(result.upper)}")
    _print_estimate(result.empirical)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    rows = montecarlo.sweep(
        args.n,
        args.k,
        args.alpha,
        args.p,
        args.r_from,
        args.r_to,
        args.steps,
        args.trials,
        args.seed,
        mode=args.mode,
        workers=args.workers,
    )
    print(f"sweep seed={args.seed} points={len(rows)} trials={args.trials}", file=sys.stderr)
    csv_text = montecarlo.render_sweep_csv(rows)
    if args.out is None:
        sys.stdout.write(csv_text)
        sys.stdout.flush()
    else:
        Path(args.out).write_text(csv_text, encoding="utf-8", newline="")
    if args.plot is not None:
        from . import plotting

        plotting.plot_sweep(rows, args.plot)
    return EXIT_OK


def _add_mode(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--mode", choices=core.MODES, default=core.EXACT, help="relation sampling mode"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbcsp",
        description=(
            "Random binary-domain-growth CSP instances: generation, robust-"
            "solution checking, exact counting, closed-form bounds, and "
            "seeded Monte Carlo experiments."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("gen", help="generate an instance and write it out")
    s.add_argument("--n", type=int, required=True, help="number of variables")
    s.add_argument("--k", type=int, required=True, help="constraint arity")
    s.add_argument("--alpha", type=float, required=True, help="domain growth exponent")
    s.add_argument("--r", type=float, required=True, help="constraint density")
    s.add_argument("--p", type=float, required=True, help="constraint tightness")
    s.add_argument("--seed", type=int, required=True, help="generator seed (uint64)")
    _add_mode(s)
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=_cmd_gen)

    s = sub.add_parser("check", help="check an assignment against an instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--assignment", required=True)
    s.set_defaults(func=_cmd_check)

    s = sub.add_parser(
        "super",
        help="check (or, without --assignment, search for) a super solution",
    )
    s.add_argument("--level", type=int, choices=(10, 11), required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--assignment")
    s.add_argument("--cap", type=int, help="assignment visit budget for the search")
    s.set_defaults(func=_cmd_super)

    s = sub.add_parser("count", help="count solutions and super solutions exactly")
    s.add_argument("--instance", required=True)
    s.add_argument("--cap", type=int, help="stop after this many assignments")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=_cmd_count)

    s = sub.add_parser("solve", help="find one solution by backtracking")
    s.add_argument("--instance", required=True)
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser("theory", help="evaluate the closed-form quantities")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--r", type=float)
    _add_mode(s)
    s.set_defaults(func=_cmd_theory)

    s = sub.add_parser("lemma", help="Monte Carlo check of a repair probability")
    s.add_argument("--which", type=int, choices=(1, 2), required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=_cmd_lemma)

    s = sub.add_parser(
        "bounds", help="Monte Carlo check of the repairability brackets"
    )
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=_cmd_bounds)

    s = sub.add_parser("sweep", help="sweep the constraint density, emit CSV")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--r-from", type=float, required=True, dest="r_from")
    s.add_argument("--r-to", type=float, required=True, dest="r_to")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    _add_mode(s)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="write the CSV here instead of stdout")
    s.add_argument("--plot", help="also render the rows to this image file")
    s.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except core.ResourceBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (core.ParameterError, fileio.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
