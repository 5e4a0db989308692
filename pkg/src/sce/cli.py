"""Command-line front end: solve, verify, gen, bench.

Exit codes: 0 feasible / valid, 1 infeasible / invalid, 2 usage or parse
error, 3 size guard exceeded, 4 randomized run gave up (color-coding with a
capped repetition budget only).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import bench as bench_mod
from .fileio import ParseError, parse_election, parse_series, serialize_election
from .generators import approval_bernoulli, ordinal_impartial_culture
from .model import (
    CommitteeSeries,
    GuardExceeded,
    Instance,
    ScoringSpec,
    THRESHOLD_CC,
    WEAKLY_SEPARABLE,
    phi_borda,
    phi_plurality,
    series_quality,
    validate_series,
)
from .runner import ALGORITHMS, run_algorithm

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_RANDOM_FAILURE = 4


class _UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"not a fraction: {text!r}") from None


def _build_spec(args, m: int) -> ScoringSpec:
    if args.beta not in bench_mod.BETA_NAMES:
        raise _UsageError(f"unknown scoring function {args.beta!r}")
    beta = bench_mod.BETA_NAMES[args.beta]
    if beta == WEAKLY_SEPARABLE:
        phi_arg = args.phi or "borda"
        if phi_arg == "borda":
            phi = phi_borda(m)
        elif phi_arg == "plurality":
            phi = phi_plurality(m)
        else:
            try:
                with open(phi_arg) as handle:
                    values = [int(t) for t in handle.read().split()]
            except OSError as exc:
                raise _UsageError(f"cannot read phi file: {exc}") from None
            except ValueError:
                raise _UsageError("phi file must hold whitespace-separated integers") from None
            if len(values) != m:
                raise _UsageError(f"phi file must hold exactly {m} values")
            phi = tuple(values)
        return ScoringSpec(beta, phi=phi)
    if beta == THRESHOLD_CC:
        if args.gamma is None:
            raise _UsageError("threshold-cc needs --gamma P/Q")
        return ScoringSpec(beta, gamma=_fraction(args.gamma))
    return ScoringSpec(beta)


def _read_election(path: str):
    try:
        with open(path) as handle:
            return parse_election(handle.read())
    except OSError as exc:
        raise _UsageError(f"cannot read election file: {exc}") from None


def _cmd_solve(args) -> int:
    election = _read_election(args.input)
    if args.k > election.m:
        raise _UsageError("k exceeds candidate count")
    spec = _build_spec(args, election.m)
    instance = Instance(election, spec, args.tau, args.k, args.f, args.eta, args.alpha)
    result = run_algorithm(args.algorithm, instance, args.seed, reps=args.reps)
    if result.feasible:
        print("FEASIBLE")
        print(f"QUALITY {result.quality}")
        if args.witness:
            for line in result.witness.to_lines():
                print(line)
        return EXIT_FEASIBLE
    if args.algorithm == "color-coding" and args.reps is not None:
        print("FAILURE")
        return EXIT_RANDOM_FAILURE
    print("INFEASIBLE")
    return EXIT_INFEASIBLE


def _cmd_verify(args) -> int:
    election = _read_election(args.input)
    spec = _build_spec(args, election.m)
    try:
        with open(args.series) as handle:
            committees = parse_series(handle.read(), election.m)
    except OSError as exc:
        raise _UsageError(f"cannot read series file: {exc}") from None
    violation = validate_series(committees, args.k, args.f)
    if violation is not None:
        print(f"INVALID {violation}")
        return EXIT_INFEASIBLE
    series = CommitteeSeries(committees)
    quality = series_quality(series.scores(election, spec), args.alpha)
    if quality < args.eta:
        print(f"INVALID quality {quality} below required {args.eta}")
        return EXIT_INFEASIBLE
    print(f"VALID QUALITY {quality}")
    return EXIT_FEASIBLE


def _cmd_gen(args) -> int:
    if args.kind == "ordinal-ic":
        election = ordinal_impartial_culture(args.m, args.n, args.seed)
    else:
        election = approval_bernoulli(args.m, args.n, _fraction(args.p), args.seed)
    sys.stdout.write(serialize_election(election))
    return EXIT_FEASIBLE


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(t) for t in text.split(",")]


def _str_list(text: str) -> list[str]:
    text = text.strip()
    return [t for t in text.split(",") if t] if text else []


def _cmd_bench(args) -> int:
    etas = None
    if args.etas != "sweep":
        etas = _int_list(args.etas)
    reports = bench_mod.run_grid(
        m_list=_int_list(args.m),
        k_list=_int_list(args.k),
        tau_list=_int_list(args.tau),
        f_list=_int_list(args.f),
        alphas=_str_list(args.alpha),
        beta_names=_str_list(args.beta),
        algorithms=_str_list(args.algorithms),
        n=args.n,
        per_cell=args.per_cell,
        seed=args.seed,
        etas=etas,
        phi=args.phi or "borda",
        gamma=_fraction(args.gamma) if args.gamma else None,
        approval_p=_fraction(args.p),
    )
    bench_mod.write_csv(reports, args.out)
    print(f"ROWS {len(reports)}")
    print(f"DISAGREEMENTS {bench_mod.count_disagreements(reports)}")
    return EXIT_FEASIBLE


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sce", description="Successive committee election solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide one instance")
    solve.add_argument("--input", required=True)
    solve.add_argument("--alpha", required=True, choices=["util", "egal"])
    solve.add_argument("--beta", required=True, choices=sorted(bench_mod.BETA_NAMES))
    solve.add_argument("--phi")
    solve.add_argument("--gamma")
    solve.add_argument("--tau", type=int, required=True)
    solve.add_argument("--k", type=int, required=True)
    solve.add_argument("--f", type=int, required=True)
    solve.add_argument("--eta", type=int, required=True)
    solve.add_argument("--algorithm", default="auto", choices=ALGORITHMS)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--reps", type=int, default=None,
                       help="cap color-coding repetitions; exit 4 when nothing is found")
    solve.add_argument("--witness", action="store_true")
    solve.set_defaults(func=_cmd_solve)

    verify = sub.add_parser("verify", help="re-validate a witness file")
    verify.add_argument("--input", required=True)
    verify.add_argument("--series", required=True)
    verify.add_argument("--alpha", required=True, choices=["util", "egal"])
    verify.add_argument("--beta", required=True, choices=sorted(bench_mod.BETA_NAMES))
    verify.add_argument("--phi")
    verify.add_argument("--gamma")
    verify.add_argument("--k", type=int, required=True)
    verify.add_argument("--f", type=int, required=True)
    verify.add_argument("--eta", type=int, required=True)
    verify.set_defaults(func=_cmd_verify)

    gen = sub.add_parser("gen", help="generate a synthetic election")
    gen.add_argument("--kind", required=True, choices=["ordinal-ic", "approval-p"])
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", default="1/2")
    gen.add_argument("--seed", type=int, required=True)
    gen.set_defaults(func=_cmd_gen)

    bench = sub.add_parser("bench", help="run a solver grid and write CSV")
    bench.add_argument("--m", default="")
    bench.add_argument("--k", default="")
    bench.add_argument("--tau", default="")
    bench.add_argument("--f", default="")
    bench.add_argument("--alpha", default="util,egal")
    bench.add_argument("--beta", default="cc")
    bench.add_argument("--phi")
    bench.add_argument("--gamma")
    bench.add_argument("--p", default="1/2")
    bench.add_argument("--n", type=int, default=3)
    bench.add_argument("--per-cell", type=int, default=1, dest="per_cell")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--etas", default="sweep")
    bench.add_argument("--algorithms", default="oracle,subset-dp")
    bench.add_argument("--out", required=True)
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, _UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
