"""Command-line entry point: dims, nfl, demo and zoo subcommands."""

from __future__ import annotations

import argparse
import sys

from .experiments import DEMOS, LEARNERS, ConfigError, ExperimentConfig, dims, run_nfl, zoo_list

BUNDLES = ("thm2", "thm3", "thm4", "thm5", "ex1")


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _pair_list(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for item in text.split(";"):
        if item.strip():
            a, b = item.split(",")
            pairs.append((int(a), int(b)))
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--step-budget", type=int, help="steps per bounded halting query")
    common.add_argument("--enum-budget", type=int, help="perturbations tried per bounded loss query")
    common.add_argument("--domain-window", type=int)
    common.add_argument("--param-window", type=int)
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="robust-cpac", description="Computable robust learning experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="brute-force dimensions of every bundle")
    p.add_argument("--bundle", choices=BUNDLES, action="append")
    p.add_argument("--robust-window", type=int)

    p = sub.add_parser("nfl", parents=[common], help="no-free-lunch adversary against a learner")
    p.add_argument("--learner", choices=LEARNERS, default="erm")
    p.add_argument("-m", type=int, default=2)
    p.add_argument("--pairs", type=_pair_list, help="explicit pairs 'a,b;c,d;...' (2m of them)")
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("demo", parents=[common], help="decode a halting question through a learner")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("-M", type=int, help="sample size fed to the learner")
    p.add_argument("--zoo", type=_int_list, help="comma-separated zoo indices")
    p.add_argument("--pairs", type=_pair_list, help="TwoHalt pairs 'i,k;i,k;...'")

    p = sub.add_parser("zoo", parents=[common], help="inspect the machine zoo")
    p.add_argument("action", choices=("list",))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {
        "step_budget": args.step_budget, "enum_budget": args.enum_budget,
        "domain_window": args.domain_window, "param_window": args.param_window, "workers": args.workers,
    }
    try:
        if args.command == "dims":
            config = ExperimentConfig.from_env(robust_window=args.robust_window, **fields)
            report = dims(config, args.bundle)
        elif args.command == "nfl":
            config = ExperimentConfig.from_env(learner=args.learner, m=args.m, pairs=args.pairs,
                                               seed=args.seed, **fields)
            report = run_nfl(config)
        elif args.command == "demo":
            config = ExperimentConfig.from_env(bundle=args.name, M=args.M, zoo=args.zoo, pairs=args.pairs,
                                               **fields)
            report = DEMOS[args.name](config)
        else:
            report = zoo_list()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
