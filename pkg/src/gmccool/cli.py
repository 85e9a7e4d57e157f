"""Command-line interface.

Exit codes: 0 success or YES, 1 NO, 2 search budget exhausted, 64 usage or
input error, 70 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from gmccool import __version__
from gmccool.abelian import abelian_invariants
from gmccool.errors import BudgetExhausted, ConventionError, InputError
from gmccool.equivariant import exhaustive_sweep, random_sweep
from gmccool.orbit import SearchBudget, decide_orbit, minimize
from gmccool.stabilizer import DEFAULT_RANK_BOUND, brown_presentation
from gmccool.stallings import (
    SubgroupTuple,
    load_subgroup_tuple,
    stallings_tuple,
    star_graph_dot,
)

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 64, 70
ENV_PREFIX = "GMCCOOL_"


@dataclass
class RunConfig:
    rank_bound: int = DEFAULT_RANK_BOUND
    max_states: int = 200_000
    max_restarts: int = 10_000
    max_star_vertices: int = 500
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not isinstance(value, int):
                raise InputError(f"config value {name} must be an integer")
            if name != "seed" and value < 1:
                raise InputError(f"config value {name} must be positive")

    def budget(self) -> SearchBudget:
        return SearchBudget(self.max_states, self.max_restarts)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _resolve_config(args) -> RunConfig:
    """Defaults, then environment, then config file, then flags."""
    values = asdict(RunConfig())
    for name in values:
        env = os.environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            try:
                values[name] = int(env)
            except ValueError:
                raise InputError(f"{ENV_PREFIX + name.upper()} must be an integer") from None
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config file: {exc}") from None
        unknown = set(loaded) - set(values)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for name in values:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return RunConfig(**values)


def _read_tuple(path: str) -> SubgroupTuple:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return load_subgroup_tuple(text)


def _emit(args, command: str, config: RunConfig, result: dict) -> None:
    report = {"command": command, "version": __version__, "config": asdict(config),
              "seed": config.seed, "result": result}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_fold(args, config: RunConfig) -> int:
    K = _read_tuple(args.input)
    S = stallings_tuple(K)
    if args.dot:
        Path(args.dot).write_text(S.union().to_dot("stallings"))
    _emit(args, "fold", config, {"input": K.to_json(), "stallings": S.to_json()})
    return EXIT_OK


def cmd_minimize(args, config: RunConfig) -> int:
    K = _read_tuple(args.input)
    D = minimize(K, config.budget())
    _emit(args, "minimize", config, {"input": K.to_json(), **D.to_json()})
    return EXIT_OK


def cmd_decide(args, config: RunConfig) -> int:
    K, K2 = _read_tuple(args.left), _read_tuple(args.right)
    w = decide_orbit(K, K2, config.budget())
    result = {"left": K.to_json(), "right": K2.to_json(), "answer": "YES" if w else "NO"}
    if w is not None:
        result["witness"] = w.theta.to_json()
        result["verification"] = {"refolded_codes_equal": w.verified,
                                  "image": K.map(w.theta).to_json()}
    _emit(args, "decide", config, result)
    return EXIT_OK if w else EXIT_NO


def cmd_stabilizer(args, config: RunConfig) -> int:
    K = _read_tuple(args.input)
    P = brown_presentation(K, config.budget(), config.rank_bound, config.max_star_vertices)
    result = {"input": K.to_json(), **P.to_json(generators_only=args.generators_only)}
    if not args.generators_only:
        free, torsion = abelian_invariants(P.relator_matrix(), len(P.generators))
        result["abelianization"] = {"free_rank": free, "torsion": torsion}
    _emit(args, "stabilizer", config, result)
    return EXIT_OK


def cmd_check_lemmas(args, config: RunConfig) -> int:
    if args.exhaustive:
        report = exhaustive_sweep(args.group, args.max_darts)
    else:
        report = random_sweep(args.group, args.max_darts, args.samples, config.seed)
    _emit(args, "check-lemmas", config, report.to_json())
    return EXIT_OK if report.ok else EXIT_NO


def cmd_export_dot(args, config: RunConfig) -> int:
    K = _read_tuple(args.input)
    S = stallings_tuple(K)
    text = star_graph_dot(S) if args.star else S.union().to_dot("stallings")
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmccool", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gmccool {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig values")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int)
    common.add_argument("--max-states", dest="max_states", type=int)
    common.add_argument("--max-restarts", dest="max_restarts", type=int)
    common.add_argument("--rank-bound", dest="rank_bound", type=int)
    common.add_argument("--max-star-vertices", dest="max_star_vertices", type=int)
    common.add_argument("--workers", type=int, help="recorded; evaluation is sequential")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fold", parents=[common], help="Stallings graphs of a subgroup tuple")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--dot", help="also write the graphs as DOT")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("minimize", parents=[common], help="minimal volume and fundamental domain")
    p.add_argument("--input", "-i", required=True)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("decide", parents=[common], help="decide whether two tuples lie in one orbit")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("stabilizer", parents=[common], help="presentation of the stabilizer")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--generators-only", action="store_true")
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("check-lemmas", parents=[common], help="equivariant separation inequalities")
    p.add_argument("--group", choices=["trivial", "z2", "z3", "s3"], default="z2")
    p.add_argument("--max-darts", type=int, default=8)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_check_lemmas)

    p = sub.add_parser("export-dot", parents=[common], help="DOT export of Stallings or star graphs")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--star", action="store_true", help="export the modified star graph")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        return args.func(args, config)
    except BudgetExhausted as exc:
        print(f"gmccool: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"gmccool: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConventionError as exc:
        print(f"gmccool: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
