"""Command-line interface.

Subcommands:
    validate  check MDP / policy / value files against their invariants
    analyze   run a creativity analysis for one mapping and emit a report
    learn     run the tabular TD learner and write a run record

Exit codes: 0 success, 1 domain or validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analyzer import CreativityReport, analyze, summarize
from .learner import LearnerConfig, td_learn
from .mappings import (
    StateMappingConfig,
    TrajectoryMappingConfig,
    TransitionMappingConfig,
)
from .mdp import (
    StochasticPolicy,
    TabularMdp,
    ValueEstimate,
    validate_mdp,
    validate_policy,
    validate_values,
)
from .normalize import tag_from_string
from .run import RunRecord, single_snapshot_run

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: cannot read file: {exc}", EXIT_IO) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}", EXIT_INVALID) from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"{path}: cannot write file: {exc}", EXIT_IO) from exc


def _load_mdp(path: str) -> TabularMdp:
    try:
        return TabularMdp.from_dict(_read_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from exc


def _load_policy(path: str, mdp: TabularMdp) -> StochasticPolicy:
    try:
        return StochasticPolicy.from_dict(_read_json(path), mdp)
    except (ValueError, TypeError, KeyError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from exc


def _load_values(path: str, mdp: TabularMdp) -> ValueEstimate:
    try:
        return ValueEstimate.from_dict(_read_json(path), mdp)
    except (ValueError, TypeError, KeyError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from exc


def _parse_starts(spec: str | None, mdp: TabularMdp) -> tuple[int, ...]:
    if spec is None:
        return (0,)
    try:
        return tuple(mdp.state_index(s.strip()) for s in spec.split(","))
    except KeyError as exc:
        raise CliError(f"--start: {exc.args[0]}", EXIT_INVALID) from exc


def _flatten(value, prefix: str = "") -> list[str]:
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            lines.extend(_flatten(value[key], f"{prefix}.{key}" if prefix else key))
        return lines
    if isinstance(value, list):
        lines = []
        for i, item in enumerate(value):
            lines.extend(_flatten(item, f"{prefix}[{i}]"))
        return lines
    return [f"{prefix} = {json.dumps(value)}"]


def _render_report(report: CreativityReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    return "\n".join(_flatten(report.to_dict())) + "\n"


def cmd_validate(args: argparse.Namespace) -> int:
    mdp = _load_mdp(args.mdp)
    failures = [(args.mdp, v) for v in validate_mdp(mdp)]
    if args.policy:
        policy = _load_policy(args.policy, mdp)
        failures.extend((args.policy, v) for v in validate_policy(policy, mdp))
    if args.values:
        values = _load_values(args.values, mdp)
        failures.extend((args.values, v) for v in validate_values(values, mdp))
    for path, violation in failures:
        print(f"{path}: {violation}")
    if failures:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def _mapping_config(args: argparse.Namespace, mdp: TabularMdp):
    try:
        normalization = tag_from_string(args.normalization)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    try:
        if args.mapping == "s":
            return StateMappingConfig(args.alpha, args.beta, normalization)
        if args.mapping == "sas":
            return TransitionMappingConfig(args.alpha, args.beta, normalization)
        horizon = args.horizon
        if horizon is None:
            horizon = mdp.n_states * mdp.n_actions
        return TrajectoryMappingConfig(args.alpha, args.beta, horizon, normalization)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc


def _analysis_run(args: argparse.Namespace) -> RunRecord:
    if args.run:
        try:
            return RunRecord.from_dict(_read_json(args.run))
        except (ValueError, TypeError, KeyError) as exc:
            raise CliError(f"{args.run}: {exc}", EXIT_INVALID) from exc
    if not args.mdp or not args.policy:
        raise CliError("analyze needs --run, or --mdp plus --policy", EXIT_INVALID)
    mdp = _load_mdp(args.mdp)
    policy = _load_policy(args.policy, mdp)
    values = _load_values(args.values, mdp) if args.values else None
    starts = _parse_starts(args.start, mdp)
    return single_snapshot_run(mdp, policy, values, starts)


def cmd_analyze(args: argparse.Namespace) -> int:
    run = _analysis_run(args)
    cfg = _mapping_config(args, run.mdp)
    try:
        report = analyze(run, args.mapping, cfg)
    except (ValueError, IndexError) as exc:
        raise CliError(f"analysis failed: {exc}", EXIT_INVALID) from exc
    _write_text(args.out, _render_report(report, args.format))
    print(summarize(report))
    return EXIT_OK


def cmd_learn(args: argparse.Namespace) -> int:
    mdp = _load_mdp(args.mdp)
    problems = validate_mdp(mdp)
    if problems:
        for v in problems:
            print(f"{args.mdp}: {v}")
        return EXIT_INVALID
    try:
        cfg = LearnerConfig(
            gamma=args.gamma,
            episodes=args.episodes,
            steps_per_episode=args.steps,
            epsilon=args.epsilon,
            learning_rate=args.learning_rate,
            snapshot_every=args.snapshot_every,
            seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    starts = _parse_starts(args.start, mdp) if args.start else None
    run = td_learn(mdp, cfg, starts)
    _write_text(args.out, run.to_json())
    print(
        f"run: snapshots={len(run.snapshots)} steps={len(run.experience)} "
        f"seed={cfg.seed}"
    )
    if args.analyze:
        cfg_map = _mapping_config(args, mdp)
        try:
            report = analyze(run, args.mapping, cfg_map)
        except (ValueError, IndexError) as exc:
            raise CliError(f"analysis failed: {exc}", EXIT_INVALID) from exc
        _write_text(args.report_out, _render_report(report, args.format))
        print(summarize(report))
    return EXIT_OK


def _add_mapping_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mapping", choices=("s", "sas", "tau"), default="sas")
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--beta", type=float, default=0.5)
    parser.add_argument(
        "--horizon",
        type=int,
        default=None,
        help="trajectory enumeration bound (tau only; default |S|*|A|)",
    )
    parser.add_argument(
        "--normalization",
        default="min-max",
        help="min-max | affine[:scale,offset] | logistic[:center,slope]",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="creativemdp",
        description=(
            "Analyze finite MDP agents as exploratory creative systems: "
            "conceptual spaces, aberrations, uninspiration, transformations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate input files")
    p_validate.add_argument("--mdp", required=True)
    p_validate.add_argument("--policy")
    p_validate.add_argument("--values")
    p_validate.set_defaults(func=cmd_validate)

    p_analyze = sub.add_parser("analyze", help="analyze a run or a static pair")
    p_analyze.add_argument("--run", help="run-record JSON file")
    p_analyze.add_argument("--mdp")
    p_analyze.add_argument("--policy")
    p_analyze.add_argument("--values")
    p_analyze.add_argument("--start", help="comma-separated start states (default: first)")
    p_analyze.add_argument("--out", help="report output path (default: stdout)")
    _add_mapping_flags(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_learn = sub.add_parser("learn", help="run the TD learner, write a run record")
    p_learn.add_argument("--mdp", required=True)
    p_learn.add_argument("--gamma", type=float, default=0.9)
    p_learn.add_argument("--episodes", type=int, default=500)
    p_learn.add_argument("--steps", type=int, default=20, help="steps per episode")
    p_learn.add_argument("--epsilon", type=float, default=0.1)
    p_learn.add_argument("--learning-rate", type=float, default=0.1)
    p_learn.add_argument("--snapshot-every", type=int, default=50)
    p_learn.add_argument("--seed", type=int, default=0)
    p_learn.add_argument("--start", help="comma-separated start states (default: all)")
    p_learn.add_argument("--out", help="run-record output path (default: stdout)")
    p_learn.add_argument("--analyze", action="store_true", help="chain an analysis")
    p_learn.add_argument("--report-out", help="report path when chaining (default: stdout)")
    _add_mapping_flags(p_learn)
    p_learn.set_defaults(func=cmd_learn)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
