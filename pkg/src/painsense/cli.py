"""Command-line entry point.

Exit codes: 0 success, 1 I/O error, 2 configuration or validation error,
3 degenerate data.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, load_config
from .errors import ArgumentError, ConfigError, DegenerateDataError
from .frames import format_stream
from .pipeline import run_session
from .roughset import attribute_weights, read_decision_table, screen
from .stats import GroupSamples, anova_oneway, t_test
from .synth import GroundTruth, generate

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def _load(args) -> RunConfig:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def _write(path: Path, text: str):
    # newline="" keeps LF endings on every platform
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)


def cmd_simulate(args) -> int:
    config = _load(args)
    frames, truth = generate(config.synth, config.pipeline.signal.sample_count)
    out = Path(args.output)
    _write(out, format_stream(frames))
    _write(_sibling(out, ".truth.csv"), truth.to_csv())
    print(f"wrote {len(frames)} frames to {out} and {len(truth.labels)} labels to {_sibling(out, '.truth.csv')}")
    return EXIT_OK


def cmd_run(args) -> int:
    config = _load(args)
    text = Path(args.input).read_text(encoding="ascii", errors="replace")
    truth = None
    if args.truth is not None:
        try:
            truth = GroundTruth.from_csv(Path(args.truth).read_text(encoding="ascii")).labels
        except ValueError as exc:
            raise ArgumentError(f"{args.truth}: {exc}") from None
    report = run_session(text.splitlines(), config.pipeline, truth)
    out = Path(args.output)
    _write(out, report.to_jsonl())
    _write(_sibling(out, ".weights.csv"), report.weights_csv())
    _write(_sibling(out, ".cmd"), report.command_lines())
    summary = report.summary()
    print(
        f"{summary['windows']} windows, {summary['screened']} screened, "
        f"{len(report.detected_spans)} detected spans, {report.stats.frames_malformed} malformed frames"
    )
    if report.detection is not None:
        print(f"recall={report.detection['recall']:.4f} precision={report.detection['precision']:.4f}")
    return EXIT_OK


def cmd_screen(args) -> int:
    config = _load(args).pipeline
    system, target = read_decision_table(Path(args.input).read_text(encoding="ascii"))
    weights = attribute_weights(system, target, config.alpha, config.beta, config.dependence_mode)
    result = screen(system, weights, config.theta)
    selected = set(result.selected)
    screen_csv = "object,score,selected\n" + "".join(
        f"{obj},{score!r},{int(obj in selected)}\n" for obj, score in zip(system.universe, result.scores)
    )
    if args.output is None:
        sys.stdout.write(weights.to_csv())
        sys.stdout.write(screen_csv)
    else:
        out = Path(args.output)
        _write(out, weights.to_csv())
        _write(_sibling(out, ".screen.csv"), screen_csv)
    return EXIT_OK


def cmd_stats(args) -> int:
    groups = GroupSamples.from_csv(Path(args.input).read_text(encoding="utf-8"))
    if args.test == "ttest":
        if len(groups.groups) != 2:
            raise ArgumentError(f"ttest needs exactly 2 groups, got {len(groups.groups)}")
        result = t_test(*groups.groups)
    else:
        result = anova_oneway(groups)
    print(result.line())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="painsense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_required=True, output_required=True):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--seed", type=int, help="override the synth seed")
        if input_required is not None:
            p.add_argument("--input", required=input_required)
        p.add_argument("--output", required=output_required)

    p = sub.add_parser("simulate", help="generate a synthetic frame stream and ground truth")
    common(p, input_required=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("run", help="run the full pipeline over a frame stream")
    common(p)
    p.add_argument("--truth", help="ground-truth window_id,label CSV from simulate")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("screen", help="weight and screen a decision-table CSV")
    common(p, output_required=False)
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("stats", help="t-test or one-way ANOVA over a group,value CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--test", choices=("ttest", "anova"), required=True)
    p.set_defaults(func=cmd_stats, config=None, seed=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DegenerateDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigError, ArgumentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
