"""Command-line front ends: `syllasplit` and `syllasplit-eval`."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .audio_io import CorruptHeaderError, UnsupportedFormatError, export_segment, load_wav
from .envelope import write_envelope_csv
from .evaluate import evaluate_corpus
from .pipeline import PipelineConfig, SegmentationResult, package_result, run_pipeline
from .segmentation import write_runs_dump

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2

log = logging.getLogger("syllasplit")


class _Parser(argparse.ArgumentParser):
    # usage problems exit with 1 (argparse default would be 2, which is
    # reserved here for I/O and format errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _setup_logging() -> None:
    level_name = os.environ.get("SYLLASPLIT_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline parameters")
    group.add_argument("--perc", type=float, default=1.2,
                       help="threshold multiplier on the rectified-signal RMS (default 1.2)")
    group.add_argument("--epsilon", type=float, default=1.25,
                       help="threshold raise factor per supersyllable split level (default 1.25)")
    group.add_argument("--window", type=int, default=2048, dest="analysis_window",
                       help="block-processing window in samples (default 2048)")
    group.add_argument("--vocoder-ms", type=float, default=22.0,
                       help="discharge window in milliseconds (default 22)")
    group.add_argument("--min-run-factor", type=float, default=1.8,
                       help="purge 1-runs shorter than this many discharge windows (default 1.8)")
    group.add_argument("--super-limit", type=int, default=None, metavar="N",
                       help="supersyllable length limit in samples (default 12010 at 44.1 kHz, "
                            "rescaled for other rates)")
    group.add_argument("--max-depth", type=int, default=3,
                       help="maximum supersyllable split recursion depth (default 3)")
    group.add_argument("--no-trim", action="store_true",
                       help="skip leading/trailing silence removal")
    group.add_argument("--silence-threshold", type=float, default=0.02,
                       help="trim cutoff as a fraction of the peak magnitude (default 0.02)")


def _config_from(args) -> PipelineConfig:
    return PipelineConfig(
        perc=args.perc,
        epsilon=args.epsilon,
        vocoder_window_s=args.vocoder_ms / 1000.0,
        analysis_window=args.analysis_window,
        min_run_factor=args.min_run_factor,
        supersyllable_limit=args.super_limit,
        max_depth=args.max_depth,
        trim=not args.no_trim,
        silence_threshold=args.silence_threshold,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="syllasplit",
        description="Segment a recorded speech WAV file into syllable spans.",
    )
    parser.add_argument("--input", action="append", required=True, metavar="PATH",
                        help="input WAV file; repeat the flag for batch mode")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report format (default json)")
    parser.add_argument("--export-dir", metavar="DIR",
                        help="write one WAV snippet per detected syllable into DIR")
    parser.add_argument("--dump-envelope", metavar="PATH",
                        help="write a per-sample index,rectified,envelope CSV (single input only)")
    parser.add_argument("--dump-runs", metavar="PATH",
                        help="write the pre-purge run-length table (single input only)")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for batch mode (default 1)")
    _add_config_flags(parser)
    return parser


def _process_file(
    path: str,
    config: PipelineConfig,
    export_dir: str | None = None,
    dump_envelope: str | None = None,
    dump_runs: str | None = None,
) -> SegmentationResult:
    buffer = load_wav(path)
    artifacts = run_pipeline(buffer, config)
    result = package_result(artifacts, config, path)
    log.info("%s: %d syllables in %d samples", path, len(result.syllables), result.total_samples)
    if dump_envelope:
        write_envelope_csv(dump_envelope, artifacts.rectified, artifacts.trace)
    if dump_runs:
        write_runs_dump(dump_runs, artifacts.runs)
    if export_dir:
        out_dir = Path(export_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(path).stem
        for record in result.syllables:
            export_segment(
                artifacts.buffer,
                (record.onset, record.end),
                out_dir / f"{stem}_syl{record.index}.wav",
            )
    return result


def _run_batch(paths: list[str], config: PipelineConfig, args) -> tuple[dict, bool]:
    """Process several inputs with per-file isolation; returns (payload, any_failed)."""
    outputs: dict[str, dict] = {}
    failed = False
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                pool.submit(_process_file, path, config, args.export_dir) for path in paths
            ]
            for path, future in zip(paths, futures):
                error = future.exception()
                if error is None:
                    outputs[path] = future.result().to_dict()
                else:
                    outputs[path] = {"error": f"{type(error).__name__}: {error}"}
                    failed = True
    else:
        for path in paths:
            try:
                outputs[path] = _process_file(path, config, args.export_dir).to_dict()
            except Exception as exc:
                outputs[path] = {"error": f"{type(exc).__name__}: {exc}"}
                failed = True
    return outputs, failed


def _emit(payload: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # raised by -h as well, with code 0
        return int(exc.code or 0)
    _setup_logging()
    paths = args.input
    if len(paths) > 1 and args.format == "csv":
        print("syllasplit: error: csv output is per-file; batch mode requires --format json",
              file=sys.stderr)
        return EXIT_USAGE
    if len(paths) > 1 and (args.dump_envelope or args.dump_runs):
        print("syllasplit: error: --dump-envelope/--dump-runs accept a single input",
              file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("syllasplit: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = _config_from(args)
    except ValueError as exc:
        print(f"syllasplit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if len(paths) == 1:
        try:
            result = _process_file(
                paths[0], config, args.export_dir, args.dump_envelope, args.dump_runs
            )
        except FileNotFoundError as exc:
            print(f"syllasplit: error: file not found: {exc.filename or paths[0]}", file=sys.stderr)
            return EXIT_IO
        except (UnsupportedFormatError, CorruptHeaderError) as exc:
            print(f"syllasplit: error: {paths[0]}: {exc}", file=sys.stderr)
            return EXIT_IO
        except OSError as exc:
            print(f"syllasplit: error: {exc}", file=sys.stderr)
            return EXIT_IO
        payload = result.to_json() + "\n" if args.format == "json" else result.to_csv()
        _emit(payload, args.out)
        return EXIT_OK

    outputs, failed = _run_batch(paths, config, args)
    try:
        _emit(json.dumps(outputs, indent=2) + "\n", args.out)
    except OSError as exc:
        print(f"syllasplit: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_IO if failed else EXIT_OK


def build_eval_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="syllasplit-eval",
        description="Score segmentation output against reference annotations.",
    )
    parser.add_argument("manifest", metavar="MANIFEST",
                        help="JSON array of {audio, expected_syllables, spans?, tolerance?}")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "table"), default="json",
                        help="report format (default json)")
    _add_config_flags(parser)
    return parser


def eval_cli(argv=None) -> int:
    parser = build_eval_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _setup_logging()
    try:
        config = _config_from(args)
    except ValueError as exc:
        print(f"syllasplit-eval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = evaluate_corpus(args.manifest, config)
    except FileNotFoundError as exc:
        print(f"syllasplit-eval: error: manifest not found: {exc.filename or args.manifest}",
              file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"syllasplit-eval: error: bad manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    payload = report.to_json() + "\n" if args.format == "json" else report.to_table()
    try:
        _emit(payload, args.out)
    except OSError as exc:
        print(f"syllasplit-eval: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


def eval_main() -> None:
    sys.exit(eval_cli())
