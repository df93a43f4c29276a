"""Command-line front end.

Exit codes: 0 ok / relevant, 1 I/O or malformed input, 2 usage, 3 signal
classified as noise.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .bands import DEFAULT_MAX_LEVEL
from .brf import DEFAULT_TOP_N, AnalysisReport, analyze
from .brf import gate as gate_verdict
from .errors import BandRelevanceError, ConfigurationError, InvalidConfigError
from .formats import (
    SCHEMA_VERSION,
    SignalFile,
    format_ranking,
    read_report,
    read_signal,
    write_heatmap,
    write_report,
    write_signal_csv,
    write_signal_wav,
)
from .rankmetrics import RankingPair, position_analysis, values_analysis
from .signal import spectrum
from .synth import DEFAULT_AMPLITUDE_FLOOR, SynthConfig, Tone, case1_tones, synthesize

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_IRRELEVANT = 3

class UsageError(Exception):
    pass


def _parse_snr(text: str) -> float | None:
    if text.lower() in ("none", "inf", "+inf"):
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a dB value or 'none', got {text!r}") from None


def _parse_tones(text: str) -> list[Tone] | str:
    if text.lower() == "case1":
        return "case1"
    tones = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if not parts[0] or len(parts) > 3:
            raise argparse.ArgumentTypeError(f"bad tone spec {item!r}; use FREQ[:AMP[:PHASE]]")
        try:
            tones.append(Tone(*(float(p) for p in parts)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad tone spec {item!r}") from None
    return tones


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS, help="suppress stdout tables")
    return common


def _signal_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("signal", type=Path, help="CSV ('# fs=<hz>' header, one value per line) or PCM WAV file")
    p.add_argument("--fs", type=float, default=None, help="sample rate in Hz (overrides the file header)")
    p.add_argument("--channel", type=int, default=0, help="WAV channel index (default 0)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="bandrelevance",
        description="Rank informative frequency bands of a vibration signal by Band Relevance Factor.",
        parents=[common],
    )
    parser.add_argument(
        "--version", action="version", version=f"bandrelevance {__version__} (report schema {SCHEMA_VERSION})"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate a multi-tone test signal")
    p.add_argument("--tones", type=_parse_tones, default="case1", help="'case1' or FREQ[:AMP[:PHASE]],...")
    p.add_argument("--snr", type=_parse_snr, default=None, help="target SNR in dB, or 'none' (default)")
    p.add_argument("--snr-convention", choices=("paper", "power"), default="paper")
    p.add_argument("--duration", type=float, default=1.0, help="seconds (default 1)")
    p.add_argument("--fs", type=float, default=20480.0, help="sample rate in Hz (default 20480)")
    p.add_argument(
        "--amplitude-floor",
        type=float,
        default=DEFAULT_AMPLITUDE_FLOOR,
        help="lower bound of case1 amplitude draw; 0 gives the full (0, 1] range",
    )
    p.add_argument("--random-phase", action="store_true", help="draw case1 tone phases uniformly")
    p.add_argument("--out", type=Path, required=True, help="output .csv (or .wav) path")

    p = sub.add_parser(
        "gate",
        parents=[common],
        help="classify a signal as informative or noise",
        description="Exit status 0 when the signal is informative, 3 when it is noise. "
        "The DC bin is part of the entropy; detrend inputs whose mean is meaningless.",
    )
    _signal_args(p)

    p = sub.add_parser(
        "analyze",
        parents=[common],
        help="score and rank dyadic bands",
        description="The DC bin is part of every entropy; detrend inputs whose mean is meaningless.",
    )
    _signal_args(p)
    p.add_argument("--max-level", type=int, default=DEFAULT_MAX_LEVEL, help=f"deepest level K (default {DEFAULT_MAX_LEVEL})")
    p.add_argument("--top", type=int, default=DEFAULT_TOP_N, help=f"bands per ranking (default {DEFAULT_TOP_N})")
    p.add_argument("--out", type=Path, default=None, help="JSON report path")
    p.add_argument("--heatmap", type=Path, default=None, help="heatmap CSV path")
    p.add_argument("--heatmap-kind", choices=("brf", "rms"), default="brf")
    p.add_argument("--svg", type=Path, default=None, help="heatmap SVG path (requires --heatmap)")

    p = sub.add_parser("compare", parents=[common], help="VA/PA agreement of BRF and rms rankings")
    p.add_argument("report", type=Path)
    p.add_argument("--top", type=int, default=None, help="cap both rankings at N bands")
    p.add_argument("--format", choices=("pretty", "csv"), default="pretty")
    return parser


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_synth(args: argparse.Namespace) -> int:
    seed = getattr(args, "seed", 0)
    if args.tones == "case1":
        if not 0 <= args.amplitude_floor < 1:
            raise UsageError("--amplitude-floor must lie in [0, 1)")
        tones = case1_tones(seed, args.amplitude_floor, args.random_phase)
    else:
        if args.random_phase:
            raise UsageError("--random-phase only applies to --tones case1")
        tones = tuple(args.tones)
    try:
        config = SynthConfig(
            tones=tuple(tones),
            duration_s=args.duration,
            sample_rate_hz=args.fs,
            snr_db=args.snr,
            seed=seed,
            snr_convention=args.snr_convention,
        )
    except InvalidConfigError as exc:
        raise UsageError(str(exc)) from exc
    sig = synthesize(config)
    if args.out.suffix.lower() in (".wav", ".wave"):
        write_signal_wav(sig, args.out)
    else:
        write_signal_csv(sig, args.out)
    sidecar = {
        "tones": [{"frequency_hz": t.frequency_hz, "amplitude": t.amplitude, "phase_rad": t.phase_rad} for t in tones],
        "sample_rate_hz": config.sample_rate_hz,
        "duration_s": config.duration_s,
        "n_samples": config.n_samples,
        "seed": seed,
        "snr_db_target": config.snr_db,
        "snr_db_realized": sig.metadata.get("snr_db_realized"),
        "snr_convention": config.snr_convention,
        "noise_alpha": sig.metadata.get("noise_alpha"),
    }
    _sidecar_path(args.out).write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    _say(args, f"wrote {config.n_samples} samples to {args.out}")
    return EXIT_OK


def _sidecar_path(out: Path) -> Path:
    return out.with_name(out.stem + ".meta.json")


def _load(args: argparse.Namespace):
    return read_signal(SignalFile(args.signal, channel=args.channel, fs_override_hz=args.fs))


def cmd_gate(args: argparse.Namespace) -> int:
    sig = _load(args)
    verdict = gate_verdict(spectrum(sig))
    label = "RELEVANT" if verdict.relevant else "IRRELEVANT"
    print(f"s_base={verdict.s_base:.6f} s_base_db={_fmt_db(verdict.s_base_db)} {label}")
    return EXIT_OK if verdict.relevant else EXIT_IRRELEVANT


def _fmt_db(x: float) -> str:
    return "-inf" if x == -math.inf else f"{x:.4f}"


def ranking_table(report: AnalysisReport) -> str:
    top = report.metadata.top_n
    lines = []
    if report.gate.relevant:
        lines.append(f"BRF ranking (top {top})")
        for lvl in report.levels:
            lines.append(f"level {lvl.level}: {format_ranking(lvl.ranking)}")
    else:
        lines.append(f"signal classified as noise (s_base_db={_fmt_db(report.gate.s_base_db)} dB >= -3 dB)")
    lines.append(f"rms ranking (top {top})")
    for k, ranking in enumerate(report.rms_rankings):
        lines.append(f"level {k}: {format_ranking(ranking)}")
    return "\n".join(lines)


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.top < 1:
        raise UsageError("--top must be >= 1")
    if args.max_level < 0:
        raise UsageError("--max-level must be >= 0")
    if args.svg is not None and args.heatmap is None:
        raise UsageError("--svg requires --heatmap")
    sig = _load(args)
    report = analyze(sig, max_level=args.max_level, top_n=args.top, source=args.signal.name)
    for msg in report.metadata.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    if args.out is not None:
        write_report(report, args.out)
    if args.heatmap is not None:
        write_heatmap(report, args.heatmap_kind, args.heatmap, args.svg)
    _say(args, ranking_table(report))
    return EXIT_OK if report.gate.relevant else EXIT_IRRELEVANT


def compare_rows(report: AnalysisReport, top: int | None = None) -> list[tuple[int, float, float]]:
    cap = top if top is not None else report.metadata.top_n
    rows = []
    for k, (brf_rank, rms_rank) in enumerate(zip(report.brf_rankings(), report.rms_rankings)):
        pair = RankingPair.capped(k, brf_rank, rms_rank, cap)
        rows.append((k, values_analysis(pair), position_analysis(pair)))
    return rows


def cmd_compare(args: argparse.Namespace) -> int:
    if args.top is not None and args.top < 1:
        raise UsageError("--top must be >= 1")
    report = read_report(args.report)
    rows = compare_rows(report, args.top)
    if args.format == "csv":
        lines = ["analysis," + ",".join(str(k) for k, _, _ in rows)]
        lines.append("VA," + ",".join(f"{va:g}" for _, va, _ in rows))
        lines.append("PA," + ",".join(f"{pa:g}" for _, _, pa in rows))
    else:
        lines = ["k-level " + "".join(f"{k:>8}" for k, _, _ in rows)]
        lines.append("VA      " + "".join(f"{va:>6.0f} %" for _, va, _ in rows))
        lines.append("PA      " + "".join(f"{pa:>6.0f} %" for _, _, pa in rows))
    print("\n".join(lines))
    return EXIT_OK


def _say(args: argparse.Namespace, text: str) -> None:
    if not getattr(args, "quiet", False):
        print(text)


COMMANDS = {"synth": cmd_synth, "gate": cmd_gate, "analyze": cmd_analyze, "compare": cmd_compare}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, BandRelevanceError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
