"""Signal ingestion (CSV, WAV), JSON reports and heatmap export (CSV, SVG)."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import wave
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal, Sequence

import numpy as np

from . import __version__
from .bands import BandSpec, bands_at_level, format_hz
from .brf import AnalysisReport, BandScore, GateVerdict, LevelResult, ReportMetadata
from .errors import ConfigurationError, ReportFormatError, SignalFormatError, SignalParseError
from .signal import Signal

SCHEMA_VERSION = "1.0"
HeatmapKind = Literal["brf", "rms"]

_FS_HEADER = re.compile(r"^#\s*fs\s*=\s*([^\s#]+)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class SignalFile:
    path: Path
    format: Literal["csv", "wav"] | None = None
    channel: int = 0
    fs_override_hz: float | None = None

    @property
    def resolved_format(self) -> str:
        if self.format:
            return self.format
        suffix = Path(self.path).suffix.lower().lstrip(".")
        if suffix in ("csv", "txt"):
            return "csv"
        if suffix in ("wav", "wave"):
            return "wav"
        raise ConfigurationError(f"cannot infer signal format from {self.path!s}; pass format explicitly")


# ---------------------------------------------------------------------------
# Signals
# ---------------------------------------------------------------------------


def _read_csv(path: Path, fs_override_hz: float | None) -> Signal:
    fs_header: float | None = None
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _FS_HEADER.match(line)
                if m:
                    try:
                        fs_header = float(m.group(1))
                    except ValueError:
                        raise SignalParseError(f"bad sample rate {m.group(1)!r}", lineno) from None
                continue
            try:
                values.append(float(line.split(",")[0]))
            except ValueError:
                raise SignalParseError(f"not a number: {line[:40]!r}", lineno) from None
    fs = fs_override_hz if fs_override_hz is not None else fs_header
    if fs is None:
        raise ConfigurationError(f"{path}: no '# fs=<hz>' header and no sample rate given")
    return Signal(np.array(values), fs, {"source": str(path)})


_PCM_SCALE = {1: 128.0, 2: 32768.0, 3: 8388608.0, 4: 2147483648.0}


def _decode_pcm(frames: bytes, width: int) -> np.ndarray:
    if width == 1:
        return np.frombuffer(frames, dtype=np.uint8).astype(np.float64) - 128.0
    if width == 2:
        return np.frombuffer(frames, dtype="<i2").astype(np.float64)
    if width == 3:
        raw = np.frombuffer(frames, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        ints = raw[:, 0] | (raw[:, 1] << 8) | (raw[:, 2] << 16)
        ints = np.where(ints & 0x800000, ints - 0x1000000, ints)
        return ints.astype(np.float64)
    if width == 4:
        return np.frombuffer(frames, dtype="<i4").astype(np.float64)
    raise SignalFormatError(f"unsupported PCM sample width: {width} bytes")


def _read_wav(path: Path, channel: int, fs_override_hz: float | None) -> Signal:
    try:
        with wave.open(str(path), "rb") as wf:
            n_channels = wf.getnchannels()
            width = wf.getsampwidth()
            fs = float(wf.getframerate())
            frames = wf.readframes(wf.getnframes())
    except (wave.Error, EOFError) as exc:
        raise SignalFormatError(f"{path}: not a PCM WAV file ({exc})") from exc
    if width not in _PCM_SCALE:
        raise SignalFormatError(f"{path}: unsupported PCM sample width {width * 8} bits")
    if not 0 <= channel < n_channels:
        raise ConfigurationError(f"{path}: channel {channel} requested, file has {n_channels}")
    data = _decode_pcm(frames, width).reshape(-1, n_channels)[:, channel] / _PCM_SCALE[width]
    if fs_override_hz is not None:
        fs = fs_override_hz
    return Signal(data, fs, {"source": str(path), "channel": channel})


def read_signal(file: SignalFile | str | os.PathLike, fs_override_hz: float | None = None) -> Signal:
    """Load a signal from CSV (``# fs=<hz>`` header, one value per line) or PCM WAV."""
    if not isinstance(file, SignalFile):
        file = SignalFile(Path(file), fs_override_hz=fs_override_hz)
    fs = file.fs_override_hz if file.fs_override_hz is not None else fs_override_hz
    path = Path(file.path)
    if file.resolved_format == "csv":
        return _read_csv(path, fs)
    return _read_wav(path, file.channel, fs)


def write_signal_csv(signal: Signal, path: str | os.PathLike) -> None:
    # repr() keeps every float exact on read-back
    lines = [f"# fs={format_hz(signal.sample_rate_hz)}"]
    lines.extend(repr(float(v)) for v in signal.samples)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_signal_wav(signal: Signal, path: str | os.PathLike, bits: int = 16) -> None:
    """Write mono PCM, clipping to the full-scale range [-1, 1)."""
    width = bits // 8
    if bits % 8 or width not in (2, 3, 4):
        raise SignalFormatError(f"unsupported bit depth {bits}")
    scale = _PCM_SCALE[width]
    ints = np.clip(np.round(signal.samples * scale), -scale, scale - 1).astype(np.int64)
    if width == 2:
        payload = ints.astype("<i2").tobytes()
    elif width == 4:
        payload = ints.astype("<i4").tobytes()
    else:
        u = (ints & 0xFFFFFF).astype(np.uint32)
        payload = np.stack([u & 0xFF, (u >> 8) & 0xFF, (u >> 16) & 0xFF], axis=1).astype(np.uint8).tobytes()
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(width)
        wf.setframerate(int(round(signal.sample_rate_hz)))
        wf.writeframes(payload)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _enc(x: float | None) -> Any:
    if x is None:
        return None
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return float(x)


def _dec(x: Any) -> float | None:
    if x is None:
        return None
    if x == "+inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    if isinstance(x, str):
        raise ReportFormatError(f"unexpected string value {x!r}")
    return float(x)


def _band_ref(band: BandSpec) -> dict[str, Any]:
    return {"index": band.index, "label": band.label, "f_lo_hz": band.f_lo_hz, "f_hi_hz": band.f_hi_hz}


def _band_from_ref(level: int, ref: dict[str, Any]) -> BandSpec:
    return BandSpec(level, int(ref["index"]), float(ref["f_lo_hz"]), float(ref["f_hi_hz"]))


def report_to_dict(report: AnalysisReport) -> dict[str, Any]:
    meta = report.metadata
    levels = []
    for lvl in report.levels:
        bands = []
        for score, bn, rn in zip(lvl.scores, lvl.brf_normalized, lvl.rms_normalized):
            entry = _band_ref(score.band)
            entry.update(
                rms_band=_enc(score.rms_band),
                rms_diff_db=_enc(score.rms_diff_db),
                s_filtered=_enc(score.s_filtered),
                s_diff_db=_enc(score.s_diff_db),
                brf=_enc(score.brf),
                relevant=score.relevant,
                brf_normalized=_enc(bn),
                rms_normalized=_enc(rn),
            )
            bands.append(entry)
        levels.append(
            {
                "level": lvl.level,
                "bands": bands,
                "brf_ranking": [_band_ref(b) for b in lvl.ranking],
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "bandrelevance", "version": __version__},
        "metadata": {
            "source": meta.source,
            "sample_rate_hz": meta.sample_rate_hz,
            "n_samples": meta.n_samples,
            "max_level": meta.max_level,
            "requested_max_level": meta.requested_max_level,
            "top_n": meta.top_n,
            "warnings": list(meta.warnings),
        },
        "gate": {
            "s_base": _enc(report.gate.s_base),
            "s_base_db": _enc(report.gate.s_base_db),
            "relevant": report.gate.relevant,
        },
        "levels": levels,
        "rms_rankings": [
            {"level": k, "ranking": [_band_ref(b) for b in ranking]} for k, ranking in enumerate(report.rms_rankings)
        ],
    }


def report_from_dict(data: dict[str, Any]) -> AnalysisReport:
    try:
        version = str(data["schema_version"])
        if version.split(".")[0] != SCHEMA_VERSION.split(".")[0]:
            raise ReportFormatError(f"unsupported report schema version {version}")
        m = data["metadata"]
        meta = ReportMetadata(
            source=str(m["source"]),
            sample_rate_hz=float(m["sample_rate_hz"]),
            n_samples=int(m["n_samples"]),
            max_level=int(m["max_level"]),
            top_n=int(m["top_n"]),
            requested_max_level=int(m["requested_max_level"]),
            warnings=tuple(m.get("warnings", ())),
        )
        g = data["gate"]
        verdict = GateVerdict(_dec(g["s_base"]), _dec(g["s_base_db"]), bool(g["relevant"]))
        levels = []
        for lvl in data["levels"]:
            k = int(lvl["level"])
            scores, brf_norm, rms_norm = [], [], []
            for b in lvl["bands"]:
                scores.append(
                    BandScore(
                        band=_band_from_ref(k, b),
                        rms_band=_dec(b["rms_band"]),
                        rms_diff_db=_dec(b["rms_diff_db"]),
                        s_filtered=_dec(b["s_filtered"]),
                        s_diff_db=_dec(b["s_diff_db"]),
                        brf=_dec(b["brf"]),
                        relevant=bool(b["relevant"]),
                    )
                )
                brf_norm.append(_dec(b["brf_normalized"]))
                rms_norm.append(_dec(b["rms_normalized"]))
            levels.append(
                LevelResult(
                    level=k,
                    scores=tuple(scores),
                    brf_normalized=tuple(brf_norm),
                    rms_normalized=tuple(rms_norm),
                    ranking=tuple(_band_from_ref(k, r) for r in lvl["brf_ranking"]),
                )
            )
        rms_rankings = tuple(
            tuple(_band_from_ref(int(entry["level"]), r) for r in entry["ranking"]) for entry in data["rms_rankings"]
        )
    except ReportFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportFormatError(f"malformed report: {exc!r}") from exc
    return AnalysisReport(gate=verdict, levels=tuple(levels), rms_rankings=rms_rankings, metadata=meta)


def dumps_report(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"


def write_report(report: AnalysisReport, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps_report(report), encoding="utf-8")


def read_report(path: str | os.PathLike) -> AnalysisReport:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ReportFormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ReportFormatError(f"{path}: top-level JSON value must be an object")
    return report_from_dict(data)


# ---------------------------------------------------------------------------
# Heatmaps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeatmapMatrix:
    """One row per level; each band's value repeated over its finest-level columns."""

    rows: tuple[tuple[float, ...], ...]
    value_kind: HeatmapKind
    columns: tuple[BandSpec, ...]

    @property
    def max_level(self) -> int:
        return len(self.rows) - 1


def heatmap_matrix(report: AnalysisReport, kind: HeatmapKind = "brf") -> HeatmapMatrix:
    if kind not in ("brf", "rms"):
        raise ValueError(f"unknown heatmap kind {kind!r}")
    if not report.levels:
        raise ReportFormatError("signal classified as noise; no heatmap available")
    k_max = report.levels[-1].level
    width = 2**k_max
    rows = []
    for lvl in report.levels:
        values = lvl.brf_normalized if kind == "brf" else lvl.rms_normalized
        rows.append(tuple(float(v) for v in np.repeat(values, width // 2**lvl.level)))
    nyquist = report.metadata.sample_rate_hz / 2.0
    return HeatmapMatrix(tuple(rows), kind, tuple(bands_at_level(nyquist, k_max)))


def heatmap_csv(report: AnalysisReport, kind: HeatmapKind = "brf") -> str:
    if not report.levels:
        return "irrelevant\n"
    hm = heatmap_matrix(report, kind)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([b.label for b in hm.columns])
    for row in hm.rows:
        writer.writerow([repr(v) for v in row])
    return buf.getvalue()


def write_heatmap(
    report: AnalysisReport,
    kind: HeatmapKind,
    path: str | os.PathLike,
    svg_path: str | os.PathLike | None = None,
) -> None:
    """CSV heatmap (band-edge header + one row per level), optionally an SVG too.

    A report whose gate failed produces the one-line marker ``irrelevant``.
    """
    Path(path).write_text(heatmap_csv(report, kind), encoding="utf-8")
    if svg_path is not None:
        Path(svg_path).write_text(heatmap_svg(report, kind), encoding="utf-8")


_POSITIVE = (33, 102, 172)
_NEGATIVE = (178, 24, 43)


def diverging_color(value: float) -> str:
    """Blue for positive, white at zero, red for negative; ``value`` in [-1, 1]."""
    v = max(-1.0, min(1.0, value))
    target = _POSITIVE if v >= 0 else _NEGATIVE
    t = abs(v)
    rgb = [round(255 + (c - 255) * t) for c in target]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap_svg(report: AnalysisReport, kind: HeatmapKind = "brf", cell_height: int = 24, width: int = 768) -> str:
    left, top, bottom = 48, 28, 36
    if not report.levels:
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + left}" height="60">'
            f'<text x="{left}" y="34" font-family="sans-serif" font-size="14">'
            "signal classified as noise</text></svg>\n"
        )
    nyquist = report.metadata.sample_rate_hz / 2.0
    height = top + cell_height * len(report.levels) + bottom
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + left + 8}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<text x="{left}" y="16" font-size="13">{"BRF (normalized)" if kind == "brf" else "rms (normalized)"}</text>',
    ]
    for lvl in report.levels:
        values = lvl.brf_normalized if kind == "brf" else lvl.rms_normalized
        y = top + cell_height * lvl.level
        out.append(f'<text x="{left - 6}" y="{y + cell_height * 0.7:.1f}" text-anchor="end">{lvl.level}</text>')
        for score, v in zip(lvl.scores, values):
            x0 = left + width * score.band.f_lo_hz / nyquist
            w = width * score.band.width_hz / nyquist
            out.append(
                f'<rect x="{x0:.3f}" y="{y}" width="{w:.3f}" height="{cell_height}" fill="{diverging_color(v)}">'
                f"<title>{score.band.label} Hz: {v:.3f}</title></rect>"
            )
    axis_y = top + cell_height * len(report.levels)
    for i in range(5):
        f = nyquist * i / 4
        x = left + width * i / 4
        out.append(f'<text x="{x:.1f}" y="{axis_y + 14}" text-anchor="middle">{format_hz(f)}</text>')
    out.append(f'<text x="{left + width / 2:.1f}" y="{axis_y + 30}" text-anchor="middle">frequency [Hz]</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap_rows_from_csv(text: str) -> tuple[list[str], list[list[float]]]:
    """Parse a heatmap CSV back into (header labels, numeric rows)."""
    reader = list(csv.reader(io.StringIO(text)))
    if not reader or reader[0] == ["irrelevant"]:
        return [], []
    return reader[0], [[float(v) for v in row] for row in reader[1:]]


def format_ranking(ranking: Sequence[BandSpec]) -> str:
    return ", ".join(b.label for b in ranking) if ranking else "-"
