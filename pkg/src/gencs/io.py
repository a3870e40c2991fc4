"""File formats: signal/peak/measurement CSVs, template and stream files,
benchmark tables, and the flat key-value config format."""
from __future__ import annotations

import csv
import os
from pathlib import Path

import numpy as np

from .bench import LifetimeRow
from .errors import ParseError, ValidationError
from .gemrem import GemremStream
from .metrics import BenchRecord
from .sensing import MeasurementVector
from .signal import GroundTruth, SampledSignal
from .template import BeatTemplate

TIME_UNIFORMITY_TOL_S = 1e-6

BENCH_HEADER = (
    "method,cr,seed,rpeak_f1,rr_rmse_s,prd_pct,mac_count,transmitted_bits,wall_time_s"
)
LIFETIME_HEADER = "method,cr,frames_per_budget,fidelity"

CONFIG_ENV_VAR = "GENCS_CONFIG"


def _fmt(x: float) -> str:
    """Shortest decimal that round-trips the float exactly."""
    return repr(float(x))


# ---------------------------------------------------------------- signals

def write_signal_csv(path, sig: SampledSignal) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("time_s,mv\n")
        for i, v in enumerate(sig.samples):
            fh.write(f"{i / sig.fs:.9f},{_fmt(v)}\n")


def read_signal_csv(path) -> SampledSignal:
    """Parse a `time_s,mv` file, validating uniform sample spacing."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["time_s", "mv"]:
            raise ParseError(f"{path}: expected header 'time_s,mv'")
        times, values = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                times.append(float(row[0]))
                values.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed row {row!r}") from exc
    if len(values) < 2:
        raise ParseError(f"{path}: need at least two samples")
    times_arr = np.asarray(times)
    dt = np.diff(times_arr)
    if np.any(np.abs(dt - dt[0]) > TIME_UNIFORMITY_TOL_S):
        raise ParseError(
            f"{path}: sample times are not uniform within {TIME_UNIFORMITY_TOL_S} s"
        )
    fs = (len(times_arr) - 1) / (times_arr[-1] - times_arr[0])
    # Snap to an integer rate when within the uniformity tolerance.
    if abs(fs - round(fs)) < 1e-3:
        fs = float(round(fs))
    return SampledSignal(np.asarray(values), fs)


def write_rpeaks_csv(path, truth: GroundTruth) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("r_peak_index\n")
        for p in truth.r_peaks:
            fh.write(f"{int(p)}\n")


def read_rpeaks_csv(path, fs: float) -> GroundTruth:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["r_peak_index"]:
            raise ParseError(f"{path}: expected header 'r_peak_index'")
        peaks = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                peaks.append(int(row[0]))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: malformed index {row!r}") from exc
    return GroundTruth.from_peaks(np.asarray(peaks, dtype=np.int64), fs)


# ----------------------------------------------------------- measurements

def write_measurements_csv(path, measurements: list[MeasurementVector]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("frame_id,k,value\n")
        for mv in measurements:
            for k, v in enumerate(mv.values):
                fh.write(f"{mv.frame_id},{k},{_fmt(v)}\n")


def read_measurements_csv(path) -> list[MeasurementVector]:
    frames: dict[int, list[tuple[int, float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["frame_id", "k", "value"]:
            raise ParseError(f"{path}: expected header 'frame_id,k,value'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                frames.setdefault(int(row[0]), []).append((int(row[1]), float(row[2])))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed row {row!r}") from exc
    out = []
    for frame_id in sorted(frames):
        rows = sorted(frames[frame_id])
        if [k for k, _ in rows] != list(range(len(rows))):
            raise ParseError(f"{path}: frame {frame_id} has missing measurement rows")
        out.append(MeasurementVector(np.array([v for _, v in rows]), frame_id))
    return out


def write_recovery_metrics_csv(path, rows: list[tuple[int, float, int, int]]) -> None:
    """Sidecar per-frame solver metrics for a recovered-signal CSV."""
    with open(path, "w", newline="") as fh:
        fh.write("frame_id,residual_norm,iterations,mac_count\n")
        for frame_id, residual, iterations, macs in rows:
            fh.write(f"{frame_id},{_fmt(residual)},{iterations},{macs}\n")


# -------------------------------------------------------------- templates

def template_to_text(template: BeatTemplate) -> str:
    lines = []
    for k, (amp, center, width) in enumerate(template.gaussians):
        lines.append(f"g{k}.amp = {amp:.17g}")
        lines.append(f"g{k}.center = {center:.17g}")
        lines.append(f"g{k}.width = {width:.17g}")
    lines.append(f"reference_rr = {template.reference_rr:.17g}")
    lines.append(f"fit_residual = {template.fit_residual:.17g}")
    return "\n".join(lines) + "\n"


def template_from_text(text: str) -> BeatTemplate:
    values: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"template line {lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        try:
            values[key.strip()] = float(raw.strip())
        except ValueError as exc:
            raise ParseError(f"template line {lineno}: bad value {raw!r}") from exc
    if "reference_rr" not in values:
        raise ParseError("template file missing reference_rr")
    rows = []
    k = 0
    while f"g{k}.amp" in values:
        try:
            rows.append(
                (values[f"g{k}.amp"], values[f"g{k}.center"], values[f"g{k}.width"])
            )
        except KeyError as exc:
            raise ParseError(f"template gaussian {k} is incomplete") from exc
        k += 1
    if not rows:
        raise ParseError("template file contains no gaussians")
    return BeatTemplate(
        np.array(rows), values["reference_rr"], values.get("fit_residual", 0.0)
    )


def write_template(path, template: BeatTemplate) -> None:
    Path(path).write_text(template_to_text(template))


def read_template(path) -> BeatTemplate:
    return template_from_text(Path(path).read_text())


# ---------------------------------------------------------- gemrem stream

def write_stream(path, stream: GemremStream) -> None:
    """Line-oriented records: `H` header, `U beat rr_s`, `E beat s0 s1 ...`."""
    with open(path, "w", newline="") as fh:
        header_fields = template_to_text(stream.template).strip().replace(" = ", "=")
        fh.write("H " + " ".join(header_fields.splitlines()) + f" n_beats={stream.n_beats}\n")
        for beat, rr in stream.updates:
            fh.write(f"U {beat} {rr:.17g}\n")
        for beat, samples in stream.escapes:
            payload = " ".join(f"{s:.17g}" for s in samples)
            fh.write(f"E {beat} {payload}\n")


def read_stream(path) -> GemremStream:
    template = None
    n_beats = 0
    updates: list[tuple[int, float]] = []
    escapes: list[tuple[int, np.ndarray]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tag, _, rest = line.partition(" ")
            try:
                if tag == "H":
                    fields = dict(f.split("=", 1) for f in rest.split())
                    n_beats = int(fields.pop("n_beats", "0"))
                    template = template_from_text(
                        "\n".join(f"{k} = {v}" for k, v in fields.items())
                    )
                elif tag == "U":
                    beat, rr = rest.split()
                    updates.append((int(beat), float(rr)))
                elif tag == "E":
                    parts = rest.split()
                    escapes.append(
                        (int(parts[0]), np.array([float(p) for p in parts[1:]]))
                    )
                else:
                    raise ParseError(f"stream line {lineno}: unknown record {tag!r}")
            except (ValueError, IndexError) as exc:
                raise ParseError(f"stream line {lineno}: malformed record") from exc
    if template is None:
        raise ParseError("stream file has no header record")
    return GemremStream(template, tuple(updates), tuple(escapes), n_beats)


# ------------------------------------------------------------ bench files

def write_bench_csv(path, records: list[BenchRecord]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(BENCH_HEADER + "\n")
        for r in records:
            fh.write(
                f"{r.method},{_fmt(r.cr)},{r.seed},{_fmt(r.rpeak_f1)},"
                f"{_fmt(r.rr_rmse_s)},{_fmt(r.prd_pct)},{r.mac_count},"
                f"{r.transmitted_bits},{_fmt(r.wall_time_s)}\n"
            )


def read_bench_csv(path) -> list[BenchRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or ",".join(h.strip() for h in header) != BENCH_HEADER:
            raise ParseError(f"{path}: unexpected bench header")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                records.append(
                    BenchRecord(
                        method=row[0], cr=float(row[1]), seed=int(row[2]),
                        rpeak_f1=float(row[3]), rr_rmse_s=float(row[4]),
                        prd_pct=float(row[5]), mac_count=int(row[6]),
                        transmitted_bits=int(row[7]), wall_time_s=float(row[8]),
                        skipped=int(row[7]) == 0,
                    )
                )
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed row") from exc
    return records


def write_lifetime_csv(path, rows: list[LifetimeRow]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(LIFETIME_HEADER + "\n")
        for r in rows:
            fh.write(f"{r.method},{_fmt(r.cr)},{_fmt(r.frames_per_budget)},{_fmt(r.fidelity)}\n")


# ----------------------------------------------------------------- config

def parse_config_text(text: str) -> dict[str, str]:
    """Flat `key = value` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ParseError(f"config line {lineno}: empty key")
        out[key] = value.strip()
    return out


def load_config(path=None) -> dict[str, str]:
    """Read a config file; falls back to $GENCS_CONFIG, then empty."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return {}
    target = Path(path)
    if not target.exists():
        raise ValidationError(f"config file not found: {target}")
    return parse_config_text(target.read_text())
