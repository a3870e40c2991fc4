"""Benchmark harness: sweep methods over a compression-ratio grid and seeds,
score fidelity and recovery cost, and derive the lifetime proxy table."""
from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ValidationError
from .gemrem import (
    DEFAULT_BITS_PER_SAMPLE,
    DEFAULT_HR_TOL,
    DEFAULT_MORPH_TOL_MV,
    detect_beats,
)
from .metrics import BenchRecord
from .pipeline import (
    FRAME_LEN,
    gemrem_pipeline,
    gencs_pipeline,
    plain_cs_pipeline,
    zero_wall_time,
)
from .signal import window
from .synth import SyntheticEcgSpec, synthesize_ecg
from .template import default_template, learn_template

METHODS = ("gencs", "plain_cs", "gemrem")

# Fidelity gates standing in for "diagnostically equivalent".
F1_GATE = 0.95
RR_RMSE_GATE_S = 0.010
PRD_GATE_PCT = 30.0


@dataclass(frozen=True)
class BenchConfig:
    """Benchmark sweep configuration (all values overridable via config file
    or CLI flags)."""

    methods: tuple[str, ...] = ("gencs", "plain_cs", "gemrem")
    cr_grid: tuple[float, ...] = (2.0, 4.0, 8.0, 12.0, 16.0, 20.0)
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    duration_s: float = 60.0
    fs: float = 200.0
    mean_hr: float = 60.0
    hr_jitter: float = 0.05
    noise_std: float = 0.0
    learn_from_snippet: bool = True
    snippet_s: float = 10.0
    hr_tol: float = DEFAULT_HR_TOL
    morph_tol: float = DEFAULT_MORPH_TOL_MV
    bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE
    mac_budget: float = 1e9
    deterministic_timing: bool = True

    def validate(self) -> None:
        for m in self.methods:
            if m not in METHODS:
                raise ValidationError(f"unknown method {m!r}; choose from {METHODS}")
        if not self.cr_grid or any(c < 1 for c in self.cr_grid):
            raise ValidationError("cr_grid must be non-empty with ratios >= 1")
        if not self.seeds:
            raise ValidationError("seeds must be non-empty")
        if self.duration_s * self.fs < 2 * FRAME_LEN:
            raise ValidationError("benchmark needs at least two frames of signal")


def _skipped(method: str, cr: float, seed: int) -> BenchRecord:
    nan = float("nan")
    return BenchRecord(
        method=method, cr=float(cr), seed=seed, rpeak_f1=nan, rr_rmse_s=nan,
        prd_pct=nan, mac_count=0, transmitted_bits=0, wall_time_s=0.0,
        skipped=True,
    )


def run_bench(config: BenchConfig) -> list[BenchRecord]:
    """Run the full sweep; deterministic given the config.

    Infeasible grid points (too few measurements for the requested support)
    are recorded as skipped rows rather than failures.  Output is sorted by
    (method, cr, seed).
    """
    config.validate()
    records: list[BenchRecord] = []
    for seed in config.seeds:
        spec = SyntheticEcgSpec(
            duration=config.duration_s, fs=config.fs, mean_hr=config.mean_hr,
            hr_jitter=config.hr_jitter, noise_std=config.noise_std, seed=seed,
        )
        sig, truth = synthesize_ecg(spec)
        if config.learn_from_snippet:
            snippet_len = min(int(round(config.snippet_s * config.fs)), len(sig))
            snippet = window(sig, 0, snippet_len)
            template = learn_template(snippet, detect_beats(snippet))
        else:
            template = default_template()

        for method in config.methods:
            if method == "gemrem":
                result = gemrem_pipeline(
                    sig, template, seed=seed, truth=truth,
                    hr_tol=config.hr_tol, morph_tol=config.morph_tol,
                    bits_per_sample=config.bits_per_sample,
                )
                records.append(result.record)
                continue
            for cr in config.cr_grid:
                try:
                    if method == "gencs":
                        result = gencs_pipeline(
                            sig, template, cr, seed=seed, truth=truth
                        )
                    else:
                        result = plain_cs_pipeline(sig, cr, seed=seed, truth=truth)
                    records.append(result.record)
                except ValidationError:
                    records.append(_skipped(method, cr, seed))
    if config.deterministic_timing:
        records = [zero_wall_time(r) for r in records]
    records.sort(key=lambda r: (r.method, r.cr, r.seed))
    return records


def max_passing_cr(records: list[BenchRecord], method: str) -> float | None:
    """Largest grid CR whose seed-mean fidelity clears the method's gate.

    gencs and gemrem pass on mean R-peak F1 >= 0.95; plain CS passes on mean
    PRD <= 30 %.
    """
    by_cr: dict[float, list[BenchRecord]] = {}
    for r in records:
        if r.method == method and not r.skipped:
            by_cr.setdefault(r.cr, []).append(r)
    passing = []
    for cr, rows in by_cr.items():
        if method == "plain_cs":
            ok = np.nanmean([r.prd_pct for r in rows]) <= PRD_GATE_PCT
        else:
            ok = np.nanmean([r.rpeak_f1 for r in rows]) >= F1_GATE
        if ok:
            passing.append(cr)
    return max(passing) if passing else None


def macs_per_second(records: list[BenchRecord], method: str, cr: float) -> float:
    """Mean recovery MACs per recovered second at one operating point."""
    rows = [
        r for r in records
        if r.method == method and r.cr == cr and not r.skipped and r.n_frames
    ]
    if not rows:
        raise ValidationError(f"no records for method={method} cr={cr}")
    seconds = [r.n_frames * FRAME_LEN / 200.0 for r in rows]
    return float(np.mean([r.mac_count / s for r, s in zip(rows, seconds)]))


@dataclass(frozen=True)
class LifetimeRow:
    method: str
    cr: float
    frames_per_budget: float
    fidelity: float


def lifetime_proxy(records: list[BenchRecord], mac_budget: float) -> list[LifetimeRow]:
    """Frames recoverable per MAC budget against fidelity, per (method, cr).

    Fidelity is R-peak F1 for gencs/gemrem and (1 - PRD/100, floored at 0)
    for plain CS, so both express "accuracy" on a 0..1 scale.
    """
    live = [r for r in records if not r.skipped and r.n_frames > 0]
    if not live:
        raise ValidationError("no usable benchmark records")
    if mac_budget <= 0:
        raise ValidationError(f"mac_budget must be positive, got {mac_budget}")
    rows: list[LifetimeRow] = []
    groups: dict[tuple[str, float], list[BenchRecord]] = {}
    for r in live:
        groups.setdefault((r.method, r.cr), []).append(r)
    for (method, cr), group in sorted(groups.items()):
        mac_per_frame = float(np.mean([r.mac_count / r.n_frames for r in group]))
        if mac_per_frame <= 0:
            raise ValidationError(
                f"zero mac_per_frame for method={method} cr={cr}"
            )
        if method == "plain_cs":
            fidelity = max(0.0, 1.0 - float(np.nanmean([r.prd_pct for r in group])) / 100.0)
        else:
            fidelity = float(np.nanmean([r.rpeak_f1 for r in group]))
        rows.append(LifetimeRow(method, cr, mac_budget / mac_per_frame, fidelity))
    return rows
