"""Figure rendering for the report path (PNG files next to the CSV output)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench import LifetimeRow
from .metrics import BenchRecord
from .signal import GroundTruth, SampledSignal

_METHOD_STYLE = {
    "gencs": dict(color="tab:blue", marker="o"),
    "plain_cs": dict(color="tab:red", marker="s"),
    "gemrem": dict(color="tab:green", marker="^"),
}


def _grouped(records: list[BenchRecord], field: str):
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for method in sorted({r.method for r in records}):
        rows = [r for r in records if r.method == method and not r.skipped]
        crs = sorted({r.cr for r in rows})
        means = [
            np.nanmean([getattr(r, field) for r in rows if r.cr == cr])
            for cr in crs
        ]
        out[method] = (np.asarray(crs), np.asarray(means))
    return out


def plot_bench(records: list[BenchRecord], out_dir) -> list[Path]:
    """Fidelity and recovery-cost trends against compression ratio."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    fig, (ax_f1, ax_prd) = plt.subplots(1, 2, figsize=(10, 4))
    for method, (crs, f1) in _grouped(records, "rpeak_f1").items():
        ax_f1.plot(crs, f1, label=method, **_METHOD_STYLE.get(method, {}))
    ax_f1.axhline(0.95, color="gray", ls="--", lw=0.8)
    ax_f1.set_xlabel("compression ratio (n/m)")
    ax_f1.set_ylabel("R-peak F1 (±50 ms)")
    ax_f1.set_ylim(0, 1.05)
    ax_f1.legend()
    for method, (crs, prd) in _grouped(records, "prd_pct").items():
        ax_prd.plot(crs, prd, label=method, **_METHOD_STYLE.get(method, {}))
    ax_prd.axhline(30.0, color="gray", ls="--", lw=0.8)
    ax_prd.set_xlabel("compression ratio (n/m)")
    ax_prd.set_ylabel("PRD (%)")
    ax_prd.legend()
    fig.tight_layout()
    path = out_dir / "bench_fidelity.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(5.5, 4))
    for method, (crs, macs) in _grouped(records, "mac_count").items():
        ax.semilogy(crs, macs, label=method, **_METHOD_STYLE.get(method, {}))
    ax.set_xlabel("compression ratio (n/m)")
    ax.set_ylabel("recovery MACs per run")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "bench_cost.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)
    return paths


def plot_lifetime(rows: list[LifetimeRow], out_dir) -> list[Path]:
    """Accuracy-versus-lifetime tradeoff in MAC-budget units."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax_frames = plt.subplots(figsize=(6, 4))
    ax_fid = ax_frames.twinx()
    for method in sorted({r.method for r in rows}):
        sub = sorted((r for r in rows if r.method == method), key=lambda r: r.cr)
        crs = [r.cr for r in sub]
        style = _METHOD_STYLE.get(method, {})
        ax_frames.semilogy(
            crs, [r.frames_per_budget for r in sub],
            label=f"{method} frames", ls="-", **style,
        )
        ax_fid.plot(
            crs, [r.fidelity for r in sub],
            label=f"{method} fidelity", ls=":", **style,
        )
    ax_frames.set_xlabel("compression ratio (n/m)")
    ax_frames.set_ylabel("frames per MAC budget")
    ax_fid.set_ylabel("fidelity")
    ax_fid.set_ylim(0, 1.05)
    handles1, labels1 = ax_frames.get_legend_handles_labels()
    handles2, labels2 = ax_fid.get_legend_handles_labels()
    ax_frames.legend(handles1 + handles2, labels1 + labels2, fontsize=7)
    fig.tight_layout()
    path = Path(out_dir) / "lifetime.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def plot_pipeline_panels(
    raw: SampledSignal,
    recovered: SampledSignal,
    reconstructed: SampledSignal | None,
    peaks: GroundTruth | None,
    out_path,
    max_seconds: float = 10.0,
) -> Path:
    """Three-panel view: raw input, recovered spike signal, re-synthesis."""
    n = min(len(raw), int(max_seconds * raw.fs))
    t = np.arange(n) / raw.fs
    n_panels = 3 if reconstructed is not None else 2
    fig, axes = plt.subplots(n_panels, 1, figsize=(9, 2.2 * n_panels), sharex=True)
    axes[0].plot(t, raw.samples[:n], color="tab:gray", lw=0.8)
    axes[0].set_ylabel("input (mV)")
    m = min(len(recovered), n)
    axes[1].plot(np.arange(m) / recovered.fs, recovered.samples[:m],
                 color="tab:blue", lw=0.8)
    axes[1].set_ylabel("recovered")
    if reconstructed is not None:
        k = min(len(reconstructed), n)
        axes[2].plot(np.arange(k) / reconstructed.fs, reconstructed.samples[:k],
                     color="tab:green", lw=0.8)
        axes[2].set_ylabel("re-synthesized")
    if peaks is not None:
        for ax in axes:
            for p in peaks.r_peaks[peaks.r_peaks < n]:
                ax.axvline(p / raw.fs, color="tab:red", lw=0.4, alpha=0.4)
    axes[-1].set_xlabel("time (s)")
    fig.tight_layout()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
