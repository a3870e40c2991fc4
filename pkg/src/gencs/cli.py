"""Command-line surface.

Subcommands: synth, learn, filter, compress, recover, gemrem, bench, lifetime.
Exit codes: 0 success, 1 validation error, 2 I/O or parse error, 3 numerical
failure.  A flat key-value config file (--config or $GENCS_CONFIG) supplies
defaults that individual flags override.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .bench import BenchConfig, lifetime_proxy, run_bench
from .errors import GencsError, NumericalError, ParseError, ValidationError
from .gemrem import detect_beats, gemrem_encode, stream_bits
from .pipeline import (
    FRAME_LEN,
    GENCS_WAVELET,
    PLAIN_WAVELET,
    gencs_max_support,
    gencs_pipeline,
    measurements_per_frame,
    pad_frame,
    padded_len,
    plain_cs_pipeline,
    split_frames,
)
from .qrsfilter import DESIGN_FS, bandstop_cascade, filter_matrix
from .recovery import omp
from .sensing import MeasurementVector, bernoulli_matrix, effective_matrix
from .signal import SampledSignal, resample
from .synth import SyntheticEcgSpec, synthesize_ecg
from .template import default_template, learn_template
from .wavelet import WaveletBasis, dwt_matrix


def _cfg(config: dict[str, str], key: str, cast, fallback):
    if key in config:
        return cast(config[key])
    return fallback


def _ensure_design_rate(sig: SampledSignal) -> SampledSignal:
    if abs(sig.fs - DESIGN_FS) > 1e-6:
        return resample(sig, DESIGN_FS)
    return sig


def cmd_synth(args, config) -> int:
    template = io.read_template(args.template) if args.template else default_template()
    spec = SyntheticEcgSpec(
        duration=_cfg(config, "duration_s", float, args.duration),
        fs=_cfg(config, "fs", float, args.fs),
        mean_hr=_cfg(config, "mean_hr", float, args.hr),
        hr_jitter=_cfg(config, "hr_jitter", float, args.jitter),
        noise_std=_cfg(config, "noise_std", float, args.noise),
        template=template,
        seed=_cfg(config, "seed", int, args.seed),
    )
    sig, truth = synthesize_ecg(spec)
    io.write_signal_csv(args.out, sig)
    if args.truth_out:
        io.write_rpeaks_csv(args.truth_out, truth)
    print(f"wrote {len(sig)} samples ({sig.duration:g} s) to {args.out}")
    return 0


def cmd_learn(args, config) -> int:
    sig = _ensure_design_rate(io.read_signal_csv(args.input))
    if args.peaks:
        peaks = io.read_rpeaks_csv(args.peaks, sig.fs)
    else:
        peaks = detect_beats(sig)
    learned = learn_template(sig, peaks)
    io.write_template(args.out, learned)
    print(
        f"learned template from {len(peaks)} beats: fit residual "
        f"{learned.fit_residual:.4g} mV, converged={learned.converged}"
    )
    return 0


def cmd_filter(args, config) -> int:
    sig = _ensure_design_rate(io.read_signal_csv(args.input))
    variant = _cfg(config, "variant", str, args.variant)
    z = bandstop_cascade(sig, variant)
    io.write_signal_csv(args.out, z)
    if args.peaks_out:
        io.write_rpeaks_csv(args.peaks_out, detect_beats(sig, variant))
    print(f"filtered {len(sig)} samples ({variant}) to {args.out}")
    return 0


def _sensing_operator(method: str, m: int, n_pad: int, seed: int, variant: str):
    phi = bernoulli_matrix(m, n_pad, seed)
    if method == "gencs":
        return phi, effective_matrix(phi, filter_matrix(n_pad, variant))
    return phi, phi.entries


def cmd_compress(args, config) -> int:
    sig = _ensure_design_rate(io.read_signal_csv(args.input))
    method = _cfg(config, "method", str, args.method)
    cr = _cfg(config, "cr", float, args.cr)
    seed = _cfg(config, "seed", int, args.seed)
    variant = _cfg(config, "variant", str, args.variant)
    m = measurements_per_frame(cr)
    n_pad = padded_len()
    _, op = _sensing_operator(method, m, n_pad, seed, variant)
    frames = split_frames(sig)
    measurements = [
        MeasurementVector(op @ pad_frame(frame, n_pad), f)
        for f, frame in enumerate(frames)
    ]
    io.write_measurements_csv(args.out, measurements)
    print(
        f"compressed {frames.shape[0]} frames at CR {cr:g} "
        f"(m={m} measurements/frame) to {args.out}"
    )
    return 0


def cmd_recover(args, config) -> int:
    measurements = io.read_measurements_csv(args.measurements)
    method = _cfg(config, "method", str, args.method)
    seed = _cfg(config, "seed", int, args.seed)
    variant = _cfg(config, "variant", str, args.variant)
    tol = _cfg(config, "tol", float, args.tol)
    if not measurements:
        raise ValidationError("no measurements to recover")
    m = len(measurements[0])
    n_pad = padded_len()
    if method == "gencs":
        family, levels = GENCS_WAVELET
        max_support = args.max_support or gencs_max_support(default_template())
    else:
        family, levels = PLAIN_WAVELET
        max_support = args.max_support or max(1, m // 4)
    basis = WaveletBasis(
        _cfg(config, "wavelet", str, args.wavelet or family),
        _cfg(config, "levels", int, args.levels or levels),
        n_pad,
    )
    W = dwt_matrix(basis)
    phi, op = _sensing_operator(method, m, n_pad, seed, variant)
    A = (op if method == "gencs" else phi.entries) @ W

    chunks, metrics = [], []
    for mv in measurements:
        sol = omp(A, mv, max_support, tol)
        idx = list(sol.support)
        v = W[:, idx] @ sol.coefficients[idx] if idx else np.zeros(n_pad)
        chunks.append(v[:FRAME_LEN])
        metrics.append(
            (mv.frame_id, sol.residual_norm, sol.iterations,
             sol.mac_count + n_pad * len(idx))
        )
    recovered = SampledSignal(np.concatenate(chunks), DESIGN_FS)
    io.write_signal_csv(args.out, recovered)
    if args.metrics_out:
        io.write_recovery_metrics_csv(args.metrics_out, metrics)
    if args.plot:
        from .plots import plot_pipeline_panels

        peaks = None
        reconstructed = None
        if method == "gencs":
            from .qrsfilter import detect_r_peaks
            from .template import reconstruct

            peaks = detect_r_peaks(recovered)
            template = (
                io.read_template(args.template) if args.template else default_template()
            )
            reconstructed = reconstruct(template, peaks, len(recovered), DESIGN_FS)
            io.write_signal_csv(args.out.replace(".csv", "_resynth.csv"), reconstructed)
        plot_pipeline_panels(recovered, recovered, reconstructed, peaks, args.plot)
    print(f"recovered {len(measurements)} frames to {args.out}")
    return 0


def cmd_gemrem(args, config) -> int:
    if args.mode == "encode":
        sig = _ensure_design_rate(io.read_signal_csv(args.input))
        template = io.read_template(args.template)
        stream = gemrem_encode(
            sig,
            template,
            _cfg(config, "hr_tol", float, args.hr_tol),
            _cfg(config, "morph_tol", float, args.morph_tol),
        )
        io.write_stream(args.out, stream)
        total, payload = stream_bits(stream)
        bps = _cfg(config, "bits_per_sample", int, 12)
        print(
            f"encoded {stream.n_beats} beats: {len(stream.updates)} updates, "
            f"{len(stream.escapes)} escapes, CR {len(sig) * bps / total:.1f} "
            f"(without header {len(sig) * bps / payload:.1f})"
            if payload
            else f"encoded {stream.n_beats} beats: header only"
        )
        return 0
    stream = io.read_stream(args.input)
    from .gemrem import gemrem_decode

    if not args.n_samples:
        raise ValidationError("decode requires --n-samples")
    n = args.n_samples
    fs = args.fs
    decoded = gemrem_decode(stream, n, fs)
    io.write_signal_csv(args.out, decoded)
    print(f"decoded {n} samples to {args.out}")
    return 0


def _bench_config(args, config) -> BenchConfig:
    def tuple_of(cast, raw):
        return tuple(cast(v) for v in str(raw).replace(",", " ").split())

    defaults = BenchConfig()
    return BenchConfig(
        methods=tuple_of(str, _cfg(config, "methods", str,
                                   args.methods or ",".join(defaults.methods))),
        cr_grid=tuple_of(float, _cfg(config, "cr_grid", str,
                                     args.cr_grid or ",".join(map(str, defaults.cr_grid)))),
        seeds=tuple_of(int, _cfg(config, "seeds", str,
                                 args.seeds or ",".join(map(str, defaults.seeds)))),
        duration_s=_cfg(config, "duration_s", float, args.duration),
        mean_hr=_cfg(config, "mean_hr", float, args.hr),
        hr_jitter=_cfg(config, "hr_jitter", float, args.jitter),
        noise_std=_cfg(config, "noise_std", float, args.noise),
        learn_from_snippet=_cfg(config, "learn_from_snippet", lambda s: s == "true", True),
        hr_tol=_cfg(config, "hr_tol", float, 0.02),
        morph_tol=_cfg(config, "morph_tol", float, 0.05),
        mac_budget=_cfg(config, "mac_budget", float, args.mac_budget),
        deterministic_timing=_cfg(
            config, "deterministic_timing", lambda s: s == "true",
            not args.real_timing,
        ),
    )


def cmd_bench(args, config) -> int:
    bench_config = _bench_config(args, config)
    records = run_bench(bench_config)
    io.write_bench_csv(args.out, records)
    live = sum(1 for r in records if not r.skipped)
    print(f"wrote {len(records)} rows ({live} live) to {args.out}")
    if args.plot_dir:
        from .plots import plot_bench

        for path in plot_bench(records, args.plot_dir):
            print(f"rendered {path}")
    return 0


def cmd_lifetime(args, config) -> int:
    records = io.read_bench_csv(args.bench)
    # n_frames is not part of the CSV contract; reconstruct it from bits.
    from dataclasses import replace

    m_bits = 24
    rebuilt = []
    for r in records:
        if r.skipped:
            continue
        if r.method == "gemrem":
            n_frames = max(1, r.mac_count // (5 * FRAME_LEN))
        else:
            m = max(1, int(round(FRAME_LEN / r.cr)))
            n_frames = max(1, r.transmitted_bits // (m * m_bits))
        rebuilt.append(replace(r, n_frames=n_frames))
    rows = lifetime_proxy(rebuilt, _cfg(config, "mac_budget", float, args.mac_budget))
    io.write_lifetime_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    if args.plot_dir:
        from .plots import plot_lifetime

        for path in plot_lifetime(rows, args.plot_dir):
            print(f"rendered {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gencs",
        description="Template-based compressive sensing toolkit for ECG-like signals",
    )
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic recording")
    p.add_argument("--duration", type=float, default=60.0)
    p.add_argument("--fs", type=float, default=200.0)
    p.add_argument("--hr", type=float, default=60.0)
    p.add_argument("--jitter", type=float, default=0.05)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--template", help="template file to synthesize from")
    p.add_argument("--out", required=True)
    p.add_argument("--truth-out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("learn", help="learn a beat template from a recording")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--peaks", help="ground-truth peak CSV (otherwise detected)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("filter", help="apply the band-stop cascade")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--variant", choices=("canonical", "verbatim"), default="canonical")
    p.add_argument("--out", required=True)
    p.add_argument("--peaks-out")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("compress", help="sense a recording frame by frame")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", choices=("gencs", "plain_cs"), default="gencs")
    p.add_argument("--cr", type=float, default=8.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--variant", choices=("canonical", "verbatim"), default="canonical")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("recover", help="recover frames from measurements")
    p.add_argument("--meas", dest="measurements", required=True)
    p.add_argument("--method", choices=("gencs", "plain_cs"), default="gencs")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--variant", choices=("canonical", "verbatim"), default="canonical")
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--max-support", type=int)
    p.add_argument("--wavelet", choices=("haar", "daubechies4"))
    p.add_argument("--levels", type=int)
    p.add_argument("--template", help="template for re-synthesis in --plot")
    p.add_argument("--out", required=True)
    p.add_argument("--metrics-out")
    p.add_argument("--plot", help="render recovery panels to this PNG")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("gemrem", help="model-based encode/decode")
    p.add_argument("--mode", choices=("encode", "decode"), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--template", help="template file (encode)")
    p.add_argument("--hr-tol", type=float, default=0.02)
    p.add_argument("--morph-tol", type=float, default=0.05)
    p.add_argument("--n-samples", type=int, help="output length (decode)")
    p.add_argument("--fs", type=float, default=200.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gemrem)

    p = sub.add_parser("bench", help="run the benchmark sweep")
    p.add_argument("--methods")
    p.add_argument("--cr-grid", dest="cr_grid")
    p.add_argument("--seeds")
    p.add_argument("--duration", type=float, default=60.0)
    p.add_argument("--hr", type=float, default=60.0)
    p.add_argument("--jitter", type=float, default=0.05)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--mac-budget", type=float, default=1e9)
    p.add_argument("--real-timing", action="store_true",
                   help="record wall time (breaks byte-reproducibility)")
    p.add_argument("--out", required=True)
    p.add_argument("--plot-dir", help="also render trend figures here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lifetime", help="derive the accuracy/lifetime table")
    p.add_argument("--bench", required=True, help="bench.csv from the bench command")
    p.add_argument("--mac-budget", type=float, default=1e9)
    p.add_argument("--out", required=True)
    p.add_argument("--plot-dir")
    p.set_defaults(func=cmd_lifetime)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = io.load_config(args.config)
        return args.func(args, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except GencsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
