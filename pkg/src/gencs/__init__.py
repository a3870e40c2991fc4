"""Template-based compressive sensing toolkit for ECG-like signals.

Sense only the R-peak temporal structure of a signal through a band-stop
filter folded into a Bernoulli sensing matrix, recover it with greedy sparse
pursuit, and re-synthesize full morphology from a pre-learned beat template.
Includes plain compressive sensing and model-based (template-delta) encoding
baselines plus a reproducible benchmark harness.
"""

from .bench import BenchConfig, LifetimeRow, lifetime_proxy, run_bench
from .errors import GencsError, NumericalError, ParseError, ValidationError
from .gemrem import GemremStream, detect_beats, gemrem_decode, gemrem_encode, stream_bits
from .metrics import BenchRecord, compression_ratio, prd, rpeak_f1, rr_rmse
from .pipeline import (
    CsRunResult,
    gemrem_pipeline,
    gencs_pipeline,
    plain_cs_pipeline,
)
from .qrsfilter import (
    FilterMatrix,
    bandstop_cascade,
    detect_r_peaks,
    filter_matrix,
    group_delay,
    highpass,
    lowpass,
)
from .recovery import SparseSolution, omp, recover_filtered, recover_plain_cs
from .sensing import (
    MeasurementVector,
    SensingMatrix,
    bernoulli_matrix,
    effective_matrix,
    measure,
)
from .signal import GroundTruth, SampledSignal, resample, window
from .synth import SyntheticEcgSpec, synthesize_ecg
from .template import (
    BeatTemplate,
    default_template,
    learn_template,
    reconstruct,
    render_beat,
)
from .wavelet import WaveletBasis, dwt_matrix

__version__ = "0.1.0"

__all__ = [
    "BeatTemplate",
    "BenchConfig",
    "BenchRecord",
    "CsRunResult",
    "FilterMatrix",
    "GemremStream",
    "GencsError",
    "GroundTruth",
    "LifetimeRow",
    "MeasurementVector",
    "NumericalError",
    "ParseError",
    "SampledSignal",
    "SensingMatrix",
    "SparseSolution",
    "SyntheticEcgSpec",
    "ValidationError",
    "WaveletBasis",
    "bandstop_cascade",
    "bernoulli_matrix",
    "compression_ratio",
    "default_template",
    "detect_beats",
    "detect_r_peaks",
    "dwt_matrix",
    "effective_matrix",
    "filter_matrix",
    "gemrem_decode",
    "gemrem_encode",
    "gemrem_pipeline",
    "gencs_pipeline",
    "group_delay",
    "highpass",
    "learn_template",
    "lifetime_proxy",
    "lowpass",
    "measure",
    "omp",
    "plain_cs_pipeline",
    "prd",
    "reconstruct",
    "recover_filtered",
    "recover_plain_cs",
    "render_beat",
    "resample",
    "rpeak_f1",
    "rr_rmse",
    "run_bench",
    "stream_bits",
    "synthesize_ecg",
    "window",
]
