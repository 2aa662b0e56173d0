"""Automatic syllable segmentation of recorded speech.

The detector rectifies the waveform, tracks its envelope with a linear
discharge, binarizes against an RMS-scaled threshold, run-length encodes
the result, purges spurious short detections, and recursively splits
over-long spans at a raised threshold. Output is a list of syllable spans
in sample indices plus optional audio snippets and trace dumps.
"""

from .audio_io import (
    AudioBuffer,
    CorruptHeaderError,
    InvalidSpanError,
    UnsupportedFormatError,
    export_segment,
    load_wav,
    to_mono,
    trim_bounds,
    trim_silence,
)
from .envelope import (
    EnvelopeParams,
    EnvelopeTrace,
    half_wave_rectify,
    rms,
    track_envelope,
    write_envelope_csv,
)
from .evaluate import (
    EvalReport,
    FileOutcome,
    ReferenceAnnotation,
    SourceMismatchError,
    classify,
    evaluate_corpus,
    load_manifest,
)
from .pipeline import (
    PipelineArtifacts,
    PipelineConfig,
    SegmentationResult,
    SyllableRecord,
    package_result,
    run_pipeline,
    segment_file,
    segment_samples,
)
from .segmentation import (
    RunSequence,
    SegmentationParams,
    SyllableSpan,
    binarize,
    compute_threshold,
    locate_syllables,
    purge_short_runs,
    run_length_encode,
    span_duration_ms,
    write_runs_dump,
)
from .segmenter import SyllableSegmenter, check_waveform
from .supersyllable import (
    DEFAULT_SUPERSYLLABLE_LIMIT,
    SupersyllableParams,
    break_supersyllable,
    is_supersyllable,
    resolve_all,
)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "CorruptHeaderError",
    "DEFAULT_SUPERSYLLABLE_LIMIT",
    "EnvelopeParams",
    "EnvelopeTrace",
    "EvalReport",
    "FileOutcome",
    "InvalidSpanError",
    "PipelineArtifacts",
    "PipelineConfig",
    "ReferenceAnnotation",
    "RunSequence",
    "SegmentationParams",
    "SegmentationResult",
    "SourceMismatchError",
    "SupersyllableParams",
    "SyllableRecord",
    "SyllableSegmenter",
    "SyllableSpan",
    "UnsupportedFormatError",
    "binarize",
    "break_supersyllable",
    "check_waveform",
    "classify",
    "compute_threshold",
    "evaluate_corpus",
    "export_segment",
    "half_wave_rectify",
    "is_supersyllable",
    "load_manifest",
    "load_wav",
    "locate_syllables",
    "package_result",
    "purge_short_runs",
    "resolve_all",
    "rms",
    "run_length_encode",
    "run_pipeline",
    "segment_file",
    "segment_samples",
    "span_duration_ms",
    "to_mono",
    "track_envelope",
    "trim_bounds",
    "trim_silence",
    "write_envelope_csv",
    "write_runs_dump",
]
