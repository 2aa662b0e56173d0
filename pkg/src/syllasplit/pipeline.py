"""End-to-end segmentation of audio files and in-memory signals."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .audio_io import DEFAULT_SILENCE_THRESHOLD, AudioBuffer, load_wav, trim_bounds
from .envelope import (
    DEFAULT_ANALYSIS_WINDOW,
    DEFAULT_VOCODER_WINDOW_S,
    EnvelopeParams,
    EnvelopeTrace,
    half_wave_rectify,
    rms,
    track_envelope,
)
from .segmentation import (
    DEFAULT_MIN_RUN_FACTOR,
    DEFAULT_PERC,
    RunSequence,
    SegmentationParams,
    SyllableSpan,
    binarize,
    compute_threshold,
    locate_syllables,
    purge_short_runs,
    round_half_up,
    run_length_encode,
    span_duration_ms,
)
from .supersyllable import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_DEPTH,
    DEFAULT_SUPERSYLLABLE_LIMIT,
    SupersyllableParams,
    resolve_all,
)

REFERENCE_SAMPLE_RATE = 44100

CSV_HEADER = "index,onset,end,duration_ms,is_supersyllable,split_depth"


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline knobs. The defaults reproduce the 44.1 kHz setup exactly.

    supersyllable_limit is in samples; leaving it None selects the default
    limit, rescaled from 44.1 kHz to the actual sample rate so that the
    implied duration is preserved.
    """

    perc: float = DEFAULT_PERC
    epsilon: float = DEFAULT_EPSILON
    vocoder_window_s: float = DEFAULT_VOCODER_WINDOW_S
    analysis_window: int = DEFAULT_ANALYSIS_WINDOW
    min_run_factor: float = DEFAULT_MIN_RUN_FACTOR
    supersyllable_limit: int | None = None
    max_depth: int = DEFAULT_MAX_DEPTH
    trim: bool = True
    silence_threshold: float = DEFAULT_SILENCE_THRESHOLD

    def __post_init__(self) -> None:
        if self.perc <= 0:
            raise ValueError("perc must be positive")
        if self.epsilon <= 1.0:
            raise ValueError("epsilon must be greater than 1")
        if self.vocoder_window_s <= 0:
            raise ValueError("vocoder_window_s must be positive")
        if self.analysis_window < 1:
            raise ValueError("analysis_window must be >= 1")
        if self.min_run_factor <= 0:
            raise ValueError("min_run_factor must be positive")
        if self.supersyllable_limit is not None and self.supersyllable_limit < 1:
            raise ValueError("supersyllable_limit must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0.0 <= self.silence_threshold < 1.0:
            raise ValueError("silence_threshold must be in [0, 1)")

    def resolved_limit(self, sample_rate: int) -> int:
        """Explicit limit wins; otherwise rescale the 44.1 kHz default."""
        if self.supersyllable_limit is not None:
            return self.supersyllable_limit
        if sample_rate == REFERENCE_SAMPLE_RATE:
            return DEFAULT_SUPERSYLLABLE_LIMIT
        return max(1, round_half_up(DEFAULT_SUPERSYLLABLE_LIMIT * sample_rate / REFERENCE_SAMPLE_RATE))


@dataclass(frozen=True)
class PipelineArtifacts:
    """Intermediate products of one run, kept for dumps and snippet export.

    All sample indices (spans, trace) refer to `buffer`, the post-trim
    signal; trim_offset maps them back to the original file.
    """

    buffer: AudioBuffer
    trim_offset: int
    rectified: np.ndarray
    signal_rms: float
    threshold: float
    trace: EnvelopeTrace
    runs: RunSequence
    spans: list[SyllableSpan]


@dataclass(frozen=True)
class SyllableRecord:
    index: int
    onset: int
    end: int
    duration_ms: int
    is_supersyllable: bool
    split_depth: int


@dataclass(frozen=True)
class SegmentationResult:
    """Machine-readable outcome of one segmentation run."""

    source: str
    sample_rate: int
    total_samples: int
    trim_offset: int
    config: PipelineConfig
    syllables: tuple[SyllableRecord, ...]

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "source": self.source,
            "sample_rate": self.sample_rate,
            "total_samples": self.total_samples,
            "trim_offset": self.trim_offset,
            "config": {
                "perc": cfg.perc,
                "epsilon": cfg.epsilon,
                "vocoder_window_s": cfg.vocoder_window_s,
                "analysis_window": cfg.analysis_window,
                "min_run_factor": cfg.min_run_factor,
                "supersyllable_limit": cfg.resolved_limit(self.sample_rate),
                "max_depth": cfg.max_depth,
                "trim": cfg.trim,
                "silence_threshold": cfg.silence_threshold,
            },
            "syllables": [
                {
                    "index": s.index,
                    "onset": s.onset,
                    "end": s.end,
                    "duration_ms": s.duration_ms,
                    "is_supersyllable": s.is_supersyllable,
                    "split_depth": s.split_depth,
                }
                for s in self.syllables
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for s in self.syllables:
            lines.append(
                f"{s.index},{s.onset},{s.end},{s.duration_ms},"
                f"{str(s.is_supersyllable).lower()},{s.split_depth}"
            )
        return "\n".join(lines) + "\n"


def run_pipeline(buffer: AudioBuffer, config: PipelineConfig = PipelineConfig()) -> PipelineArtifacts:
    """Run the whole chain on an in-memory buffer.

    rectify -> rms -> envelope -> threshold -> binarize -> run-length encode
    -> purge -> locate -> supersyllable resolution. Deterministic for a given
    buffer and config.
    """
    trim_offset = 0
    if config.trim:
        start, end = trim_bounds(buffer.samples, config.silence_threshold)
        trim_offset = start
        buffer = AudioBuffer(buffer.samples[start:end], buffer.sample_rate, buffer.source_bit_depth)
    env_params = EnvelopeParams.from_sample_rate(
        buffer.sample_rate, config.vocoder_window_s, config.analysis_window
    )
    if len(buffer) == 0:
        empty = EnvelopeTrace(np.empty(0, dtype=np.float64), env_params)
        return PipelineArtifacts(buffer, trim_offset, np.empty(0), 0.0, 0.0, empty, RunSequence(()), [])
    rectified = half_wave_rectify(buffer)
    signal_rms = rms(rectified)
    trace = track_envelope(rectified, env_params)
    threshold = compute_threshold(signal_rms, config.perc)
    runs = run_length_encode(binarize(trace, threshold))
    min_run = SegmentationParams(config.perc, config.min_run_factor).min_run_len(env_params.delta)
    spans = locate_syllables(purge_short_runs(runs, min_run))
    super_params = SupersyllableParams(
        limit=config.resolved_limit(buffer.sample_rate),
        epsilon=config.epsilon,
        max_depth=config.max_depth,
        min_run_len=min_run,
    )
    spans = resolve_all(trace, spans, threshold, super_params)
    return PipelineArtifacts(
        buffer, trim_offset, rectified, signal_rms, threshold, trace, runs, spans
    )


def package_result(artifacts: PipelineArtifacts, config: PipelineConfig, source) -> SegmentationResult:
    """Fold pipeline artifacts into the serializable result payload."""
    rate = artifacts.buffer.sample_rate
    records = tuple(
        SyllableRecord(
            index=i + 1,
            onset=span.onset,
            end=span.end,
            duration_ms=span_duration_ms(span, rate),
            is_supersyllable=span.is_supersyllable,
            split_depth=span.split_depth,
        )
        for i, span in enumerate(artifacts.spans)
    )
    return SegmentationResult(
        source=str(source),
        sample_rate=rate,
        total_samples=len(artifacts.buffer),
        trim_offset=artifacts.trim_offset,
        config=config,
        syllables=records,
    )


def segment_samples(
    samples,
    sample_rate: int,
    config: PipelineConfig = PipelineConfig(),
    source: str = "<memory>",
) -> SegmentationResult:
    """Segment a raw sample array without touching the filesystem."""
    buffer = AudioBuffer(np.asarray(samples, dtype=np.float64), sample_rate)
    return package_result(run_pipeline(buffer, config), config, source)


def segment_file(path, config: PipelineConfig = PipelineConfig()) -> SegmentationResult:
    """Load a WAV file and segment it; indices refer to the post-trim buffer."""
    buffer = load_wav(path)
    return package_result(run_pipeline(buffer, config), config, str(path))
