"""Scikit-learn style front end so the segmenter composes with the ecosystem."""

from __future__ import annotations

from dataclasses import replace

import numpy as np
from sklearn.base import BaseEstimator

from .audio_io import AudioBuffer, DEFAULT_SILENCE_THRESHOLD
from .envelope import (
    DEFAULT_ANALYSIS_WINDOW,
    DEFAULT_VOCODER_WINDOW_S,
    EnvelopeParams,
    half_wave_rectify,
    track_envelope,
)
from .pipeline import PipelineConfig, run_pipeline
from .segmentation import (
    DEFAULT_MIN_RUN_FACTOR,
    DEFAULT_PERC,
    SegmentationParams,
    SyllableSpan,
)
from .supersyllable import DEFAULT_EPSILON, DEFAULT_MAX_DEPTH


def check_waveform(X) -> np.ndarray:
    """Coerce input to a finite 1-D float64 waveform or raise ValueError."""
    x = np.asarray(X, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D waveform, got shape {x.shape}")
    if x.size and not np.isfinite(x).all():
        raise ValueError("waveform contains NaN or infinite samples")
    return x


class SyllableSegmenter(BaseEstimator):
    """Segment a speech waveform into syllable spans.

    The algorithm is stateless: fit only validates parameters and derives the
    sample-count quantities (delta_, min_run_len_, limit_), so the estimator
    supports get_params / set_params / clone and parameter search without any
    learned state. predict(X) takes a 1-D waveform at `sample_rate` and
    returns an (n_syllables, 2) integer array of half-open [onset, end)
    pairs; segment(X) returns the richer span records.

    Unlike the file pipeline, trimming defaults to off so that returned
    indices always refer to positions in X (they do even with trim=True;
    the trim offset is added back).
    """

    def __init__(
        self,
        sample_rate: int = 44100,
        perc: float = DEFAULT_PERC,
        epsilon: float = DEFAULT_EPSILON,
        vocoder_window_s: float = DEFAULT_VOCODER_WINDOW_S,
        analysis_window: int = DEFAULT_ANALYSIS_WINDOW,
        min_run_factor: float = DEFAULT_MIN_RUN_FACTOR,
        supersyllable_limit: int | None = None,
        max_depth: int = DEFAULT_MAX_DEPTH,
        trim: bool = False,
        silence_threshold: float = DEFAULT_SILENCE_THRESHOLD,
    ):
        self.sample_rate = sample_rate
        self.perc = perc
        self.epsilon = epsilon
        self.vocoder_window_s = vocoder_window_s
        self.analysis_window = analysis_window
        self.min_run_factor = min_run_factor
        self.supersyllable_limit = supersyllable_limit
        self.max_depth = max_depth
        self.trim = trim
        self.silence_threshold = silence_threshold

    def _config(self) -> PipelineConfig:
        return PipelineConfig(
            perc=self.perc,
            epsilon=self.epsilon,
            vocoder_window_s=self.vocoder_window_s,
            analysis_window=self.analysis_window,
            min_run_factor=self.min_run_factor,
            supersyllable_limit=self.supersyllable_limit,
            max_depth=self.max_depth,
            trim=self.trim,
            silence_threshold=self.silence_threshold,
        )

    def fit(self, X=None, y=None):
        """Validate parameters and derive sample-count quantities."""
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        config = self._config()
        env_params = EnvelopeParams.from_sample_rate(
            self.sample_rate, self.vocoder_window_s, self.analysis_window
        )
        self.delta_ = env_params.delta
        self.min_run_len_ = SegmentationParams(self.perc, self.min_run_factor).min_run_len(
            env_params.delta
        )
        self.limit_ = config.resolved_limit(self.sample_rate)
        return self

    def segment(self, X) -> list[SyllableSpan]:
        """Full span records, with supersyllable flags, indexed into X."""
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        x = check_waveform(X)
        buffer = AudioBuffer(x, self.sample_rate)
        artifacts = run_pipeline(buffer, self._config())
        offset = artifacts.trim_offset
        if offset == 0:
            return artifacts.spans
        return [
            replace(span, onset=span.onset + offset, end=span.end + offset)
            for span in artifacts.spans
        ]

    def predict(self, X) -> np.ndarray:
        """(n_syllables, 2) int array of [onset, end) sample pairs."""
        spans = self.segment(X)
        if not spans:
            return np.empty((0, 2), dtype=np.int64)
        return np.array([[span.onset, span.end] for span in spans], dtype=np.int64)

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).predict(X)

    def transform(self, X) -> np.ndarray:
        """Envelope trace of X (same length), usable as a signal transform."""
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        x = check_waveform(X)
        if x.size == 0:
            return x
        params = EnvelopeParams.from_sample_rate(
            self.sample_rate, self.vocoder_window_s, self.analysis_window
        )
        return track_envelope(half_wave_rectify(x), params).values
