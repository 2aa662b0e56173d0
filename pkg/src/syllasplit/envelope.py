"""Half-wave rectification, RMS, and the linear-discharge envelope tracker."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioBuffer

DEFAULT_VOCODER_WINDOW_S = 0.022
DEFAULT_ANALYSIS_WINDOW = 2048


@dataclass(frozen=True)
class EnvelopeParams:
    """Detector geometry: discharge length (delta) and block-processing window.

    The analysis window is a processing granularity only; detector state is
    carried across block boundaries, so results do not depend on it.
    """

    delta: int
    window: int = DEFAULT_ANALYSIS_WINDOW
    vocoder_window_s: float = DEFAULT_VOCODER_WINDOW_S

    def __post_init__(self) -> None:
        if self.delta < 1:
            raise ValueError("delta must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")

    @classmethod
    def from_sample_rate(
        cls,
        sample_rate: int,
        vocoder_window_s: float = DEFAULT_VOCODER_WINDOW_S,
        window: int = DEFAULT_ANALYSIS_WINDOW,
    ) -> "EnvelopeParams":
        """delta = floor(sample_rate * vocoder_window_s): 970 at 44.1 kHz and 22 ms."""
        delta = math.floor(sample_rate * vocoder_window_s)
        return cls(delta=delta, window=window, vocoder_window_s=vocoder_window_s)


@dataclass(frozen=True)
class EnvelopeTrace:
    """Per-sample envelope values, same length as the signal that produced them."""

    values: np.ndarray
    params: EnvelopeParams


def half_wave_rectify(signal) -> np.ndarray:
    """Zero out negative samples: x * (1 + sign(x)) / 2, i.e. max(x, 0)."""
    x = signal.samples if isinstance(signal, AudioBuffer) else np.asarray(signal, dtype=np.float64)
    return np.maximum(x, 0.0)


def rms(rectified) -> float:
    """Root mean square over the whole sequence."""
    x = np.asarray(rectified, dtype=np.float64)
    if x.size == 0:
        raise ValueError("rms needs at least one sample")
    return float(np.sqrt(np.mean(np.square(x))))


def track_envelope(rectified, params: EnvelopeParams) -> EnvelopeTrace:
    """Follow the rectified signal with a peak detector that discharges linearly.

    One forward pass with state (env, slope). A sample at or above env
    recharges: env takes the sample and slope becomes env / delta, so an
    undisturbed discharge hits zero exactly delta samples after the peak.
    Otherwise env drops by slope, floored at the current sample.
    """
    x = np.asarray(rectified, dtype=np.float64)
    if x.size == 0:
        raise ValueError("cannot track an empty signal")
    delta = params.delta
    out: list[float] = []
    append = out.append
    env = 0.0
    slope = 0.0
    since_anchor = 0  # discharge steps since env was last set from the signal
    for block_start in range(0, x.size, params.window):
        for sample in x[block_start : block_start + params.window].tolist():
            if sample >= env:
                env = sample
                slope = env / delta
                since_anchor = 0
            else:
                since_anchor += 1
                # after delta steps the line from any anchor is at or below
                # zero in exact arithmetic; pin it there to avoid float residue
                env = env - slope if since_anchor < delta else 0.0
                if env < sample:
                    env = sample
                    since_anchor = 0
            append(env)
    return EnvelopeTrace(np.asarray(out), params)


def write_envelope_csv(path, rectified, trace: EnvelopeTrace) -> None:
    """Dump `index,rectified,envelope` rows for external plotting."""
    r = np.asarray(rectified, dtype=np.float64).tolist()
    v = np.asarray(trace.values, dtype=np.float64).tolist()
    if len(r) != len(v):
        raise ValueError("rectified signal and trace differ in length")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("index,rectified,envelope\n")
        for i, (a, b) in enumerate(zip(r, v)):
            fh.write(f"{i},{a!r},{b!r}\n")
