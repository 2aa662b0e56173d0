"""Envelope thresholding, run-length analysis, and syllable span extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_PERC = 1.2
DEFAULT_MIN_RUN_FACTOR = 1.8


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SegmentationParams:
    """Threshold multiplier and the purge factor for spurious short detections."""

    perc: float = DEFAULT_PERC
    min_run_factor: float = DEFAULT_MIN_RUN_FACTOR

    def __post_init__(self) -> None:
        if self.perc <= 0:
            raise ValueError("perc must be positive")
        if self.min_run_factor <= 0:
            raise ValueError("min_run_factor must be positive")

    def min_run_len(self, delta: int) -> int:
        """Shortest 1-run kept by the purge: 1746 at the 44.1 kHz defaults."""
        return max(1, round_half_up(self.min_run_factor * delta))


@dataclass(frozen=True)
class SyllableSpan:
    """Half-open sample range [onset, end) of one detected syllable."""

    onset: int
    end: int
    is_supersyllable: bool = False
    split_depth: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.onset < self.end:
            raise ValueError(f"invalid span [{self.onset}, {self.end})")
        if self.split_depth < 0:
            raise ValueError("split_depth must be non-negative")

    @property
    def length(self) -> int:
        return self.end - self.onset


@dataclass(frozen=True)
class RunSequence:
    """Maximal alternating runs of a binary stream as (bit, length) pairs."""

    runs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        runs = tuple((int(bit), int(length)) for bit, length in self.runs)
        previous = None
        for bit, length in runs:
            if bit not in (0, 1):
                raise ValueError(f"run bit must be 0 or 1, got {bit}")
            if length < 1:
                raise ValueError("run length must be >= 1")
            if bit == previous:
                raise ValueError("adjacent runs must alternate bits")
            previous = bit
        object.__setattr__(self, "runs", runs)

    def __iter__(self):
        return iter(self.runs)

    def __len__(self) -> int:
        return len(self.runs)

    @property
    def total_length(self) -> int:
        return sum(length for _, length in self.runs)

    @property
    def one_run_count(self) -> int:
        return sum(1 for bit, _ in self.runs if bit == 1)

    def decode(self) -> np.ndarray:
        """Expand back to the binary stream; inverse of run_length_encode."""
        out = np.empty(self.total_length, dtype=np.uint8)
        pos = 0
        for bit, length in self.runs:
            out[pos : pos + length] = bit
            pos += length
        return out


def compute_threshold(rms_value: float, perc: float = DEFAULT_PERC) -> float:
    """Binarization threshold: perc times the rectified-signal RMS."""
    if rms_value < 0:
        raise ValueError("rms_value must be non-negative")
    if perc <= 0:
        raise ValueError("perc must be positive")
    return perc * rms_value


def binarize(trace, threshold: float) -> np.ndarray:
    """1 where the envelope strictly exceeds the threshold, else 0."""
    values = getattr(trace, "values", trace)
    return (np.asarray(values, dtype=np.float64) > threshold).astype(np.uint8)


def run_length_encode(bits) -> RunSequence:
    b = np.asarray(bits)
    if b.dtype == bool:
        b = b.astype(np.uint8)
    if b.size == 0:
        return RunSequence(())
    if not ((b == 0) | (b == 1)).all():
        raise ValueError("stream must contain only 0 and 1")
    changes = np.flatnonzero(np.diff(b)) + 1
    starts = np.concatenate(([0], changes))
    ends = np.concatenate((changes, [b.size]))
    return RunSequence(tuple((int(b[s]), int(e - s)) for s, e in zip(starts, ends)))


def purge_short_runs(runs: RunSequence, min_run_len: int) -> RunSequence:
    """Relabel 1-runs shorter than min_run_len as 0 and re-merge neighbours.

    0-runs are never relabelled, and the total length is preserved.
    """
    if min_run_len < 1:
        raise ValueError("min_run_len must be >= 1")
    merged: list[list[int]] = []
    for bit, length in runs:
        if bit == 1 and length < min_run_len:
            bit = 0
        if merged and merged[-1][0] == bit:
            merged[-1][1] += length
        else:
            merged.append([bit, length])
    return RunSequence(tuple((bit, length) for bit, length in merged))


def locate_syllables(runs: RunSequence) -> list[SyllableSpan]:
    """Turn each 1-run into a span via cumulative sums of the run lengths."""
    spans: list[SyllableSpan] = []
    pos = 0
    for bit, length in runs:
        if bit == 1:
            spans.append(SyllableSpan(pos, pos + length))
        pos += length
    return spans


def span_duration_ms(span: SyllableSpan, sample_rate: int) -> int:
    """Span duration in milliseconds, rounded half up for display."""
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    return round_half_up((span.end - span.onset) / sample_rate * 1000.0)


def write_runs_dump(path, runs: RunSequence) -> None:
    """Two-column run-length table (value in sequence, amount of elements)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("value_in_sequence\tamount_elements\n")
        for bit, length in runs:
            fh.write(f"{bit}\t{length}\n")
