"""Shared test data and builders.

WAV construction here uses struct / the stdlib wave module directly so the
files checked against the package's own reader and writer come from an
independent path.
"""

import struct
import wave

import numpy as np

from syllasplit import (
    PipelineConfig,
    SegmentationResult,
    SyllableRecord,
    SyllableSpan,
    span_duration_ms,
)

# Known-good run-length table of a thresholded three-syllable recording
# (76,800 samples total), kept verbatim as a regression fixture.
REFERENCE_RUNS = (
    (0, 10702), (1, 9472), (0, 204), (1, 788), (0, 185), (1, 40), (0, 55),
    (1, 92), (0, 8238), (1, 29), (0, 192), (1, 9432), (0, 523), (1, 484),
    (0, 128), (1, 10), (0, 423), (1, 46), (0, 512), (1, 156), (0, 4633),
    (1, 8631), (0, 189), (1, 611), (0, 1137), (1, 79), (0, 68), (1, 24),
    (0, 19717),
)

# The same table after purging 1-runs shorter than 1746 samples.
REFERENCE_RUNS_PURGED = (
    (0, 10702), (1, 9472), (0, 9823), (1, 9432), (0, 6915), (1, 8631), (0, 21825),
)

# Spans implied by the purged table (cumulative sums of the run lengths).
REFERENCE_SPANS = ((10702, 20174), (29997, 39429), (46344, 54975))

REFERENCE_TOTAL_SAMPLES = 76800

# Known-good (onset, end) -> duration-in-ms rows for a five-syllable
# recording at 44.1 kHz.
REFERENCE_DURATIONS_MS = (
    ((7371, 17913), 239),
    ((25364, 33320), 180),
    ((42188, 47975), 131),
    ((47975, 64029), 364),
    ((70141, 76111), 135),
)


def make_wav_bytes(sample_rate, channels, bits, payload):
    """Assemble a canonical RIFF/WAVE file image around a raw data payload."""
    block_align = channels * bits // 8
    byte_rate = sample_rate * block_align
    header = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    fmt = b"fmt " + struct.pack("<IHHIIHH", 16, 1, channels, sample_rate, byte_rate, block_align, bits)
    data = b"data" + struct.pack("<I", len(payload)) + payload
    return header + fmt + data


def pack_samples(values, bits):
    """Pack integer sample values at the given depth, little-endian."""
    if bits == 8:
        return bytes(values)  # unsigned
    if bits == 16:
        return b"".join(struct.pack("<h", v) for v in values)
    if bits == 24:
        return b"".join(struct.pack("<i", v)[:3] for v in values)
    if bits == 32:
        return b"".join(struct.pack("<i", v) for v in values)
    raise ValueError(bits)


def write_wav(path, sample_rate, channels, bits, values):
    """Write integer samples to a WAV file via the raw byte builder."""
    with open(path, "wb") as fh:
        fh.write(make_wav_bytes(sample_rate, channels, bits, pack_samples(values, bits)))


def write_pcm16(path, samples, sample_rate):
    """Write float samples as 16-bit PCM with the stdlib wave writer."""
    pcm = np.clip(np.round(np.asarray(samples, dtype=np.float64) * 32768.0), -32768, 32767)
    with wave.open(str(path), "wb") as writer:
        writer.setnchannels(1)
        writer.setsampwidth(2)
        writer.setframerate(sample_rate)
        writer.writeframes(pcm.astype("<i2").tobytes())


def read_pcm16(path):
    """Read a 16-bit mono WAV back with the stdlib reader; returns (samples, rate)."""
    with wave.open(str(path), "rb") as reader:
        rate = reader.getframerate()
        raw = reader.readframes(reader.getnframes())
    return np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0, rate


def make_result(spans, source="x.wav", rate=44100):
    """Fabricate a SegmentationResult holding the given (onset, end) spans."""
    records = tuple(
        SyllableRecord(
            index=i + 1,
            onset=onset,
            end=end,
            duration_ms=span_duration_ms(SyllableSpan(onset, end), rate),
            is_supersyllable=False,
            split_depth=0,
        )
        for i, (onset, end) in enumerate(spans)
    )
    total = spans[-1][1] if spans else 0
    return SegmentationResult(
        source=source,
        sample_rate=rate,
        total_samples=total,
        trim_offset=0,
        config=PipelineConfig(),
        syllables=records,
    )


def burst_signal(n_bursts, sample_rate=44100, burst_s=0.25, gap_s=0.4, amplitude=0.8, freq=200.0):
    """Tone bursts separated by silence; returns (signal, burst_starts, burst_len).

    The construction parameters serve as the segmentation oracle: each burst
    should come back as exactly one detected span near its start.
    """
    burst_len = int(burst_s * sample_rate)
    gap = np.zeros(int(gap_s * sample_rate))
    t = np.arange(burst_len) / sample_rate
    burst = amplitude * np.sin(2 * np.pi * freq * t)
    parts, starts, pos = [], [], 0
    for i in range(n_bursts):
        if i:
            parts.append(gap)
            pos += gap.size
        starts.append(pos)
        parts.append(burst)
        pos += burst_len
    return np.concatenate(parts), starts, burst_len
