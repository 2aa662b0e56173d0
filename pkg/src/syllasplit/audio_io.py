"""Reading, pre-processing, and writing of PCM WAV speech recordings."""

from __future__ import annotations

import struct
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_SILENCE_THRESHOLD = 0.02

_PCM_FORMAT_TAG = 1
_SUPPORTED_DEPTHS = (8, 16, 24, 32)


class UnsupportedFormatError(Exception):
    """The WAV file uses an encoding or bit depth this reader does not handle."""


class CorruptHeaderError(Exception):
    """The file is not a well-formed RIFF/WAVE container."""


class InvalidSpanError(ValueError):
    """A sample range falls outside the buffer or is reversed."""


@dataclass(frozen=True)
class AudioBuffer:
    """Mono audio signal: float samples scaled to [-1, 1] at a fixed sample rate.

    The range guarantee holds for buffers produced by :func:`load_wav`;
    the class itself does not clip, so derived signals (e.g. gain-scaled
    test inputs) can exceed it.
    """

    samples: np.ndarray
    sample_rate: int
    source_bit_depth: int = 16

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"AudioBuffer holds one channel, got shape {samples.shape}")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate


def to_mono(frames) -> np.ndarray:
    """Average the channels of (n_frames, n_channels) data into one channel.

    1-D input is returned unchanged. Output length equals the frame count.
    """
    arr = np.asarray(frames, dtype=np.float64)
    if arr.ndim == 1:
        return arr
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError(f"expected (n_frames,) or (n_frames, n_channels), got shape {arr.shape}")
    return arr.mean(axis=1)


def _find_chunks(raw: bytes) -> tuple[bytes, bytes]:
    if len(raw) < 12:
        raise CorruptHeaderError("file too short for a RIFF header")
    if raw[0:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise CorruptHeaderError("missing RIFF/WAVE signature")
    chunks: dict[bytes, bytes] = {}
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8 : pos + 8 + size]
        if chunk_id in (b"fmt ", b"data") and len(body) < size:
            raise CorruptHeaderError(f"truncated {chunk_id.decode('ascii').strip()} chunk")
        chunks.setdefault(chunk_id, body)
        pos += 8 + size + (size & 1)  # chunk bodies are word-aligned
    if b"fmt " not in chunks:
        raise CorruptHeaderError("missing fmt chunk")
    if b"data" not in chunks:
        raise CorruptHeaderError("missing data chunk")
    return chunks[b"fmt "], chunks[b"data"]


def _decode_pcm(data: bytes, bits: int) -> np.ndarray:
    # Scale by 2^(bits-1) so the most negative code maps to exactly -1.0.
    if bits == 8:
        # 8-bit WAV is unsigned with midpoint 128
        return (np.frombuffer(data, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
    if bits == 16:
        return np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    if bits == 24:
        triplets = np.frombuffer(data, dtype=np.uint8).reshape(-1, 3)
        raw = (
            triplets[:, 0].astype(np.int32)
            | (triplets[:, 1].astype(np.int32) << 8)
            | (triplets[:, 2].astype(np.int8).astype(np.int32) << 16)
        )
        return raw.astype(np.float64) / float(1 << 23)
    return np.frombuffer(data, dtype="<i4").astype(np.float64) / float(1 << 31)


def load_wav(path) -> AudioBuffer:
    """Load an integer PCM WAV file as a mono AudioBuffer.

    Multi-channel content is downmixed with :func:`to_mono`. Samples are
    scaled to [-1, 1] by the magnitude of the source bit depth.

    Raises:
        FileNotFoundError: path does not exist.
        CorruptHeaderError: malformed or truncated container.
        UnsupportedFormatError: non-PCM encoding or a depth outside 8/16/24/32.
    """
    raw = Path(path).read_bytes()
    fmt, data = _find_chunks(raw)
    if len(fmt) < 16:
        raise CorruptHeaderError("fmt chunk shorter than 16 bytes")
    format_tag, n_channels, sample_rate, _byte_rate, _block_align, bits = struct.unpack_from(
        "<HHIIHH", fmt, 0
    )
    if format_tag != _PCM_FORMAT_TAG:
        raise UnsupportedFormatError(
            f"format tag {format_tag}; only integer PCM (tag 1) is supported"
        )
    if bits not in _SUPPORTED_DEPTHS:
        raise UnsupportedFormatError(f"unsupported bit depth: {bits}")
    if n_channels < 1:
        raise CorruptHeaderError("channel count is zero")
    if sample_rate == 0:
        raise CorruptHeaderError("sample rate is zero")
    frame_size = n_channels * (bits // 8)
    if len(data) % frame_size != 0:
        raise CorruptHeaderError("data size is not a whole number of frames")
    flat = _decode_pcm(data, bits)
    frames = flat.reshape(-1, n_channels) if n_channels > 1 else flat
    return AudioBuffer(to_mono(frames), int(sample_rate), int(bits))


def trim_bounds(samples, silence_threshold: float = DEFAULT_SILENCE_THRESHOLD) -> tuple[int, int]:
    """Half-open [start, end) from the first to the last sample louder than
    silence_threshold times the peak magnitude. All-silent input gives (0, 0)."""
    if not 0.0 <= silence_threshold < 1.0:
        raise ValueError("silence_threshold must be in [0, 1)")
    magnitudes = np.abs(np.asarray(samples, dtype=np.float64))
    if magnitudes.size == 0:
        return (0, 0)
    cut = silence_threshold * magnitudes.max()
    loud = np.flatnonzero(magnitudes > cut)
    if loud.size == 0:
        return (0, 0)
    return (int(loud[0]), int(loud[-1]) + 1)


def trim_silence(buffer: AudioBuffer, silence_threshold: float = DEFAULT_SILENCE_THRESHOLD) -> AudioBuffer:
    """Drop quiet leading and trailing stretches, judged relative to the peak.

    Interior samples are never removed, so trimming is idempotent. The
    threshold is a fraction of the peak magnitude rather than an absolute
    level, which makes the cut independent of recording gain.
    """
    start, end = trim_bounds(buffer.samples, silence_threshold)
    return AudioBuffer(buffer.samples[start:end], buffer.sample_rate, buffer.source_bit_depth)


def export_segment(buffer: AudioBuffer, span, path) -> None:
    """Write samples [start, end) to a 16-bit mono PCM WAV at the buffer's rate.

    `span` is either a (start, end) pair or any object with onset/end
    attributes. A zero-length span produces a valid header with no data.
    """
    if hasattr(span, "onset"):
        start, end = int(span.onset), int(span.end)
    else:
        start, end = int(span[0]), int(span[1])
    if not 0 <= start <= end <= len(buffer):
        raise InvalidSpanError(f"span [{start}, {end}) outside buffer of {len(buffer)} samples")
    pcm = np.clip(np.round(buffer.samples[start:end] * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as writer:  # stdlib writer emits the canonical 44-byte header
        writer.setnchannels(1)
        writer.setsampwidth(2)
        writer.setframerate(buffer.sample_rate)
        writer.writeframes(pcm.tobytes())
