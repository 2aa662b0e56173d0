import struct
import wave

import numpy as np
import pytest
from hypothesis import given, strategies as st

from syllasplit import (
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
from tests.helpers import make_wav_bytes, pack_samples, write_wav


def test_load_16bit_most_negative_code_is_exactly_minus_one(tmp_path):
    path = tmp_path / "a.wav"
    write_wav(path, 44100, 1, 16, [-32768])
    buf = load_wav(path)
    assert buf.samples.tolist() == [-1.0]
    assert buf.sample_rate == 44100
    assert buf.source_bit_depth == 16


def test_load_16bit_linear_scaling(tmp_path):
    path = tmp_path / "a.wav"
    write_wav(path, 8000, 1, 16, [0, 16384])
    assert load_wav(path).samples.tolist() == [0.0, 0.5]


def test_load_stereo_downmixes_to_frame_mean(tmp_path):
    path = tmp_path / "a.wav"
    # one stereo frame holding roughly 0.4 and 0.8
    write_wav(path, 44100, 2, 16, [13107, 26214])
    buf = load_wav(path)
    assert buf.samples.tolist() == [(13107 + 26214) / 2 / 32768]


def test_load_8bit_unsigned(tmp_path):
    path = tmp_path / "a.wav"
    write_wav(path, 22050, 1, 8, [0, 128, 255])
    assert load_wav(path).samples.tolist() == [-1.0, 0.0, 127 / 128]


def test_load_24bit(tmp_path):
    path = tmp_path / "a.wav"
    write_wav(path, 48000, 1, 24, [-(1 << 23), 0, (1 << 23) - 1])
    buf = load_wav(path)
    assert buf.samples.tolist() == [-1.0, 0.0, ((1 << 23) - 1) / (1 << 23)]
    assert buf.source_bit_depth == 24


def test_load_32bit(tmp_path):
    path = tmp_path / "a.wav"
    write_wav(path, 44100, 1, 32, [-(1 << 31), 1 << 30])
    assert load_wav(path).samples.tolist() == [-1.0, 0.5]


def test_load_missing_file():
    with pytest.raises(FileNotFoundError):
        load_wav("/nonexistent/nope.wav")


def test_load_rejects_non_pcm(tmp_path):
    path = tmp_path / "a.wav"
    payload = pack_samples([0, 0], 16)
    header = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    fmt = b"fmt " + struct.pack("<IHHIIHH", 16, 3, 1, 44100, 88200, 2, 16)  # tag 3: float
    data = b"data" + struct.pack("<I", len(payload)) + payload
    path.write_bytes(header + fmt + data)
    with pytest.raises(UnsupportedFormatError):
        load_wav(path)


def test_load_rejects_odd_bit_depth(tmp_path):
    path = tmp_path / "a.wav"
    path.write_bytes(make_wav_bytes(44100, 1, 12, b"\x00\x00"))
    with pytest.raises(UnsupportedFormatError):
        load_wav(path)


def test_load_rejects_bad_signature(tmp_path):
    path = tmp_path / "a.wav"
    path.write_bytes(b"RIFX" + b"\x00" * 40)
    with pytest.raises(CorruptHeaderError):
        load_wav(path)


def test_load_rejects_short_file(tmp_path):
    path = tmp_path / "a.wav"
    path.write_bytes(b"RIFF\x00\x00")
    with pytest.raises(CorruptHeaderError):
        load_wav(path)


def test_load_rejects_truncated_data_chunk(tmp_path):
    path = tmp_path / "a.wav"
    image = make_wav_bytes(44100, 1, 16, pack_samples([1, 2, 3, 4], 16))
    path.write_bytes(image[:-4])  # data chunk now shorter than its declared size
    with pytest.raises(CorruptHeaderError):
        load_wav(path)


def test_load_rejects_ragged_frames(tmp_path):
    path = tmp_path / "a.wav"
    # stereo 16-bit needs 4 bytes per frame; 6 bytes is not a whole frame count
    path.write_bytes(make_wav_bytes(44100, 2, 16, b"\x00" * 6))
    with pytest.raises(CorruptHeaderError):
        load_wav(path)


def test_load_missing_data_chunk(tmp_path):
    path = tmp_path / "a.wav"
    fmt = b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, 44100, 88200, 2, 16)
    path.write_bytes(b"RIFF" + struct.pack("<I", 4 + len(fmt)) + b"WAVE" + fmt)
    with pytest.raises(CorruptHeaderError):
        load_wav(path)


def test_to_mono_passes_single_channel_through():
    x = np.array([0.1, -0.2, 0.3])
    assert to_mono(x) is x or to_mono(x).tolist() == x.tolist()


def test_to_mono_symmetric_channels_cancel():
    assert to_mono(np.array([[1.0, -1.0]])).tolist() == [0.0]


def test_to_mono_frame_means():
    frames = np.array([[0.2, 0.4], [0.6, 0.0]])
    out = to_mono(frames)
    assert np.allclose(out, [0.3, 0.3])
    assert out.shape == (2,)


def test_to_mono_identical_channels_equal_any_one():
    x = np.linspace(-1, 1, 7)
    stacked = np.stack([x, x, x], axis=1)
    assert np.allclose(to_mono(stacked), x)


def test_trim_keeps_first_to_last_loud_sample():
    buf = AudioBuffer(np.array([0.0, 0.0, 0.5, 0.2, 0.0, 0.0]), 44100)
    trimmed = trim_silence(buf, 0.1)
    assert trimmed.samples.tolist() == [0.5, 0.2]
    assert trimmed.sample_rate == 44100


def test_trim_identity_when_nothing_quiet():
    buf = AudioBuffer(np.array([0.5, 0.1, -0.6]), 44100)
    assert trim_silence(buf, 0.02).samples.tolist() == buf.samples.tolist()


def test_trim_all_silent_gives_empty():
    buf = AudioBuffer(np.zeros(10), 44100)
    assert len(trim_silence(buf, 0.02)) == 0


def test_trim_is_idempotent():
    buf = AudioBuffer(np.array([0.0, 0.01, 0.9, -0.4, 0.005, 0.0]), 44100)
    once = trim_silence(buf, 0.05)
    twice = trim_silence(once, 0.05)
    assert once.samples.tolist() == twice.samples.tolist()


def test_trim_bounds_rejects_bad_threshold():
    with pytest.raises(ValueError):
        trim_bounds(np.zeros(3), 1.0)
    with pytest.raises(ValueError):
        trim_bounds(np.zeros(3), -0.1)


def test_export_roundtrip_full_span(tmp_path):
    rng = np.random.default_rng(7)
    samples = rng.uniform(-1, 1, 500)
    buf = AudioBuffer(samples, 44100)
    path = tmp_path / "seg.wav"
    export_segment(buf, (0, len(buf)), path)
    back = load_wav(path)
    assert back.sample_rate == 44100
    assert back.samples.size == 500
    assert np.max(np.abs(back.samples - samples)) <= 1 / 32768


def test_export_empty_span_writes_valid_header(tmp_path):
    buf = AudioBuffer(np.ones(10) * 0.5, 44100)
    path = tmp_path / "empty.wav"
    export_segment(buf, (3, 3), path)
    assert path.stat().st_size == 44
    with wave.open(str(path), "rb") as reader:
        assert reader.getnframes() == 0
        assert reader.getframerate() == 44100


def test_export_known_span_sample_count_and_duration(tmp_path):
    buf = AudioBuffer(np.zeros(76800), 44100)
    path = tmp_path / "span.wav"
    export_segment(buf, (7371, 17913), path)
    with wave.open(str(path), "rb") as reader:
        n = reader.getnframes()
    assert n == 10542
    assert round(n / 44100 * 1000) == 239


def test_export_rejects_bad_spans(tmp_path):
    buf = AudioBuffer(np.zeros(10), 44100)
    with pytest.raises(InvalidSpanError):
        export_segment(buf, (5, 3), tmp_path / "x.wav")
    with pytest.raises(InvalidSpanError):
        export_segment(buf, (0, 11), tmp_path / "x.wav")
    with pytest.raises(InvalidSpanError):
        export_segment(buf, (-1, 4), tmp_path / "x.wav")


def test_audio_buffer_validation():
    with pytest.raises(ValueError):
        AudioBuffer(np.zeros((3, 2)), 44100)
    with pytest.raises(ValueError):
        AudioBuffer(np.zeros(3), 0)


@given(st.lists(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False), max_size=64))
def test_export_then_load_is_identity_within_quantization(tmp_path_factory, samples):
    path = tmp_path_factory.mktemp("rt") / "rt.wav"
    buf = AudioBuffer(np.array(samples, dtype=np.float64), 22050)
    export_segment(buf, (0, len(buf)), path)
    back = load_wav(path)
    assert back.sample_rate == 22050
    assert back.samples.size == len(samples)
    if samples:
        assert np.max(np.abs(back.samples - buf.samples)) <= 1 / 32768


def test_loaded_samples_stay_in_unit_range(tmp_path):
    path = tmp_path / "extremes.wav"
    write_wav(path, 44100, 1, 16, [-32768, 32767, 0, -1, 1])
    buf = load_wav(path)
    assert np.all(buf.samples <= 1.0)
    assert np.all(buf.samples >= -1.0)
