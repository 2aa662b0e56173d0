import pytest
from hypothesis import settings

from tests.helpers import burst_signal, write_pcm16

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def burst_corpus(tmp_path_factory):
    """Synthetic burst recordings on disk: {n_bursts: (path, starts, burst_len)}."""
    root = tmp_path_factory.mktemp("bursts")
    corpus = {}
    for k in (1, 2, 3, 5):
        signal, starts, burst_len = burst_signal(k)
        path = root / f"bursts_{k}.wav"
        write_pcm16(path, signal, 44100)
        corpus[k] = (path, starts, burst_len)
    return corpus
