import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CMEIG_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def separated(rng, N, sep=0.15, lo=-1.0, hi=1.0):
    while True:
        x = rng.uniform(lo, hi, N)
        if N == 1 or np.min(np.diff(np.sort(x))) >= sep:
            return x
