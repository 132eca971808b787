"""Content-addressed on-disk cache of series expansions.

Entries live in ``$CMEIG_CACHE_DIR`` (default ``.cmeig-cache`` in the
working directory), one JSON file per key.  Failures never propagate: an
unwritable directory disables the cache and a corrupt entry reads as a miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from .ba import SeriesExpansion, psi_coeffs, varphi_coeffs
from .params import ModelParams, WeightVector, as_points

log = logging.getLogger(__name__)

ENV_VAR = "CMEIG_CACHE_DIR"
DEFAULT_DIR = ".cmeig-cache"
FORMAT_VERSION = 1


def cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR) or DEFAULT_DIR)


def cache_key(params: ModelParams, x, kind: str = "psi") -> str:
    """sha256 over (a, m, N, x, kind)."""
    x = as_points(x)
    h = hashlib.sha256()
    h.update(f"v{FORMAT_VERSION}|{kind}|{params.a!r}|{params.m}|{x.size}|".encode())
    h.update(np.ascontiguousarray(x).tobytes())
    return h.hexdigest()


def _encode(ser: SeriesExpansion) -> dict:
    return {
        "version": FORMAT_VERSION,
        "kind": ser.kind,
        "a": ser.params.a,
        "m": ser.params.m,
        "N": ser.N,
        "base_point": [[float(z.real), float(z.imag)] for z in ser.base_point],
        "terms": [[list(wv.labels), float(c.real), float(c.imag)] for wv, c in ser.terms],
    }


def _decode(d: dict) -> SeriesExpansion:
    if d.get("version") != FORMAT_VERSION:
        raise ValueError("cache format version mismatch")
    params = ModelParams(d["a"], d["m"])
    N = int(d["N"])
    base = tuple(complex(re, im) for re, im in d["base_point"])
    terms = [(WeightVector(N, params.p, tuple(lab)), complex(re, im)) for lab, re, im in d["terms"]]
    if len(base) != N or len(terms) != (params.p + 1) ** (N * (N - 1) // 2):
        raise ValueError("inconsistent cache entry")
    return SeriesExpansion(params, N, base, terms, d["kind"])


def cache_store(key: str, value: SeriesExpansion) -> bool:
    """Atomically write the entry; returns False if the cache is unusable."""
    d = cache_dir()
    try:
        d.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                # repr floats round-trip exactly
                json.dump(_encode(value), fh)
            os.replace(tmp, d / f"{key}.json")
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
    except OSError as exc:
        log.debug("cache disabled: %s", exc)
        return False
    return True


def cache_load(key: str) -> SeriesExpansion | None:
    """The stored expansion, or None on a miss or a corrupt entry."""
    path = cache_dir() / f"{key}.json"
    try:
        with open(path, encoding="utf-8") as fh:
            return _decode(json.load(fh))
    except FileNotFoundError:
        return None
    except (OSError, ValueError, KeyError, TypeError) as exc:
        log.debug("ignoring corrupt cache entry %s: %s", path, exc)
        return None


def cached_coeffs(params: ModelParams, x, kind: str = "psi") -> SeriesExpansion:
    """psi_coeffs / varphi_coeffs at x, going through the cache."""
    key = cache_key(params, x, kind)
    hit = cache_load(key)
    if hit is not None:
        return hit
    ser = psi_coeffs(params, x) if kind == "psi" else varphi_coeffs(params, x)
    cache_store(key, ser)
    return ser
