"""On-disk cache of exact exponential sums, one JSON file per S_m."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from .cyclotomic import CyclotomicInt

logger = logging.getLogger(__name__)

SCHEMA = 1
ENV_VAR = "DWORKSLOPES_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "dworkslopes"


def _key_dict(key):
    p, h, modulus, d, a, M, m = key
    return {"p": p, "h": h, "modulus": list(modulus), "d": d, "a": list(a), "M": M, "m": m}


class SumCache:
    """``load``/``store`` keyed by (p, h, modulus, d, a, M, m)."""

    def __init__(self, root, enabled: bool = True):
        self.root = Path(root)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path(self, key) -> Path:
        p, h, _modulus, d, a, M, m = key
        canon = "-".join(str(c) for c in a)
        return self.root / f"p{p}h{h}d{d}M{M}" / f"a{canon}" / f"m{m}"

    def load(self, key):
        if not self.enabled:
            return None
        path = self.path(key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            blob = json.loads(path.read_text())
            if blob.get("schema") != SCHEMA or blob.get("key") != _key_dict(key):
                raise ValueError("schema or key mismatch")
            p, M = key[0], key[5]
            coeffs = blob["coeffs"]
            if len(coeffs) != (p - 1) * p ** (M - 1) or not all(isinstance(c, int) for c in coeffs):
                raise ValueError("malformed coefficient vector")
        except (ValueError, KeyError, TypeError) as exc:
            logger.warning("ignoring corrupt cache entry %s (%s)", path, exc)
            self.misses += 1
            return None
        self.hits += 1
        return CyclotomicInt(p, M, coeffs)

    def store(self, key, value: CyclotomicInt) -> None:
        if not self.enabled:
            return
        path = self.path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = {"schema": SCHEMA, "key": _key_dict(key), "coeffs": list(value.coeffs)}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(blob))
        os.replace(tmp, path)


def cache_sums(cache: SumCache, key, value: CyclotomicInt) -> None:
    cache.store(key, value)


def load_sums(cache: SumCache, key):
    return cache.load(key)
