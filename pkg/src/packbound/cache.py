"""Disk cache for pair builds: decimal-string coefficient files.

Entries are keyed by (dimension, schedule, format version) with the
precision in the file name, so a request at lower precision can reuse a
higher-precision build; coefficients round-trip exactly at the stored
precision.  Writes go through a temporary file plus rename, so a cache
directory shared between processes stays consistent.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from gmpy2 import mpfr

from .magic import RadialPair
from .mpnum import PrecisionContext
from .polybasis import RadialFunction, build_basis
from .schedule import RootSchedule

__all__ = [
    "FORMAT_VERSION",
    "default_cache_dir",
    "pair_cache_key",
    "save_pair",
    "load_pair",
    "load_or_build_pair",
]

FORMAT_VERSION = 1
_ENV_VAR = "PACKBOUND_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "packbound"


def _n_string(n, ctx: PrecisionContext) -> str:
    return ctx.to_str(ctx.mpf(n))


def pair_cache_key(n, schedule: RootSchedule, ctx: PrecisionContext) -> str:
    payload = "|".join([_n_string(n, ctx), schedule.to_json(), str(FORMAT_VERSION)])
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:32]


def _entry_path(root: Path, key: str, digits: int) -> Path:
    return root / f"{key}_d{digits}.pair"


def save_pair(pair: RadialPair, cache_root: Path | None = None) -> Path:
    ctx = pair.ctx
    root = Path(cache_root) if cache_root is not None else default_cache_dir()
    root.mkdir(parents=True, exist_ok=True)
    key = pair_cache_key(pair.n, pair.schedule, ctx)
    path = _entry_path(root, key, ctx.digits)
    lines = [
        f"packbound-pair {FORMAT_VERSION}",
        f"n {_n_string(pair.n, ctx)}",
        f"k {pair.k}",
        f"digits {ctx.digits}",
        f"schedule {pair.schedule.to_json()}",
        "coefficients",
    ]
    with ctx.working():
        for i in range(0, len(pair.q0.lag_coeffs), 2):
            lines.append(ctx.to_str(pair.q0.lag_coeffs[i]))
        for i in range(1, len(pair.q1.lag_coeffs), 2):
            lines.append(ctx.to_str(pair.q1.lag_coeffs[i]))
    data = "\n".join(lines) + "\n"
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _parse_entry(path: Path, n, schedule: RootSchedule, ctx: PrecisionContext) -> RadialPair:
    text = path.read_text(encoding="utf-8").splitlines()
    if not text or not text[0].startswith("packbound-pair"):
        raise ValueError(f"not a pair cache file: {path}")
    idx = text.index("coefficients")
    body = [ln for ln in text[idx + 1:] if ln.strip()]
    k = schedule.k
    if len(body) != 4 * k:
        raise ValueError(f"cache entry {path} has {len(body)} coefficients, wanted {4 * k}")
    with ctx.working():
        deg = 4 * k - 1
        basis = build_basis(n, deg, ctx)
        lag0 = [mpfr(0)] * (4 * k)
        lag1 = [mpfr(0)] * (4 * k)
        for i in range(2 * k):
            lag0[2 * i] = ctx.from_str(body[i])
        for i in range(2 * k):
            lag1[2 * i + 1] = ctx.from_str(body[2 * k + i])
        q0 = RadialFunction(basis, lag0)
        q1 = RadialFunction(basis, lag1)
        return RadialPair(n, schedule, ctx, basis, q0, q1)


def load_pair(n, schedule: RootSchedule, ctx: PrecisionContext,
              cache_root: Path | None = None) -> RadialPair | None:
    """Cached pair at >= the requested precision, or None.

    Exact-precision entries win; otherwise the smallest stored precision
    at or above the request is used, which keeps lookups deterministic.
    """
    root = Path(cache_root) if cache_root is not None else default_cache_dir()
    if not root.is_dir():
        return None
    key = pair_cache_key(n, schedule, ctx)
    exact = _entry_path(root, key, ctx.digits)
    candidates = []
    if exact.is_file():
        candidates.append(ctx.digits)
    else:
        for p in root.glob(f"{key}_d*.pair"):
            try:
                d = int(p.stem.split("_d")[1])
            except (IndexError, ValueError):
                continue
            if d >= ctx.digits:
                candidates.append(d)
    if not candidates:
        return None
    digits = min(candidates)
    return _parse_entry(_entry_path(root, key, digits), n, schedule, ctx)


def load_or_build_pair(n, schedule: RootSchedule, ctx: PrecisionContext | None = None,
                       cache_root: Path | None = None):
    """(pair, cache_key, was_cached); builds and stores on a miss."""
    from .magic import build_pair

    if ctx is None:
        ctx = PrecisionContext.for_k(schedule.k)
    key = pair_cache_key(n, schedule, ctx)
    cached = load_pair(n, schedule, ctx, cache_root)
    if cached is not None:
        return cached, key, True
    pair = build_pair(n, schedule, ctx)
    save_pair(pair, cache_root)
    return pair, key, False
