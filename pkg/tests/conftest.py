"""Shared fixtures: session-wide pair/atlas stores backed by a disk cache.

Heavy builds (k = 100 pairs, naive-table rows) are shared between module
tests and the acceptance suite; the disk cache under tests/.pair-cache
also makes repeated pytest runs cheap.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from packbound import PrecisionContext, get_lattice
from packbound import analysis
from packbound.cache import load_or_build_pair
from packbound.schedule import modified_schedule, naive_schedule

CACHE_DIR = Path(__file__).parent / ".pair-cache"


@pytest.fixture(scope="session")
def pairs():
    """pairs(n, k, kind, lattice=None, digits=None) -> cached RadialPair."""
    CACHE_DIR.mkdir(exist_ok=True)
    store = {}

    def get(n, k, kind="modified", lattice=None, digits=None):
        key = (str(n), k, kind, lattice, digits)
        if key not in store:
            lat = get_lattice(lattice if lattice is not None else n)
            sched = naive_schedule(lat, k) if kind == "naive" else modified_schedule(lat, k)
            ctx = PrecisionContext.for_k(k, digits)
            pair, _, _ = load_or_build_pair(ctx.mpf(Fraction(n)), sched, ctx, CACHE_DIR)
            store[key] = pair
        return store[key]

    return get


@pytest.fixture(scope="session")
def atlases(pairs):
    """atlases(n, k, side, kind) -> cached RootAtlas for one pair side."""
    store = {}

    def get(n, k, side, kind="modified", lattice=None):
        key = (str(n), k, kind, lattice, side)
        if key not in store:
            pair = pairs(n, k, kind, lattice)
            fn = pair.f if side == "f" else pair.fhat
            store[key] = analysis.root_atlas(fn, pair.schedule, side, pair.ctx)
        return store[key]

    return get
