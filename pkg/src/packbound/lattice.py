"""Lattice constants and shell data for E8 and the Leech lattice.

Shell counts come from the classical modular identities: 240*sigma_3(j)
for E8 and (65520/691)*(sigma_11(j) - tau(j)) for Leech, with tau taken
from the truncated eta-product expansion of the discriminant form.  All
counts are exact integers; enumeration is only used as a cross-check in
the test suite.
"""

from __future__ import annotations

import math
import threading
from typing import Callable

import gmpy2
from gmpy2 import mpfr

from .mpnum import PrecisionContext

__all__ = [
    "LatticeSpec",
    "E8",
    "LEECH",
    "get_lattice",
    "vector_lengths",
    "shell_counts",
    "lattice_sum",
    "hexagonal_constants",
    "NoDecay",
    "InternalInconsistency",
]


class NoDecay(Exception):
    """The weight did not fall below the cutoff within the shell budget."""


class InternalInconsistency(Exception):
    """A computed shell count failed its integrality (divisibility) check."""


def divisor_sigma(j: int, power: int) -> int:
    s = 0
    for d in range(1, int(math.isqrt(j)) + 1):
        if j % d == 0:
            s += d ** power
            e = j // d
            if e != d:
                s += e ** power
    return s


def ramanujan_tau_list(max_j: int) -> list:
    """tau(1..max_j) from the integer power series of q * prod (1-q^m)^24."""
    n = max_j
    coeffs = [0] * n
    coeffs[0] = 1
    for m in range(1, n):
        limit = (n - 1) // m
        new = [0] * n
        for t in range(0, min(24, limit) + 1):
            sgn = (-1) ** t * math.comb(24, t)
            off = t * m
            for i in range(0, n - off):
                c = coeffs[i]
                if c:
                    new[i + off] += sgn * c
        coeffs = new
    return coeffs  # coeffs[j-1] == tau(j)


class LatticeSpec:
    """One of the two target lattices plus its theta-shell data.

    Shell j holds the vectors of norm 2j; the exposed count list starts at
    j = 1 (the origin is accounted for separately wherever it matters).
    Shell lists extend on demand behind a lock; once extended, concurrent
    reads are safe.
    """

    def __init__(self, name: str, n: int, min_norm: int, kissing: int,
                 count_fn: Callable[["LatticeSpec", int], None]):
        self.name = name
        self.n = n
        self.min_norm = min_norm
        self.kissing = kissing
        self._extend = count_fn
        self._counts: list = []
        self._lock = threading.Lock()

    def min_length(self, ctx: PrecisionContext) -> mpfr:
        with ctx.working():
            return gmpy2.sqrt(mpfr(self.min_norm))

    def ensure_shells(self, max_j: int) -> None:
        if len(self._counts) >= max_j:
            return
        with self._lock:
            if len(self._counts) < max_j:
                self._extend(self, max_j)

    def shell_count(self, j: int) -> int:
        if j < 1:
            raise ValueError("shells are indexed from 1")
        self.ensure_shells(j)
        return self._counts[j - 1]

    def __repr__(self):
        return f"LatticeSpec({self.name}, n={self.n})"


def _extend_e8(lat: LatticeSpec, max_j: int) -> None:
    counts = lat._counts
    for j in range(len(counts) + 1, max_j + 1):
        counts.append(240 * divisor_sigma(j, 3))


def _extend_leech(lat: LatticeSpec, max_j: int) -> None:
    taus = ramanujan_tau_list(max_j)
    counts = lat._counts
    for j in range(len(counts) + 1, max_j + 1):
        num = 65520 * (divisor_sigma(j, 11) - taus[j - 1])
        if num % 691 != 0:
            raise InternalInconsistency(f"Leech shell {j}: {num} not divisible by 691")
        counts.append(num // 691)


E8 = LatticeSpec("E8", 8, 2, 240, _extend_e8)
LEECH = LatticeSpec("Leech", 24, 4, 196560, _extend_leech)


def get_lattice(which) -> LatticeSpec:
    """Look a lattice up by name ('E8'/'Leech', case-insensitive) or by dimension."""
    if isinstance(which, LatticeSpec):
        return which
    if isinstance(which, str):
        key = which.strip().lower()
        if key in ("e8", "e_8", "8"):
            return E8
        if key in ("leech", "24"):
            return LEECH
        raise ValueError(f"unknown lattice {which!r}")
    if int(which) == 8:
        return E8
    if int(which) == 24:
        return LEECH
    raise ValueError(f"no lattice for dimension {which}")


def vector_norms(lat: LatticeSpec, count: int) -> list:
    """Squared lengths of the first `count` nonzero vector lengths (exact ints)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if lat.name == "E8":
        return [2 * m for m in range(1, count + 1)]
    return [2 * m for m in range(2, count + 2)]


def vector_lengths(lat: LatticeSpec, count: int, ctx: PrecisionContext) -> list:
    """The increasing sequence of nonzero vector lengths l_1 < ... < l_count."""
    with ctx.working():
        return [gmpy2.sqrt(mpfr(v)) for v in vector_norms(lat, count)]


def shell_counts(lat: LatticeSpec, max_j: int) -> list:
    """Counts N_1..N_max_j of vectors of norm 2j."""
    if max_j < 1:
        raise ValueError("max_j must be >= 1")
    lat.ensure_shells(max_j)
    return list(lat._counts[:max_j])


def lattice_sum(lat: LatticeSpec, weight: Callable, ctx: PrecisionContext) -> mpfr:
    """Sum of N_j * weight(2j) over all shells, truncated once negligible.

    The weight must be positive and eventually decreasing with fast decay.
    Truncation happens when both the current term and a geometric tail
    bound drop below 10**-(digits+10); if 10*digits shells pass without
    reaching that point, NoDecay is raised.
    """
    with ctx.working():
        cutoff = ctx.eps(-10)
        total = mpfr(0)
        prev_term = None
        zero_streak = 0
        max_shells = 10 * ctx.digits
        j = 0
        while True:
            j += 1
            if j > max_shells:
                raise NoDecay(f"no convergence after {max_shells} shells")
            nj = lat.shell_count(j)
            w = ctx.mpf(weight(2 * j))
            term = nj * w
            total += term
            if term == 0:
                # a finitely supported weight terminates the sum exactly
                if prev_term is not None:
                    zero_streak += 1
                    if zero_streak >= 5 or prev_term <= cutoff:
                        return total
                continue
            zero_streak = 0
            if prev_term is not None and term < prev_term:
                ratio = term / prev_term
                tail = term * ratio / (1 - ratio)
                if term <= cutoff and tail <= cutoff:
                    return total
            prev_term = term


def hexagonal_constants(ctx: PrecisionContext):
    """(r1, kissing) for the planar hexagonal lattice, display only.

    Its length spectrum is not of the sqrt(2j) form, so no schedule or
    shell machinery is attached to it.
    """
    with ctx.working():
        r1 = (mpfr(4) / 3) ** (mpfr(1) / 4)
        return r1, 6
