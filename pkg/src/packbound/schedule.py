"""Forced-root location schedules.

The naive schedule places roots at the exact lattice vector lengths.  The
modified schedule keeps the first two thirds of them and perturbs the
squares of the rest by a quadratically growing offset that tops out at a
25% enlargement of the final squared root.  Squared root locations are
exact rationals under both schedules, so schedules serialize exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .lattice import LatticeSpec, get_lattice, vector_norms
from .mpnum import PrecisionContext

__all__ = [
    "RootSchedule",
    "naive_schedule",
    "modified_schedule",
    "DegenerateSchedule",
]


class DegenerateSchedule(Exception):
    """The late-root interpolation span is empty for these parameters."""


@dataclass(frozen=True)
class RootSchedule:
    """Forced root locations r_1 < ... < r_k.

    roots_sq holds the exact squared locations; roots() materializes the
    square roots at a requested precision.
    """

    kind: str
    k: int
    lattice: str
    roots_sq: tuple

    def roots(self, ctx: PrecisionContext) -> list:
        with ctx.working():
            return [gmpy2.sqrt(mpfr(f.numerator) / f.denominator) for f in self.roots_sq]

    def roots_sq_mpf(self, ctx: PrecisionContext) -> list:
        with ctx.working():
            return [mpfr(f.numerator) / f.denominator for f in self.roots_sq]

    def r1(self, ctx: PrecisionContext) -> mpfr:
        return self.roots(ctx)[0]

    def to_json(self, ctx: PrecisionContext | None = None) -> str:
        """Stable JSON form used in cache keys and manifests."""
        payload = {
            "kind": self.kind,
            "k": self.k,
            "lattice": self.lattice,
            "roots_sq": [str(f) for f in self.roots_sq],
        }
        if ctx is not None:
            payload["roots"] = [ctx.to_str(r) for r in self.roots(ctx)]
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RootSchedule":
        data = json.loads(text)
        return cls(
            kind=data["kind"],
            k=int(data["k"]),
            lattice=data["lattice"],
            roots_sq=tuple(Fraction(s) for s in data["roots_sq"]),
        )


def naive_schedule(lat, k: int) -> RootSchedule:
    """Roots at the first k nonzero vector lengths of the lattice."""
    lat = get_lattice(lat)
    if k < 1:
        raise ValueError("k must be >= 1")
    sq = tuple(Fraction(v) for v in vector_norms(lat, k))
    return RootSchedule(kind="naive", k=k, lattice=lat.name, roots_sq=sq)


def modified_schedule(lat, k: int,
                      unchanged_fraction: Fraction = Fraction(2, 3),
                      final_boost: Fraction = Fraction(1, 4)) -> RootSchedule:
    """Late roots pushed outwards; the default constants work well in practice.

    With kk = floor(unchanged_fraction * k), the m-th squared root is
    l_m^2 for m < kk and l_m^2 + final_boost * l_k^2 * ((m-kk)/(k-kk))^2
    for kk <= m <= k.  For k <= 1 the perturbation would move r_1 off the
    minimal vector length, so the naive schedule is returned instead.
    """
    lat = get_lattice(lat)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        sched = naive_schedule(lat, k)
        return RootSchedule(kind="modified", k=1, lattice=lat.name, roots_sq=sched.roots_sq)
    kk = math.floor(unchanged_fraction * k)
    if k - kk <= 0:
        raise DegenerateSchedule(f"empty interpolation span: k={k}, floor={kk}")
    ell = [Fraction(v) for v in vector_norms(lat, k)]
    sq = []
    for m in range(1, k + 1):
        if m < kk:
            sq.append(ell[m - 1])
        else:
            frac = Fraction(m - kk, k - kk)
            sq.append(ell[m - 1] + final_boost * ell[k - 1] * frac * frac)
    return RootSchedule(kind="modified", k=k, lattice=lat.name, roots_sq=tuple(sq))
