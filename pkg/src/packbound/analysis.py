"""Measurements on built pairs: Taylor coefficients, Mellin special values,
slope identity at the first root, predicted 0-value ratios, complex root
atlases, root matching between the two sides, and convergence grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .lattice import LatticeSpec, get_lattice
from .magic import RadialPair
from .mpnum import (BigPoly, PrecisionContext, UnsupportedArgument,
                    cluster_roots, gamma_half_integer, poly_roots)
from .polybasis import RadialFunction, eval_radial, radial_derivative
from .schedule import RootSchedule

__all__ = [
    "RootAtlas",
    "TaylorCoefficients",
    "MellinValue",
    "OutOfRange",
    "taylor_coefficients",
    "mellin_value",
    "mellin_symmetry_check",
    "fprime_check",
    "ratio_formula",
    "root_atlas",
    "atlas_from_poly",
    "match_roots",
    "convergence_digits",
    "convergence_grid",
    "default_grid",
]


class OutOfRange(ValueError):
    """Argument outside the interval where the closed form is asserted."""


# ---------------------------------------------------------------------------
# Taylor and Mellin machinery (exact coefficient algebra, no quadrature)
# ---------------------------------------------------------------------------


@dataclass
class TaylorCoefficients:
    """Even-order Taylor coefficients about 0 of q(x^2)*exp(-pi*x^2).

    values[m] is the coefficient of x^(2m).  If the function value at 0
    was not 1, the coefficients are reported relative to that value and
    `rescaled` is set.
    """

    values: list
    rescaled: bool


def taylor_coefficients(side: RadialFunction, max_order: int) -> TaylorCoefficients:
    """Coefficients of x^0, x^2, ..., x^max_order from coefficient algebra.

    The x^(2m) coefficient is sum_{a+b=m} q_a * (-pi)^b / b!.
    """
    if max_order % 2 != 0 or max_order < 0:
        raise ValueError("max_order must be a nonnegative even integer")
    ctx = side.ctx
    with ctx.working():
        q = side.mono.coeffs
        pi = ctx.pi_cached
        mmax = max_order // 2
        # (-pi)^b / b! for b = 0..mmax
        gaussian = [mpfr(1)]
        for b in range(1, mmax + 1):
            gaussian.append(gaussian[-1] * (-pi) / b)
        values = []
        for m in range(mmax + 1):
            acc = mpfr(0)
            for a in range(0, min(m, len(q) - 1) + 1):
                if q[a] != 0:
                    acc += q[a] * gaussian[m - a]
            values.append(acc)
        v0 = q[0]
        rescaled = abs(v0 - 1) > ctx.eps(5)
        if rescaled:
            values = [v / v0 for v in values]
        return TaylorCoefficients(values=values, rescaled=rescaled)


@dataclass
class MellinValue:
    s: Fraction
    value: mpfr


def mellin_value(side: RadialFunction, s) -> MellinValue:
    """Mellin transform of the radial profile at integer s > 0.

    Each monomial x^(2m)*exp(-pi*x^2) integrates in closed form to
    Gamma((s+2m)/2) / (2*pi^((s+2m)/2)); only integer s keeps all Gamma
    arguments on the supported integer/half-integer grid.
    """
    s = Fraction(s)
    if s <= 0 or s.denominator != 1:
        raise UnsupportedArgument(f"Mellin values need positive integer s, got {s}")
    ctx = side.ctx
    with ctx.working():
        pi = ctx.pi_cached
        half_s = Fraction(s, 2)
        gam = gamma_half_integer(half_s, ctx)
        pipow = pi ** (mpfr(s.numerator) / s.denominator / 2)
        acc = mpfr(0)
        arg = half_s
        for m, qm in enumerate(side.mono.coeffs):
            if m > 0:
                gam = gam * (mpfr(arg.numerator) / arg.denominator)
                arg += 1
                pipow = pipow * pi
            if qm != 0:
                acc += qm * gam / (2 * pipow)
        return MellinValue(s=s, value=acc)


def mellin_symmetry_check(pair: RadialPair, s: int) -> mpfr:
    """Relative discrepancy of the reflection identity between the sides.

    For an n-dimensional Fourier pair the identity
    M_fhat(s) = pi^(n/2-s) * Gamma(s/2) / Gamma((n-s)/2) * M_f(n-s)
    is exact, so the discrepancy must sit at solver-noise level for every
    built pair, not only in any limit.
    """
    ctx = pair.ctx
    s = int(s)
    with ctx.working():
        n = pair.n
        if n != int(n):
            raise UnsupportedArgument("symmetry check needs an integer dimension")
        nint = int(n)
        if not (0 < s < nint):
            raise UnsupportedArgument(f"need 0 < s < n, got s={s}, n={nint}")
        lhs = mellin_value(pair.fhat, s).value
        mf = mellin_value(pair.f, nint - s).value
        factor = (ctx.pi_cached ** (n / 2 - s)
                  * gamma_half_integer(Fraction(s, 2), ctx)
                  / gamma_half_integer(Fraction(nint - s, 2), ctx))
        rhs = factor * mf
        return abs(lhs - rhs) / abs(lhs)


def fprime_check(pair: RadialPair, lat: LatticeSpec) -> mpfr:
    """rho = f'(r_1) * N * r_1 / (-n * fhat(0)); tends to 1 as k grows.

    N is the kissing number; the slope identity follows from rescaling
    the pair inside the summation formula over the lattice.
    """
    lat = get_lattice(lat)
    ctx = pair.ctx
    with ctx.working():
        r1 = pair.schedule.roots(ctx)[0]
        fp = radial_derivative(pair.f, r1)
        return fp * lat.kissing * r1 / (-pair.n * pair.fhat_at_zero())


_E8_RANGE = (0, 10)
_LEECH_RANGE = (0, 26)


def _p24(n: Fraction) -> Fraction:
    return (n**8 - 284 * n**7 + 35312 * n**6 - 2510720 * n**5 + 111652352 * n**4
            - 3180064256 * n**3 + 56651266048 * n**2 - 577142292480 * n
            + 2574499479552)


def ratio_formula(n, lat) -> Fraction:
    """Predicted limiting f(0)/fhat(0) as a function of the dimension.

    Closed-form rational functions, one per root-length family; exact
    rational arithmetic, valid on 0 < n < 10 (E8 lengths) and 0 < n < 26
    (Leech lengths).  Both are exactly 1 at the home dimension.
    """
    lat = get_lattice(lat)
    n = Fraction(n)
    if lat.name == "E8":
        lo, hi = _E8_RANGE
        if not (lo < n < hi):
            raise OutOfRange(f"E8-length ratio formula needs 0 < n < 10, got {n}")
        num = n**4 - 56 * n**3 + 1184 * n**2 - 11200 * n + 40320
        den = 16 * (n - 10) * (n - 14) * (n - 18)
        return -num / den
    lo, hi = _LEECH_RANGE
    if not (lo < n < hi):
        raise OutOfRange(f"Leech-length ratio formula needs 0 < n < 26, got {n}")
    den = 32 * (n - 26) * (n - 34) * (n - 38) * (n - 42) * (n**3 - 116 * n**2 + 4480 * n - 57024)
    return -_p24(n) / den


# ---------------------------------------------------------------------------
# Root atlases
# ---------------------------------------------------------------------------


@dataclass
class RootAtlas:
    """Roots of a radial profile in the u- and x-planes.

    u_roots entries are (location, multiplicity, forced); x_roots carries
    both square-root branches of each u-root with the same bookkeeping.
    min_imag is the smallest |Im x| over non-real x-roots (None if all
    roots are real).
    """

    source: str
    n: float
    k: int
    u_roots: list
    x_roots: list
    min_imag: mpfr | None

    def forced_u(self) -> list:
        return [t for t in self.u_roots if t[2]]

    def extraneous_u(self) -> list:
        return [t for t in self.u_roots if not t[2]]


def atlas_from_poly(mono: BigPoly, forced: list, ctx: PrecisionContext,
                    source: str, n, k: int) -> RootAtlas:
    """Atlas of a u-polynomial whose forced roots are known exactly.

    The forced factors are deflated away first; the remaining (generically
    simple) roots go through the simultaneous iteration.  This keeps the
    iteration away from the forced double roots, where convergence would
    be limited to cluster resolution.
    """
    with ctx.working():
        real_snap = mpfr(10) ** (-(ctx.digits // 4))
        reduced = mono
        u_roots = []
        for um, mult in forced:
            for _ in range(mult):
                reduced = reduced.deflate(um)
            u_roots.append((mpc(um), mult, True))
        if reduced.degree >= 1:
            extra = cluster_roots(poly_roots(reduced, ctx), ctx)
            for z, mult in extra:
                is_forced = any(abs(z - mpc(um)) <= real_snap for um, _ in forced)
                u_roots.append((z, mult, is_forced))
        u_roots.sort(key=lambda t: (t[0].real, t[0].imag))

        x_roots = []
        min_imag = None
        for z, mult, is_forced in u_roots:
            if z == 0:
                x_roots.append((mpc(0), 2 * mult, is_forced))
                continue
            x = gmpy2.sqrt(z)
            for branch in (x, -x):
                x_roots.append((branch, mult, is_forced))
            im = abs(x.imag)
            if im != 0:
                if min_imag is None or im < min_imag:
                    min_imag = im
        x_roots.sort(key=lambda t: (t[0].real, t[0].imag))
        return RootAtlas(source=source, n=float(n), k=k,
                         u_roots=u_roots, x_roots=x_roots, min_imag=min_imag)


def root_atlas(side: RadialFunction, schedule: RootSchedule, source: str,
               ctx: PrecisionContext | None = None) -> RootAtlas:
    """Atlas for one side of a pair ('f': single root at r_1^2, else doubles)."""
    if source not in ("f", "fhat"):
        raise ValueError("source must be 'f' or 'fhat'")
    if ctx is None:
        ctx = side.ctx
    with ctx.working():
        usq = schedule.roots_sq_mpf(ctx)
        forced = [(um, 1 if (source == "f" and m == 0) else 2)
                  for m, um in enumerate(usq)]
        return atlas_from_poly(side.mono, forced, ctx, source,
                               side.basis.n, schedule.k)


def match_roots(a: RootAtlas, b: RootAtlas, tol=None):
    """Greedy nearest-neighbor pairing of the two x-plane root point sets.

    Matching is between distinct root locations (multiplicities ignored,
    as in a plotted point set).  Returns (unmatched_a, unmatched_b): the
    locations with no counterpart within tol in both the real and the
    imaginary part.  The default tolerance 10^-6 is far below typical
    inter-root spacing, so greedy matching in deterministic sort order is
    safe.
    """
    tol_val = mpfr("1e-6") if tol is None else mpfr(tol)

    def locations(atlas):
        out = [z for z, _, _ in atlas.x_roots]
        out.sort(key=lambda z: (z.real, z.imag))
        return out

    ra = locations(a)
    rb = locations(b)
    used = [False] * len(rb)
    unmatched_a = []
    for z in ra:
        best, best_d = None, None
        for i, w in enumerate(rb):
            if used[i]:
                continue
            d = max(abs(z.real - w.real), abs(z.imag - w.imag))
            if best_d is None or d < best_d:
                best, best_d = i, d
        if best is not None and best_d <= tol_val:
            used[best] = True
        else:
            unmatched_a.append(z)
    unmatched_b = [w for i, w in enumerate(rb) if not used[i]]
    return unmatched_a, unmatched_b


# ---------------------------------------------------------------------------
# Convergence grids
# ---------------------------------------------------------------------------


def default_grid() -> list:
    """Sample points x/10 + (y/10)i for integers 0<=x<=50, 0<=y<=2."""
    return [(x, y) for x in range(51) for y in range(3)]


_FLOOR = "1e-20"


def convergence_grid(pair_hi: RadialPair, pair_lo: RadialPair, grid=None) -> list:
    """Per-point agreement digits between two builds of the same dimension.

    Rows are (x_tenths, y_tenths, digits_f, digits_fhat); entries are None
    where the function magnitude sits below 10^-20 and relative agreement
    is meaningless (this happens exactly on forced roots and in the far
    Gaussian tail).
    """
    if grid is None:
        grid = default_grid()
    ctx = pair_hi.ctx
    cap = min(pair_hi.ctx.digits, pair_lo.ctx.digits)
    rows = []
    with ctx.working():
        floor = mpfr(_FLOOR)
        for x, y in grid:
            z = mpc(mpfr(x) / 10, mpfr(y) / 10)
            cell = [x, y]
            for side_hi, side_lo in ((pair_hi.f, pair_lo.f), (pair_hi.fhat, pair_lo.fhat)):
                va = eval_radial(side_hi, z)
                vb = eval_radial(side_lo, z)
                if abs(va) < floor:
                    cell.append(None)
                    continue
                diff = abs(va - vb)
                if diff == 0:
                    cell.append(float(cap))
                else:
                    d = float(-gmpy2.log10(diff / abs(va)))
                    cell.append(min(d, float(cap)))
            rows.append(tuple(cell))
    return rows


def convergence_digits(pair_hi: RadialPair, pair_lo: RadialPair, grid=None) -> float:
    """Minimum agreement digits over the grid and both sides."""
    best = None
    for _, _, df, dh in convergence_grid(pair_hi, pair_lo, grid):
        for d in (df, dh):
            if d is None:
                continue
            if best is None or d < best:
                best = d
    return best
