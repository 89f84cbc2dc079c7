"""Rescaled-Laguerre eigenbasis of the n-dimensional radial Fourier transform.

With alpha = n/2 - 1 and p_j(u) = L_j^alpha(2*pi*u), the product
p_j(|x|^2) * exp(-pi*|x|^2) is a radial eigenfunction of the Fourier
transform with eigenvalue (-1)^j.  Radial functions are represented by
their coefficients in this basis, so applying the transform is just a sign
flip on the odd-index coefficients.
"""

from __future__ import annotations

from typing import Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .mpnum import BigPoly, PrecisionContext

__all__ = [
    "LaguerreBasis",
    "RadialFunction",
    "build_basis",
    "transform",
    "eval_radial",
    "eval_profile",
    "radial_derivative",
]


class LaguerreBasis:
    """Basis p_j(u) = L_j^(n/2-1)(2*pi*u) for j = 0..max_degree.

    The dimension n is a big-real and need not be an integer.  Monomial
    coefficient lists (in u) are built once via the three-term recurrence;
    point values and derivatives use the same recurrence in value space,
    which costs O(1) per index per point.
    """

    __slots__ = ("n", "alpha", "ctx", "max_degree", "polys", "_zero_values")

    def __init__(self, n, max_degree: int, ctx: PrecisionContext):
        with ctx.working():
            n = ctx.mpf(n)
            if n <= 0:
                raise ValueError("dimension must be positive")
            self.n = n
            self.alpha = n / 2 - 1
            self.ctx = ctx
            self.max_degree = int(max_degree)
            self.polys = self._build_monomials()
            self._zero_values = [p.coeffs[0] for p in self.polys]

    def _build_monomials(self) -> list:
        ctx = self.ctx
        alpha = self.alpha
        twopi = 2 * ctx.pi_cached
        ps = [[mpfr(1)]]
        if self.max_degree >= 1:
            ps.append([1 + alpha, -twopi])
        for j in range(1, self.max_degree):
            a = 2 * j + 1 + alpha
            bcoef = j + alpha
            new = [mpfr(0)] * (j + 2)
            for i, c in enumerate(ps[j]):
                new[i] += a * c
                new[i + 1] -= twopi * c
            for i, c in enumerate(ps[j - 1]):
                new[i] -= bcoef * c
            ps.append([c / (j + 1) for c in new])
        return [BigPoly(p) for p in ps]

    def values_and_derivs(self, u, jmax: int | None = None):
        """(p_j(u), dp_j/du (u)) for j = 0..jmax at a single point u."""
        if jmax is None:
            jmax = self.max_degree
        with self.ctx.working():
            twopi = 2 * self.ctx.pi_cached
            t = twopi * u
            vals = [mpfr(1)]
            tders = [mpfr(0)]
            if jmax >= 1:
                vals.append(1 + self.alpha - t)
                tders.append(mpfr(-1))
            for j in range(1, jmax):
                a = 2 * j + 1 + self.alpha - t
                b = j + self.alpha
                vals.append((a * vals[j] - b * vals[j - 1]) / (j + 1))
                tders.append((a * tders[j] - vals[j] - b * tders[j - 1]) / (j + 1))
            uders = [twopi * dv for dv in tders]
            return vals, uders

    def value_at_zero(self, j: int):
        return self._zero_values[j]

    def __repr__(self):
        return f"LaguerreBasis(n={float(self.n):g}, max_degree={self.max_degree})"


def build_basis(n, max_degree: int, ctx: PrecisionContext) -> LaguerreBasis:
    """Construct the eigenbasis for dimension n up to the given degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    return LaguerreBasis(n, max_degree, ctx)


class RadialFunction:
    """A function x -> q(|x|^2) * exp(-pi*|x|^2) held in both coordinate systems.

    lag_coeffs[j] is the coefficient of p_j; the monomial form of q is
    cached for evaluation.  Instances are immutable after construction.
    """

    __slots__ = ("basis", "lag_coeffs", "mono")

    def __init__(self, basis: LaguerreBasis, lag_coeffs: Sequence, mono: BigPoly | None = None):
        self.basis = basis
        self.lag_coeffs = list(lag_coeffs)
        if len(self.lag_coeffs) > basis.max_degree + 1:
            raise ValueError("coefficient vector exceeds basis degree")
        if mono is None:
            mono = lag_to_mono(basis, self.lag_coeffs)
        self.mono = mono

    @property
    def ctx(self) -> PrecisionContext:
        return self.basis.ctx

    def value_at_zero(self):
        """q(0); the Gaussian factor is exactly 1 there."""
        return self.mono.coeffs[0]

    def __repr__(self):
        return f"RadialFunction(n={float(self.basis.n):g}, degree={self.mono.degree})"


def lag_to_mono(basis: LaguerreBasis, lag_coeffs: Sequence) -> BigPoly:
    with basis.ctx.working():
        deg = len(lag_coeffs) - 1
        out = [mpfr(0)] * (deg + 1)
        for j, c in enumerate(lag_coeffs):
            if c == 0:
                continue
            for i, pc in enumerate(basis.polys[j].coeffs):
                out[i] += c * pc
        return BigPoly(out)


def mono_to_lag(basis: LaguerreBasis, mono: BigPoly) -> list:
    """Invert the basis accumulation by a triangular solve.

    p_j has degree exactly j, so matching coefficients from the top degree
    downwards determines each lag coefficient in turn.
    """
    with basis.ctx.working():
        deg = mono.degree
        if deg > basis.max_degree:
            raise ValueError("polynomial degree exceeds basis degree")
        residue = list(mono.coeffs) + [mpfr(0)] * 0
        out = [mpfr(0)] * (deg + 1)
        for j in range(deg, -1, -1):
            pj = basis.polys[j].coeffs
            c = residue[j] / pj[j]
            out[j] = c
            if c != 0:
                for i, pc in enumerate(pj):
                    residue[i] -= c * pc
        return out


def transform(f: RadialFunction) -> RadialFunction:
    """Image of f under the radial Fourier transform.

    Diagonal in this basis: the j-th coefficient picks up a factor (-1)^j,
    so applying the transform twice is the identity on coefficients exactly.
    """
    with f.ctx.working():
        flipped = [(-c if j % 2 else c) for j, c in enumerate(f.lag_coeffs)]
        return RadialFunction(f.basis, flipped)


def eval_radial(f: RadialFunction, x):
    """f at the (possibly complex) radial argument x: q(x^2)*exp(-pi*x^2).

    Real input stays on the real path, so the imaginary part of the result
    is exactly zero there.
    """
    with f.ctx.working():
        if isinstance(x, mpc) and x.imag != 0:
            u = x * x
        else:
            xr = x.real if isinstance(x, mpc) else f.ctx.mpf(x)
            u = xr * xr
        return f.mono(u) * gmpy2.exp(-f.ctx.pi_cached * u)


def eval_profile(f: RadialFunction, x):
    """The polynomial profile q(x^2), i.e. f(x) with the Gaussian removed.

    Values of the pair functions along the imaginary axis are reported in
    this normalization, which stays bounded where the Gaussian factor of
    the analytic continuation explodes.
    """
    with f.ctx.working():
        if isinstance(x, mpc) and x.imag != 0:
            u = x * x
        else:
            xr = x.real if isinstance(x, mpc) else f.ctx.mpf(x)
            u = xr * xr
        return f.mono(u)


def radial_derivative(f: RadialFunction, x):
    """d/dx of q(x^2)*exp(-pi*x^2) at real x, from exact coefficient algebra."""
    with f.ctx.working():
        xr = f.ctx.mpf(x)
        u = xr * xr
        qp = f.mono.derivative()(u)
        qv = f.mono(u)
        pi = f.ctx.pi_cached
        return (2 * xr * qp - 2 * pi * xr * qv) * gmpy2.exp(-pi * u)
