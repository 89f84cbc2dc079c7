"""Arbitrary-precision numeric substrate: scalars, dense linear solving,
polynomial root finding, and half-integer Gamma values.

Everything is built on gmpy2 (MPFR/MPC), which gives correctly rounded and
therefore fully deterministic arithmetic at any precision.  All operations
in this package run inside an explicit :class:`PrecisionContext`; values
returned by one operation may safely be fed into another with the same or
higher precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpc, mpfr

__all__ = [
    "PrecisionContext",
    "BigPoly",
    "SingularMatrix",
    "NoConvergence",
    "UnsupportedArgument",
    "solve_linear",
    "poly_roots",
    "cluster_roots",
    "gamma_half_integer",
]

_LOG2_10 = 3.321928094887362347870319429


class SingularMatrix(Exception):
    """A pivot fell below the singularity threshold during elimination."""


class NoConvergence(Exception):
    """The simultaneous root iteration failed to meet tolerance in time."""


class UnsupportedArgument(ValueError):
    """Argument outside the supported (integer / half-integer) range."""


class PrecisionContext:
    """Decimal-precision policy plus cached constants.

    The working precision is expressed in decimal digits (>= 30); the
    underlying MPFR precision carries an extra guard of 40 bits so that
    results are trustworthy through the advertised digit count.
    """

    __slots__ = ("digits", "bits", "pi_cached", "sqrt_pi", "_gmp")

    def __init__(self, digits: int):
        digits = int(digits)
        if digits < 30:
            raise ValueError(f"need at least 30 digits, got {digits}")
        self.digits = digits
        self.bits = int(digits * _LOG2_10) + 40
        self._gmp = gmpy2.context(precision=self.bits)
        with self._gmp:
            self.pi_cached = gmpy2.const_pi()
            self.sqrt_pi = gmpy2.sqrt(self.pi_cached)

    @classmethod
    def for_k(cls, k: int, digits: int | None = None) -> "PrecisionContext":
        """Default precision schedule for a build with k forced roots.

        The default is 8k+75 digits.  Callers may raise the precision but
        not lower it below the floor of 30.
        """
        base = 8 * int(k) + 75
        if digits is None:
            return cls(base)
        return cls(max(int(digits), 30))

    def working(self):
        """Context manager activating this precision on the current thread."""
        return gmpy2.context(precision=self.bits)

    # -- scalar constructors -------------------------------------------------

    def mpf(self, x) -> mpfr:
        with self.working():
            if isinstance(x, Fraction):
                return mpfr(x.numerator) / mpfr(x.denominator)
            return mpfr(x)

    def mpcx(self, re, im=0) -> mpc:
        with self.working():
            return mpc(self.mpf(re), self.mpf(im))

    def eps(self, digits_off: int = 0) -> mpfr:
        """10**(-(digits - digits_off)) as a threshold value."""
        with self.working():
            return mpfr(10) ** (-(self.digits - digits_off))

    # -- decimal serialization ----------------------------------------------

    def to_str(self, x) -> str:
        """Full-precision decimal string; parsing it back is lossless."""
        if isinstance(x, mpc):
            return self.to_str(x.real) + " " + self.to_str(x.imag)
        nd = int(x.precision * 0.30103) + 3
        return _decimal_str(x, nd)

    def from_str(self, s: str) -> mpfr:
        with self.working():
            return mpfr(s)

    def __repr__(self):
        return f"PrecisionContext(digits={self.digits})"


def _decimal_str(x: mpfr, ndigits: int) -> str:
    """Scientific-notation decimal string with ndigits significant digits."""
    if gmpy2.is_nan(x):
        return "nan"
    if gmpy2.is_infinite(x):
        return "-inf" if x < 0 else "inf"
    if x == 0:
        return "0"
    digs, exp, _ = gmpy2.digits(x, 10, ndigits)
    neg = digs.startswith("-")
    if neg:
        digs = digs[1:]
    digs = digs.rstrip("0") or "0"
    mant = digs[0] + ("." + digs[1:] if len(digs) > 1 else "")
    return ("-" if neg else "") + mant + "e" + ("%+03d" % (exp - 1))


def fmt(x, ndigits: int = 20) -> str:
    """Short decimal rendering used in reports and error messages."""
    if isinstance(x, mpc):
        return f"({fmt(x.real, ndigits)} {fmt(x.imag, ndigits)}j)"
    return _decimal_str(x, ndigits)


class BigPoly:
    """Dense polynomial with big-real or big-complex coefficients.

    Coefficients are stored in ascending degree.  The indeterminate is
    abstract; throughout this package it stands for the squared radius u.
    Exact zero leading coefficients are stripped so the representation of a
    given polynomial is unique.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = list(coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [mpfr(0)]
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, x):
        """Horner evaluation; deterministic for exactly representable input."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "BigPoly":
        if self.degree == 0:
            return BigPoly([mpfr(0)])
        return BigPoly([(i + 1) * c for i, c in enumerate(self.coeffs[1:])])

    def deflate(self, root) -> "BigPoly":
        """Synthetic division by (u - root); the remainder is discarded."""
        d = self.degree
        if d < 1:
            raise ValueError("cannot deflate a constant polynomial")
        out = [None] * d
        acc = self.coeffs[d]
        for i in range(d - 1, -1, -1):
            out[i] = acc
            acc = self.coeffs[i] + root * acc
        return BigPoly(out)

    def scaled(self, factor) -> "BigPoly":
        return BigPoly([factor * c for c in self.coeffs])

    def __add__(self, other: "BigPoly") -> "BigPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return BigPoly(out)

    def __sub__(self, other: "BigPoly") -> "BigPoly":
        return self + other.scaled(-1)

    def __mul__(self, other: "BigPoly") -> "BigPoly":
        out = [mpfr(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return BigPoly(out)

    def max_coeff_abs(self):
        return max(abs(c) for c in self.coeffs)

    def __repr__(self):
        return f"BigPoly(degree={self.degree})"


def solve_linear(A: Sequence[Sequence], b: Sequence, ctx: PrecisionContext) -> list:
    """Solve A x = b by Gaussian elimination with partial pivoting.

    The pivot in each column is the entry of largest magnitude, ties broken
    by lowest row index, so the elimination order (and hence the rounding
    pattern) is identical across runs.

    Raises SingularMatrix when the chosen pivot is smaller than
    10**-(digits-10) relative to the largest entry of its row.
    """
    n = len(A)
    if n == 0:
        return []
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("matrix must be square and match the right-hand side")
    with ctx.working():
        work = [list(row) + [b[i]] for i, row in enumerate(A)]
        thresh = ctx.eps(10)
        for col in range(n):
            piv, pmag = col, abs(work[col][col])
            for r in range(col + 1, n):
                m = abs(work[r][col])
                if m > pmag:
                    piv, pmag = r, m
            if piv != col:
                work[col], work[piv] = work[piv], work[col]
            prow = work[col]
            rowmax = max(abs(v) for v in prow[:n])
            if pmag <= rowmax * thresh or pmag == 0:
                raise SingularMatrix(f"pivot {fmt(pmag, 6)} in column {col} below threshold")
            d = prow[col]
            for r in range(col + 1, n):
                row = work[r]
                f = row[col] / d
                if f == 0:
                    continue
                for j in range(col + 1, n + 1):
                    row[j] = row[j] - f * prow[j]
                row[col] = mpfr(0)
        x = [None] * n
        for i in range(n - 1, -1, -1):
            s = work[i][n]
            for j in range(i + 1, n):
                s = s - work[i][j] * x[j]
            x[i] = s / work[i][i]
        return x


def _hull_radii(coeffs) -> list:
    """Per-root starting moduli from the upper convex hull of (i, log|c_i|).

    This is the standard simultaneous-iteration initialization; it places
    each starting point near the modulus the corresponding root is likely
    to have, which keeps the iteration count low even when the coefficient
    range spans hundreds of orders of magnitude.
    """
    d = len(coeffs) - 1
    NEG = -1e308
    logs = []
    for c in coeffs:
        a = abs(c)
        if a == 0:
            logs.append(NEG)
        else:
            e, m = gmpy2.frexp(a)
            logs.append(math.log(float(m)) + e * math.log(2.0))
    hull = [0]
    for i in range(1, d + 1):
        if logs[i] == NEG and i != d:
            continue
        while len(hull) >= 2:
            i1, i2 = hull[-2], hull[-1]
            if (logs[i2] - logs[i1]) * (i - i2) <= (logs[i] - logs[i2]) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append(i)
    radii = []
    for a, b in zip(hull[:-1], hull[1:]):
        r = math.exp((logs[a] - logs[b]) / (b - a))
        r = min(max(r, 1e-300), 1e300)
        radii.extend([r] * (b - a))
    return radii


def poly_roots(p: BigPoly, ctx: PrecisionContext, max_iter: int | None = None) -> list:
    """All complex roots of p (with repetition) by Aberth-Ehrlich iteration.

    Runs at the full working precision of ctx.  Each returned root z
    satisfies |p(z)| <= 10**(-digits/2) * max|c_i| * max(1,|z|)**deg; the
    output is sorted by (real part, imaginary part).

    Raises NoConvergence if the tolerance is not met within 50*deg
    iterations (or max_iter when given).
    """
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    with ctx.working():
        lead = p.coeffs[-1]
        scale = p.max_coeff_abs()
        if abs(lead) <= scale * ctx.eps(10):
            raise UnsupportedArgument("leading coefficient below the singularity threshold")
        cs = [c / lead for c in p.coeffs]
        # exact zero roots split off directly
        nzero = 0
        while nzero < len(cs) - 1 and cs[nzero] == 0:
            nzero += 1
        if nzero:
            cs = cs[nzero:]
        roots: list = []
        d = len(cs) - 1
        if d == 1:
            roots.append(mpc(-cs[0] / cs[1]))
        elif d == 2:
            a, b, c = cs[2], cs[1], cs[0]
            disc = gmpy2.sqrt(mpc(b * b - 4 * a * c))
            roots.append(mpc((-b + disc) / (2 * a)))
            roots.append(mpc((-b - disc) / (2 * a)))
        elif d >= 3:
            roots.extend(_aberth(cs, ctx, max_iter))
        # replace each cluster by its polished mean, repeated: an m-point
        # cluster marks an m-fold root, for which plain iteration is only
        # linearly convergent, while Newton with the multiplicity built in
        # (z -> z - m p/p') restores quadratic convergence
        all_real = all(getattr(c, "imag", 0) == 0 for c in p.coeffs)
        out = [mpc(0)] * nzero
        for z, mult in cluster_roots(roots, ctx, snap_real=all_real):
            if mult > 1:
                z = _polish_multiple(cs, z, mult, ctx, snap_real=all_real)
            out.extend([z] * mult)
        out.sort(key=lambda z: (z.real, z.imag))
        return out


def _aberth(cs: list, ctx: PrecisionContext, max_iter: int | None) -> list:
    d = len(cs) - 1
    # the precision term covers the linearly convergent tail of multiple
    # roots, whose length grows with digits rather than with the degree
    cap = max_iter if max_iter is not None else 50 * d + 12 * ctx.digits
    dcs = [(i + 1) * cs[i + 1] for i in range(d)]
    radii = _hull_radii(cs)
    z = []
    for i in range(d):
        # fixed angular offset breaks the symmetry of real-coefficient input
        th = 2 * math.pi * i / d + 0.4
        z.append(mpc(radii[i] * math.cos(th), radii[i] * math.sin(th)))
    tol = mpfr(10) ** (-(ctx.digits // 2))
    # a multiple root met at residual tolerance still sits ~10^(-digits/4)
    # from its true location, right at the cluster radius; points are kept
    # moving until the correction is safely inside that radius
    freeze = mpfr(10) ** (-(ctx.digits // 4 + 6))
    maxc = max(abs(c) for c in cs)
    one = mpfr(1)
    done = [False] * d

    def residual_ok(i):
        zi = z[i]
        pv = cs[d]
        for c in reversed(cs[:-1]):
            pv = pv * zi + c
        return abs(pv) <= tol * maxc * max(one, abs(zi)) ** d

    it = 0
    while it < cap:
        it += 1
        active = 0
        for i in range(d):
            if done[i]:
                continue
            zi = z[i]
            pv = cs[d]
            dv = mpc(0)
            for c in reversed(cs[:-1]):
                dv = dv * zi + pv
                pv = pv * zi + c
            res_ok = abs(pv) <= tol * maxc * max(one, abs(zi)) ** d
            if dv == 0:
                if res_ok:
                    done[i] = True
                else:
                    active += 1
                    z[i] = zi * mpfr("1.000152587890625") + mpfr("0.0009765625")
                continue
            newton = pv / dv
            s = mpc(0)
            for j in range(d):
                if j != i:
                    s = s + 1 / (zi - z[j])
            denom = 1 - newton * s
            w = newton if denom == 0 else newton / denom
            if res_ok and abs(w) <= freeze * max(one, abs(zi)):
                done[i] = True
                continue
            active += 1
            z[i] = zi - w
        if active == 0 and all(residual_ok(i) for i in range(d)):
            return z
    raise NoConvergence(f"Aberth iteration failed to converge within {cap} iterations")


def _polish_multiple(cs: list, z, mult: int, ctx: PrecisionContext, snap_real: bool):
    """A few multiplicity-aware Newton steps; kept only if the residual drops."""
    d = len(cs) - 1
    best, best_res = z, None
    cur = z
    for _ in range(6):
        pv = cs[d]
        dv = mpc(0)
        for c in reversed(cs[:-1]):
            dv = dv * cur + pv
            pv = pv * cur + c
        res = abs(pv)
        if best_res is None or res < best_res:
            best, best_res = cur, res
        if dv == 0 or res == 0:
            break
        step = mult * pv / dv
        cur = cur - step
        if abs(step) <= abs(cur) * mpfr(10) ** (-(ctx.digits + 5)):
            pv2 = cs[d]
            for c in reversed(cs[:-1]):
                pv2 = pv2 * cur + c
            if abs(pv2) <= best_res:
                best = cur
            break
    if snap_real and abs(best.imag) <= mpfr(10) ** (-(ctx.digits // 4)):
        best = mpc(best.real, 0)
    return best


def cluster_roots(roots: Iterable, ctx: PrecisionContext, snap_real: bool = True) -> list:
    """Group nearby roots into (location, multiplicity) pairs.

    Roots within 10**(-digits/4) of each other are treated as one root of
    higher multiplicity, located at the cluster mean; forced double roots
    split at the level of the solver noise, which this radius absorbs.
    With snap_real (appropriate for real-coefficient polynomials), a mean
    with negligible imaginary part is flattened onto the real axis.
    """
    with ctx.working():
        radius = mpfr(10) ** (-(ctx.digits // 4))
        pending = sorted(roots, key=lambda z: (z.real, z.imag))
        out = []
        while pending:
            seed = pending.pop(0)
            members = [seed]
            rest = []
            for z in pending:
                if any(abs(z - m) <= radius for m in members):
                    members.append(z)
                else:
                    rest.append(z)
            pending = rest
            mean = sum(members, mpc(0)) / len(members)
            if snap_real and abs(mean.imag) <= radius:
                mean = mpc(mean.real, 0)
            out.append((mean, len(members)))
        out.sort(key=lambda t: (t[0].real, t[0].imag))
        return out


def gamma_half_integer(s, ctx: PrecisionContext) -> mpfr:
    """Gamma(s) for positive integer or half-integer s.

    Computed by upward recurrence from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi);
    no general Gamma engine is needed anywhere in this package.
    """
    s = Fraction(s)
    if s <= 0 or s.denominator not in (1, 2):
        raise UnsupportedArgument(f"gamma_half_integer needs positive integer or half-integer s, got {s}")
    with ctx.working():
        if s.denominator == 1:
            acc = mpfr(1)
            m = 1
        else:
            acc = ctx.sqrt_pi + 0
            m = Fraction(1, 2)
        while m < s:
            acc = acc * (mpfr(m.numerator) / m.denominator)
            m += 1
        return acc
