"""Construction of the forced-root pair (f, fhat) and its density bound.

For a schedule r_1 < ... < r_k the pair comes from two half-size linear
systems, one per Fourier eigenvalue: q^eps is the nullspace direction of
the constraints "vanish to order 1 at r_1^2 and order 2 at r_2^2..r_k^2"
over the basis elements p_eps, p_{eps+2}, ..., p_{4k-2+eps}.  The relative
scale of the two components is then fixed so that fhat = (q^0 - q^1) side
acquires its double root at r_1, and the whole thing is normalized to
f(0) = 1.  A single full-size solve is kept alongside as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpfr

from .mpnum import (PrecisionContext, SingularMatrix, cluster_roots,
                    poly_roots, solve_linear)
from .polybasis import LaguerreBasis, RadialFunction, build_basis
from .schedule import RootSchedule

__all__ = [
    "RadialPair",
    "BoundReport",
    "SignReport",
    "ScalingDegenerate",
    "build_pair",
    "build_pair_full",
    "density_bound",
    "validate_signs",
    "side_real_roots",
]


class ScalingDegenerate(Exception):
    """Both eigencomponents have (numerically) vanishing slope at r_1^2."""


class RadialPair:
    """The pair f = (q0+q1)-side, fhat = (q0-q1)-side with f(0) = 1.

    q0 and q1 are the +1 / -1 eigencomponents; their lag vectors live on
    even and odd indices respectively.  Immutable after construction.
    """

    __slots__ = ("n", "schedule", "ctx", "basis", "q0", "q1", "_f", "_fhat")

    def __init__(self, n, schedule: RootSchedule, ctx: PrecisionContext,
                 basis: LaguerreBasis, q0: RadialFunction, q1: RadialFunction):
        self.n = n
        self.schedule = schedule
        self.ctx = ctx
        self.basis = basis
        self.q0 = q0
        self.q1 = q1
        self._f = None
        self._fhat = None

    @property
    def k(self) -> int:
        return self.schedule.k

    def _combine(self, sign: int) -> RadialFunction:
        with self.ctx.working():
            lag = [a + sign * b for a, b in zip(self.q0.lag_coeffs, self.q1.lag_coeffs)]
            mono = self.q0.mono + (self.q1.mono if sign > 0 else self.q1.mono.scaled(-1))
            return RadialFunction(self.basis, lag, mono)

    @property
    def f(self) -> RadialFunction:
        if self._f is None:
            self._f = self._combine(+1)
        return self._f

    @property
    def fhat(self) -> RadialFunction:
        if self._fhat is None:
            self._fhat = self._combine(-1)
        return self._fhat

    def fhat_at_zero(self) -> mpfr:
        return self.fhat.value_at_zero()

    def __repr__(self):
        return (f"RadialPair(n={float(self.n):g}, k={self.k}, "
                f"schedule={self.schedule.kind})")


def _nullspace_by_pinning(rows: list, ctx: PrecisionContext) -> list:
    """One nullspace direction of a (m)x(m+1) system via pin-and-solve.

    The coefficient belonging to the highest-index basis element is pinned
    to 1; on singularity the pin moves down one column at a time.
    """
    ncols = len(rows[0])
    last_err = None
    for pin in range(ncols - 1, -1, -1):
        A = [[row[j] for j in range(ncols) if j != pin] for row in rows]
        rhs = [-row[pin] for row in rows]
        try:
            x = solve_linear(A, rhs, ctx)
        except SingularMatrix as err:
            last_err = err
            continue
        coeffs = x[:pin] + [ctx.mpf(1)] + x[pin:]
        return coeffs
    raise last_err


def _split_lag_vector(coeffs: list, eps: int, total: int, ctx: PrecisionContext) -> list:
    lag = [mpfr(0)] * total
    for i, c in enumerate(coeffs):
        lag[2 * i + eps] = c
    return lag


def build_pair(n, schedule: RootSchedule, ctx: PrecisionContext | None = None) -> RadialPair:
    """Build the unique pair for this schedule, normalized to f(0) = 1.

    The default precision is the 8k+75-digit schedule; pass a context to
    raise it.
    """
    k = schedule.k
    if ctx is None:
        ctx = PrecisionContext.for_k(k)
    with ctx.working():
        deg = 4 * k - 1
        basis = build_basis(n, deg, ctx)
        usq = schedule.roots_sq_mpf(ctx)
        vals, ders = [], []
        for um in usq:
            v, d = basis.values_and_derivs(um, deg)
            vals.append(v)
            ders.append(d)

        comp = {}
        slope_r1 = {}
        for eps in (0, 1):
            cols = list(range(eps, 4 * k, 2))
            rows = [[vals[0][j] for j in cols]]
            for m in range(1, k):
                rows.append([vals[m][j] for j in cols])
                rows.append([ders[m][j] for j in cols])
            coeffs = _nullspace_by_pinning(rows, ctx)
            comp[eps] = coeffs
            slope_r1[eps] = sum(c * ders[0][j] for c, j in zip(coeffs, cols))

        scale = max(max(abs(c) for c in comp[0]), max(abs(c) for c in comp[1]))
        dscale = max(abs(v) for v in ders[0])
        thresh = scale * dscale * (mpfr(10) ** (-(ctx.digits // 2)))
        if abs(slope_r1[0]) <= thresh and abs(slope_r1[1]) <= thresh:
            raise ScalingDegenerate("both eigencomponent slopes vanish at r_1^2")

        # match scales so the minus-combination gains its double root at r_1
        lam = slope_r1[0] / slope_r1[1]
        c1 = [lam * c for c in comp[1]]
        c0 = comp[0]

        f_at_zero = (sum(c * basis.value_at_zero(j) for c, j in zip(c0, range(0, 4 * k, 2)))
                     + sum(c * basis.value_at_zero(j) for c, j in zip(c1, range(1, 4 * k, 2))))
        c0 = [c / f_at_zero for c in c0]
        c1 = [c / f_at_zero for c in c1]

        q0 = RadialFunction(basis, _split_lag_vector(c0, 0, 4 * k, ctx))
        q1 = RadialFunction(basis, _split_lag_vector(c1, 1, 4 * k, ctx))
        return RadialPair(n, schedule, ctx, basis, q0, q1)


def build_pair_full(n, schedule: RootSchedule, ctx: PrecisionContext | None = None) -> RadialPair:
    """Same pair via one inhomogeneous 4k x 4k solve; cross-check path.

    Solves the direct system (value 1 at zero, forced roots of both sides)
    without the eigenvalue split; roughly four times slower and kept for
    validating the split construction.
    """
    k = schedule.k
    if ctx is None:
        ctx = PrecisionContext.for_k(k)
    with ctx.working():
        deg = 4 * k - 1
        basis = build_basis(n, deg, ctx)
        usq = schedule.roots_sq_mpf(ctx)
        vals, ders = [], []
        for um in usq:
            v, d = basis.values_and_derivs(um, deg)
            vals.append(v)
            ders.append(d)
        sign = [(-1) ** j for j in range(4 * k)]

        A = [[basis.value_at_zero(j) for j in range(4 * k)]]
        b = [ctx.mpf(1)]
        for m in range(k):
            A.append([vals[m][j] for j in range(4 * k)])
            b.append(mpfr(0))
        for m in range(1, k):
            A.append([ders[m][j] for j in range(4 * k)])
            b.append(mpfr(0))
        for m in range(k):
            A.append([sign[j] * vals[m][j] for j in range(4 * k)])
            b.append(mpfr(0))
        for m in range(k):
            A.append([sign[j] * ders[m][j] for j in range(4 * k)])
            b.append(mpfr(0))

        c = solve_linear(A, b, ctx)
        c0 = [c[j] if j % 2 == 0 else mpfr(0) for j in range(4 * k)]
        c1 = [c[j] if j % 2 == 1 else mpfr(0) for j in range(4 * k)]
        q0 = RadialFunction(basis, c0)
        q1 = RadialFunction(basis, c1)
        return RadialPair(n, schedule, ctx, basis, q0, q1)


@dataclass
class SignReport:
    """Outcome of the real-root sign scan of a pair."""

    f_nonpositive_beyond_r1: bool
    fhat_nonnegative: bool
    nonforced_real_roots_f: list
    nonforced_real_roots_fhat: list

    @property
    def valid(self) -> bool:
        return self.f_nonpositive_beyond_r1 and self.fhat_nonnegative


class BoundReport:
    """Density bound of a built pair, as a multiple of the lattice density.

    With both schedules r_1 equals the minimal vector length, so the
    rescaling factor (r_1/l_1)^n is exactly 1 and the bound reduces to
    f(0)/fhat(0).  The sign scan is expensive for large k and runs on
    first access of signs_valid.
    """

    def __init__(self, pair: RadialPair):
        self._pair = pair
        ctx = pair.ctx
        with ctx.working():
            self.n = pair.n
            self.k = pair.k
            self.schedule_kind = pair.schedule.kind
            self.fhat0 = pair.fhat_at_zero()
            self.ratio = pair.f.value_at_zero() / self.fhat0
            self.bound_vs_lattice = self.ratio
        self._signs: SignReport | None = None

    @property
    def sign_report(self) -> SignReport:
        if self._signs is None:
            self._signs = validate_signs(self._pair)
        return self._signs

    @property
    def signs_valid(self) -> bool:
        return self.sign_report.valid

    def __repr__(self):
        return (f"BoundReport(n={float(self.n):g}, k={self.k}, "
                f"{self.schedule_kind}, bound={float(self.bound_vs_lattice)!r})")


def density_bound(pair: RadialPair) -> BoundReport:
    """Bound report for a built pair; invalid bounds are reported raw.

    Runs under the naive schedule can produce bounds below 1 or negative;
    those are returned verbatim with the sign scan left to flag them.
    """
    return BoundReport(pair)


def side_real_roots(side: RadialFunction, schedule: RootSchedule, source: str,
                    ctx: PrecisionContext):
    """(forced, extra) u-root data for one side of a pair.

    forced is [(u, multiplicity)] straight from the schedule (single root
    at r_1^2 on the f side, doubles elsewhere); extra lists the remaining
    roots of the deflated polynomial as (root, multiplicity) clusters.
    """
    if source not in ("f", "fhat"):
        raise ValueError("source must be 'f' or 'fhat'")
    with ctx.working():
        usq = schedule.roots_sq_mpf(ctx)
        forced = []
        for m, um in enumerate(usq):
            mult = 1 if (source == "f" and m == 0) else 2
            forced.append((um, mult))
        reduced = side.mono
        for um, mult in forced:
            for _ in range(mult):
                reduced = reduced.deflate(um)
        extra = []
        if reduced.degree >= 1:
            raw = poly_roots(reduced, ctx)
            extra = cluster_roots(raw, ctx)
        return forced, extra


def _sample_points(bounds_roots: list, lower, ctx: PrecisionContext) -> list:
    """Midpoints between consecutive roots above `lower`, plus edge probes."""
    with ctx.working():
        pts = []
        rs = sorted(r for r in bounds_roots if r > lower)
        prev = lower
        for r in rs:
            pts.append((prev + r) / 2)
            prev = r
        pts.append(prev + 1)
        return pts


def validate_signs(pair: RadialPair) -> SignReport:
    """Scan for sign violations: f must stay <= 0 beyond r_1 and fhat >= 0.

    All real u-roots of each side are located; any non-forced root in the
    relevant region with odd multiplicity, or a positive sample between
    roots (for f) / negative sample (for fhat), marks the side invalid.
    """
    ctx = pair.ctx
    with ctx.working():
        real_thresh = mpfr(10) ** (-(ctx.digits // 4))
        r1sq = pair.schedule.roots_sq_mpf(ctx)[0]
        out = {}
        nonforced = {}
        for source, side in (("f", pair.f), ("fhat", pair.fhat)):
            forced, extra = side_real_roots(side, pair.schedule, source, ctx)
            real_extra = [(z.real, mult) for z, mult in extra
                          if abs(z.imag) <= real_thresh and z.real >= 0]
            nonforced[source] = real_extra
            lower = r1sq if source == "f" else mpfr(0)
            ok = True
            for u, mult in real_extra:
                if u > lower and mult % 2 == 1:
                    ok = False
            all_roots = [u for u, _ in forced if u > lower] + \
                        [u for u, _ in real_extra if u > lower]
            mono = side.mono
            for pt in _sample_points(all_roots, lower, ctx):
                v = mono(pt)
                if source == "f" and v > 0:
                    ok = False
                if source == "fhat" and v < 0:
                    ok = False
            if source == "fhat" and side.value_at_zero() < 0:
                ok = False
            out[source] = ok
        return SignReport(
            f_nonpositive_beyond_r1=out["f"],
            fhat_nonnegative=out["fhat"],
            nonforced_real_roots_f=nonforced["f"],
            nonforced_real_roots_fhat=nonforced["fhat"],
        )
