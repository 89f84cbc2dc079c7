"""Linear-programming lower bounds for Gaussian-core lattice energy.

The auxiliary function h is a radial polynomial times exp(-pi*|x|^2)
chosen so that phi - h and the transform of h have double roots at the
modified root locations; its certificate value is hhat(0) - h(0).  The
potential is restricted to Gaussians phi(x) = exp(-c*|x|^2), which is the
sufficiency class for universal-optimality checks, and density 1 is
assumed throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .lattice import get_lattice, lattice_sum
from .mpnum import PrecisionContext, cluster_roots, poly_roots, solve_linear
from .polybasis import RadialFunction, build_basis
from .schedule import RootSchedule, modified_schedule

__all__ = [
    "EnergyBuild",
    "DualCertificate",
    "CertificateReport",
    "build_h",
    "conjecture61_check",
    "duality_transform",
    "validate_certificate",
]


@dataclass
class EnergyBuild:
    """Auxiliary-function build for the potential exp(-c*|x|^2) in R^n."""

    n: int
    c: mpfr
    k: int
    schedule: RootSchedule
    ctx: PrecisionContext
    h: RadialFunction
    hhat: RadialFunction
    bound: mpfr            # hhat(0) - h(0)
    lattice_energy: mpfr   # E_phi of the lattice
    psi_energy: mpfr       # E_psi with psi(x) = |x|^2 * phi(x)

    @property
    def gap(self) -> mpfr:
        with self.ctx.working():
            return self.lattice_energy - self.bound


def build_h(n: int, c, k: int, ctx: PrecisionContext | None = None) -> EnergyBuild:
    """Interpolating certificate with tangencies at the modified roots.

    The 4k conditions (value and slope of h matching phi at each root, and
    double roots of hhat there) split into two half-size inhomogeneous
    systems, one per Fourier eigenvalue, exactly like the density-bound
    build.
    """
    if n not in (8, 24):
        raise ValueError("energy builds are defined for n in {8, 24}")
    lat = get_lattice(n)
    if ctx is None:
        ctx = PrecisionContext.for_k(k)
    sched = modified_schedule(lat, k)
    with ctx.working():
        cval = ctx.mpf(c)
        if cval <= 0:
            raise ValueError("Gaussian steepness c must be positive")
        pi = ctx.pi_cached
        deg = 4 * k - 1
        basis = build_basis(n, deg, ctx)
        usq = sched.roots_sq_mpf(ctx)

        comp = {}
        for eps in (0, 1):
            cols = list(range(eps, 4 * k, 2))
            A, rhs = [], []
            for um in usq:
                v, d = basis.values_and_derivs(um, deg)
                target = gmpy2.exp((pi - cval) * um)
                A.append([v[j] for j in cols])
                rhs.append(target / 2)
                A.append([d[j] for j in cols])
                rhs.append((pi - cval) * target / 2)
            comp[eps] = solve_linear(A, rhs, ctx)

        lag = [mpfr(0)] * (4 * k)
        for i, cc in enumerate(comp[0]):
            lag[2 * i] = cc
        for i, cc in enumerate(comp[1]):
            lag[2 * i + 1] = cc
        h = RadialFunction(basis, lag)
        hhat_lag = [(-v if j % 2 else v) for j, v in enumerate(lag)]
        hhat = RadialFunction(basis, hhat_lag)

        bound = hhat.value_at_zero() - h.value_at_zero()
        e_phi = lattice_sum(lat, lambda u: gmpy2.exp(-cval * u), ctx)
        e_psi = lattice_sum(lat, lambda u: u * gmpy2.exp(-cval * u), ctx)
        return EnergyBuild(n=n, c=cval, k=k, schedule=sched, ctx=ctx,
                           h=h, hhat=hhat, bound=bound,
                           lattice_energy=e_phi, psi_energy=e_psi)


def conjecture61_check(build: EnergyBuild) -> mpfr:
    """Relative gap between hhat(0) and (2c/n) * E_psi; tends to 0 in k."""
    with build.ctx.working():
        lhs = build.hhat.value_at_zero()
        rhs = 2 * build.c / build.n * build.psi_energy
        return abs(lhs - rhs) / abs(lhs)


@dataclass
class DualCertificate:
    """Certificate g = phihat - hhat for the dual potential phihat.

    phihat is again a Gaussian, with steepness pi^2/c and amplitude
    (pi/c)^(n/2); g is therefore not of polynomial-times-standard-Gaussian
    form and is carried as (amplitude, steepness, subtracted transform).
    identity_discrepancy measures how far (hhat(0)-h(0)) - E_phi and
    (ghat(0)-g(0)) - E_phihat are from coinciding; the two agree exactly
    by the summation formula, so this validates the shell sums.
    """

    n: int
    c_dual: mpfr
    amplitude: mpfr
    bound: mpfr            # ghat(0) - g(0)
    lattice_energy: mpfr   # E_phihat
    gap: mpfr
    identity_discrepancy: mpfr


def duality_transform(build: EnergyBuild) -> DualCertificate:
    ctx = build.ctx
    lat = get_lattice(build.n)
    with ctx.working():
        pi = ctx.pi_cached
        c = build.c
        c_dual = pi * pi / c
        amplitude = (pi / c) ** (mpfr(build.n) / 2)
        h0 = build.h.value_at_zero()
        hh0 = build.hhat.value_at_zero()
        # ghat = phi - h, so ghat(0) = 1 - h(0); g(0) = phihat(0) - hhat(0)
        bound_dual = (1 - h0) - (amplitude - hh0)
        e_dual = lattice_sum(lat, lambda u: amplitude * gmpy2.exp(-c_dual * u), ctx)
        lhs = (hh0 - h0) - build.lattice_energy
        rhs = bound_dual - e_dual
        disc = abs(lhs - rhs) / abs(lhs) if lhs != 0 else abs(lhs - rhs)
        return DualCertificate(n=build.n, c_dual=c_dual, amplitude=amplitude,
                               bound=bound_dual, lattice_energy=e_dual,
                               gap=e_dual - bound_dual,
                               identity_discrepancy=disc)


@dataclass
class CertificateReport:
    """Sign validation of an energy certificate."""

    h_below_potential: bool
    hhat_nonnegative: bool
    max_tangency_residual: mpfr

    @property
    def valid(self) -> bool:
        return self.h_below_potential and self.hhat_nonnegative


def validate_certificate(build: EnergyBuild, grid_points: int = 1000) -> CertificateReport:
    """Check h <= phi by geometric sampling and hhat >= 0 by root parity.

    phi - h is not a polynomial, so exact root accounting is unavailable;
    instead it is sampled on a geometric grid out to the radius where both
    functions fall below 10^-digits, with the tangency points verified by
    their interpolation residuals.
    """
    ctx = build.ctx
    with ctx.working():
        pi = ctx.pi_cached
        c = build.c
        digits = ctx.digits
        slackbase = mpfr(10) ** (-(digits // 2))

        # tangency residuals at the forced roots, in the u variable
        usq = build.schedule.roots_sq_mpf(ctx)
        hmono = build.h.mono
        hder = hmono.derivative()
        max_res = mpfr(0)
        for um in usq:
            target = gmpy2.exp((pi - c) * um)
            res1 = abs(hmono(um) - target)
            res2 = abs(hder(um) - (pi - c) * target)
            max_res = max(max_res, res1, res2)

        # geometric sample of phi - h
        import math
        u_max = (digits * math.log(10) + (hmono.degree + 1) * 20) / float(min(c, pi))
        lo, hi = mpfr("1e-6"), mpfr(u_max)
        step = (gmpy2.log(hi) - gmpy2.log(lo)) / (grid_points - 1)
        ok_h = True
        for i in range(grid_points):
            u = gmpy2.exp(gmpy2.log(lo) + i * step)
            phi = gmpy2.exp(-c * u)
            hval = hmono(u) * gmpy2.exp(-pi * u)
            slack = slackbase * (abs(phi) + abs(hval) + slackbase)
            if hval - phi > slack:
                ok_h = False
                break

        # hhat >= 0 on [0, inf): all real roots there must have even parity
        ok_hh = build.hhat.value_at_zero() >= 0
        forced = [(um, 2) for um in usq]
        reduced = build.hhat.mono
        for um, mult in forced:
            for _ in range(mult):
                reduced = reduced.deflate(um)
        real_thresh = mpfr(10) ** (-(digits // 4))
        extra_real = []
        if reduced.degree >= 1:
            for z, mult in cluster_roots(poly_roots(reduced, ctx), ctx):
                if abs(z.imag) <= real_thresh and z.real >= 0:
                    extra_real.append((z.real, mult))
                    if mult % 2 == 1:
                        ok_hh = False
        allr = sorted([um for um, _ in forced] + [r for r, _ in extra_real])
        prev = mpfr(0)
        hhmono = build.hhat.mono
        for r in allr + [allr[-1] + 1 if allr else mpfr(1)]:
            mid = (prev + r) / 2
            if hhmono(mid) < 0:
                ok_hh = False
            prev = r
        return CertificateReport(h_below_potential=ok_h,
                                 hhat_nonnegative=ok_hh,
                                 max_tangency_residual=max_res)
