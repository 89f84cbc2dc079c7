"""Pair construction tests: uniqueness, residuals, bounds, signs."""

from gmpy2 import mpfr

from packbound.lattice import E8, LEECH
from packbound.magic import build_pair, build_pair_full, density_bound, validate_signs
from packbound.mpnum import PrecisionContext
from packbound.polybasis import radial_derivative, transform
from packbound.schedule import modified_schedule, naive_schedule


def forced_residual_scale(pair):
    with pair.ctx.working():
        return max(pair.f.mono.max_coeff_abs(), pair.fhat.mono.max_coeff_abs())


class TestBuildPair:
    def test_k1_against_full_system(self):
        # the one-root pair solved as a single 4x4 system is the oracle for
        # the split construction
        ctx = PrecisionContext(85)
        sched = naive_schedule(E8, 1)
        split = build_pair(ctx.mpf(8), sched, ctx)
        full = build_pair_full(ctx.mpf(8), sched, ctx)
        with ctx.working():
            tol = mpfr(10) ** (-(ctx.digits // 2))
            for a, b in zip(split.f.lag_coeffs, full.f.lag_coeffs):
                assert abs(a - b) <= tol * max(abs(b), mpfr(1))

    def test_k1_sign_structure(self):
        # single root of f at r_1 (sign change), double root of fhat there
        ctx = PrecisionContext(85)
        pair = build_pair(ctx.mpf(8), naive_schedule(E8, 1), ctx)
        with ctx.working():
            r1 = pair.schedule.roots(ctx)[0]
            tol = mpfr(10) ** (-(ctx.digits // 2))
            assert abs(radial_derivative(pair.f, r1)) > tol
            assert abs(radial_derivative(pair.fhat, r1)) <= tol * forced_residual_scale(pair)

    def test_split_against_full_system_k3(self):
        ctx = PrecisionContext(100)
        sched = modified_schedule(LEECH, 3)
        split = build_pair(ctx.mpf(24), sched, ctx)
        full = build_pair_full(ctx.mpf(24), sched, ctx)
        with ctx.working():
            tol = mpfr(10) ** (-(ctx.digits // 2))
            for a, b in zip(split.f.lag_coeffs, full.f.lag_coeffs):
                assert abs(a - b) <= tol * max(abs(b), mpfr(1))

    def test_normalization_and_degree(self, pairs):
        pair = pairs(8, 10, "naive")
        with pair.ctx.working():
            # exact up to the rounding of the final coefficient division
            assert abs(pair.f.value_at_zero() - 1) < mpfr(10) ** (-(pair.ctx.digits + 5))
        assert pair.f.mono.degree == 4 * 10 - 1

    def test_eigen_consistency_exact(self, pairs):
        pair = pairs(8, 10, "naive")
        assert transform(pair.f).lag_coeffs == pair.fhat.lag_coeffs

    def test_forced_root_residuals(self, pairs):
        pair = pairs(24, 10, "naive")
        ctx = pair.ctx
        with ctx.working():
            tol = mpfr(10) ** (-(ctx.digits // 2)) * forced_residual_scale(pair)
            usq = pair.schedule.roots_sq_mpf(ctx)
            fm, hm = pair.f.mono, pair.fhat.mono
            fd, hd = fm.derivative(), hm.derivative()
            for m, um in enumerate(usq):
                assert abs(fm(um)) <= tol
                assert abs(hm(um)) <= tol
                assert abs(hd(um)) <= tol
                if m >= 1:
                    assert abs(fd(um)) <= tol

    def test_non_integer_dimension(self):
        ctx = PrecisionContext(99)
        pair = build_pair(ctx.mpf("4.5"), modified_schedule(E8, 3), ctx)
        with ctx.working():
            assert pair.fhat_at_zero() > 0

    def test_alternate_pin_same_direction(self):
        # pinning the first instead of the last coefficient must give the
        # same nullspace direction up to scale
        from packbound.magic import _nullspace_by_pinning
        from packbound.mpnum import solve_linear
        from packbound.polybasis import build_basis
        ctx = PrecisionContext(91)
        k = 2
        sched = modified_schedule(E8, k)
        with ctx.working():
            basis = build_basis(8, 4 * k - 1, ctx)
            usq = sched.roots_sq_mpf(ctx)
            cols = list(range(0, 4 * k, 2))
            vals0, _ = basis.values_and_derivs(usq[0], 4 * k - 1)
            vals1, ders1 = basis.values_and_derivs(usq[1], 4 * k - 1)
            rows = [[vals0[j] for j in cols],
                    [vals1[j] for j in cols],
                    [ders1[j] for j in cols]]
            default = _nullspace_by_pinning(rows, ctx)
            # pin column 0 to 1 instead
            A = [[row[j] for j in range(1, len(cols))] for row in rows]
            rhs = [-row[0] for row in rows]
            alt = [ctx.mpf(1)] + solve_linear(A, rhs, ctx)
            scale = default[0] / alt[0]
            tol = mpfr(10) ** (-(ctx.digits // 2))
            for a, b in zip(default, alt):
                assert abs(a - scale * b) <= tol * max(abs(a), mpfr(1))


class TestDensityBound:
    def test_naive_k10_values(self, pairs):
        # reference bounds, printed to 11 significant digits
        for n, kind_lat, want in ((8, E8, "1.0001507518"), (24, LEECH, "1.3706005433")):
            pair = pairs(n, 10, "naive")
            rep = density_bound(pair)
            with pair.ctx.working():
                assert abs(rep.bound_vs_lattice - mpfr(want)) < mpfr("1e-10")

    def test_modified_k25_excess(self, pairs):
        pair = pairs(8, 25)
        rep = density_bound(pair)
        with pair.ctx.working():
            want = mpfr("2.013636284513588e-10")
            excess = rep.bound_vs_lattice - 1
            assert abs(excess - want) < mpfr("1e-25")

    def test_bound_equals_ratio(self, pairs):
        rep = density_bound(pairs(8, 10, "naive"))
        assert rep.bound_vs_lattice == rep.ratio

    def test_monotone_improvement(self, pairs):
        b25 = density_bound(pairs(8, 25)).bound_vs_lattice
        b50 = density_bound(pairs(8, 50)).bound_vs_lattice
        assert 1 < b50 < b25


class TestSigns:
    def test_valid_small_naive(self, pairs):
        rep = validate_signs(pairs(8, 10, "naive"))
        assert rep.valid
        assert rep.nonforced_real_roots_f == []
        assert rep.nonforced_real_roots_fhat == []

    def test_k2_leech_fhat_extra_real_root(self):
        ctx = PrecisionContext(91)
        pair = build_pair(ctx.mpf(24), naive_schedule(LEECH, 2), ctx)
        rep = validate_signs(pair)
        assert not rep.fhat_nonnegative
        assert len(rep.nonforced_real_roots_fhat) >= 1

    def test_modified_k25_clean(self, pairs):
        rep = density_bound(pairs(8, 25))
        assert rep.signs_valid
        assert rep.sign_report.nonforced_real_roots_f == []
