"""Numeric substrate tests: contexts, solving, root finding, Gamma."""

import random
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from packbound.mpnum import (BigPoly, NoConvergence, PrecisionContext,
                             SingularMatrix, UnsupportedArgument, cluster_roots,
                             gamma_half_integer, poly_roots, solve_linear)


@pytest.fixture(scope="module")
def ctx():
    return PrecisionContext(100)


class TestPrecisionContext:
    def test_rejects_low_digits(self):
        with pytest.raises(ValueError):
            PrecisionContext(29)

    def test_pi_stable_under_refinement(self):
        ctx = PrecisionContext(120)
        hi = PrecisionContext(130)
        with hi.working():
            assert abs(hi.pi_cached - ctx.pi_cached) < mpfr(10) ** (-118)

    def test_default_schedule(self):
        assert PrecisionContext.for_k(25).digits == 8 * 25 + 75
        assert PrecisionContext.for_k(1, digits=10).digits == 30

    def test_decimal_roundtrip_lossless(self, ctx):
        with ctx.working():
            v = gmpy2.sqrt(mpfr(7)) / 3
        s = ctx.to_str(v)
        assert ctx.from_str(s) == v


class TestSolveLinear:
    def test_identity(self, ctx):
        with ctx.working():
            A = [[mpfr(int(i == j)) for j in range(3)] for i in range(3)]
            b = [mpfr(v) for v in (1, 2, 3)]
        x = solve_linear(A, b, ctx)
        assert [float(v) for v in x] == [1.0, 2.0, 3.0]

    def test_hilbert_3x3_exact_solution(self, ctx):
        # H^-1 rows sum to (3, -24, 30); elimination done by hand in exact
        # rationals gives the same, which freezes the expected vector here.
        with ctx.working():
            A = [[mpfr(1) / (i + j + 1) for j in range(3)] for i in range(3)]
            b = [mpfr(1)] * 3
            x = solve_linear(A, b, ctx)
            for got, want in zip(x, (3, -24, 30)):
                assert abs(got - want) < mpfr(10) ** (-95)

    def test_random_well_conditioned_residual(self):
        ctx = PrecisionContext(100)
        rng = random.Random(20240817)
        n = 20
        with ctx.working():
            A = [[mpfr(rng.uniform(-1, 1)) + (10 if i == j else 0) for j in range(n)]
                 for i in range(n)]
            b = [mpfr(rng.uniform(-1, 1)) for _ in range(n)]
            x = solve_linear(A, b, ctx)
            bmax = max(abs(v) for v in b)
            for i in range(n):
                r = sum(A[i][j] * x[j] for j in range(n)) - b[i]
                assert abs(r) < mpfr(10) ** (-80) * max(bmax, mpfr(1))

    def test_resolve_at_higher_precision_agrees(self):
        lo, hi = PrecisionContext(60), PrecisionContext(80)
        rng = random.Random(7)
        n = 8
        rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 9)) + (12 if i == j else 0)
                 for j in range(n)] for i in range(n)]
        rhs = [Fraction(rng.randint(-9, 9)) for _ in range(n)]
        xs = {}
        for ctx in (lo, hi):
            with ctx.working():
                A = [[ctx.mpf(v) for v in row] for row in rows]
                b = [ctx.mpf(v) for v in rhs]
                xs[ctx.digits] = solve_linear(A, b, ctx)
        with hi.working():
            for a, b_ in zip(xs[60], xs[80]):
                assert abs(a - b_) <= mpfr(10) ** (-60 + 25) * max(abs(b_), mpfr(1))

    def test_singular_matrix_raises(self, ctx):
        with ctx.working():
            A = [[mpfr(1), mpfr(2)], [mpfr(2), mpfr(4)]]
            b = [mpfr(1), mpfr(2)]
        with pytest.raises(SingularMatrix):
            solve_linear(A, b, ctx)

    def test_shape_mismatch(self, ctx):
        with pytest.raises(ValueError):
            solve_linear([[mpfr(1)]], [mpfr(1), mpfr(2)], ctx)


class TestPolyRoots:
    def test_quadratic_factored(self, ctx):
        with ctx.working():
            p = BigPoly([mpfr(-1), mpfr(0), mpfr(1)])  # u^2 - 1
            roots = poly_roots(p, ctx)
            assert len(roots) == 2
            assert abs(roots[0] + 1) < mpfr(10) ** (-50)
            assert abs(roots[1] - 1) < mpfr(10) ** (-50)

    def test_double_root_clustered(self, ctx):
        # (u-1)^2 (u-2)
        with ctx.working():
            p = BigPoly([mpfr(-2), mpfr(5), mpfr(-4), mpfr(1)])
            clusters = cluster_roots(poly_roots(p, ctx), ctx)
            mults = sorted((float(z.real), m) for z, m in clusters)
            radius = mpfr(10) ** (-(ctx.digits // 4))
            assert mults[0][1] == 2 and abs(clusters[0][0] - 1) < radius
            assert mults[1][1] == 1 and abs(clusters[1][0] - 2) < radius

    def test_residual_contract_high_degree(self, ctx):
        # roots at 1..12 with alternating signs; coefficients span many
        # orders, exercising the hull initialization
        with ctx.working():
            p = BigPoly([mpfr(1)])
            for r in range(1, 13):
                p = p * BigPoly([mpfr(-r if r % 2 else r), mpfr(1)])
            roots = poly_roots(p, ctx)
            tol = mpfr(10) ** (-(ctx.digits // 2))
            scale = p.max_coeff_abs()
            for z in roots:
                assert abs(p(z)) <= tol * scale * max(mpfr(1), abs(z)) ** p.degree

    def test_sorted_deterministically(self, ctx):
        with ctx.working():
            p = BigPoly([mpfr(4), mpfr(0), mpfr(1)])  # u^2 + 4 -> +-2i
            r1 = poly_roots(p, ctx)
            r2 = poly_roots(p, ctx)
            assert r1 == r2
            assert r1[0].imag < r1[1].imag

    def test_zero_roots_split_off(self, ctx):
        with ctx.working():
            p = BigPoly([mpfr(0), mpfr(0), mpfr(-1), mpfr(1)])  # u^2 (u-1)
            roots = poly_roots(p, ctx)
            assert sum(1 for z in roots if z == 0) == 2

    def test_degree_zero_rejected(self, ctx):
        with pytest.raises(ValueError):
            poly_roots(BigPoly([mpfr(3)]), ctx)

    def test_iteration_cap_raises(self, ctx):
        with ctx.working():
            p = BigPoly([mpfr(v) for v in (-11, 3, 9, 1, 2, 7)])
        with pytest.raises(NoConvergence):
            poly_roots(p, ctx, max_iter=1)

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.tuples(st.integers(min_value=-6, max_value=6),
                              st.integers(min_value=1, max_value=2)),
                    min_size=1, max_size=4))
    def test_reconstruction_property(self, spec_pairs):
        # product over located roots reproduces the coefficients; roots of
        # multiplicity up to 2, matching the forced-root structure the
        # finder is contracted for (higher multiplicities are located at
        # the evaluation noise floor 10^(-digits/m) instead)
        seen = {}
        for val, mult in spec_pairs:
            seen[val] = max(seen.get(val, 0), mult)
        ctx = PrecisionContext(60)
        with ctx.working():
            p = BigPoly([mpfr(1)])
            for val, mult in seen.items():
                for _ in range(mult):
                    p = p * BigPoly([mpfr(-val), mpfr(1)])
            roots = poly_roots(p, ctx)
            rebuilt = BigPoly([mpc(1)])
            for z in roots:
                rebuilt = rebuilt * BigPoly([-z, mpc(1)])
            # the residual contract allows root offsets up to
            # tol*scale*max(1,|z|)^deg / |p'(z)|; re-entering the
            # coefficients they pick up symmetric-function sensitivities
            # of order |p'| times a modest combinatorial factor, bounded
            # here by 10*deg
            tol = mpfr(10) ** (-(ctx.digits // 2))
            scale = p.max_coeff_abs()
            radius = max(max(abs(z) for z in roots), mpfr(1))
            slack = tol * scale * radius ** p.degree * (10 * p.degree)
            for a, b in zip(p.coeffs, rebuilt.coeffs):
                assert abs(a - b) <= slack

    def test_triple_root_located_within_cluster_radius(self):
        ctx = PrecisionContext(60)
        with ctx.working():
            p = BigPoly([mpfr(1)])
            for r in (2, 2, 2, -1):
                p = p * BigPoly([mpfr(-r), mpfr(1)])
            clusters = cluster_roots(poly_roots(p, ctx), ctx)
            trip = [c for c in clusters if c[1] == 3]
            assert len(trip) == 1
            assert abs(trip[0][0] - 2) < mpfr(10) ** (-(ctx.digits // 4))


class TestGammaHalfInteger:
    def test_classical_values(self, ctx):
        with ctx.working():
            assert gamma_half_integer(1, ctx) == 1
            assert abs(gamma_half_integer(Fraction(1, 2), ctx) - ctx.sqrt_pi) == 0
            want = mpfr(105) / 16 * ctx.sqrt_pi
            assert abs(gamma_half_integer(Fraction(9, 2), ctx) - want) < mpfr(10) ** (-95)

    def test_recurrence_up_to_100(self):
        ctx = PrecisionContext(200)
        with ctx.working():
            s = Fraction(1, 2)
            while s <= 100:
                lhs = gamma_half_integer(s + 1, ctx)
                rhs = ctx.mpf(s) * gamma_half_integer(s, ctx)
                if s.denominator == 1:
                    assert lhs == rhs  # integers exact at this precision
                else:
                    assert abs(lhs - rhs) <= abs(lhs) * mpfr(10) ** (-198)
                s += Fraction(1, 2)

    def test_unsupported_arguments(self, ctx):
        for bad in (0, -1, Fraction(1, 3), Fraction(-3, 2)):
            with pytest.raises(UnsupportedArgument):
                gamma_half_integer(bad, ctx)


class TestBigPoly:
    def test_normalization_strips_exact_zero_lead(self):
        p = BigPoly([mpfr(1), mpfr(2), mpfr(0)])
        assert p.degree == 1

    def test_deflate_reverses_multiplication(self, ctx):
        with ctx.working():
            p = BigPoly([mpfr(2), mpfr(1)]) * BigPoly([mpfr(-3), mpfr(1)])
            q = p.deflate(mpfr(3))
            assert q.degree == 1
            assert abs(q.coeffs[0] - 2) < mpfr(10) ** (-90)

    def test_horner_deterministic(self, ctx):
        with ctx.working():
            p = BigPoly([mpfr(1), mpfr(-2), mpfr(3)])
            assert p(mpfr(2)) == p(mpfr(2))
            assert float(p(mpfr(2))) == 9.0
