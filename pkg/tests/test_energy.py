"""Energy certificate tests: interpolation, bounds, duality, validation."""

import gmpy2
import pytest
from gmpy2 import mpfr

from packbound.energy import (build_h, conjecture61_check, duality_transform,
                              validate_certificate)
from packbound.lattice import E8, lattice_sum, shell_counts
from packbound.mpnum import PrecisionContext


@pytest.fixture(scope="module")
def build_pi_k10():
    ctx = PrecisionContext(155)
    return build_h(8, ctx.pi_cached, 10, ctx)


class TestBuildH:
    def test_bound_below_lattice_energy(self, build_pi_k10):
        b = build_pi_k10
        with b.ctx.working():
            assert b.bound < b.lattice_energy
            assert b.gap > 0

    def test_tangency_residuals(self, build_pi_k10):
        cert = validate_certificate(build_pi_k10)
        b = build_pi_k10
        with b.ctx.working():
            scale = b.h.mono.max_coeff_abs()
            assert cert.max_tangency_residual <= mpfr(10) ** (-(b.ctx.digits // 2)) * scale

    def test_certificate_valid(self, build_pi_k10):
        cert = validate_certificate(build_pi_k10)
        assert cert.h_below_potential
        assert cert.hhat_nonnegative
        assert cert.valid

    def test_gap_decreases_in_k(self, build_pi_k10):
        ctx25 = PrecisionContext(275)
        b25 = build_h(8, ctx25.pi_cached, 25, ctx25)
        with ctx25.working():
            assert b25.gap < build_pi_k10.gap

    def test_degree(self, build_pi_k10):
        assert build_pi_k10.h.mono.degree == 4 * 10 - 1

    def test_input_validation(self):
        ctx = PrecisionContext(100)
        with pytest.raises(ValueError):
            build_h(7, ctx.pi_cached, 3, ctx)
        with pytest.raises(ValueError):
            build_h(8, -1, 3, ctx)

    def test_energy_sums_match_direct_shells(self):
        # E_psi recomputed from explicit shell sums at two steepness values
        ctx = PrecisionContext(60)
        with ctx.working():
            for c in (mpfr(2), mpfr(4)):
                got = lattice_sum(E8, lambda u: u * gmpy2.exp(-c * u), ctx)
                counts = shell_counts(E8, 200)
                want = sum(counts[j - 1] * (2 * j) * gmpy2.exp(-c * 2 * j)
                           for j in range(1, 201))
                assert abs(got - want) <= mpfr(10) ** (-ctx.digits) * want


class TestConjecture61:
    def test_discrepancy_decreases_in_k(self, build_pi_k10):
        d10 = conjecture61_check(build_pi_k10)
        ctx25 = PrecisionContext(275)
        b25 = build_h(8, ctx25.pi_cached, 25, ctx25)
        d25 = conjecture61_check(b25)
        with ctx25.working():
            assert 0 < d25 < d10

    def test_leech_case_runs(self):
        ctx = PrecisionContext(115)
        b = build_h(24, 2, 5, ctx)
        with ctx.working():
            assert b.gap > 0
            assert conjecture61_check(b) > 0


class TestDuality:
    def test_self_dual_fixed_point(self, build_pi_k10):
        b = build_pi_k10
        dual = duality_transform(b)
        with b.ctx.working():
            tol = mpfr(10) ** (-(b.ctx.digits // 2))
            assert abs(dual.amplitude - 1) <= tol
            assert abs(dual.c_dual - b.c) <= tol
            assert abs(dual.bound - b.bound) <= tol * max(abs(b.bound), mpfr(1))

    def test_identity_at_general_steepness(self):
        ctx = PrecisionContext(155)
        with ctx.working():
            c = 2 * ctx.pi_cached
        b = build_h(8, c, 10, ctx)
        dual = duality_transform(b)
        with ctx.working():
            assert dual.identity_discrepancy <= mpfr(10) ** (-(ctx.digits // 2))

    def test_dual_certificate_sign_checks(self, build_pi_k10):
        # ghat(0) = 1 - h(0) >= 0 and g <= dual potential wherever sampled,
        # which reduces to hhat >= 0 (already root-checked)
        b = build_pi_k10
        dual = duality_transform(b)
        with b.ctx.working():
            assert 1 - b.h.value_at_zero() >= 0
            assert dual.gap > 0
