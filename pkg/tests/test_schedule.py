"""Root schedule tests: naive, modified, serialization, invariants."""

from fractions import Fraction

import pytest
from gmpy2 import mpfr

from packbound.lattice import E8, LEECH
from packbound.mpnum import PrecisionContext
from packbound.schedule import (DegenerateSchedule, RootSchedule,
                                modified_schedule, naive_schedule)


@pytest.fixture(scope="module")
def ctx():
    return PrecisionContext(50)


class TestNaive:
    def test_e8_examples(self):
        assert naive_schedule(E8, 2).roots_sq == (Fraction(2), Fraction(4))
        assert naive_schedule(E8, 5).roots_sq == tuple(Fraction(v) for v in (2, 4, 6, 8, 10))

    def test_leech_first_root(self):
        assert naive_schedule(LEECH, 1).roots_sq == (Fraction(4),)

    def test_k_positive(self):
        with pytest.raises(ValueError):
            naive_schedule(E8, 0)


class TestModified:
    def test_e8_k3_by_direct_substitution(self):
        # floor(2k/3) = 2: r1 = l1, r2^2 = 4, r3^2 = 6 + 6/4
        sched = modified_schedule(E8, 3)
        assert sched.roots_sq == (Fraction(2), Fraction(4), Fraction(15, 2))

    def test_e8_k6_by_direct_substitution(self):
        # floor(4) = 4: first three exact, then offsets (0, 1/2, 1)^2 * 12/4
        sched = modified_schedule(E8, 6)
        want = (Fraction(2), Fraction(4), Fraction(6),
                Fraction(8), Fraction(10) + Fraction(12, 4) * Fraction(1, 4),
                Fraction(12) + Fraction(12, 4))
        assert sched.roots_sq == want

    def test_leech_first_root_pinned(self):
        for k in (2, 3, 10, 25):
            assert modified_schedule(LEECH, k).roots_sq[0] == Fraction(4)

    def test_final_root_boost(self):
        for lat, k in ((E8, 7), (LEECH, 12), (E8, 25)):
            sched = modified_schedule(lat, k)
            ell_sq = naive_schedule(lat, k).roots_sq
            assert sched.roots_sq[-1] == ell_sq[-1] * Fraction(5, 4)

    def test_agreement_with_naive_prefix(self):
        for k in (5, 9, 25):
            mod = modified_schedule(E8, k)
            nai = naive_schedule(E8, k)
            kk = (2 * k) // 3
            assert mod.roots_sq[:kk - 1] == nai.roots_sq[:kk - 1]
            # offset is zero exactly at m = kk as well
            assert mod.roots_sq[kk - 1] == nai.roots_sq[kk - 1]

    def test_never_below_exact_lengths(self):
        for k in (2, 3, 10, 30):
            mod = modified_schedule(LEECH, k)
            nai = naive_schedule(LEECH, k)
            assert all(r >= l for r, l in zip(mod.roots_sq, nai.roots_sq))

    def test_strictly_increasing(self, ctx):
        for k in (1, 2, 3, 11, 40):
            roots = modified_schedule(E8, k).roots(ctx)
            assert all(a < b for a, b in zip(roots, roots[1:]))
            assert all(r > 0 for r in roots)

    def test_k1_falls_back_to_naive(self):
        sched = modified_schedule(E8, 1)
        assert sched.kind == "modified"
        assert sched.roots_sq == (Fraction(2),)

    def test_degenerate_parameters_raise(self):
        with pytest.raises(DegenerateSchedule):
            modified_schedule(E8, 5, unchanged_fraction=Fraction(1))

    def test_custom_constants(self):
        sched = modified_schedule(E8, 4, final_boost=Fraction(1, 2))
        assert sched.roots_sq[-1] == Fraction(8) * Fraction(3, 2)


class TestSerialization:
    def test_json_roundtrip(self, ctx):
        sched = modified_schedule(LEECH, 7)
        text = sched.to_json()
        back = RootSchedule.from_json(text)
        assert back == sched

    def test_json_with_decimal_roots(self, ctx):
        sched = modified_schedule(E8, 3)
        text = sched.to_json(ctx)
        assert '"roots"' in text and "15/2" in text

    def test_roots_match_squares(self, ctx):
        sched = modified_schedule(E8, 9)
        with ctx.working():
            for r, sq in zip(sched.roots(ctx), sched.roots_sq):
                target = ctx.mpf(sq)
                assert abs(r * r - target) < mpfr(10) ** (-45) * target
