from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from domcert.rationals import Mag, integer_nth_root, mag_max, parse_fraction, format_fraction

fracs = st.fractions(min_value=Fraction(0), max_value=Fraction(40), max_denominator=12)
roots = st.integers(1, 4)


class TestIntegerRoot:
    @given(st.integers(0, 10**8), st.integers(1, 5))
    def test_floor_root(self, n, k):
        r, exact = integer_nth_root(n, k)
        assert r**k <= n < (r + 1) ** k
        assert exact == (r**k == n)


class TestMag:
    def test_perfect_square_reduces(self):
        assert Mag(Fraction(4), 2) == Mag(Fraction(2), 1)
        assert Mag(Fraction(4), 2).is_rational

    def test_partial_reduction(self):
        m = Mag(Fraction(64), 4)  # 64^(1/4) = 8^(1/2)
        assert m.root == 2 and m.power == 8

    def test_irrational_comparison(self):
        assert Mag(Fraction(2), 2) < Fraction(3, 2)
        assert Mag(Fraction(2), 2) > Fraction(7, 5)

    @given(fracs, roots, fracs, roots)
    def test_comparison_consistent_with_floats(self, p, r, q, s):
        a, b = Mag(p, r), Mag(q, s)
        fa, fb = float(a), float(b)
        if abs(fa - fb) > 1e-9:
            assert (a < b) == (fa < fb)

    @given(fracs, roots, fracs, roots)
    def test_multiplication(self, p, r, q, s):
        a, b = Mag(p, r), Mag(q, s)
        assert abs(float(a * b) - float(a) * float(b)) < 1e-6 * (1 + float(a) * float(b))

    def test_division_exact(self):
        assert Mag(Fraction(8), 2) / Mag(Fraction(2), 2) == 2

    def test_negative_comparisons(self):
        m = Mag(Fraction(1, 2))
        assert m > Fraction(-1)
        assert not m < Fraction(-5)

    def test_approx(self):
        assert Mag(Fraction(2), 2).approx(5) == "1.41421"
        assert Mag(Fraction(9, 4)).approx(3) == "2.250"

    def test_mag_max(self):
        assert mag_max([Mag(Fraction(2), 2), Fraction(1)]) == Mag(Fraction(2), 2)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Mag(Fraction(-1))


class TestFractionFormat:
    @given(st.fractions(max_denominator=50))
    def test_round_trip(self, q):
        assert parse_fraction(format_fraction(q)) == q
