from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from domcert.vectors import Vector, combine

vectors = st.dictionaries(
    st.integers(1, 8),
    st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6),
    max_size=5,
).map(Vector.of)


class TestVector:
    def test_no_zero_entries(self):
        v = Vector.of({1: 0, 2: 3})
        assert v.support == (2,)

    def test_validation(self):
        with pytest.raises(ValueError):
            Vector(((2, Fraction(1)), (1, Fraction(1))))
        with pytest.raises(ValueError):
            Vector(((0, Fraction(1)),))
        with pytest.raises(ValueError):
            Vector(((1, Fraction(0)),))

    @given(vectors, vectors)
    def test_addition_coefficients(self, x, y):
        z = x + y
        for i in set(x.support) | set(y.support):
            assert z.coeff(i) == x.coeff(i) + y.coeff(i)

    @given(vectors)
    def test_sub_self_is_zero(self, x):
        assert (x - x).is_zero

    def test_restrict(self):
        v = Vector.of({1: 1, 3: 2, 5: 3})
        assert v.restrict({3, 5}).support == (3, 5)
        assert v.restrict_interval(2, 4).support == (3,)

    def test_dot(self):
        u = Vector.of({1: 2, 2: 3})
        v = Vector.of({2: 5, 3: 7})
        assert u.dot(v) == 15

    @given(vectors)
    def test_json_round_trip(self, x):
        assert Vector.loads(x.dumps()) == x

    def test_combine(self):
        vs = [Vector.basis(1), Vector.basis(2)]
        out = combine(vs, [Fraction(2), Fraction(-1)])
        assert out.coeff(1) == 2 and out.coeff(2) == -1
