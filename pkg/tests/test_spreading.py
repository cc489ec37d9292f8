from fractions import Fraction

import pytest

from domcert.domination import basis_sequence
from domcert.families import Schreier
from domcert.norms import C0, Combinatorial, Tsirelson
from domcert.ordinals import from_int
from domcert.spreading import (
    SpreadingError,
    SubseqSpec,
    check_main2_bridge,
    default_probes,
    equivalence_constant,
    estimate_spreading,
    exact_spreading_combinatorial,
    exact_table,
)
from domcert.vectors import Vector

X1 = Combinatorial(Schreier(from_int(1)))
ONES3 = (Fraction(1), Fraction(1), Fraction(1))


def basis_gen(n):
    return Vector.basis(n)


class TestEstimate:
    def test_schreier_l1_at_deep_stages(self):
        rep = estimate_spreading(X1, basis_gen, SubseqSpec(), 3, [2, 3], [ONES3])
        assert all(t.values[ONES3] == 3 for t in rep.tables)
        assert rep.stable

    def test_c0(self):
        rep = estimate_spreading(C0(), basis_gen, SubseqSpec(), 2, [1, 2, 3], [(1, 1)])
        assert all(t.values[(Fraction(1), Fraction(1))] == 1 for t in rep.tables)

    def test_tsirelson_pair(self):
        space = Tsirelson(from_int(1), Fraction(1, 2))
        rep = estimate_spreading(space, basis_gen, SubseqSpec(), 2, [1, 2], [(1, 1)])
        assert all(t.values[(Fraction(1), Fraction(1))] == 1 for t in rep.tables)

    def test_stage_monotone_for_spreading_family(self):
        rep = estimate_spreading(X1, basis_gen, SubseqSpec(), 3, [1, 2, 3], [ONES3])
        values = [t.values[ONES3] for t in rep.tables]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_probe_length_checked(self):
        with pytest.raises(SpreadingError):
            estimate_spreading(X1, basis_gen, SubseqSpec(), 3, [1], [(1, 1)])


class TestExact:
    def test_l1_table(self):
        res = exact_spreading_combinatorial(from_int(1), SubseqSpec(), 4, [1, 1, 1, 1])
        assert res.value == 4 and res.stable

    def test_singleton(self):
        res = exact_spreading_combinatorial(from_int(1), SubseqSpec(), 1, [Fraction(-5, 2)])
        assert res.value == Fraction(5, 2)

    def test_level_two(self):
        res = exact_spreading_combinatorial(from_int(2), SubseqSpec(), 3, [1, 1, 1])
        assert res.value == 3

    def test_level_zero_takes_max(self):
        res = exact_spreading_combinatorial(from_int(0), SubseqSpec(), 3, [1, 2, 1])
        assert res.value == 2

    def test_agrees_with_estimate_at_deep_stages(self):
        probes = [ONES3, (Fraction(1), Fraction(0), Fraction(-2))]
        rep = estimate_spreading(X1, basis_gen, SubseqSpec(), 3, [3, 4], probes)
        for p in probes:
            res = exact_spreading_combinatorial(from_int(1), SubseqSpec(), 3, p)
            assert rep.tables[-1].values[tuple(p)] == res.value


class TestEquivalence:
    def test_subsequence_independence(self):
        probes = default_probes(3, 0, extra=4)
        t1 = exact_table(from_int(1), SubseqSpec(), 3, probes)
        t2 = exact_table(from_int(1), SubseqSpec("affine", 5, 2), 3, probes)
        eq = equivalence_constant(t1, t2)
        assert eq.lower == 1 == eq.upper and eq.exact

    def test_identical_tables(self):
        probes = [ONES3]
        t1 = exact_table(from_int(1), SubseqSpec(), 3, probes)
        eq = equivalence_constant(t1, t1)
        assert eq.lower == 1

    def test_l1_versus_singleton_family(self):
        probes = [ONES3]
        t1 = exact_table(from_int(1), SubseqSpec(), 3, probes)
        t0 = exact_table(from_int(0), SubseqSpec(), 3, probes)
        assert equivalence_constant(t1, t0).lower == 3

    def test_probe_mismatch(self):
        t1 = exact_table(from_int(1), SubseqSpec(), 3, [ONES3])
        t2 = exact_table(from_int(1), SubseqSpec(), 2, [(1, 1)])
        with pytest.raises(SpreadingError):
            equivalence_constant(t1, t2)


class TestBridge:
    def test_schreier_self_instance(self):
        rho = basis_sequence(X1, 24)
        report = check_main2_bridge(rho, from_int(1), Fraction(1), 6)
        assert report.ok
        assert Fraction(report.direction_b["certificate_constant"]) <= 3

    def test_short_prefix_inconclusive(self):
        rho = basis_sequence(X1, 6)
        report = check_main2_bridge(rho, from_int(1), Fraction(1), 4)
        assert report.inconclusive
