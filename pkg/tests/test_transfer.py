import itertools
from fractions import Fraction

import pytest

from domcert.domination import (
    Certificate,
    VectorSequence,
    basis_sequence,
    search_certificate,
    verify_certificate,
)
from domcert.families import Schreier, enumerate_family
from domcert.norms import C0, Combinatorial, L1, Lp
from domcert.ordinals import OMEGA, from_int
from domcert.transfer import (
    ShadowFailure,
    TransferError,
    block_certificate,
    frak_f_epsilon,
    limit_combine,
    merge_subsequence_certificates,
    shift_certificate,
    sum_combine,
    wn_select,
)
from domcert.vectors import Vector

e = Vector.basis
S1 = Schreier(from_int(1))
X1 = Combinatorial(S1)


def _cert(rho, xi, depth, constraint=None):
    out = search_certificate(rho, xi, Fraction(1), depth, constraint=constraint)
    assert out.status == "found"
    return out.certificate


class TestShift:
    def test_down_one_level(self):
        rho = basis_sequence(X1, 8)
        cert = _cert(rho, from_int(2), 6)
        shifted = shift_certificate(cert, rho, from_int(1), 0)
        assert shifted.verified and shifted.xi == from_int(1)
        assert shifted.depth == 6 and shifted.C == cert.C

    def test_from_all_sentinel(self):
        rho = basis_sequence(X1, 8)
        cert = _cert(rho, None, 6)
        shifted = shift_certificate(cert, rho, from_int(3), 0)
        assert shifted.verified

    def test_omega_to_two_with_shift(self):
        rho = basis_sequence(X1, 8)
        cert = _cert(rho, OMEGA, 8)
        shifted = shift_certificate(cert, rho, from_int(2), 2)
        assert shifted.verified and shifted.depth == 6
        assert shifted.M == cert.M[2:]

    def test_insufficient_shift_rejected(self):
        rho = basis_sequence(X1, 8)
        cert = _cert(rho, OMEGA, 8)
        # the almost-monotone witness for (2, w) is 1, so shift 0 is refused
        with pytest.raises(TransferError):
            shift_certificate(cert, rho, from_int(2), 0)

    def test_depth_exhaustion_rejected(self):
        rho = basis_sequence(X1, 4)
        cert = _cert(rho, from_int(2), 4)
        with pytest.raises(TransferError):
            shift_certificate(cert, rho, from_int(1), 4)


class TestSumCombine:
    def test_one_plus_one(self):
        rho = basis_sequence(X1, 8)
        c1 = _cert(rho, from_int(1), 6)
        c2 = _cert(rho, from_int(1), 6, constraint=c1.M)
        out = sum_combine(c1, c2, rho, Fraction(1))
        assert out.verified and out.xi == from_int(2)
        assert out.C == Fraction(1) * (c1.C + c2.C)

    def test_one_plus_two(self):
        rho = basis_sequence(X1, 8)
        c1 = _cert(rho, from_int(1), 6)
        c2 = _cert(rho, from_int(2), 6, constraint=c1.M)
        out = sum_combine(c1, c2, rho, Fraction(1))
        assert out.verified and out.xi == from_int(3) and out.C == 2

    def test_empty_second_is_passthrough(self):
        rho = basis_sequence(X1, 6)
        c1 = _cert(rho, from_int(1), 4)
        c0 = Certificate(from_int(2), (), (), Fraction(1), X1, rho.name)
        out = sum_combine(c1, c0, rho, Fraction(1))
        assert out.xi == from_int(1) and out.C == 2

    def test_nesting_required(self):
        rho = basis_sequence(X1, 8)
        c1 = Certificate(from_int(1), (1, 3, 5), (1, 3, 5), Fraction(1), X1, rho.name)
        c2 = Certificate(from_int(1), (2, 4, 6), (2, 4, 6), Fraction(1), X1, rho.name)
        with pytest.raises(TransferError):
            sum_combine(c1, c2, rho, Fraction(1))


class TestLimitCombine:
    def test_two_levels_to_omega(self):
        rho = basis_sequence(X1, 8)
        c1 = _cert(rho, from_int(1), 6)
        c2 = _cert(rho, from_int(2), 6, constraint=c1.M)
        out = limit_combine([c1, c2], rho, OMEGA, Fraction(1))
        assert out.verified and out.xi == OMEGA
        assert out.C <= Fraction(1) * max(c1.C, c2.C)

    def test_single_cert_identity_prefix(self):
        rho = basis_sequence(X1, 6)
        c1 = _cert(rho, from_int(1), 4)
        out = limit_combine([c1], rho, OMEGA, Fraction(1))
        assert out.verified and out.depth == 1
        assert out.M == (c1.M[0],)

    def test_disjoint_index_sets_rejected(self):
        rho = basis_sequence(X1, 8)
        c1 = Certificate(from_int(1), (1, 3, 5), (1, 3, 5), Fraction(1), X1, rho.name)
        c2 = Certificate(from_int(2), (2, 4, 6), (2, 4, 6), Fraction(1), X1, rho.name)
        with pytest.raises(TransferError):
            limit_combine([c1, c2], rho, OMEGA, Fraction(1))

    def test_wrong_levels_rejected(self):
        rho = basis_sequence(X1, 8)
        c1 = _cert(rho, from_int(2), 4)
        with pytest.raises(TransferError):
            limit_combine([c1], rho, OMEGA, Fraction(1))


class TestMerge:
    def test_base_plus_extra(self):
        rho = basis_sequence(X1, 8)
        base = _cert(rho, from_int(2), 6)
        extra = _cert(rho, from_int(1), 6, constraint=base.M)
        res = merge_subsequence_certificates(base, [extra], rho, Fraction(1))
        assert res.base_constant == base.C
        assert res.level_constants[0][1] == extra.C + 1
        assert all(rep.ok for rep in res.reports)

    def test_no_extras_passthrough(self):
        rho = basis_sequence(X1, 6)
        base = _cert(rho, from_int(2), 4)
        res = merge_subsequence_certificates(base, [], rho, Fraction(1))
        assert res.K == base.M and res.N == base.L

    def test_non_nested_rejected(self):
        rho = basis_sequence(X1, 8)
        base = Certificate(from_int(2), (1, 3, 5), (1, 3, 5), Fraction(1), X1, rho.name)
        extra = Certificate(from_int(1), (2, 4), (2, 4), Fraction(1), X1, rho.name)
        with pytest.raises(TransferError):
            merge_subsequence_certificates(base, [extra], rho, Fraction(1))


class TestBlockCertificate:
    def test_two_blocks(self):
        blocks = [Vector.of({1: 1, 2: 1}), e(3)]
        cert, rho = block_certificate(S1, blocks)
        assert cert.verified and cert.C == 1 and cert.L == (2, 3)

    def test_singleton(self):
        cert, _ = block_certificate(S1, [e(5)])
        assert cert.L == (5,) and cert.C == 1

    def test_overlap_rejected(self):
        with pytest.raises(TransferError):
            block_certificate(S1, [Vector.of({1: 1, 3: 1}), Vector.of({2: 1})])

    def test_unnormalized_rejected(self):
        with pytest.raises(TransferError):
            block_certificate(S1, [e(1).scale(2)])


class TestFrak:
    def test_l1_all_sets(self):
        xs = basis_sequence(L1(), 6)
        fam = frak_f_epsilon(xs, Fraction(1), 4)
        assert len(fam.members) == 16

    def test_schreier_space_recovers_family(self):
        xs = basis_sequence(X1, 6)
        fam = frak_f_epsilon(xs, Fraction(1), 4)
        assert fam.members == frozenset(enumerate_family(S1, 4))

    def test_above_norm_only_empty(self):
        xs = basis_sequence(X1, 6)
        fam = frak_f_epsilon(xs, Fraction(3, 2), 4)
        assert fam.members == frozenset({()})

    def test_l2_cardinality_cut(self):
        xs = basis_sequence(Lp(2), 8)
        fam = frak_f_epsilon(xs, Fraction(1, 2), 5)
        expected = {
            f
            for k in range(5)
            for f in itertools.combinations(range(1, 6), k)
        }
        assert fam.members == frozenset(expected)

    def test_monotone_in_eps(self):
        xs = basis_sequence(X1, 6)
        small = frak_f_epsilon(xs, Fraction(1, 3), 5)
        large = frak_f_epsilon(xs, Fraction(2, 3), 5)
        assert large.members <= small.members

    def test_hereditary(self):
        xs = basis_sequence(X1, 6)
        fam = frak_f_epsilon(xs, Fraction(1, 2), 5)
        for f in fam.members:
            for i in range(len(f)):
                assert f[:i] + f[i + 1 :] in fam.members

    def test_l2_overlapping_supports(self):
        # correlated vectors: a shared witness must respect the geometry
        xs = VectorSequence(
            (Vector.of({1: 1}), Vector.of({1: 1, 2: 1})), Lp(2), "corr"
        )
        fam = frak_f_epsilon(xs, Fraction(1), 2)
        # x* = e1 gives |<x*,x1>| = |<x*,x2>| = 1 exactly
        assert (1, 2) in fam.members

    def test_non_polyhedral_rejected(self):
        from domcert.norms import Baernstein

        xs = basis_sequence(Baernstein(from_int(1), 2), 4)
        with pytest.raises(TransferError):
            frak_f_epsilon(xs, Fraction(1, 2), 3)


class TestWnSelect:
    def test_l2_sparse_selection(self):
        xs = basis_sequence(Lp(2), 12)
        trace, cert = wn_select(xs, from_int(1), Fraction(1, 2), Fraction(1, 8), 6)
        assert cert.verified and cert.C == Fraction(3, 2)
        assert trace.M == (7, 8, 9, 10, 11, 12)
        assert trace.bound_partial_sum <= trace.bound_total <= Fraction(3, 2)

    def test_l1_shadow_failure(self):
        xs = basis_sequence(L1(), 10)
        with pytest.raises(ShadowFailure) as exc:
            wn_select(xs, from_int(1), Fraction(1, 2), Fraction(1, 8), 6)
        assert exc.value.witness is not None
        assert not S1.member(exc.value.witness)

    def test_c0_blocks_pass(self):
        xs = basis_sequence(C0(), 12)
        trace, cert = wn_select(xs, from_int(1), Fraction(1, 2), Fraction(1, 8), 6)
        assert cert.verified

    def test_phi_precondition(self):
        xs = basis_sequence(C0(), 8)
        with pytest.raises(TransferError):
            wn_select(xs, from_int(1), Fraction(1, 2), Fraction(1, 2), 4)


class TestCombinatorProperties:
    def test_outputs_verify_at_stated_constants(self):
        # randomized small instances over the three reference spaces
        import random

        rng = random.Random(0)
        for trial in range(6):
            space = [X1, C0(), L1()][trial % 3]
            rho = basis_sequence(space, 8)
            c1 = _cert(rho, from_int(1), 5)
            c2 = _cert(rho, from_int(2), 5, constraint=c1.M)
            summed = sum_combine(c1, c2, rho, Fraction(1))
            assert summed.C == c1.C + c2.C
            limited = limit_combine([c1, c2], rho, OMEGA, Fraction(1))
            assert limited.C <= max(c1.C, c2.C)
            report = verify_certificate(summed, rho)
            assert report.ok
