import itertools
import random
from fractions import Fraction

import pytest

from domcert.domination import (
    Certificate,
    DominationError,
    VectorSequence,
    _Infinity,
    basis_sequence,
    build_t_tree,
    domination_constant_exact,
    domination_lower_bound,
    gamma_bracket,
    right_dominance_defect,
    search_certificate,
    verify_certificate,
    _functional_rows,
)
from domcert.families import Schreier
from domcert.linprog import solve_square
from domcert.norms import C0, Combinatorial, L1, norm
from domcert.ordinals import from_int
from domcert.rationals import Mag
from domcert.vectors import Vector, combine

e = Vector.basis
S1 = Schreier(from_int(1))
X1 = Combinatorial(S1)


def brute_constant(xs: VectorSequence, ys: VectorSequence):
    """Independent oracle: enumerate the polytope vertices from all sign
    systems of the y-side functional rows and evaluate the x-norm there."""
    t = len(xs)
    rows = _functional_rows(ys.space, ys.items)
    best = Mag.of(Fraction(0))
    for subset in itertools.combinations(range(len(rows)), t):
        for signs in itertools.product((1, -1), repeat=t):
            a_mat = [[signs[i] * c for c in rows[subset[i]]] for i in range(t)]
            sol = solve_square(a_mat, [Fraction(1)] * t)
            if sol is None:
                continue
            if any(
                abs(sum((c * v for c, v in zip(row, sol)), Fraction(0))) > 1
                for row in rows
            ):
                continue
            value = norm(xs.space, combine(xs.items, sol))
            if value > best:
                best = value
    return best


class TestExactConstant:
    def test_l1_vs_c0(self):
        xs = VectorSequence((e(1), e(2)), L1())
        ys = VectorSequence((e(1), e(2)), C0())
        assert domination_constant_exact(xs, ys).value == 2

    def test_identity(self):
        xs = VectorSequence((e(1),), C0())
        assert domination_constant_exact(xs, xs).value == 1

    def test_c0_vs_l1(self):
        xs = VectorSequence((e(1), e(2)), C0())
        ys = VectorSequence((e(1), e(2)), L1())
        assert domination_constant_exact(xs, ys).value == 1

    def test_infinity_on_degenerate_right(self):
        xs = VectorSequence((e(1), e(2)), L1())
        ys = VectorSequence((e(1), e(1)), C0())
        res = domination_constant_exact(xs, ys)
        assert not res.finite and res.witness is not None

    def test_dimension_bound(self):
        xs = basis_sequence(L1(), 7)
        with pytest.raises(DominationError):
            domination_constant_exact(xs, xs)

    def test_matches_brute_oracle(self):
        rng = random.Random(2)
        spaces = [X1, C0(), L1()]
        for trial in range(12):
            t = rng.randint(1, 3)
            sx = spaces[rng.randrange(3)]
            sy = spaces[rng.randrange(3)]
            xs_items, ys_items = [], []
            pos = 1
            for _ in range(t):
                w = rng.randint(1, 2)
                xs_items.append(
                    Vector.of({i: rng.randint(1, 3) for i in range(pos, pos + w)})
                )
                ys_items.append(
                    Vector.of({i: rng.randint(1, 3) for i in range(pos, pos + w)})
                )
                pos += w
            xs = VectorSequence(tuple(xs_items), sx)
            ys = VectorSequence(tuple(ys_items), sy)
            fast = domination_constant_exact(xs, ys).value
            slow = brute_constant(xs, ys)
            assert fast == slow, (trial, fast, slow)

    def test_signed_route_matches_unsigned(self):
        # vectors with negative entries bypass the unsigned fast path
        xs_pos = VectorSequence((Vector.of({1: 1, 2: 2}), e(3)), X1)
        xs_neg = VectorSequence((Vector.of({1: -1, 2: 2}), e(3)), X1)
        ys = basis_sequence(C0(), 2)
        a = domination_constant_exact(xs_pos, ys).value
        b = domination_constant_exact(xs_neg, ys).value
        assert a == b  # 1-unconditional left norm

    def test_transitivity_constant(self):
        rng = random.Random(4)
        for _ in range(10):
            t = rng.randint(1, 3)
            seqs = []
            for space in (L1(), X1, C0()):
                items = tuple(
                    Vector.of({i: rng.randint(1, 4)}) for i in range(1, t + 1)
                )
                seqs.append(VectorSequence(items, space))
            xs, ys, zs = seqs
            cxy = domination_constant_exact(xs, ys).value
            cyz = domination_constant_exact(ys, zs).value
            cxz = domination_constant_exact(xs, zs).value
            assert cxz <= cxy * cyz


class TestLowerBound:
    def test_bounded_by_exact(self):
        rng = random.Random(9)
        for trial in range(8):
            t = rng.randint(1, 3)
            xs = VectorSequence(
                tuple(Vector.of({i: rng.randint(1, 3)}) for i in range(1, t + 1)), L1()
            )
            ys = VectorSequence(
                tuple(Vector.of({i: rng.randint(1, 3)}) for i in range(1, t + 1)), C0()
            )
            exact = domination_constant_exact(xs, ys).value
            lb = domination_lower_bound(xs, ys, trials=30, seed=trial)
            assert lb.value <= exact

    def test_finds_two(self):
        xs = VectorSequence((e(1), e(2)), L1())
        ys = VectorSequence((e(1), e(2)), C0())
        res = domination_lower_bound(xs, ys, trials=100, seed=7)
        assert res.value == 2

    def test_identical_sequences(self):
        xs = basis_sequence(X1, 3)
        assert domination_lower_bound(xs, xs, trials=10, seed=0).value == 1

    def test_deterministic(self):
        xs = VectorSequence((e(1), e(2)), L1())
        ys = VectorSequence((e(2), e(3)), X1)
        a = domination_lower_bound(xs, ys, trials=25, seed=3)
        b = domination_lower_bound(xs, ys, trials=25, seed=3)
        assert a.value == b.value and a.witness == b.witness

    def test_zero_left_sequence(self):
        xs = VectorSequence((Vector(), Vector()), L1())
        ys = basis_sequence(C0(), 2)
        res = domination_lower_bound(xs, ys, trials=10, seed=0)
        assert res.value == 0 and res.status == "ok"

    def test_degenerate_right_reports_infinite(self):
        xs = VectorSequence((e(1),), L1())
        ys = VectorSequence((Vector(),), C0())
        res = domination_lower_bound(xs, ys, trials=10, seed=0)
        assert isinstance(res.value, _Infinity)


class TestRightDominance:
    def test_schreier_spread(self):
        rep = right_dominance_defect(X1, (1, 2), (2, 3), Fraction(1))
        assert rep.ok and rep.constant <= Mag.of(Fraction(1))

    def test_identical(self):
        rep = right_dominance_defect(X1, (2, 3), (2, 3), Fraction(1))
        assert rep.ok and rep.constant == 1

    def test_l1_symmetric(self):
        rep = right_dominance_defect(L1(), (1,), (5,), Fraction(1))
        assert rep.ok

    def test_requires_spread(self):
        with pytest.raises(DominationError):
            right_dominance_defect(X1, (2, 3), (1, 3), Fraction(1))

    def test_engines_agree(self):
        for m, l in [((1, 2), (2, 4)), ((2, 3), (3, 5)), ((1, 2, 3), (2, 3, 4))]:
            auto = right_dominance_defect(X1, m, l, Fraction(1), engine="auto")
            lp = right_dominance_defect(X1, m, l, Fraction(1), engine="lp")
            assert auto.constant == lp.constant


class TestTTree:
    def test_c0_pairings(self):
        rho = VectorSequence((e(1), e(2)), C0())
        tree = build_t_tree(rho, Fraction(1), C0(), 2, 2)
        assert len(tree) == 6  # root, four pairs, one depth-2 chain

    def test_scaled_root_only(self):
        rho = VectorSequence((e(1).scale(2),), L1())
        tree = build_t_tree(rho, Fraction(1), C0(), 1, 1)
        assert len(tree) == 1

    def test_depth_zero(self):
        rho = VectorSequence((e(1),), L1())
        tree = build_t_tree(rho, Fraction(1), C0(), 3, 0)
        assert tree.contains(())
        assert len(tree) == 1

    def test_initial_segment_closed_and_monotone(self):
        rho = VectorSequence((e(1).scale(2), e(2)), L1())
        small = build_t_tree(rho, Fraction(1), C0(), 3, 2)
        big = build_t_tree(rho, Fraction(3), C0(), 3, 2)
        assert small.nodes <= big.nodes
        for node in big.nodes:
            for k in range(len(node)):
                assert node[:k] in big.nodes


class TestVerify:
    def test_xi_zero_always_ok(self):
        rho = VectorSequence((e(1).scale(5), e(2)), L1())
        cert = Certificate(from_int(0), (1, 2), (1, 2), Fraction(1), C0(), "rho")
        assert verify_certificate(cert, rho).ok

    def test_self_identity(self):
        rho = basis_sequence(X1, 4)
        cert = Certificate(from_int(1), (1, 2, 3, 4), (1, 2, 3, 4), Fraction(1), X1)
        report = verify_certificate(cert, rho)
        assert report.ok and report.worst_ratio == 1

    def test_violation_with_scalars(self):
        rho = VectorSequence((e(1).scale(2), e(2).scale(2)), L1())
        cert = Certificate(from_int(1), (1, 2), (1, 2), Fraction(1), C0(), "rho")
        report = verify_certificate(cert, rho)
        assert not report.ok
        assert report.worst_ratio == 2
        viol = report.violation
        num = norm(L1(), combine([rho.items[i - 1] for i in viol.F], viol.scalars))
        den = norm(
            C0(),
            combine([e(cert.L[i - 1]) for i in viol.F], viol.scalars),
        )
        assert num / den > Mag.of(Fraction(1))

    def test_verified_resists_spot_checks(self):
        rho = basis_sequence(X1, 6)
        out = search_certificate(rho, from_int(2), Fraction(1), 6)
        cert = out.certificate
        rng = random.Random(1)
        from domcert.families import enumerate_family, FineSchreier

        members = [f for f in enumerate_family(FineSchreier(from_int(2)), 6) if f]
        for f in rng.sample(members, 5):
            xs = rho.subsequence(tuple(cert.M[i - 1] for i in f))
            ys = VectorSequence(
                tuple(e(cert.L[i - 1]) for i in f), X1
            )
            assert domination_constant_exact(xs, ys).value <= Mag.of(cert.C)


class TestSearch:
    def test_identity_certificate(self):
        rho = basis_sequence(X1, 4)
        out = search_certificate(rho, None, Fraction(1), 4)
        assert out.status == "found"
        assert out.certificate.M == (1, 2, 3, 4)
        assert out.certificate.L == (1, 2, 3, 4)
        assert out.certificate.verified

    def test_block_domination_found(self):
        blocks = (Vector.of({1: 1, 2: 1}), e(3), Vector.of({4: 1, 5: 2}).scale(Fraction(1, 3)))
        rho = VectorSequence(blocks, X1, "blocks")
        assert all(norm(X1, b) == 1 for b in blocks)
        out = search_certificate(rho, None, Fraction(1), 3, l_max=5)
        assert out.status == "found"

    def test_exhausted_reports_kill(self):
        rho = VectorSequence((e(1).scale(2),), L1())
        out = search_certificate(rho, None, Fraction(1), 1, g_space=C0())
        assert out.status == "exhausted"
        assert out.kill_bound == 2

    def test_constraint_respected(self):
        rho = basis_sequence(X1, 6)
        out = search_certificate(rho, from_int(1), Fraction(1), 3, constraint=(2, 4, 6))
        assert out.status == "found"
        assert set(out.certificate.M) <= {2, 4, 6}

    def test_budget(self):
        rho = basis_sequence(L1(), 4)
        out = search_certificate(rho, None, Fraction(1, 100), 4, g_space=C0(), node_budget=3)
        assert out.status == "budget"


class TestGammaBracket:
    def test_l1_versus_c0(self):
        rho = basis_sequence(L1(), 3)
        bracket = gamma_bracket(rho, None, 3, g_space=C0())
        assert bracket.lower == 3 and bracket.upper == 3
        assert bracket.lower_witness is not None

    def test_xi_zero(self):
        rho = basis_sequence(L1(), 3)
        bracket = gamma_bracket(rho, from_int(0), 3, resolution=Fraction(1, 16), g_space=C0())
        assert bracket.lower == 0 and bracket.upper <= Fraction(1, 16)

    def test_self_domination(self):
        rho = basis_sequence(X1, 4)
        bracket = gamma_bracket(rho, from_int(1), 4)
        assert bracket.lower >= 1 and bracket.upper == 1
        assert bracket.certificate is not None


class TestCertificateJson:
    def test_round_trip(self):
        cert = Certificate(from_int(2), (1, 3), (2, 4), Fraction(3, 2), X1, "rho")
        again = Certificate.loads(cert.dumps())
        assert again == cert

    def test_all_sentinel(self):
        cert = Certificate(None, (1,), (2,), Fraction(1), C0(), "r")
        data = cert.to_json()
        assert data["xi"] == "ALL"
        assert Certificate.from_json(data).xi is None

    def test_depth_mismatch_rejected(self):
        cert = Certificate(None, (1,), (2,), Fraction(1), C0(), "r")
        data = cert.to_json()
        data["N"] = 5
        with pytest.raises(DominationError):
            Certificate.from_json(data)
