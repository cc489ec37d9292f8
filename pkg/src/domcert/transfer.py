"""Certificate transformers and the functional-witness family machinery.

Each transformer rebuilds indices the way the corresponding proof step does
and then re-verifies the claimed constant exactly rather than trusting the
arithmetic: shifting into an almost-monotone window, diagonalizing nested
certificates at a limit level, gluing two levels along an order embedding of
the sum family, merging a tower of nested certificates into one index pair,
and reading off block-sequence certificates.

`frak_f_epsilon` computes the family of index sets simultaneously witnessed
above eps by one dual-ball element, by exact LP feasibility over the convex
hull of the signed norming functionals (or, for l_2, by exact min-norm-point
computation over the witness polyhedron).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .domination import (
    Certificate,
    VectorSequence,
    VerifyReport,
    verify_certificate,
)
from .families import (
    Explicit,
    Family,
    FinSet,
    FineSchreier,
    QSchedule,
    Q_DEFAULT,
    Schreier,
    SumFamily,
    almost_monotone_witness,
    as_finset,
    find_order_embedding,
)
from .linprog import max_min_over_simplex, solve_square
from .norms import (
    Combinatorial,
    Lp,
    format_space,
    is_polyhedral,
    norm,
    norming_functionals,
)
from .ordinals import Ordinal, format_ordinal
from .rationals import MAG_ONE, format_fraction
from .vectors import Vector


class TransferError(ValueError):
    pass


def _require_verified(cert: Certificate, rho: VectorSequence, q: QSchedule) -> None:
    if not verify_certificate(cert, rho, q).ok:
        raise TransferError("input certificate fails verification")


def _verified(cert: Certificate, rho: VectorSequence, q: QSchedule) -> Certificate:
    report = verify_certificate(cert, rho, q)
    if not report.ok:
        raise TransferError(
            f"transformed certificate fails at F={report.violation.F} with "
            f"ratio {report.violation.ratio}"
        )
    return replace(cert, verified=True)


def shift_certificate(
    cert: Certificate,
    rho: VectorSequence,
    target: Ordinal,
    shift: int,
    q: QSchedule = Q_DEFAULT,
) -> Certificate:
    """Drop the first `shift` index pairs to pass from level xi down to a
    smaller level: M'(n) = M(n+shift), L'(n) = L(n+shift), same constant.

    `shift` must cover the almost-monotone window of (target, xi) at the
    remaining depth.
    """
    if cert.xi is not None and not target < cert.xi:
        raise TransferError("target level must be below the certificate level")
    new_depth = cert.depth - shift
    if new_depth < 1:
        raise TransferError("insufficient depth for the requested shift")
    witness = almost_monotone_witness(target, cert.xi, new_depth, q)
    if witness is None or shift < witness:
        raise TransferError(
            f"shift {shift} below the almost-monotone witness {witness}"
        )
    out = Certificate(
        target,
        cert.M[shift:],
        cert.L[shift:],
        cert.C,
        cert.g_space,
        cert.rho_ref,
    )
    return _verified(out, rho, q)


def _positions_in(sub: FinSet, sup: FinSet) -> list[int]:
    """1-based positions of the entries of sub inside sup."""
    pos = []
    lookup = {v: i + 1 for i, v in enumerate(sup)}
    for v in sub:
        if v not in lookup:
            raise TransferError(f"index {v} missing from the enclosing M")
        pos.append(lookup[v])
    return pos


def limit_combine(
    certs: Sequence[Certificate],
    rho: VectorSequence,
    xi: Ordinal,
    r: Fraction,
    q: QSchedule = Q_DEFAULT,
) -> Certificate:
    """Diagonalize nested certificates at the approximating levels of a limit
    ordinal: M(n) = M_n(n), L(n) = max_k L_k(s^n_k) over k <= n, constant
    r * max C_k."""
    from .domination import right_dominance_defect
    from .ordinals import OMEGA, from_int, fundamental_sequence

    if xi.classify() != "limit":
        raise TransferError("limit_combine needs a limit ordinal")
    if not certs:
        raise TransferError("no certificates given")
    for k, cert in enumerate(certs, start=1):
        expected = from_int(q(k)) if xi == OMEGA else fundamental_sequence(xi, k)
        if cert.xi != expected:
            raise TransferError(
                f"certificate {k} sits at {cert.xi}, expected level "
                f"{format_ordinal(expected)} of {format_ordinal(xi)}"
            )
    for a, b in zip(certs, certs[1:]):
        if not set(b.M) <= set(a.M):
            raise TransferError("certificate index sets must be nested")
        _require_verified(a, rho, q)
    _require_verified(certs[-1], rho, q)

    t = len(certs)
    m_out: list[int] = []
    l_out: list[int] = []
    for n in range(1, t + 1):
        cert_n = certs[n - 1]
        if cert_n.depth < n:
            raise TransferError(f"certificate {n} has depth below {n}")
        m_val = cert_n.M[n - 1]
        best_l = 0
        for k in range(1, n + 1):
            s_nk = _positions_in((m_val,), certs[k - 1].M)[0]
            best_l = max(best_l, certs[k - 1].L[s_nk - 1])
        m_out.append(m_val)
        l_out.append(best_l)
    if any(a >= b for a, b in zip(l_out, l_out[1:])):
        raise TransferError("merged L failed to increase; deepen the inputs")

    # the proof step leans on r-right dominance along the touched spreads
    for k in range(1, t + 1):
        spread_m = []
        spread_l = []
        for n in range(k, t + 1):
            s_nk = _positions_in((certs[n - 1].M[n - 1],), certs[k - 1].M)[0]
            spread_m.append(certs[k - 1].L[s_nk - 1])
            spread_l.append(l_out[n - 1])
        pairs = sorted(set(zip(spread_m, spread_l)))
        mm = tuple(p[0] for p in pairs)
        ll = tuple(p[1] for p in pairs)
        increasing = all(a < b for a, b in zip(mm, mm[1:])) and all(
            a < b for a, b in zip(ll, ll[1:])
        )
        if increasing and len(mm) <= 6:
            rep = right_dominance_defect(certs[0].g_space, mm, ll, r)
            if not rep.ok:
                raise TransferError(
                    f"basis is not {r}-right dominant on spread {mm} -> {ll}"
                )

    c_out = Fraction(r) * max(c.C for c in certs)
    out = Certificate(xi, tuple(m_out), tuple(l_out), c_out, certs[0].g_space, certs[0].rho_ref)
    return _verified(out, rho, q)


def sum_combine(
    cert1: Certificate,
    cert2: Certificate,
    rho: VectorSequence,
    r: Fraction,
    q: QSchedule = Q_DEFAULT,
    embed_cap: Optional[int] = None,
) -> Certificate:
    """Glue a level-zeta and a level-xi certificate (M2 nested in M1) into a
    level-(zeta+xi) certificate with constant r*(C1+C2), routing indices
    through an order embedding of the fine family into the sum family."""
    if cert1.xi is None or cert2.xi is None:
        raise TransferError("sum_combine needs ordinal-level certificates")
    if not set(cert2.M) <= set(cert1.M):
        raise TransferError("M2 must be nested in M1")
    _require_verified(cert1, rho, q)
    _require_verified(cert2, rho, q)
    zeta, xi = cert1.xi, cert2.xi
    if cert2.depth == 0:
        # nothing to glue: the xi part of every sum-family set is forced
        # empty, so cert1 carries the claim at the combined constant
        out = replace(cert1, C=Fraction(r) * (cert1.C + cert2.C))
        return _verified(out, rho, q)
    total = zeta + xi
    depth = cert2.depth
    target_fam = FineSchreier(total, q)
    sum_fam = SumFamily(zeta, xi, q)
    emb = find_order_embedding(target_fam, sum_fam, depth, cap=embed_cap)
    if not emb.found:
        raise TransferError("no order embedding into the sum family within budget")
    p = emb.mapping
    if max(p) > cert2.depth:
        raise TransferError("embedding image exceeds certificate depth")
    s = _positions_in(cert2.M, cert1.M)
    l3 = []
    for n in range(1, cert2.depth + 1):
        if s[n - 1] > cert1.depth:
            raise TransferError("nesting position outside cert1 depth")
        l3.append(max(cert2.L[n - 1], cert1.L[s[n - 1] - 1]))
    m_out = tuple(cert2.M[p[n] - 1] for n in range(depth))
    l_out = tuple(l3[p[n] - 1] for n in range(depth))
    if any(a >= b for a, b in zip(l_out, l_out[1:])):
        raise TransferError("merged L failed to increase; deepen the inputs")
    c_out = Fraction(r) * (cert1.C + cert2.C)
    out = Certificate(total, m_out, l_out, c_out, cert1.g_space, cert1.rho_ref)
    return _verified(out, rho, q)


@dataclass
class MergeResult:
    K: FinSet
    N: FinSet
    base_constant: Fraction
    level_constants: tuple[tuple[Ordinal, Fraction], ...]
    reports: tuple[VerifyReport, ...]


def merge_subsequence_certificates(
    base: Certificate,
    extras: Sequence[Certificate],
    rho: VectorSequence,
    r: Fraction,
    q: QSchedule = Q_DEFAULT,
) -> MergeResult:
    """Collapse a tower base, extras[0], extras[1], ... with nested index
    sets into one pair (K, N): K is the innermost M and N(n) majorizes every
    level's L at the matching position.  Re-verifies the base level at r*C
    and each extra level at r*C_i + 1/r."""
    chain = [base, *extras]
    for a, b in zip(chain, chain[1:]):
        if not set(b.M) <= set(a.M):
            raise TransferError("certificate index sets must be nested")
    for cert in chain:
        _require_verified(cert, rho, q)
    inner = chain[-1]
    depth = inner.depth
    k_out = inner.M
    n_out = []
    for n in range(1, depth + 1):
        best = 0
        for cert in chain:
            s_n = _positions_in((inner.M[n - 1],), cert.M)[0]
            if s_n > cert.depth:
                raise TransferError("nesting position outside a certificate depth")
            best = max(best, cert.L[s_n - 1])
        n_out.append(best)
    n_out = tuple(n_out)
    if any(a >= b for a, b in zip(n_out, n_out[1:])):
        raise TransferError("merged N failed to increase; deepen the inputs")

    reports = []
    base_c = Fraction(r) * base.C
    cert0 = Certificate(base.xi, k_out, n_out, base_c, base.g_space, base.rho_ref)
    rep0 = verify_certificate(cert0, rho, q)
    if not rep0.ok:
        raise TransferError("merged base level fails verification")
    reports.append(rep0)
    levels = []
    for cert in extras:
        c_i = Fraction(r) * cert.C + Fraction(1) / Fraction(r)
        cert_i = Certificate(cert.xi, k_out, n_out, c_i, cert.g_space, cert.rho_ref)
        rep_i = verify_certificate(cert_i, rho, q)
        if not rep_i.ok:
            raise TransferError("merged extra level fails verification")
        reports.append(rep_i)
        levels.append((cert.xi, c_i))
    return MergeResult(k_out, n_out, base_c, tuple(levels), tuple(reports))


def block_certificate(
    fam: Family,
    blocks: Sequence[Vector],
    q: QSchedule = Q_DEFAULT,
) -> tuple[Certificate, VectorSequence]:
    """Certificate for: normalized consecutive blocks in the combinatorial
    space over fam are 1-dominated by the basis at their support maxima."""
    if not blocks:
        raise TransferError("no blocks given")
    space = Combinatorial(fam)
    last = 0
    for v in blocks:
        if v.is_zero:
            raise TransferError("blocks must be nonzero")
        if v.support[0] <= last:
            raise TransferError("block supports must be strictly increasing")
        last = v.support[-1]
        if norm(space, v) != MAG_ONE:
            raise TransferError(f"block {v} is not normalized")
    rho = VectorSequence(tuple(blocks), space, "blocks")
    l_out = tuple(v.support[-1] for v in blocks)
    cert = Certificate(
        None,
        tuple(range(1, len(blocks) + 1)),
        l_out,
        Fraction(1),
        space,
        rho.name,
    )
    return _verified(cert, rho, q), rho


def _l2_witness_feasible(vectors: list[Vector], eps: Fraction) -> bool:
    """Exact feasibility of: some y with |y|_2 <= 1 has |<y, v_n>| >= eps for
    all n.  Min-norm point over each sign orthant of the constraint
    polyhedron, by active-set enumeration over the Gram matrix."""
    k = len(vectors)
    if k == 0:
        return True
    gram = [[u.dot(v) for v in vectors] for u in vectors]
    if all(gram[i][j] == 0 for i in range(k) for j in range(k) if i != j):
        # orthogonal witnesses: closed form
        if any(gram[i][i] == 0 for i in range(k)):
            return False
        dist = sum((eps * eps / gram[i][i] for i in range(k)), Fraction(0))
        return dist <= 1
    for signs in itertools.product((1, -1), repeat=k - 1):
        sigma = (1,) + signs
        signed = [
            [sigma[i] * sigma[j] * gram[i][j] for j in range(k)] for i in range(k)
        ]
        best: Optional[Fraction] = None
        for size in range(1, k + 1):
            for subset in itertools.combinations(range(k), size):
                sub = [[signed[i][j] for j in subset] for i in subset]
                rhs = [eps] * size
                mu = solve_square(sub, rhs)
                if mu is None or any(v < 0 for v in mu):
                    continue
                # primal feasibility of the projection over all constraints
                vals = [
                    sum((mu[a] * signed[i][subset[a]] for a in range(size)), Fraction(0))
                    for i in range(k)
                ]
                if any(v < eps for v in vals):
                    continue
                sq = sum((mu[a] * eps for a in range(size)), Fraction(0))
                if best is None or sq < best:
                    best = sq
        if best is not None and best <= 1:
            return True
    return False


def frak_f_epsilon(
    xs: VectorSequence,
    eps: Fraction,
    n: int,
    q: QSchedule = Q_DEFAULT,
) -> Explicit:
    """The restriction to {1..n} of the family of index sets F admitting one
    dual-ball element x* with |x*(x_i)| >= eps for every i in F.

    Hereditary by definition, so candidates are grown level by level; each
    candidate is decided by exact LP feasibility over the signed norming
    functionals (polyhedral spaces) or exact quadratic feasibility (l_2).
    """
    eps = Fraction(eps)
    if n > len(xs):
        raise TransferError("n exceeds the available prefix")
    space = xs.space
    l2 = isinstance(space, Lp) and space.p == 2
    if not l2 and not is_polyhedral(space):
        raise TransferError(f"{format_space(space)} has no finite dual description")

    phis: list[Vector] = []
    abs_phis: list[Vector] = []
    if not l2:
        support = sorted({i for v in xs.items[:n] for i in v.support})
        phis = norming_functionals(space, tuple(support))
        abs_phis = sorted(
            {Vector(tuple((i, abs(c)) for i, c in phi.entries)) for phi in phis},
            key=lambda v: v.entries,
        )
        nonneg = all(all(c >= 0 for _, c in v.entries) for v in xs.items[:n])
        disjoint = True
        seen: set[int] = set()
        for v in xs.items[:n]:
            if seen & set(v.support):
                disjoint = False
            seen |= set(v.support)

    # the optimum of the feasibility LP is invariant under permuting
    # constraint coordinates and generator columns, and under dropping
    # all-zero generators; canonicalizing lets isomorphic candidates share
    # one solve
    z_cache: dict[tuple, Fraction] = {}

    def cached_maxmin(cols: list[list[Fraction]]) -> Fraction:
        live = [tuple(col) for col in cols if any(col)]
        if not live:
            return Fraction(0)
        key = tuple(sorted(zip(*sorted(zip(*sorted(live))))))
        if key not in z_cache:
            z, _ = max_min_over_simplex([list(col) for col in live])
            z_cache[key] = z
        return z_cache[key]

    def feasible(f: FinSet) -> bool:
        vectors = [xs.items[i - 1] for i in f]
        if l2:
            return _l2_witness_feasible(vectors, eps)
        if nonneg and disjoint:
            # unconditional dual ball: WLOG the witness is coordinatewise
            # nonnegative, and only the absolute functionals matter
            cols = [[phi.dot(v) for v in vectors] for phi in abs_phis]
            return cached_maxmin(cols) >= eps
        for signs in itertools.product((1, -1), repeat=len(f) - 1):
            sigma = (1,) + signs
            cols = [
                [s * phi.dot(v) for s, v in zip(sigma, vectors)] for phi in phis
            ]
            if cached_maxmin(cols) >= eps:
                return True
        return False

    members: set[FinSet] = {()}
    current = [()]
    for size in range(1, n + 1):
        nxt = []
        for f in current:
            start = f[-1] + 1 if f else 1
            for x in range(start, n + 1):
                cand = f + (x,)
                if any(cand[:i] + cand[i + 1 :] not in members for i in range(len(cand))):
                    continue
                if feasible(cand):
                    members.add(cand)
                    nxt.append(cand)
        if not nxt:
            break
        current = nxt
    return Explicit(frozenset(members))


@dataclass
class SelectionStep:
    k: int
    threshold: Fraction
    kept: FinSet
    removed: FinSet
    witness: Optional[FinSet]


@dataclass
class SelectionTrace:
    M: FinSet
    phi: Fraction
    steps: tuple[SelectionStep, ...]
    bound_partial_sum: Fraction
    bound_total: Fraction

    def to_json(self) -> dict:
        return {
            "M": list(self.M),
            "phi": format_fraction(self.phi),
            "steps": [
                {
                    "k": s.k,
                    "threshold": format_fraction(s.threshold),
                    "kept": list(s.kept),
                    "removed": list(s.removed),
                    "witness": list(s.witness) if s.witness is not None else None,
                }
                for s in self.steps
            ],
            "bound_partial_sum": format_fraction(self.bound_partial_sum),
            "bound_total": format_fraction(self.bound_total),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


class ShadowFailure(TransferError):
    def __init__(self, k: int, witness: Optional[FinSet], message: str):
        super().__init__(message)
        self.k = k
        self.witness = witness


def wn_select(
    xs: VectorSequence,
    xi: Ordinal,
    eps: Fraction,
    phi: Fraction,
    depth: int,
    q: QSchedule = Q_DEFAULT,
) -> tuple[SelectionTrace, Certificate]:
    """Finite selection mirroring the weak-nullity subsequence extraction.

    For k = 1..depth the infinite refinement step is replaced by a search for
    a nested index set M_k inside which every frak_{phi^k} member lies in
    Schreier(xi); the diagonal choice M(k) in M_k yields the claimed
    certificate (x_{M(n)}) <=_{1+eps} (g_{M(n)}) in the Schreier space,
    verified exactly.  Failure to reach `depth` reports the level and the
    witnessing family member, the finite trace of the l1-spreading-model
    alternative.
    """
    eps, phi = Fraction(eps), Fraction(phi)
    if not (0 < phi < 1):
        raise TransferError("phi must lie in (0,1)")
    if (1 - phi) ** 2 * (1 + eps) <= 1:
        raise TransferError("need (1-phi)^2 (1+eps) > 1")
    universe = len(xs)
    target = Schreier(xi, q)
    m_current = tuple(range(1, universe + 1))
    steps: list[SelectionStep] = []
    level_sets: list[FinSet] = []
    for k in range(1, depth + 1):
        threshold = phi**k
        fam_k = frak_f_epsilon(xs, threshold, universe, q)
        removed: list[int] = []
        witness: Optional[FinSet] = None
        while True:
            bad = None
            for f in sorted(fam_k.members, key=lambda t: (len(t), t)):
                if f and set(f) <= set(m_current) and not target.member(f):
                    bad = f
                    break
            if bad is None:
                break
            witness = bad
            removed.append(bad[0])
            m_current = tuple(v for v in m_current if v != bad[0])
        steps.append(SelectionStep(k, threshold, m_current, tuple(removed), witness))
        level_sets.append(m_current)

    selection: list[int] = []
    for k in range(1, depth + 1):
        pool = [v for v in level_sets[k - 1] if not selection or v > selection[-1]]
        if not pool:
            wit = next(
                (s.witness for s in reversed(steps) if s.witness is not None), None
            )
            raise ShadowFailure(
                k,
                wit,
                f"refinement at level {k} leaves no selectable index; "
                f"finite witness of the l1 spreading-model alternative: {wit}",
            )
        selection.append(pool[0])

    partial = sum((Fraction(k) * phi ** (k - 1) for k in range(1, depth + 1)), Fraction(0))
    total = 1 / (1 - phi) ** 2
    if not partial <= total <= 1 + eps:
        raise TransferError("selection arithmetic violates the claimed constant")

    m_sel = as_finset(selection)
    trace = SelectionTrace(m_sel, phi, tuple(steps), partial, total)
    g_space = Combinatorial(Schreier(xi, q))
    cert = Certificate(None, m_sel, m_sel, 1 + eps, g_space, xs.name)
    return trace, _verified(cert, xs, q)
