"""Domination constants, the pairing tree, and finite-depth certificates.

A sequence (x_n) is C-dominated by (y_n) when every finite combination
satisfies |sum a_n x_n| <= C |sum a_n y_n|.  The least such C is the maximum
of the left norm over the polytope {a : |sum a_n y_n| <= 1}, computed exactly:
for a polyhedral left space by one support-function LP per left norming
functional, for an l_p left norm over pairwise disjoint vectors by vertex
enumeration of the positive part of the polytope.

Certificates assert {(M(F), L(F)) : F in FineSchreier(xi)} is contained in
the pairing tree T(rho, C) up to a finite depth; verification checks the
maximal family members (subsets inherit domination by restricting scalars).
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .families import (
    AllFinite,
    Family,
    FinSet,
    FineSchreier,
    QSchedule,
    Q_DEFAULT,
    as_finset,
    enumerate_family,
    maximal_members,
)
from .linprog import nullspace, solve_square, support_function
from .norms import SpaceSpec, format_space, is_polyhedral, norm, norming_functionals, Lp, parse_space
from .ordinals import Ordinal, format_ordinal, parse_ordinal
from .rationals import Mag, MAG_ZERO, format_fraction, parse_fraction
from .vectors import Vector, combine


class DominationError(ValueError):
    pass


class SearchBudgetError(RuntimeError):
    pass


class _Infinity:
    """Sentinel for 'no finite constant exists'; larger than every Mag."""

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return isinstance(other, _Infinity)

    def __gt__(self, other) -> bool:
        return not isinstance(other, _Infinity)

    def __ge__(self, other) -> bool:
        return True


INF = _Infinity()

EXACT_DIM_BOUND = 6


@dataclass(frozen=True)
class VectorSequence:
    items: tuple[Vector, ...]
    space: SpaceSpec
    name: str = ""

    def __post_init__(self) -> None:
        if not self.items:
            raise DominationError("a vector sequence must be nonempty")

    def __len__(self) -> int:
        return len(self.items)

    def subsequence(self, indices: FinSet) -> "VectorSequence":
        vecs = tuple(self.items[i - 1] for i in indices)
        return VectorSequence(vecs, self.space, self.name)

    def all_normalized(self) -> bool:
        from .rationals import MAG_ONE

        return all(norm(self.space, v) == MAG_ONE for v in self.items)

    def to_json(self) -> dict:
        return {
            "space": format_space(self.space),
            "vectors": [v.to_json() for v in self.items],
            "name": self.name,
        }

    @staticmethod
    def from_json(data: dict, q: QSchedule = Q_DEFAULT) -> "VectorSequence":
        return VectorSequence(
            tuple(Vector.from_json(v) for v in data["vectors"]),
            parse_space(data["space"], q),
            data.get("name", ""),
        )


def basis_sequence(space: SpaceSpec, length: int, name: str = "") -> VectorSequence:
    return VectorSequence(
        tuple(Vector.basis(i) for i in range(1, length + 1)),
        space,
        name or f"basis:{format_space(space)}:{length}",
    )


@dataclass
class DominationValue:
    value: "Mag | _Infinity"
    witness: Optional[tuple[Fraction, ...]] = None

    @property
    def finite(self) -> bool:
        return not isinstance(self.value, _Infinity)


def _functional_rows(space: SpaceSpec, vectors: tuple[Vector, ...]) -> list[tuple[Fraction, ...]]:
    support = sorted({i for v in vectors for i in v.support})
    rows: set[tuple[Fraction, ...]] = set()
    for phi in norming_functionals(space, tuple(support)):
        row = tuple(phi.dot(v) for v in vectors)
        if all(c == 0 for c in row):
            continue
        for lead in row:
            if lead != 0:
                if lead < 0:
                    row = tuple(-c for c in row)
                break
        rows.add(row)
    return sorted(rows)


def _nonneg_disjoint(seq: VectorSequence) -> bool:
    seen: set[int] = set()
    for v in seq.items:
        if v.is_zero or (seen & set(v.support)):
            return False
        if any(c < 0 for _, c in v.entries):
            return False
        seen |= set(v.support)
    return True


def _unsigned_rows(space: SpaceSpec, vectors: tuple[Vector, ...]) -> list[tuple[Fraction, ...]]:
    """Absolute functional rows, pruned of pointwise-dominated ones; on the
    positive orthant these carry the whole norm for disjoint nonnegative
    vectors in a 1-unconditional space."""
    support = sorted({i for v in vectors for i in v.support})
    rows: set[tuple[Fraction, ...]] = set()
    for phi in norming_functionals(space, tuple(support)):
        row = tuple(
            sum((abs(c) * v.coeff(i) for i, c in phi.entries), Fraction(0))
            for v in vectors
        )
        if any(row):
            rows.add(row)
    return [r for r in rows if not _dominated_row(r, rows)]


def domination_constant_exact(
    xs: VectorSequence,
    ys: VectorSequence,
    dim_bound: int = EXACT_DIM_BOUND,
) -> DominationValue:
    """Least C with (x_n) <=_C (y_n), or INF when the y-side seminorm kills a
    combination the x-side does not."""
    if len(xs) != len(ys):
        raise DominationError("sequences must have equal length")
    t = len(xs)
    if t > dim_bound:
        raise DominationError(f"exact mode limited to {dim_bound} vectors")

    if (
        is_polyhedral(xs.space)
        and is_polyhedral(ys.space)
        and _nonneg_disjoint(xs)
        and _nonneg_disjoint(ys)
    ):
        # both sides are 1-unconditional in the coefficients, so the maximum
        # lives on the positive orthant and unsigned functionals suffice
        y_rows = _unsigned_rows(ys.space, ys.items)
        x_rows = _unsigned_rows(xs.space, xs.items)
        best: Mag = MAG_ZERO
        best_wit: Optional[tuple[Fraction, ...]] = None
        for c in x_rows:
            val, wit = _support_function_nonneg(y_rows, c)
            if Mag.of(val) > best:
                best = Mag.of(val)
                best_wit = tuple(wit) if wit is not None else None
        return DominationValue(best, best_wit)

    rows = _functional_rows(ys.space, ys.items)

    kernel = nullspace(rows, t) if rows else [
        [Fraction(i == j) for j in range(t)] for i in range(t)
    ]
    for v in kernel:
        z = combine(xs.items, v)
        if norm(xs.space, z) > 0:
            return DominationValue(INF, tuple(v))

    if not rows:
        return DominationValue(MAG_ZERO, None)

    if is_polyhedral(xs.space):
        objectives = _functional_rows(xs.space, xs.items)
        best = MAG_ZERO
        best_wit = None
        for c in objectives:
            val, wit = support_function(rows, list(c))
            if Mag.of(val) > best:
                best = Mag.of(val)
                best_wit = tuple(wit) if wit is not None else None
        return DominationValue(best, best_wit)

    if isinstance(xs.space, Lp):
        return _lp_left_constant(xs, rows)

    raise DominationError(
        f"exact mode needs a polyhedral or disjoint-support Lp left space, got "
        f"{format_space(xs.space)}"
    )


def _support_function_nonneg(
    rows: list[tuple[Fraction, ...]], c: tuple[Fraction, ...]
) -> tuple[Fraction, Optional[list[Fraction]]]:
    """max c.a over {a >= 0 : row.a <= 1 for all rows}, rows and c >= 0."""
    from .linprog import solve_lp

    d = len(c)
    r = len(rows)
    # min 1.l  s.t.  U^T l - s = c,  l, s >= 0   (dual of the orthant LP)
    a_mat = [
        [rows[j][i] for j in range(r)] + [Fraction(-(k == i)) for k in range(d)]
        for i in range(d)
    ]
    cost = [Fraction(1)] * r + [Fraction(0)] * d
    res = solve_lp(a_mat, list(c), cost)
    if res.status != "optimal":
        raise DominationError(f"unexpected LP status {res.status}")
    return res.objective, res.duals


def _lp_left_constant(xs: VectorSequence, rows: list[tuple[Fraction, ...]]) -> DominationValue:
    """Exact max of an l_p norm over the domination polytope.

    Needs pairwise disjoint supports so that |sum a_n x_n|_p^p splits as
    sum |a_n|^p d_n; then the objective is unconditional and the maximum is
    attained at a vertex of the positive part {a >= 0, W+ a <= 1}.
    """
    t = len(xs)
    seen: set[int] = set()
    for v in xs.items:
        if seen & set(v.support):
            raise DominationError("Lp left side requires pairwise disjoint supports")
        seen |= set(v.support)
    p = xs.space.p
    weights = [
        sum((abs(c) ** p for _, c in v.entries), Fraction(0)) for v in xs.items
    ]
    pos = {tuple(abs(c) for c in row) for row in rows}
    pos_rows = [r for r in pos if not _dominated_row(r, pos)]
    constraints = pos_rows + [
        tuple(Fraction(-(i == j)) for j in range(t)) for i in range(t)
    ]
    rhs = [Fraction(1)] * len(pos_rows) + [Fraction(0)] * t
    import math

    if math.comb(len(constraints), t) > 200_000:
        raise DominationError(
            "vertex enumeration budget exceeded for the Lp left space"
        )
    best = Fraction(0)
    best_wit: Optional[tuple[Fraction, ...]] = None
    for subset in itertools.combinations(range(len(constraints)), t):
        a_mat = [list(constraints[k]) for k in subset]
        b_vec = [rhs[k] for k in subset]
        sol = solve_square(a_mat, b_vec)
        if sol is None:
            continue
        if any(x < 0 for x in sol):
            continue
        if any(
            sum((c * x for c, x in zip(row, sol)), Fraction(0)) > 1 for row in pos_rows
        ):
            continue
        value = sum((w * x**p for w, x in zip(weights, sol)), Fraction(0))
        if value > best:
            best = value
            best_wit = tuple(sol)
    return DominationValue(Mag(best, p), best_wit)


def _dominated_row(row: tuple[Fraction, ...], pool) -> bool:
    return any(r != row and all(a <= b for a, b in zip(row, r)) for r in pool)


@dataclass
class LowerBoundResult:
    value: "Mag | _Infinity"
    witness: Optional[tuple[Fraction, ...]]
    status: str  # 'ok' | 'indeterminate'


def domination_lower_bound(
    xs: VectorSequence,
    ys: VectorSequence,
    trials: int = 100,
    seed: int = 0,
) -> LowerBoundResult:
    """Best ratio |sum a x| / |sum a y| over sampled coefficient vectors.

    Always a valid lower bound for the least domination constant; exact
    ratios, deterministic for a fixed seed.
    """
    import random

    if len(xs) != len(ys):
        raise DominationError("sequences must have equal length")
    t = len(xs)
    rng = random.Random(seed)
    candidates: list[tuple[Fraction, ...]] = []
    if 3**t <= 2187:
        for pattern in itertools.product((0, 1, -1), repeat=t):
            if any(pattern):
                candidates.append(tuple(Fraction(s) for s in pattern))
    for _ in range(trials):
        candidates.append(
            tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(t))
        )

    best: Optional[Mag] = None
    best_wit: Optional[tuple[Fraction, ...]] = None
    saw_value = False

    def ratio(a: tuple[Fraction, ...]):
        num = norm(xs.space, combine(xs.items, a))
        den = norm(ys.space, combine(ys.items, a))
        if den == MAG_ZERO:
            return INF if num > MAG_ZERO else None
        return num / den

    for a in candidates:
        r = ratio(a)
        if r is None:
            continue
        saw_value = True
        if isinstance(r, _Infinity):
            return LowerBoundResult(INF, a, "ok")
        if best is None or r > best:
            best, best_wit = r, a

    if best is None:
        if saw_value:
            return LowerBoundResult(MAG_ZERO, None, "ok")
        return LowerBoundResult(MAG_ZERO, None, "indeterminate")

    multipliers = [Fraction(1, 2), Fraction(2), Fraction(3, 2), Fraction(2, 3), Fraction(-1)]
    improved = True
    rounds = 0
    while improved and rounds < 4:
        improved = False
        rounds += 1
        for i in range(t):
            for mult in multipliers:
                cand = list(best_wit)
                cand[i] = cand[i] * mult if cand[i] != 0 else mult - 1
                cand_t = tuple(cand)
                r = ratio(cand_t)
                if r is None or isinstance(r, _Infinity):
                    if isinstance(r, _Infinity):
                        return LowerBoundResult(INF, cand_t, "ok")
                    continue
                if r > best:
                    best, best_wit = r, cand_t
                    improved = True
    return LowerBoundResult(best, best_wit, "ok")


@dataclass
class RightDominanceReport:
    ok: bool
    constant: "Mag | _Infinity"
    witness: Optional[tuple[Fraction, ...]]


def right_dominance_defect(
    space: SpaceSpec, m: FinSet, l: FinSet, r: Fraction, engine: str = "auto"
) -> RightDominanceReport:
    """Exact check that (g_m) is r-dominated by (g_l) for a spread m <= l.

    For combinatorial spaces a pull-back argument gives the constant without
    optimization: it is 1 exactly when each family member inside m maps into
    a family member along l (engine='auto'); engine='lp' forces the general
    exact route.
    """
    from .families import is_spread_of
    from .norms import Combinatorial

    m, l = as_finset(m), as_finset(l)
    if not is_spread_of(l, m):
        raise DominationError("l must be a spread of m")
    if not m:
        return RightDominanceReport(True, MAG_ZERO, None)
    if engine == "auto" and isinstance(space, Combinatorial):
        fam = space.fam
        positions = {v: i for i, v in enumerate(m)}
        pulled_back_ok = True
        for f in enumerate_family(fam, m[-1]):
            if not f or not set(f) <= set(m):
                continue
            image = tuple(l[positions[v]] for v in f)
            if not fam.member(image):
                pulled_back_ok = False
                break
        if pulled_back_ok:
            constant = Mag.of(Fraction(1))
            ok = constant <= Mag.of(Fraction(r))
            witness = tuple(
                Fraction(1) if i == 0 else Fraction(0) for i in range(len(m))
            )
            return RightDominanceReport(ok, constant, witness)
        # fall through to the exact optimization for the true constant
    xs = VectorSequence(tuple(Vector.basis(i) for i in m), space)
    ys = VectorSequence(tuple(Vector.basis(i) for i in l), space)
    res = domination_constant_exact(xs, ys)
    if not res.finite:
        return RightDominanceReport(False, INF, res.witness)
    return RightDominanceReport(res.value <= Mag.of(Fraction(r)), res.value, res.witness)


class DominationOracle:
    """Memoized exact domination checks of rho-subsequences against basis
    subsequences of the g space."""

    def __init__(self, rho: VectorSequence, g_space: SpaceSpec):
        self.rho = rho
        self.g_space = g_space
        self._cache: dict[tuple[FinSet, FinSet], DominationValue] = {}

    def constant(self, m: FinSet, l: FinSet) -> DominationValue:
        key = (m, l)
        if key not in self._cache:
            xs = self.rho.subsequence(m)
            ys = VectorSequence(
                tuple(Vector.basis(i) for i in l), self.g_space
            )
            self._cache[key] = domination_constant_exact(xs, ys)
        return self._cache[key]


@dataclass(frozen=True)
class Certificate:
    """Finite-depth witness for {(M(F), L(F)) : F in F_xi} within T(rho, C).

    xi None means the all-finite-sets sentinel family.
    """

    xi: Optional[Ordinal]
    M: FinSet
    L: FinSet
    C: Fraction
    g_space: SpaceSpec
    rho_ref: str = ""
    verified: bool = False

    def __post_init__(self) -> None:
        as_finset(self.M)
        as_finset(self.L)
        if len(self.M) != len(self.L):
            raise DominationError("|M| and |L| must agree")
        if self.C < 0:
            raise DominationError("C must be positive")

    @property
    def depth(self) -> int:
        return len(self.M)

    def family(self, q: QSchedule = Q_DEFAULT) -> Family:
        return AllFinite() if self.xi is None else FineSchreier(self.xi, q)

    def to_json(self) -> dict:
        return {
            "xi": "ALL" if self.xi is None else format_ordinal(self.xi),
            "M": list(self.M),
            "L": list(self.L),
            "C": format_fraction(self.C),
            "N": self.depth,
            "g_space": format_space(self.g_space),
            "rho": self.rho_ref,
            "verified": self.verified,
        }

    @staticmethod
    def from_json(data: dict, q: QSchedule = Q_DEFAULT) -> "Certificate":
        # the verified flag is never trusted from serialized input; only
        # verify_certificate sets it
        xi = None if data["xi"] == "ALL" else parse_ordinal(data["xi"])
        cert = Certificate(
            xi,
            as_finset(data["M"]),
            as_finset(data["L"]),
            parse_fraction(str(data["C"])),
            parse_space(data["g_space"], q),
            data.get("rho", ""),
        )
        if "N" in data and int(data["N"]) != cert.depth:
            raise DominationError("declared depth N disagrees with |M|")
        return cert

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @staticmethod
    def loads(text: str, q: QSchedule = Q_DEFAULT) -> "Certificate":
        return Certificate.from_json(json.loads(text), q)


@dataclass
class Violation:
    F: FinSet
    scalars: Optional[tuple[Fraction, ...]]
    ratio: "Mag | _Infinity"


@dataclass
class VerifyReport:
    ok: bool
    worst_ratio: "Mag | _Infinity"
    violation: Optional[Violation] = None
    checked: int = 0


def verify_certificate(
    cert: Certificate,
    rho: VectorSequence,
    q: QSchedule = Q_DEFAULT,
    oracle: Optional[DominationOracle] = None,
) -> VerifyReport:
    """Check every family member F within {1..depth}: the rho subsequence at
    M(F) is C-dominated by the g-basis subsequence at L(F).

    Restricting scalars shows subsets inherit domination, so only maximal
    members are tested; the worst constant over them is the worst overall.
    """
    n = cert.depth
    if n == 0:
        return VerifyReport(True, MAG_ZERO, None, 0)
    if max(cert.M) > len(rho):
        raise DominationError("certificate M exceeds the rho prefix")
    oracle = oracle or DominationOracle(rho, cert.g_space)
    fam = cert.family(q)
    worst: "Mag | _Infinity" = MAG_ZERO
    worst_violation: Optional[Violation] = None
    checked = 0
    for f in maximal_members(fam, n):
        if not f:
            continue
        m_f = tuple(cert.M[i - 1] for i in f)
        l_f = tuple(cert.L[i - 1] for i in f)
        res = oracle.constant(m_f, l_f)
        checked += 1
        if not res.finite:
            return VerifyReport(False, INF, Violation(f, res.witness, INF), checked)
        if isinstance(worst, _Infinity) or res.value > worst:
            worst = res.value
            if res.value > Mag.of(Fraction(cert.C)):
                worst_violation = Violation(f, res.witness, res.value)
    ok = worst_violation is None
    return VerifyReport(ok, worst, worst_violation, checked)


@dataclass
class SearchOutcome:
    status: str  # 'found' | 'exhausted' | 'budget'
    certificate: Optional[Certificate] = None
    nodes: int = 0
    kill_bound: "Mag | _Infinity | None" = None
    kill_witness: Optional[Violation] = None


def search_certificate(
    rho: VectorSequence,
    xi: Optional[Ordinal],
    C: Fraction,
    depth: int,
    g_space: Optional[SpaceSpec] = None,
    q: QSchedule = Q_DEFAULT,
    l_max: Optional[int] = None,
    constraint: Optional[FinSet] = None,
    node_budget: int = 1_000_000,
    time_budget: float = 60.0,
    oracle: Optional[DominationOracle] = None,
) -> SearchOutcome:
    """Depth-first branch-and-bound for (M, L) with smallest indices first.

    A branch dies as soon as some family member inside the chosen prefix
    fails the exact check at C; the minimum of the killing constants over a
    fully exhausted search is a valid lower bound on any depth-`depth`
    constant within the index box.
    """
    g_space = g_space or rho.space
    if depth < 1:
        raise DominationError("depth must be >= 1")
    if len(rho) < depth:
        raise DominationError("rho prefix shorter than requested depth")
    l_cap = l_max if l_max is not None else max(len(rho), depth)
    fam = AllFinite() if xi is None else FineSchreier(xi, q)
    members = enumerate_family(fam, depth)
    by_max: dict[int, list[FinSet]] = {k: [] for k in range(1, depth + 1)}
    for f in members:
        if f:
            by_max[f[-1]].append(f)
    m_pool = list(range(1, len(rho) + 1))
    if constraint is not None:
        allowed = set(constraint)
        m_pool = [m for m in m_pool if m in allowed]
    oracle = oracle or DominationOracle(rho, g_space)
    c_mag = Mag.of(Fraction(C))

    nodes = 0
    deadline = time.monotonic() + time_budget
    kill_bound: "Mag | _Infinity | None" = None
    kill_witness: Optional[Violation] = None
    m_sel: list[int] = []
    l_sel: list[int] = []

    def note_kill(value: "Mag | _Infinity", viol: Violation) -> None:
        nonlocal kill_bound, kill_witness
        if kill_bound is None or (
            not isinstance(value, _Infinity)
            and (isinstance(kill_bound, _Infinity) or value < kill_bound)
        ):
            kill_bound = value
            kill_witness = viol

    def level_ok(k: int) -> Optional[Violation]:
        for f in by_max[k]:
            m_f = tuple(m_sel[i - 1] for i in f)
            l_f = tuple(l_sel[i - 1] for i in f)
            res = oracle.constant(m_f, l_f)
            if not res.finite:
                return Violation(f, res.witness, INF)
            if res.value > c_mag:
                return Violation(f, res.witness, res.value)
        return None

    def descend(k: int) -> bool:
        nonlocal nodes
        if k > depth:
            return True
        m_start = m_sel[-1] + 1 if m_sel else 1
        l_start = l_sel[-1] + 1 if l_sel else 1
        for m in (v for v in m_pool if v >= m_start):
            for l in range(l_start, l_cap + 1):
                nodes += 1
                if nodes > node_budget or time.monotonic() > deadline:
                    raise SearchBudgetError()
                m_sel.append(m)
                l_sel.append(l)
                viol = level_ok(k)
                if viol is None:
                    if descend(k + 1):
                        return True
                else:
                    note_kill(viol.ratio, viol)
                m_sel.pop()
                l_sel.pop()
        return False

    try:
        if descend(1):
            cert = Certificate(
                xi, tuple(m_sel), tuple(l_sel), Fraction(C), g_space, rho.name
            )
            report = verify_certificate(cert, rho, q, oracle)
            if not report.ok:
                raise AssertionError("search produced an unverifiable certificate")
            return SearchOutcome("found", replace(cert, verified=True), nodes)
        return SearchOutcome("exhausted", None, nodes, kill_bound, kill_witness)
    except SearchBudgetError:
        return SearchOutcome("budget", None, nodes, None, None)


@dataclass
class TTree:
    nodes: set[tuple[tuple[int, int], ...]]

    def contains(self, pairs) -> bool:
        return tuple(pairs) in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


def build_t_tree(
    rho: VectorSequence,
    C: Fraction,
    g_space: SpaceSpec,
    max_index: int,
    max_depth: int,
    oracle: Optional[DominationOracle] = None,
) -> TTree:
    """Explicit truncation of T(rho, C): increasing pairings (m_n, l_n) whose
    rho-subsequence passes the exact C-domination check; closed under initial
    segments by construction."""
    oracle = oracle or DominationOracle(rho, g_space)
    c_mag = Mag.of(Fraction(C))
    m_cap = min(len(rho), max_index)
    nodes: set[tuple[tuple[int, int], ...]] = {()}
    frontier: list[tuple[tuple[int, int], ...]] = [()]
    while frontier:
        nxt: list[tuple[tuple[int, int], ...]] = []
        for node in frontier:
            if len(node) >= max_depth:
                continue
            m_start = node[-1][0] + 1 if node else 1
            l_start = node[-1][1] + 1 if node else 1
            for m in range(m_start, m_cap + 1):
                for l in range(l_start, max_index + 1):
                    cand = node + ((m, l),)
                    ms = tuple(p[0] for p in cand)
                    ls = tuple(p[1] for p in cand)
                    res = oracle.constant(ms, ls)
                    if res.finite and res.value <= c_mag:
                        nodes.add(cand)
                        nxt.append(cand)
        frontier = nxt
    return TTree(nodes)


@dataclass
class GammaBracket:
    xi: Optional[Ordinal]
    lower: Fraction
    upper: "Fraction | _Infinity"
    depth: int
    certificate: Optional[Certificate] = None
    lower_witness: Optional[Violation] = None
    budget_report: dict = field(default_factory=dict)


def gamma_bracket(
    rho: VectorSequence,
    xi: Optional[Ordinal],
    depth: int,
    resolution: Fraction = Fraction(1, 16),
    q: QSchedule = Q_DEFAULT,
    l_max: Optional[int] = None,
    node_budget: int = 1_000_000,
    time_budget: float = 60.0,
    g_space: Optional[SpaceSpec] = None,
) -> GammaBracket:
    """Bracket the least depth-`depth` certificate constant by bisection.

    Upper bounds come from verified certificates (sharpened to their worst
    observed ratio); lower bounds from exhausted searches (sharpened to the
    smallest killing constant).  Bounds are statements about the finite
    index box only, as recorded in the budget report.
    """
    g_space = g_space or rho.space
    oracle = DominationOracle(rho, g_space)
    resolution = Fraction(resolution)
    budget = {"nodes": 0, "l_max": l_max if l_max is not None else max(len(rho), depth)}

    lower = Fraction(0)
    lower_witness: Optional[Violation] = None
    upper: "Fraction | _Infinity" = INF
    cert: Optional[Certificate] = None

    def attempt(c_val: Fraction) -> SearchOutcome:
        remaining = node_budget - budget["nodes"]
        if remaining <= 0:
            return SearchOutcome("budget")
        out = search_certificate(
            rho, xi, c_val, depth, g_space, q, l_max,
            node_budget=remaining, time_budget=time_budget, oracle=oracle,
        )
        budget["nodes"] += out.nodes
        return out

    def absorb(out: SearchOutcome, c_val: Fraction) -> bool:
        """Update the bracket; False when the budget ran dry."""
        nonlocal lower, upper, cert, lower_witness
        if out.status == "found":
            report = verify_certificate(out.certificate, rho, q, oracle)
            worst = report.worst_ratio
            new_upper = c_val
            if not isinstance(worst, _Infinity) and worst.is_rational:
                new_upper = min(new_upper, worst.as_fraction())
            if isinstance(upper, _Infinity) or new_upper < upper:
                upper = new_upper
                cert = out.certificate
            return True
        if out.status == "exhausted":
            new_lower = c_val
            kb = out.kill_bound
            if kb is not None and not isinstance(kb, _Infinity) and kb.is_rational:
                new_lower = max(new_lower, kb.as_fraction())
            if new_lower > lower:
                lower = new_lower
                lower_witness = out.kill_witness
            return True
        budget["exhausted"] = True
        return False

    probe = Fraction(1)
    cap = Fraction(2**16)
    while isinstance(upper, _Infinity) and probe <= cap:
        out = attempt(probe)
        if not absorb(out, probe):
            break
        probe *= 2

    while (
        not isinstance(upper, _Infinity)
        and upper - lower > resolution
        and "exhausted" not in budget
    ):
        mid = (lower + upper) / 2
        out = attempt(mid)
        if not absorb(out, mid):
            break

    return GammaBracket(xi, lower, upper, depth, cert, lower_witness, budget)
