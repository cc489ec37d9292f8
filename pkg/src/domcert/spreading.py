"""Finite-stage spreading model estimation and the omega-level bridge.

The iterated limit lim_{l_1} ... lim_{l_m} |sum a_n x_{l_n}| is replaced by a
geometric index schedule with stability detection: stage s evaluates indices
L(s*B^n).  For combinatorial spaces the admissible subsets of {1..m} are
monotone along spreads, so exact tail values are available: a subset
eventually contributes exactly when the family contains some set of its
cardinality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .domination import (
    Certificate,
    INF,
    VectorSequence,
    _Infinity,
    search_certificate,
    verify_certificate,
)
from .families import QSchedule, Q_DEFAULT, Schreier, family_cardinality_bound
from .norms import Combinatorial, SpaceSpec, norm
from .ordinals import Ordinal
from .rationals import Mag, MAG_ZERO, mag_max
from .vectors import Vector, combine


class SpreadingError(ValueError):
    pass


@dataclass(frozen=True)
class SubseqSpec:
    """Strictly increasing index map: identity, affine n -> start + step*(n-1),
    or an explicit prefix continued affinely from its last entry."""

    kind: str = "identity"
    start: int = 1
    step: int = 1
    prefix: tuple[int, ...] = ()

    def __call__(self, n: int) -> int:
        if n < 1:
            raise SpreadingError("subsequence index starts at 1")
        if self.kind == "identity":
            return n
        if self.kind == "affine":
            return self.start + self.step * (n - 1)
        if self.kind == "explicit":
            if n <= len(self.prefix):
                return self.prefix[n - 1]
            if not self.prefix:
                return n
            k = n - len(self.prefix)
            return self.prefix[-1] + self.step * k
        raise SpreadingError(f"unknown subsequence kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "identity":
            return "identity"
        if self.kind == "affine":
            return f"affine({self.start},{self.step})"
        return f"explicit({','.join(map(str, self.prefix))};+{self.step})"

    @staticmethod
    def parse(text: str) -> "SubseqSpec":
        text = text.strip()
        if text in ("identity", "id"):
            return SubseqSpec()
        if text.startswith("affine(") and text.endswith(")"):
            start, step = (int(v) for v in text[7:-1].split(","))
            return SubseqSpec("affine", start, step)
        values = tuple(int(v) for v in text.split(",") if v.strip())
        return SubseqSpec("explicit", prefix=values)


Generator = Callable[[int], Vector]


def basis_generator(space: SpaceSpec) -> Generator:
    return lambda n: Vector.basis(n)


def default_probes(m: int, seed: int = 0, extra: int = 64) -> list[tuple[Fraction, ...]]:
    """{0,1,-1}-vectors (simplex corners included), plus seeded rationals."""
    probes: list[tuple[Fraction, ...]] = []
    for pattern in itertools.product((0, 1, -1), repeat=m):
        if any(pattern):
            probes.append(tuple(Fraction(v) for v in pattern))
    rng = random.Random(seed)
    for _ in range(extra):
        probes.append(
            tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(m))
        )
    return probes


@dataclass
class SpreadingTable:
    m: int
    stage: int
    probes: tuple[tuple[Fraction, ...], ...]
    values: dict[tuple[Fraction, ...], Mag]
    probe_description: str = ""
    exact: bool = False
    spread_invariant_checked: bool = False

    def value(self, probe) -> Mag:
        return self.values[tuple(Fraction(v) for v in probe)]

    def to_json(self) -> dict:
        from .rationals import format_fraction

        return {
            "m": self.m,
            "stage": self.stage,
            "probes": [[format_fraction(c) for c in p] for p in self.probes],
            "values": [str(self.values[p]) for p in self.probes],
            "exact": self.exact,
        }


@dataclass
class EstimateReport:
    tables: list[SpreadingTable]
    stable: bool
    max_discrepancy_desc: str
    schedule_base: int


def estimate_spreading(
    space: SpaceSpec,
    gen: Generator,
    subseq: SubseqSpec,
    m: int,
    stages: Sequence[int],
    probes: Optional[Sequence[Sequence[Fraction]]] = None,
    schedule_base: int = 2,
    seed: int = 0,
) -> EstimateReport:
    """Evaluate |sum a_n x_{L(s*B^n)}| per probe at each stage offset s."""
    if m < 1:
        raise SpreadingError("m must be >= 1")
    probes = (
        [tuple(Fraction(v) for v in p) for p in probes]
        if probes is not None
        else default_probes(m, seed)
    )
    for p in probes:
        if len(p) != m:
            raise SpreadingError("probe length must equal m")
    tables = []
    for s in stages:
        indices = [subseq(s * schedule_base**n) for n in range(1, m + 1)]
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise SpreadingError("index schedule must be strictly increasing")
        vectors = [gen(i) for i in indices]
        values = {
            p: norm(space, combine(vectors, p)) for p in map(tuple, probes)
        }
        tables.append(
            SpreadingTable(m, s, tuple(map(tuple, probes)), values, "default", False)
        )
    stable = len(tables) >= 2 and all(
        tables[-1].values[p] == tables[-2].values[p] for p in tables[-1].probes
    )
    if stable:
        desc = "0 (last two stages exactly equal)"
    elif len(tables) >= 2:
        diffs = [
            abs(float(tables[-1].values[p]) - float(tables[-2].values[p]))
            for p in tables[-1].probes
        ]
        desc = f"~{max(diffs):.3g} (approximate; values not all equal)"
    else:
        desc = "n/a (single stage)"
    return EstimateReport(tables, stable, desc, schedule_base)


@dataclass
class ExactSpreadingResult:
    value: Mag
    admissible_sizes: int | None
    stability_threshold: Optional[int]
    stable: bool


def exact_spreading_combinatorial(
    xi: Ordinal,
    subseq: SubseqSpec,
    m: int,
    a: Sequence[Fraction],
    q: QSchedule = Q_DEFAULT,
    scan_bound: int = 64,
) -> ExactSpreadingResult:
    """Exact iterated-limit value for the Schreier-space basis along a
    subsequence.

    Far enough out, a subset of {1..m} is admissible exactly when the family
    contains some set of its size (spreads preserve membership), so the limit
    is the best mass of min(m, maxcard) coefficients; the returned threshold
    is a stage at which the admissible pattern has already stabilized.
    """
    if m < 1 or len(a) != m:
        raise SpreadingError("need m >= 1 coefficients")
    fam = Schreier(xi, q)
    coeffs = [abs(Fraction(v)) for v in a]
    bound = family_cardinality_bound(fam)
    cap = m if bound is None else min(m, bound)
    ordered = sorted(coeffs, reverse=True)
    value = sum(ordered[:cap], Fraction(0))

    # find a witness set of each needed size, then a stage past its maximum
    witness_max = 0
    for size in range(1, cap + 1):
        found = None
        n = max(2 * size, 2)
        while found is None and n <= scan_bound:
            for f in itertools.combinations(range(1, n + 1), size):
                if fam.member(f):
                    found = f
                    break
            n *= 2
        if found is None:
            return ExactSpreadingResult(Mag.of(value), cap, None, False)
        witness_max = max(witness_max, found[-1])
    stage = 1
    while subseq(2 * stage) <= witness_max and stage <= scan_bound:
        stage += 1
    return ExactSpreadingResult(Mag.of(value), cap, stage, True)


@dataclass
class EquivalenceResult:
    lower: Mag
    upper: "Mag | _Infinity"
    exact: bool


def equivalence_constant(t1: SpreadingTable, t2: SpreadingTable) -> EquivalenceResult:
    """Smallest K with mutual K-domination of the two tables over the shared
    probes: max over probes of the two directional ratios."""
    if t1.m != t2.m or t1.probes != t2.probes:
        raise SpreadingError("tables must share m and the probe set")
    best: Mag = MAG_ZERO
    for p in t1.probes:
        v1, v2 = t1.values[p], t2.values[p]
        if v1 == MAG_ZERO and v2 == MAG_ZERO:
            continue
        if v1 == MAG_ZERO or v2 == MAG_ZERO:
            return EquivalenceResult(MAG_ZERO, INF, t1.exact and t2.exact)
        best = mag_max([best, v1 / v2, v2 / v1])
    return EquivalenceResult(best, best, t1.exact and t2.exact)


def exact_table(
    xi: Ordinal,
    subseq: SubseqSpec,
    m: int,
    probes: Sequence[Sequence[Fraction]],
    q: QSchedule = Q_DEFAULT,
) -> SpreadingTable:
    values = {}
    threshold = 0
    for p in map(tuple, probes):
        res = exact_spreading_combinatorial(xi, subseq, m, p, q)
        if not res.stable:
            raise SpreadingError("tail stability not detected")
        values[p] = res.value
        threshold = max(threshold, res.stability_threshold or 0)
    return SpreadingTable(
        m, threshold, tuple(map(tuple, probes)), values, "exact", True
    )


@dataclass
class BridgeReport:
    direction_a: dict
    direction_b: dict
    inconclusive: bool

    @property
    def ok(self) -> bool:
        return (
            not self.inconclusive
            and self.direction_a.get("pass", False)
            and self.direction_b.get("pass", False)
        )


def check_main2_bridge(
    rho: VectorSequence,
    g_xi: Ordinal,
    C: Fraction,
    depth: int,
    q: QSchedule = Q_DEFAULT,
    r: Fraction = Fraction(1),
    tolerance: Fraction = Fraction(0),
    m: int = 3,
    seed: int = 0,
    node_budget: int = 500_000,
) -> BridgeReport:
    """Finite shadow of the two checkable directions of the omega-level
    equivalence between certificates and spreading-model domination.

    (a) a verified omega-certificate at C forces the estimated spreading
        table of rho to be (r*C + tolerance)-dominated by the exact table of
        the g-basis subsequence it uses;
    (b) spreading-table domination at C plus stage stability yields a
        verified omega-certificate at 1 + 2*C + tolerance.
    """
    C = Fraction(C)
    g_space = Combinatorial(Schreier(g_xi, q))
    from .ordinals import OMEGA

    for n in range(1, depth):
        if q(n) > q(n + 1):
            raise SpreadingError("q schedule must be non-decreasing")

    probes = default_probes(m, seed, extra=16)
    report_a: dict = {}
    report_b: dict = {}
    inconclusive = False

    # direction (a): certificate implies table domination
    out = search_certificate(
        rho, OMEGA, C, depth, g_space, q, node_budget=node_budget
    )
    if out.status != "found":
        report_a = {"pass": False, "reason": f"no certificate at C={C} ({out.status})"}
    else:
        cert = out.certificate
        stages_ok = [s for s in (1, 2, 3) if cert.M and max(
            s * 2**n for n in range(1, m + 1)
        ) <= len(rho)]
        if len(stages_ok) < 2:
            report_a = {"pass": False, "reason": "rho prefix too short for stages"}
            inconclusive = True
        else:
            est = estimate_spreading(
                rho.space,
                lambda n: rho.items[n - 1],
                SubseqSpec(),
                m,
                stages_ok,
                probes,
            )
            g_sub = SubseqSpec("explicit", prefix=cert.L)
            gtab = exact_table(g_xi, g_sub, m, probes, q)
            bound = Mag.of(Fraction(r) * C + tolerance)
            bad = [
                p
                for p in gtab.probes
                if not est.tables[-1].values[p] <= bound * gtab.values[p]
            ]
            report_a = {
                "pass": not bad and est.stable,
                "certificate": cert.to_json(),
                "stable": est.stable,
                "violating_probes": [[str(c) for c in p] for p in bad],
            }
            if not est.stable:
                inconclusive = True

    # direction (b): table domination + stability implies a certificate
    stages = [s for s in (1, 2, 3) if s * 2**m <= len(rho)]
    if len(stages) < 2:
        report_b = {"pass": False, "reason": "rho prefix too short for stability"}
        inconclusive = True
    else:
        est = estimate_spreading(
            rho.space, lambda n: rho.items[n - 1], SubseqSpec(), m, stages, probes
        )
        gtab = exact_table(g_xi, SubseqSpec(), m, probes, q)
        if not est.stable:
            report_b = {"pass": False, "reason": "stage stability not reached"}
            inconclusive = True
        else:
            ratios = []
            for p in gtab.probes:
                v_rho, v_g = est.tables[-1].values[p], gtab.values[p]
                if v_g == MAG_ZERO:
                    if v_rho > MAG_ZERO:
                        report_b = {"pass": False, "reason": "g table vanishes"}
                        break
                    continue
                ratios.append(v_rho / v_g)
            else:
                c_dom = mag_max(ratios)
                if not c_dom.is_rational:
                    report_b = {"pass": False, "reason": "irrational table ratio"}
                    inconclusive = True
                else:
                    c_target = 1 + 2 * c_dom.as_fraction() + tolerance
                    offset = max(gtab.stage, 1)
                    max_m = offset + depth
                    if max_m > len(rho):
                        report_b = {
                            "pass": False,
                            "reason": "rho prefix too short for the shifted certificate",
                        }
                        inconclusive = True
                    else:
                        m_idx = tuple(range(offset + 1, offset + depth + 1))
                        cert_b = Certificate(
                            OMEGA, m_idx, m_idx, c_target, g_space, rho.name
                        )
                        rep = verify_certificate(cert_b, rho, q)
                        report_b = {
                            "pass": rep.ok,
                            "table_domination": str(c_dom),
                            "certificate_constant": str(c_target),
                            "worst_ratio": str(rep.worst_ratio),
                        }
    return BridgeReport(report_a, report_b, inconclusive)
