"""Exact norm evaluation on finitely supported vectors.

Spaces:

  Combinatorial(fam)   sup over members F of fam of the l1 mass on F.
  PConvex(base, p)     base norm of the coordinatewise p-th powers, p-th root.
  Baernstein(xi, p)    sup over consecutive Schreier(xi) blocks F_1 < F_2 < ...
                       of the l_p sum of their l1 masses.
  Tsirelson(xi, theta) implicit norm: least fixed point of
                       V(n)(x) = max(sup-norm, theta * sup over admissible
                       consecutive interval systems of the sum of n(I x)).
  C0 / L1 / Lp(p)      classical reference norms.

Values are returned as `Mag`: rational when the norm is rational-valued,
otherwise an exact representation of its integer p-th power.  Irrational
roots only arise for PConvex, Baernstein and Lp with p >= 2; there p must be
an integer so that p-th powers stay rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .families import (
    Family,
    FinSet,
    QSchedule,
    Q_DEFAULT,
    Schreier,
    format_family,
    parse_family,
)
from .ordinals import Ordinal, format_ordinal, parse_ordinal
from .rationals import Mag, MAG_ZERO, format_fraction, parse_fraction
from .vectors import Vector


class SpaceError(ValueError):
    pass


class SpaceSpec:
    def __str__(self) -> str:
        return format_space(self)


@dataclass(frozen=True)
class Combinatorial(SpaceSpec):
    fam: Family


@dataclass(frozen=True)
class PConvex(SpaceSpec):
    base: SpaceSpec
    p: int

    def __post_init__(self) -> None:
        if self.p < 2:
            raise SpaceError("p-convexification needs an integer p >= 2")


@dataclass(frozen=True)
class Baernstein(SpaceSpec):
    xi: Ordinal
    p: int
    q: QSchedule = Q_DEFAULT

    def __post_init__(self) -> None:
        if self.p < 2:
            raise SpaceError("Baernstein spaces need an integer p >= 2")


@dataclass(frozen=True)
class Tsirelson(SpaceSpec):
    xi: Ordinal
    theta: Fraction
    q: QSchedule = Q_DEFAULT

    def __post_init__(self) -> None:
        if not (0 < self.theta < 1):
            raise SpaceError("theta must lie in (0,1)")


@dataclass(frozen=True)
class C0(SpaceSpec):
    pass


@dataclass(frozen=True)
class L1(SpaceSpec):
    pass


@dataclass(frozen=True)
class Lp(SpaceSpec):
    p: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise SpaceError("Lp needs an integer p >= 1")


def _family_sets_within(fam: Family, support: FinSet):
    """Members of fam consisting of support points.

    Hereditary families are prefix closed, so extension search with pruning
    is exact; explicit literals are filtered directly.
    """
    from .families import Explicit

    if isinstance(fam, Explicit):
        pool = set(support)
        for f in sorted(fam.members, key=lambda t: (len(t), t)):
            if all(x in pool for x in f):
                yield f
        return
    yield ()

    def extend(prefix: FinSet, rest: FinSet):
        for k, x in enumerate(rest):
            cand = prefix + (x,)
            if fam.member(cand):
                yield cand
                yield from extend(cand, rest[k + 1 :])

    yield from extend((), support)


def _combinatorial_norm(fam: Family, x: Vector) -> Fraction:
    coeffs = dict(x.entries)
    best = Fraction(0)
    for f in _family_sets_within(fam, x.support):
        mass = sum((abs(coeffs[i]) for i in f), Fraction(0))
        if mass > best:
            best = mass
    return best


def _check_singletons(fam: Family, support: FinSet) -> None:
    for i in support:
        if not fam.member((i,)):
            raise SpaceError(
                f"family {format_family(fam)} misses singleton {{{i}}}; "
                "the basis would not be normalized"
            )


def _baernstein_power(xi: Ordinal, p: int, q: QSchedule, x: Vector) -> Fraction:
    """Best sum of |F_i x|_1^p over consecutive Schreier(xi) blocks in the
    support, by dynamic programming left to right.  Skipped points are lost
    to later blocks, so the state is just the next usable position."""
    fam = Schreier(xi, q)
    supp = x.support
    coeffs = dict(x.entries)

    @lru_cache(maxsize=None)
    def best_from(i: int) -> Fraction:
        if i >= len(supp):
            return Fraction(0)
        value = best_from(i + 1)

        def explore(prefix: FinSet, mass: Fraction, last: int):
            # prefix is a family member; score it, then extend it
            nonlocal value
            scored = mass**p + best_from(last + 1)
            if scored > value:
                value = scored
            for j in range(last + 1, len(supp)):
                cand = prefix + (supp[j],)
                if fam.member(cand):
                    explore(cand, mass + abs(coeffs[supp[j]]), j)

        first = (supp[i],)
        if fam.member(first):
            explore(first, abs(coeffs[supp[i]]), i)
        return value

    return best_from(0)


class TsirelsonEngine:
    """Least-fixed-point Tsirelson norm on the interval projections of one
    vector.

    Single-interval systems never decide the supremum (theta < 1), so the
    value of a projection only depends on strictly shorter projections and
    the recursion is well founded.  `check_idempotent` replays one literal
    application of the defining operator over all interval systems,
    confirming the table is a fixed point.
    """

    SUPPORT_BOUND = 16

    def __init__(self, xi: Ordinal, theta: Fraction, x: Vector, q: QSchedule = Q_DEFAULT):
        if len(x.support) > self.SUPPORT_BOUND:
            raise SpaceError(
                f"Tsirelson evaluation bounded to supports of size "
                f"{self.SUPPORT_BOUND}"
            )
        self.fam = Schreier(xi, q)
        self.theta = theta
        self.supp = x.support
        self.coeffs = dict(x.entries)
        self._value: dict[tuple[int, int], Fraction] = {}

    def _systems(self, i: int, j: int, at_least_two: bool):
        """Admissible interval systems inside positions [i..j]: sequences of
        disjoint position intervals whose support minima form a Schreier set."""
        out: list[list[tuple[int, int]]] = []

        def extend(start: int, chosen: list[tuple[int, int]], mins: FinSet):
            if chosen and (len(chosen) >= 2 or not at_least_two):
                out.append(list(chosen))
            for a in range(start, j + 1):
                new_mins = mins + (self.supp[a],)
                if not self.fam.member(new_mins):
                    continue
                for b in range(a, j + 1):
                    chosen.append((a, b))
                    extend(b + 1, chosen, new_mins)
                    chosen.pop()

        extend(i, [], ())
        return out

    def value(self, i: int, j: int) -> Fraction:
        if (i, j) in self._value:
            return self._value[(i, j)]
        best = max(abs(self.coeffs[self.supp[k]]) for k in range(i, j + 1))
        for system in self._systems(i, j, at_least_two=True):
            total = sum((self.value(a, b) for a, b in system), Fraction(0))
            cand = self.theta * total
            if cand > best:
                best = cand
        self._value[(i, j)] = best
        return best

    def norm(self) -> Fraction:
        if not self.supp:
            return Fraction(0)
        return self.value(0, len(self.supp) - 1)

    def check_idempotent(self) -> bool:
        """One more application of the defining operator changes nothing."""
        self.norm()
        for (i, j), current in list(self._value.items()):
            sup_part = max(abs(self.coeffs[self.supp[k]]) for k in range(i, j + 1))
            best = sup_part
            for system in self._systems(i, j, at_least_two=False):
                cand = self.theta * sum(
                    (self._value[(a, b)] if (a, b) in self._value else self.value(a, b))
                    for a, b in system
                )
                if cand > best:
                    best = cand
            if best != current:
                return False
        return True


def tsirelson_norm(
    xi: Ordinal, theta: Fraction, x: Vector, q: QSchedule = Q_DEFAULT
) -> Fraction:
    return TsirelsonEngine(xi, theta, x, q).norm()


def norm(space: SpaceSpec, x: Vector) -> Mag:
    """Exact norm of x in the given space."""
    if x.is_zero:
        return MAG_ZERO
    if isinstance(space, C0):
        return Mag.of(x.max_abs())
    if isinstance(space, L1):
        return Mag.of(x.l1())
    if isinstance(space, Lp):
        if space.p == 1:
            return Mag.of(x.l1())
        total = sum((abs(c) ** space.p for _, c in x.entries), Fraction(0))
        return Mag(total, space.p)
    if isinstance(space, Combinatorial):
        _check_singletons(space.fam, x.support)
        return Mag.of(_combinatorial_norm(space.fam, x))
    if isinstance(space, PConvex):
        inner = norm(space.base, x.abs_powers(space.p))
        if not inner.is_rational:
            raise SpaceError("p-convexification needs a rational-valued base norm")
        return Mag(inner.as_fraction(), space.p)
    if isinstance(space, Baernstein):
        return Mag(_baernstein_power(space.xi, space.p, space.q, x), space.p)
    if isinstance(space, Tsirelson):
        return Mag.of(tsirelson_norm(space.xi, space.theta, x, space.q))
    raise SpaceError(f"unknown space {space!r}")


def is_polyhedral(space: SpaceSpec) -> bool:
    return isinstance(space, (Combinatorial, Tsirelson, C0, L1)) or (
        isinstance(space, Lp) and space.p == 1
    )


def _signed_variants(f: FinSet, coeffs: dict[int, Fraction]):
    for signs in itertools.product((1, -1), repeat=len(f)):
        yield Vector.of({i: s * coeffs[i] for i, s in zip(f, signs)})


def _tsirelson_abs_functionals(
    space: Tsirelson, support: FinSet, cap: int = 100_000
) -> list[Vector]:
    """All nonnegative admissible-tree functionals on the support: the basis
    functionals closed under theta*(f_1 + ... + f_t) over admissible systems
    of t >= 2 ordered parts.

    Single-part systems only rescale by theta and never decide a norming
    maximum, so omitting them loses nothing; with every combination splitting
    the support into at least two pieces, nesting depth is bounded by the
    support size and the closure is finite.
    """
    fam = Schreier(space.xi, space.q)
    kept: set[Vector] = {Vector.basis(i) for i in support}
    frontier = set(kept)
    while frontier:
        by_min = sorted(kept, key=lambda v: (v.support[0], v.support[-1]))
        fresh: set[Vector] = set()

        def build(parts: list[Vector], mins: FinSet, last_max: int, used_new: bool):
            if len(parts) >= 2 and used_new:
                total = Vector()
                for p in parts:
                    total = total + p
                cand = total.scale(space.theta)
                if cand not in kept:
                    fresh.add(cand)
            for v in by_min:
                lo = v.support[0]
                if lo <= last_max:
                    continue
                new_mins = mins + (lo,)
                if not fam.member(new_mins):
                    continue
                build(parts + [v], new_mins, v.support[-1], used_new or v in frontier)

        build([], (), 0, False)
        kept |= fresh
        if len(kept) > cap:
            raise SpaceError(
                f"Tsirelson functional closure exceeds {cap} elements on "
                f"support of size {len(support)}"
            )
        frontier = fresh
    return sorted(kept, key=lambda v: (len(v.entries), v.entries))


def norming_functionals(space: SpaceSpec, support: FinSet) -> list[Vector]:
    """A finite set Phi with norm(x) = max over Phi of |phi(x)| for every x
    supported in `support`; the symmetric hull of Phi is the dual ball there.
    """
    support = tuple(support)
    if isinstance(space, C0):
        out = [Vector.basis(i, s) for i in support for s in (1, -1)]
        return out
    if isinstance(space, L1) or (isinstance(space, Lp) and space.p == 1):
        out = []
        for signs in itertools.product((1, -1), repeat=len(support)):
            out.append(Vector.of({i: s for i, s in zip(support, signs)}))
        return out
    if isinstance(space, Combinatorial):
        _check_singletons(space.fam, support)
        ones = {i: Fraction(1) for i in support}
        out = [Vector()]
        for f in _family_sets_within(space.fam, support):
            if f:
                out.extend(_signed_variants(f, ones))
        return out
    if isinstance(space, Tsirelson):
        out = []
        for base in _tsirelson_abs_functionals(space, support):
            coeffs = dict(base.entries)
            out.extend(_signed_variants(base.support, coeffs))
        return out
    raise SpaceError(f"{format_space(space)} is not polyhedral")


def parse_space(text: str, q: QSchedule = Q_DEFAULT) -> SpaceSpec:
    """Grammar: X[<family>], PCONV(<space>;p), BAERNSTEIN(xi;p),
    TSIRELSON(xi;theta), C0, L1, LP(p)."""
    text = text.strip()
    if text == "C0":
        return C0()
    if text == "L1":
        return L1()
    if text.startswith("LP(") and text.endswith(")"):
        return Lp(int(text[3:-1]))
    if text.startswith("X[") and text.endswith("]"):
        return Combinatorial(parse_family(text[2:-1], q))
    if text.startswith("PCONV(") and text.endswith(")"):
        inner, _, p = text[6:-1].rpartition(";")
        return PConvex(parse_space(inner, q), int(p))
    if text.startswith("BAERNSTEIN(") and text.endswith(")"):
        xi, _, p = text[11:-1].partition(";")
        return Baernstein(parse_ordinal(xi), int(p), q)
    if text.startswith("TSIRELSON(") and text.endswith(")"):
        xi, _, theta = text[10:-1].partition(";")
        return Tsirelson(parse_ordinal(xi), parse_fraction(theta), q)
    raise SpaceError(f"cannot parse space {text!r}")


def format_space(space: SpaceSpec) -> str:
    if isinstance(space, C0):
        return "C0"
    if isinstance(space, L1):
        return "L1"
    if isinstance(space, Lp):
        return f"LP({space.p})"
    if isinstance(space, Combinatorial):
        return f"X[{format_family(space.fam)}]"
    if isinstance(space, PConvex):
        return f"PCONV({format_space(space.base)};{space.p})"
    if isinstance(space, Baernstein):
        return f"BAERNSTEIN({format_ordinal(space.xi)};{space.p})"
    if isinstance(space, Tsirelson):
        return f"TSIRELSON({format_ordinal(space.xi)};{format_fraction(space.theta)})"
    raise SpaceError(f"unknown space {space!r}")
