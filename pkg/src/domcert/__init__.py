"""Schreier-type families, combinatorial norms, and domination certificates
with exact rational arithmetic."""

from .families import (
    AllFinite,
    Explicit,
    Family,
    FineSchreier,
    NFold,
    QSchedule,
    Restrict,
    Schreier,
    SumFamily,
    as_finset,
    check_regular,
    enumerate_family,
    find_order_embedding,
    is_spread_of,
    parse_family,
    rank_restricted,
)
from .norms import (
    C0,
    Baernstein,
    Combinatorial,
    L1,
    Lp,
    PConvex,
    SpaceSpec,
    Tsirelson,
    norm,
    norming_functionals,
    parse_space,
    tsirelson_norm,
)
from .ordinals import OMEGA, ZERO, Ordinal, from_int, fundamental_sequence, parse_ordinal
from .rationals import Mag
from .vectors import Vector
from .domination import (
    Certificate,
    VectorSequence,
    basis_sequence,
    domination_constant_exact,
    domination_lower_bound,
    gamma_bracket,
    right_dominance_defect,
    search_certificate,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
