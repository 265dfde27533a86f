"""Isomorphism of pseudo H-type algebras built from minimal and non-minimal modules."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from clifford_rep.modules import ModuleSpec, Signature
from clifford_rep.tables import min_admissible_dim, validate_signature
from common.errors import SignatureError


class Relation(str, Enum):
    ISOMORPHIC = "Isomorphic"
    NON_ISOMORPHIC = "NonIsomorphic"
    DIM_DOUBLE = "DimDouble"
    DIM_HALF = "DimHalf"


class ModuleRelation(str, Enum):
    ISOMORPHIC = "Isomorphic"
    NON_ISOMORPHIC = "NonIsomorphic"
    OUT_OF_SCOPE = "OutOfScope"


_I, _N, _D, _H = Relation.ISOMORPHIC, Relation.NON_ISOMORPHIC, Relation.DIM_DOUBLE, Relation.DIM_HALF

# N_{r,s} against N_{s,r} for minimal admissible modules, keyed (r, s).
# Provenance: classification table, one comment per row s; diagonal cells are N_{r,r} itself.
MINIMAL_PAIR_TABLE: Dict[Tuple[int, int], Relation] = {
    # s=0: r=1..8  ~ ~ h ~ h h h ~
    (1, 0): _I, (2, 0): _I, (3, 0): _H, (4, 0): _I, (5, 0): _H, (6, 0): _H, (7, 0): _H, (8, 0): _I,
    # s=1: r=0..8  ~ . d !~ d ~ ~ h ~
    (0, 1): _I, (1, 1): _I, (2, 1): _D, (3, 1): _N, (4, 1): _D, (5, 1): _I, (6, 1): _I, (7, 1): _H, (8, 1): _I,
    # s=2: r=0..8  ~ h . !~ d ~ ~ h ~
    (0, 2): _I, (1, 2): _H, (2, 2): _I, (3, 2): _N, (4, 2): _D, (5, 2): _I, (6, 2): _I, (7, 2): _H, (8, 2): _I,
    # s=3: r=0..8  d !~ !~ . d d d !~ d
    (0, 3): _D, (1, 3): _N, (2, 3): _N, (3, 3): _I, (4, 3): _D, (5, 3): _D, (6, 3): _D, (7, 3): _N, (8, 3): _D,
    # s=4: r=0..6  ~ h h h . ~ ~
    (0, 4): _I, (1, 4): _H, (2, 4): _H, (3, 4): _H, (4, 4): _I, (5, 4): _I, (6, 4): _I,
    # s=5: r=0..5  d ~ ~ h ~ .
    (0, 5): _D, (1, 5): _I, (2, 5): _I, (3, 5): _H, (4, 5): _I, (5, 5): _I,
    # s=6: r=0..4  d ~ ~ h ~
    (0, 6): _D, (1, 6): _I, (2, 6): _I, (3, 6): _H, (4, 6): _I,
    # s=7: r=0..3  d d d !~
    (0, 7): _D, (1, 7): _D, (2, 7): _D, (3, 7): _N,
    # s=8: r=0..3  ~ ~ ~ h
    (0, 8): _I, (1, 8): _I, (2, 8): _I, (3, 8): _H,
}


@dataclass(frozen=True)
class ClassificationEntry:
    relation: Relation
    source: str
    cell: Tuple[int, int]

    def to_dict(self) -> dict:
        return {"relation": self.relation.value, "source": self.source, "cell": list(self.cell)}


def minimal_pair_table(r: int, s: int) -> ClassificationEntry:
    """Relation of N_{r,s} to N_{s,r}, reducing by the (4,4), (8,0) and (0,8) periods."""
    validate_signature(r, s)
    cell = (r, s)
    while cell not in MINIMAL_PAIR_TABLE:
        a, b = cell
        if a >= 4 and b >= 4:
            cell = (a - 4, b - 4)
        elif a >= 8:
            cell = (a - 8, b)
        elif b >= 8:
            cell = (a, b - 8)
        else:
            raise SignatureError(f"({r},{s}) cannot be reduced to a classification table cell")
    source = "table" if cell == (r, s) else "periodicity"
    return ClassificationEntry(MINIMAL_PAIR_TABLE[cell], source, cell)


def _covered_class(sig: Signature) -> str:
    if sig.r % 4 != 3:
        return ""
    if sig.s % 4 in (1, 2, 3):
        return "sign_counts"
    return "typed_counts"


def modules_isomorphic(sig, spec_u: ModuleSpec, spec_v: ModuleSpec) -> ModuleRelation:
    """Decide N_{r,s}(U) ~ N_{r,s}(U~) for r = 3 mod 4.

    s = 1, 2, 3 mod 4: (p+, p-) agree or are swapped.
    s = 0 mod 4: (p++ + p--, p-+ + p+-) agree or are swapped.
    Other classes are out of scope.
    """
    sig = Signature.coerce(sig)
    if spec_u.signature != sig or spec_v.signature != sig:
        raise SignatureError(f"both module specs must have signature {sig}")
    kind = _covered_class(sig)
    if not kind:
        return ModuleRelation.OUT_OF_SCOPE
    if kind == "sign_counts":
        left = (spec_u.p_plus, spec_u.p_minus)
        right = (spec_v.p_plus, spec_v.p_minus)
    else:
        pp, mp, pm, mm = spec_u.typed_counts()
        left = (pp + mm, mp + pm)
        pp, mp, pm, mm = spec_v.typed_counts()
        right = (pp + mm, mp + pm)
    if left == right or left == right[::-1]:
        return ModuleRelation.ISOMORPHIC
    return ModuleRelation.NON_ISOMORPHIC


@dataclass(frozen=True)
class MinimalPair:
    r: int
    s: int
    manifold_dimension: int


def enumerate_minimal_pairs(max_manifold_dim: int) -> List[MinimalPair]:
    """(r, s) with r > s whose minimal N_{r,s}, N_{s,r} have equal dimension and are not isomorphic."""
    pairs = []
    for s in range(0, max_manifold_dim + 1):
        for r in range(s + 1, max_manifold_dim + 1):
            dimension = min_admissible_dim(r, s) + r + s
            if dimension > max_manifold_dim:
                continue
            if min_admissible_dim(r, s) != min_admissible_dim(s, r):
                continue
            if minimal_pair_table(r, s).relation is Relation.NON_ISOMORPHIC:
                pairs.append(MinimalPair(r, s, dimension))
    return sorted(pairs, key=lambda pair: (pair.manifold_dimension, pair.r, pair.s))

