"""Pseudo H-type Lie algebras N_{r,s}(V) built from admissible Clifford modules."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Mapping, Sequence, Tuple

from clifford_rep.modules import CliffordModule, Signature, build_module, verify_module_axioms
from common.errors import UnverifiedModuleError
from htype_algebra.lattice import StandardLattice

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PseudoHTypeAlgebra:
    module: CliffordModule
    constants: Mapping[Tuple[int, int], Tuple[int, int]] = field(compare=False, repr=False)
    lattice: StandardLattice = StandardLattice()

    @property
    def signature(self) -> Signature:
        return self.module.signature

    @property
    def r(self) -> int:
        return self.module.r

    @property
    def s(self) -> int:
        return self.module.s

    @property
    def d(self) -> int:
        return self.module.signature.d

    @property
    def dim_h(self) -> int:
        return self.module.dim_v

    @property
    def half_dim(self) -> int:
        """N = dim_h / 2."""
        return self.module.dim_v // 2

    @property
    def manifold_dimension(self) -> int:
        return self.dim_h + self.d

    def bracket(self, i: int, j: int) -> Tuple[int, int]:
        """Return (k, sign) with [X_i, X_j] = sign * Z_k, or (-1, 0) when the bracket vanishes."""
        return self.constants.get((i, j), (-1, 0))

    def constants_by_center(self) -> Dict[int, Tuple[Tuple[int, int, int], ...]]:
        grouped: Dict[int, list] = {k: [] for k in range(self.d)}
        for (i, j), (k, sign) in sorted(self.constants.items()):
            grouped[k].append((i, j, sign))
        return {k: tuple(items) for k, items in grouped.items()}


def build_algebra(mod: CliffordModule) -> PseudoHTypeAlgebra:
    """c_{ij}^l = <J_l X_i, X_j>_V for l <= r and minus that for l > r."""
    report = verify_module_axioms(mod)
    if not report.passed:
        raise UnverifiedModuleError(f"module {mod.spec.describe()} fails {report.summary()}")
    constants: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for k, generator in enumerate(mod.generators):
        orientation = 1 if k < mod.r else -1
        for i in range(mod.dim_v):
            j, sign = generator.image(i)
            constants[(i, j)] = (k, orientation * sign * mod.metric[j])
    logger.debug("Built algebra %s with %d nonzero constants", mod.spec.describe(), len(constants))
    return PseudoHTypeAlgebra(mod, MappingProxyType(constants))


def build_algebra_from_spec(spec) -> PseudoHTypeAlgebra:
    return build_algebra(build_module(spec))


@dataclass(frozen=True)
class GroupElement:
    x: Tuple[Fraction, ...]
    z: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        object.__setattr__(self, "z", tuple(Fraction(v) for v in self.z))

    @classmethod
    def identity(cls, alg: PseudoHTypeAlgebra) -> "GroupElement":
        return cls((0,) * alg.dim_h, (0,) * alg.d)

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(-v for v in self.x), tuple(-v for v in self.z))


def group_product(g: GroupElement, h: GroupElement, alg: PseudoHTypeAlgebra) -> GroupElement:
    """g * h = g + h + 1/2 [g, h] (exact)."""
    if len(g.x) != alg.dim_h or len(h.x) != alg.dim_h or len(g.z) != alg.d or len(h.z) != alg.d:
        raise ValueError(
            f"group elements must have {alg.dim_h} horizontal and {alg.d} central coordinates"
        )
    z = [a + b for a, b in zip(g.z, h.z)]
    half = Fraction(1, 2)
    for (i, j), (k, sign) in alg.constants.items():
        if g.x[i] and h.x[j]:
            z[k] += half * sign * g.x[i] * h.x[j]
    return GroupElement(tuple(a + b for a, b in zip(g.x, h.x)), tuple(z))


def jacobi_holds(alg: PseudoHTypeAlgebra) -> bool:
    """Check the Jacobi identity on the full basis X_1..X_n, Z_1..Z_d."""
    size = alg.dim_h + alg.d

    def bracket(u: Dict[int, int], v: Dict[int, int]) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for i, a in u.items():
            for j, b in v.items():
                if i < alg.dim_h and j < alg.dim_h:
                    k, sign = alg.bracket(i, j)
                    if sign:
                        slot = alg.dim_h + k
                        out[slot] = out.get(slot, 0) + sign * a * b
        return {key: value for key, value in out.items() if value}

    basis = [{i: 1} for i in range(size)]
    for a in range(size):
        for b in range(size):
            inner_ab = bracket(basis[a], basis[b])
            for c in range(size):
                total: Dict[int, int] = {}
                for term in (
                    bracket(basis[a], bracket(basis[b], basis[c])),
                    bracket(basis[b], bracket(basis[c], basis[a])),
                    bracket(basis[c], inner_ab),
                ):
                    for key, value in term.items():
                        total[key] = total.get(key, 0) + value
                if any(total.values()):
                    return False
    return True


def algebra_to_dict(alg: PseudoHTypeAlgebra) -> dict:
    return {
        "r": alg.r,
        "s": alg.s,
        "dim_h": alg.dim_h,
        "d": alg.d,
        "constants": [
            {"i": i, "j": j, "k": k, "sign": sign}
            for (i, j), (k, sign) in sorted(alg.constants.items())
        ],
        "lattice": alg.lattice.to_dict(),
        "spec": alg.module.spec.to_dict(),
    }


def center_split(values: Sequence, r: int) -> Tuple[tuple, tuple]:
    values = tuple(values)
    return values[:r], values[r:]
