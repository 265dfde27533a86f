"""Finite families of isospectral, mutually non-isomorphic pseudo H-type nilmanifolds."""

import itertools
import logging
from dataclasses import dataclass
from typing import Tuple

from clifford_rep.modules import ModuleSpec, Signature
from clifford_rep.tables import has_two_irreducibles
from common.errors import SignatureError
from isospectral.classification import ModuleRelation, modules_isomorphic
from isospectral.comparison import Structural, structural_isospectral

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairCertificate:
    first: int
    second: int
    isomorphism: ModuleRelation
    structural: Structural

    @property
    def holds(self) -> bool:
        return self.isomorphism is ModuleRelation.NON_ISOMORPHIC and self.structural.answer == "Yes"

    def to_dict(self) -> dict:
        return {
            "first": self.first,
            "second": self.second,
            "isomorphism": self.isomorphism.value,
            "structural": self.structural.to_dict(),
        }


@dataclass(frozen=True)
class IsospectralFamily:
    signature: Signature
    m: int
    specs: Tuple[ModuleSpec, ...]
    manifold_dimension: int
    certificate: Tuple[PairCertificate, ...]

    @property
    def certified(self) -> bool:
        return all(pair.holds for pair in self.certificate)

    def to_dict(self) -> dict:
        return {
            "r": self.signature.r,
            "s": self.signature.s,
            "m": self.m,
            "manifold_dimension": self.manifold_dimension,
            "modules": [spec.to_dict() for spec in self.specs],
            "certificate": [pair.to_dict() for pair in self.certificate],
            "certified": self.certified,
        }


def generate_isospectral_family(sig, m: int) -> IsospectralFamily:
    """m + 1 modules of 2m minimal summands each, pairwise giving non-isomorphic algebras.

    For r = 3 mod 4 and s = 1, 2, 3 mod 4 the i-th module is i copies of the "+"
    minimal module and 2m - i of the "-" one; for s = 0 mod 4 the same counts are
    taken inside the "+" irreducible type. (3,1) gives dimension 4 + 16m, (3,0)
    gives 3 + 8m.
    """
    sig = Signature.coerce(sig)
    if m < 1:
        raise ValueError("family length parameter m must be at least 1")
    if sig.r % 4 != 3:
        raise SignatureError(f"families need r = 3 mod 4, got {sig}")
    if has_two_irreducibles(sig.r, sig.s):
        specs = tuple(ModuleSpec.from_typed_counts(sig, pp=i, mp=2 * m - i) for i in range(m + 1))
    else:
        specs = tuple(ModuleSpec.from_counts(sig, p_plus=i, p_minus=2 * m - i) for i in range(m + 1))
    certificate = tuple(
        PairCertificate(i, j, modules_isomorphic(sig, specs[i], specs[j]), structural_isospectral(specs[i], specs[j]))
        for i, j in itertools.combinations(range(len(specs)), 2)
    )
    family = IsospectralFamily(sig, m, specs, specs[0].total_dim + sig.d, certificate)
    if not family.certified:
        logger.warning("Family %s m=%d is not fully certified", sig, m)
    return family
