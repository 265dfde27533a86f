"""Admissible Clifford modules with signed-permutation generators.

Minimal modules inside the dimension table are found as real Pauli strings
``X^a Z^b`` on ``m = log2(dim)`` tensor factors with metric ``Z^g``; every such
string is a signed permutation of the standard basis, so the standard basis is
an integral basis. Signatures beyond the table are reached by tensoring with
the 16-dimensional (8,0), (0,8) or (4,4) modules.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

from clifford_rep.signed_permutation import SignedPermutationMatrix, parity
from clifford_rep.tables import (
    MINIMAL_DIMENSIONS,
    has_two_irreducibles,
    min_admissible_dim,
    periodicity_steps,
    validate_signature,
)
from common import config
from common.errors import ModuleConstructionError, SignatureError, UnsupportedVariantError

logger = logging.getLogger(__name__)

Sign = Literal["+", "-"]
IrreducibleType = Literal["+", "-", "unique"]


@dataclass(frozen=True, order=True)
class Signature:
    r: int
    s: int

    def __post_init__(self):
        validate_signature(self.r, self.s)

    @classmethod
    def coerce(cls, value: Union["Signature", Sequence[int]]) -> "Signature":
        if isinstance(value, Signature):
            return value
        r, s = value
        return cls(int(r), int(s))

    @property
    def d(self) -> int:
        return self.r + self.s

    def swapped(self) -> "Signature":
        return Signature(self.s, self.r)

    def __str__(self):
        return f"({self.r},{self.s})"


@dataclass(frozen=True, order=True)
class MinimalVariant:
    product_sign: Sign = "+"
    irreducible_type: IrreducibleType = "unique"

    def __post_init__(self):
        if self.product_sign not in ("+", "-"):
            raise UnsupportedVariantError(f"product sign must be '+' or '-', got {self.product_sign!r}")
        if self.irreducible_type not in ("+", "-", "unique"):
            raise UnsupportedVariantError(f"unknown irreducible type {self.irreducible_type!r}")

    @property
    def label(self) -> str:
        if self.irreducible_type == "unique":
            return f"p{self.product_sign}"
        return f"p{self.product_sign}{self.irreducible_type}"


def variants_for(sig: Signature) -> Tuple[MinimalVariant, ...]:
    """All minimal variants of a signature in canonical order (p+, p-) or (p++, p-+, p+-, p--)."""
    if has_two_irreducibles(sig.r, sig.s):
        return (
            MinimalVariant("+", "+"),
            MinimalVariant("-", "+"),
            MinimalVariant("+", "-"),
            MinimalVariant("-", "-"),
        )
    return (MinimalVariant("+", "unique"), MinimalVariant("-", "unique"))


def default_variant(sig: Signature) -> MinimalVariant:
    return variants_for(sig)[0]


def _check_variant(sig: Signature, variant: MinimalVariant) -> None:
    if variant not in variants_for(sig):
        kind = "two irreducible types" if has_two_irreducibles(sig.r, sig.s) else "a unique irreducible type"
        raise UnsupportedVariantError(
            f"variant {variant.label} is not available for {sig}, which has {kind}"
        )


@dataclass(frozen=True)
class ModuleSpec:
    """Multiplicities of minimal admissible modules in a direct sum."""

    signature: Signature
    multiplicities: Tuple[Tuple[MinimalVariant, int], ...]

    def __post_init__(self):
        allowed = variants_for(self.signature)
        seen = set()
        for variant, count in self.multiplicities:
            if variant not in allowed:
                _check_variant(self.signature, variant)
            if variant in seen:
                raise ValueError(f"variant {variant.label} listed twice")
            if count < 0:
                raise ValueError("multiplicities must be nonnegative")
            seen.add(variant)
        if self.total_copies == 0:
            raise ValueError("a module spec needs at least one summand")
        ordered = tuple(
            (variant, count)
            for variant in allowed
            for listed, count in self.multiplicities
            if listed == variant and count > 0
        )
        object.__setattr__(self, "multiplicities", ordered)

    @classmethod
    def minimal(cls, sig, variant: Optional[MinimalVariant] = None) -> "ModuleSpec":
        sig = Signature.coerce(sig)
        variant = variant or default_variant(sig)
        _check_variant(sig, variant)
        return cls(sig, ((variant, 1),))

    @classmethod
    def from_counts(cls, sig, p_plus: int = 0, p_minus: int = 0) -> "ModuleSpec":
        """Counts of the two product signs for signatures with a unique irreducible type."""
        sig = Signature.coerce(sig)
        if has_two_irreducibles(sig.r, sig.s):
            raise UnsupportedVariantError(f"{sig} has two irreducible types; use from_typed_counts")
        return cls(sig, ((MinimalVariant("+"), p_plus), (MinimalVariant("-"), p_minus)))

    @classmethod
    def from_typed_counts(cls, sig, pp: int = 0, mp: int = 0, pm: int = 0, mm: int = 0) -> "ModuleSpec":
        """Counts p^+_+, p^-_+, p^+_-, p^-_- (upper index: product sign, lower: irreducible type)."""
        sig = Signature.coerce(sig)
        if not has_two_irreducibles(sig.r, sig.s):
            raise UnsupportedVariantError(f"{sig} has a unique irreducible type; use from_counts")
        return cls(
            sig,
            (
                (MinimalVariant("+", "+"), pp),
                (MinimalVariant("-", "+"), mp),
                (MinimalVariant("+", "-"), pm),
                (MinimalVariant("-", "-"), mm),
            ),
        )

    @classmethod
    def parse(cls, sig, text: str) -> "ModuleSpec":
        """Parse ``minimal``, ``p:k``, ``p+:a,p-:b`` or ``p++:a,p-+:b,p+-:c,p--:d``."""
        sig = Signature.coerce(sig)
        text = text.strip()
        if text == "minimal":
            return cls.minimal(sig)
        by_label = {variant.label: variant for variant in variants_for(sig)}
        counts: Dict[MinimalVariant, int] = {}
        for item in text.split(","):
            if ":" not in item:
                raise ValueError(f"malformed module item {item!r}")
            label, raw = (part.strip() for part in item.split(":", 1))
            if label == "p":
                label = default_variant(sig).label
            if label not in by_label:
                raise UnsupportedVariantError(
                    f"unknown summand {label!r} for {sig}; expected one of {sorted(by_label)}"
                )
            counts[by_label[label]] = counts.get(by_label[label], 0) + int(raw)
        return cls(sig, tuple(counts.items()))

    @property
    def total_copies(self) -> int:
        return sum(count for _, count in self.multiplicities)

    @property
    def total_dim(self) -> int:
        return self.total_copies * min_admissible_dim(self.signature.r, self.signature.s)

    def count(self, product_sign: Sign, irreducible_type: IrreducibleType = "unique") -> int:
        wanted = MinimalVariant(product_sign, irreducible_type)
        return sum(count for variant, count in self.multiplicities if variant == wanted)

    @property
    def p_plus(self) -> int:
        return self.count("+")

    @property
    def p_minus(self) -> int:
        return self.count("-")

    def typed_counts(self) -> Tuple[int, int, int, int]:
        return (
            self.count("+", "+"),
            self.count("-", "+"),
            self.count("+", "-"),
            self.count("-", "-"),
        )

    def summands(self) -> Iterator[MinimalVariant]:
        for variant, count in self.multiplicities:
            for _ in range(count):
                yield variant

    def describe(self) -> str:
        return f"{self.signature} " + ",".join(f"{v.label}:{c}" for v, c in self.multiplicities)

    def to_dict(self) -> dict:
        return {
            "r": self.signature.r,
            "s": self.signature.s,
            "summands": [
                {"product_sign": v.product_sign, "irreducible_type": v.irreducible_type, "count": c}
                for v, c in self.multiplicities
            ],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ModuleSpec":
        sig = Signature(int(payload["r"]), int(payload["s"]))
        items = tuple(
            (MinimalVariant(item["product_sign"], item["irreducible_type"]), int(item["count"]))
            for item in payload["summands"]
        )
        return cls(sig, items)


@dataclass(frozen=True)
class CliffordModule:
    signature: Signature
    generators: Tuple[SignedPermutationMatrix, ...]
    metric: Tuple[int, ...]
    spec: ModuleSpec
    doubled: bool = False

    @property
    def dim_v(self) -> int:
        return len(self.metric)

    @property
    def r(self) -> int:
        return self.signature.r

    @property
    def s(self) -> int:
        return self.signature.s

    def generator_square(self, k: int) -> int:
        """J_k^2 = -1 for positive generators (k < r) and +1 for negative ones."""
        return -1 if k < self.signature.r else 1

    def to_dict(self) -> dict:
        return {
            "r": self.signature.r,
            "s": self.signature.s,
            "dim": self.dim_v,
            "metric": list(self.metric),
            "generators": [generator.to_dict() for generator in self.generators],
            "spec": self.spec.to_dict(),
            "doubled": self.doubled,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "CliffordModule":
        sig = Signature(int(payload["r"]), int(payload["s"]))
        generators = tuple(SignedPermutationMatrix.from_dict(g) for g in payload["generators"])
        metric = tuple(int(v) for v in payload["metric"])
        if len(metric) != int(payload.get("dim", len(metric))):
            raise ValueError("metric length does not match dim")
        spec = ModuleSpec.from_dict(payload["spec"]) if "spec" in payload else ModuleSpec.minimal(sig)
        return cls(sig, generators, metric, spec, bool(payload.get("doubled", False)))


# --- generator search -------------------------------------------------------------

class _SearchBudgetExceeded(Exception):
    pass


def _anticommute(left: Tuple[int, int], right: Tuple[int, int]) -> bool:
    return parity((left[0] & right[1]) ^ (right[0] & left[1])) == 1


def search_pauli_generators(
    r: int,
    s: int,
    qubits: int,
    require_scalar_volume: bool = False,
    max_nodes: Optional[int] = None,
) -> Optional[List[Tuple[int, int]]]:
    """Find (a, b) bit pairs for r square -1 and s square +1 anticommuting Pauli strings.

    Positive strings need ``a.b`` odd and ``a.g`` even, negative ones ``a.b`` even and
    ``a.g`` odd, where ``g`` is the metric mask (0 for s = 0, the top bit otherwise).
    Distinct ``a`` keeps at most one generator per basis pair. With
    ``require_scalar_volume`` the product of all strings must be a multiple of Id.
    Returns None when the space is exhausted.
    """
    budget = max_nodes if max_nodes is not None else config.SEARCH_BUDGET
    metric_mask = 0 if s == 0 else 1 << (qubits - 1)
    size = 1 << qubits
    positive = [
        (a, b)
        for a in range(1, size)
        for b in range(size)
        if parity(a & b) == 1 and parity(a & metric_mask) == 0
    ]
    negative = [
        (a, b)
        for a in range(1, size)
        for b in range(size)
        if parity(a & b) == 0 and parity(a & metric_mask) == 1
    ]
    nodes = 0

    def extend(chosen, pos, neg, need_pos, need_neg):
        nonlocal nodes
        if need_pos == 0 and need_neg == 0:
            if require_scalar_volume:
                x_total = reduce(lambda acc, item: acc ^ item[0], chosen, 0)
                z_total = reduce(lambda acc, item: acc ^ item[1], chosen, 0)
                if x_total or z_total:
                    return None
            return list(chosen)
        if len(pos) < need_pos or len(neg) < need_neg:
            return None
        choosing_positive = need_pos > 0
        current = pos if choosing_positive else neg
        for index, candidate in enumerate(current):
            nodes += 1
            if nodes > budget:
                raise _SearchBudgetExceeded()
            if choosing_positive:
                next_pos = [c for c in pos[index + 1:] if c[0] != candidate[0] and _anticommute(c, candidate)]
                next_neg = [c for c in neg if c[0] != candidate[0] and _anticommute(c, candidate)]
                found = extend(chosen + [candidate], next_pos, next_neg, need_pos - 1, need_neg)
            else:
                next_neg = [c for c in neg[index + 1:] if c[0] != candidate[0] and _anticommute(c, candidate)]
                found = extend(chosen + [candidate], [], next_neg, 0, need_neg - 1)
            if found is not None:
                return found
        return None

    try:
        return extend([], positive, negative, r, s)
    except _SearchBudgetExceeded:
        raise ModuleConstructionError(
            f"generator search for ({r},{s}) on {qubits} tensor factors exceeded {budget} nodes"
        )


def _volume_element(generators: Sequence[SignedPermutationMatrix]) -> SignedPermutationMatrix:
    return reduce(lambda acc, g: acc @ g, generators[1:], generators[0])


def _orient(generators: List[SignedPermutationMatrix]) -> List[SignedPermutationMatrix]:
    """Make the volume element +Id on two-irreducible signatures."""
    scalar = _volume_element(generators).scalar_multiple_of_identity()
    if scalar is None:
        raise ModuleConstructionError("volume element is not central on a two-irreducible signature")
    if scalar == -1:
        generators = [-generators[0]] + list(generators[1:])
    return generators


@lru_cache(maxsize=None)
def _table_module(r: int, s: int) -> Tuple[Tuple[SignedPermutationMatrix, ...], Tuple[int, ...], bool]:
    dim = MINIMAL_DIMENSIONS[(r, s)][0]
    two_types = MINIMAL_DIMENSIONS[(r, s)][1]
    qubits = dim.bit_length() - 1
    doubled = False
    bits = search_pauli_generators(r, s, qubits, require_scalar_volume=two_types)
    if bits is None:
        logger.warning("No %d-dimensional module found for (%d,%d); falling back to the doubled module", dim, r, s)
        qubits += 1
        doubled = True
        bits = search_pauli_generators(r, s, qubits, require_scalar_volume=two_types)
        if bits is None:
            raise ModuleConstructionError(f"no admissible Pauli-string module for ({r},{s})")
    generators = [SignedPermutationMatrix.from_pauli(a, b, qubits) for a, b in bits]
    if two_types:
        generators = _orient(generators)
    metric_mask = 0 if s == 0 else 1 << (qubits - 1)
    metric = tuple(-1 if parity(metric_mask & i) else 1 for i in range(1 << qubits))
    logger.debug("Built (%d,%d) table module of dimension %d", r, s, 1 << qubits)
    return tuple(generators), metric, doubled


def _extend_by_period(
    generators: Sequence[SignedPermutationMatrix],
    metric: Sequence[int],
    r: int,
    step: Tuple[int, int],
) -> Tuple[List[SignedPermutationMatrix], Tuple[int, ...]]:
    """Tensor a Cl(r,s) module V with the 16-dim period module P of signature ``step``.

    New generators: J_k (x) w_P for the old ones, Id (x) P_i for the period ones,
    with w_P = P_1...P_8 symmetric, central-free and squaring to +Id.
    """
    period_generators, period_metric, _ = _table_module(*step)
    omega = _volume_element(period_generators)
    identity = SignedPermutationMatrix.identity(len(metric))
    old_positive = [g.kron(omega) for g in generators[:r]]
    old_negative = [g.kron(omega) for g in generators[r:]]
    new_positive = [identity.kron(p) for p in period_generators[: step[0]]]
    new_negative = [identity.kron(p) for p in period_generators[step[0]:]]
    combined = old_positive + new_positive + old_negative + new_negative
    product_metric = [g * h for g in metric for h in period_metric]
    order = [i for i, g in enumerate(product_metric) if g == 1] + [i for i, g in enumerate(product_metric) if g == -1]
    relabelled = [generator.relabel(order) for generator in combined]
    return relabelled, tuple(product_metric[i] for i in order)


@lru_cache(maxsize=None)
def _raw_minimal_module(r: int, s: int) -> Tuple[Tuple[SignedPermutationMatrix, ...], Tuple[int, ...], bool]:
    cell, steps = periodicity_steps(r, s)
    generators, metric, doubled = _table_module(*cell)
    current_r = cell[0]
    for step in reversed(steps):
        generators, metric = _extend_by_period(generators, metric, current_r, step)
        current_r += step[0]
    if MINIMAL_DIMENSIONS[cell][1] and steps:
        generators = _orient(list(generators))
    return tuple(generators), tuple(metric), doubled


def build_minimal_module(sig, variant: Optional[MinimalVariant] = None) -> CliffordModule:
    sig = Signature.coerce(sig)
    variant = variant or default_variant(sig)
    _check_variant(sig, variant)
    generators, metric, doubled = _raw_minimal_module(sig.r, sig.s)
    generators = list(generators)
    if variant.irreducible_type == "-":
        generators[0] = -generators[0]
    if variant.product_sign == "-":
        metric = tuple(-g for g in metric)
    module = CliffordModule(sig, tuple(generators), tuple(metric), ModuleSpec.minimal(sig, variant), doubled)
    report = verify_module_axioms(module)
    if not report.passed:
        raise ModuleConstructionError(f"minimal module {sig} {variant.label} failed {report.summary()}")
    return module


def build_module(spec: ModuleSpec) -> CliffordModule:
    parts = [build_minimal_module(spec.signature, variant) for variant in spec.summands()]
    generators = list(parts[0].generators)
    metric = list(parts[0].metric)
    for part in parts[1:]:
        generators = [g.direct_sum(h) for g, h in zip(generators, part.generators)]
        metric.extend(part.metric)
    module = CliffordModule(
        spec.signature,
        tuple(generators),
        tuple(metric),
        spec,
        any(part.doubled for part in parts),
    )
    if len(parts) > 1:
        report = verify_module_axioms(module)
        if not report.passed:
            raise ModuleConstructionError(f"direct sum {spec.describe()} failed {report.summary()}")
    return module


# --- verification -----------------------------------------------------------------

@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: Optional[Tuple[int, ...]] = None
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[AxiomCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def failures(self) -> Tuple[AxiomCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)

    def summary(self) -> str:
        failed = self.failures()
        if not failed:
            return "all axioms"
        return "; ".join(f"{c.name} at {c.witness}: {c.detail}" for c in failed)


def _check_shapes(mod: CliffordModule) -> AxiomCheck:
    if len(mod.generators) != mod.signature.d:
        return AxiomCheck("shapes", False, (len(mod.generators),), "wrong number of generators")
    for k, generator in enumerate(mod.generators):
        if generator.dim != mod.dim_v:
            return AxiomCheck("shapes", False, (k,), "generator dimension differs from metric length")
    for i, entry in enumerate(mod.metric):
        if entry not in (1, -1):
            return AxiomCheck("shapes", False, (i,), "metric entries must be +1 or -1")
    return AxiomCheck("shapes", True)


def _check_clifford(mod: CliffordModule) -> AxiomCheck:
    for k, generator in enumerate(mod.generators):
        if (generator @ generator).scalar_multiple_of_identity() != mod.generator_square(k):
            return AxiomCheck("clifford_relations", False, (k, k), f"J_{k}^2 != {mod.generator_square(k)} Id")
    for k, left in enumerate(mod.generators):
        for l in range(k + 1, len(mod.generators)):
            right = mod.generators[l]
            forward, backward = left @ right, right @ left
            if forward.perm != backward.perm or any(a != -b for a, b in zip(forward.signs, backward.signs)):
                return AxiomCheck("clifford_relations", False, (k, l), "generators do not anticommute")
    return AxiomCheck("clifford_relations", True)


def _check_skew(mod: CliffordModule) -> AxiomCheck:
    g = mod.metric
    for k, generator in enumerate(mod.generators):
        for i in range(mod.dim_v):
            j, sign_i = generator.image(i)
            back, sign_j = generator.image(j)
            if back != i or sign_i * g[j] != -sign_j * g[i]:
                return AxiomCheck("skew_symmetry", False, (k, i, j), "J_k^T G + G J_k != 0")
    return AxiomCheck("skew_symmetry", True)


def _check_isometry(mod: CliffordModule) -> AxiomCheck:
    g = mod.metric
    for k, generator in enumerate(mod.generators):
        scale = -mod.generator_square(k)
        for i in range(mod.dim_v):
            j, _ = generator.image(i)
            if g[j] != scale * g[i]:
                return AxiomCheck("isometry_scaling", False, (k, i, j), "<J X, J X> != <z,z><X,X>")
    return AxiomCheck("isometry_scaling", True)


def _check_integral_basis(mod: CliffordModule) -> Tuple[AxiomCheck, AxiomCheck]:
    fixed = AxiomCheck("fixed_point_free", True)
    unique = AxiomCheck("unique_generator_per_pair", True)
    for i in range(mod.dim_v):
        owner: Dict[int, int] = {}
        for k, generator in enumerate(mod.generators):
            j, _ = generator.image(i)
            if j == i and fixed.passed:
                fixed = AxiomCheck("fixed_point_free", False, (k, i), "J_k maps X_i to +-X_i")
            if j in owner and unique.passed:
                unique = AxiomCheck(
                    "unique_generator_per_pair", False, (i, j, owner[j], k), "two generators link the same pair"
                )
            owner.setdefault(j, k)
    return fixed, unique


def _check_balance(mod: CliffordModule) -> AxiomCheck:
    positives = sum(1 for g in mod.metric if g == 1)
    negatives = mod.dim_v - positives
    if mod.signature.s > 0 and positives != negatives:
        return AxiomCheck("metric_balance", False, (positives, negatives), "metric must be neutral for s > 0")
    return AxiomCheck("metric_balance", True)


def verify_module_axioms(mod: CliffordModule) -> VerificationReport:
    shapes = _check_shapes(mod)
    if not shapes.passed:
        return VerificationReport((shapes,))
    fixed, unique = _check_integral_basis(mod)
    return VerificationReport(
        (
            shapes,
            _check_clifford(mod),
            _check_skew(mod),
            _check_isometry(mod),
            fixed,
            unique,
            _check_balance(mod),
        )
    )


def require_signature_with_split(mod: CliffordModule) -> None:
    if mod.signature.s == 0:
        raise SignatureError("the V+ / V- split needs s > 0")
