"""Recover an admissible scalar product for bare Clifford generators.

Solves ``G^T = G`` and ``J_k^T G + G J_k = 0`` over the rationals, picks a
nondegenerate element of the solution space and diagonalises it by congruence
to read off the +-1 metric.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import List, Optional, Sequence, Tuple

import sympy

from clifford_rep.modules import Signature
from clifford_rep.signed_permutation import SignedPermutationMatrix

logger = logging.getLogger(__name__)

# Integer weights tried for combining nullspace vectors; the first nondegenerate
# combination wins.
_WEIGHT_SEQUENCES = (
    lambda k: [1] * k,
    lambda k: list(range(1, k + 1)),
    lambda k: [2 ** i for i in range(k)],
    lambda k: [int(sympy.prime(i + 1)) for i in range(k)],
    lambda k: [(-1) ** i * (i + 1) for i in range(k)],
)


@dataclass(frozen=True)
class AdmissibleForm:
    gram: Tuple[Tuple[Fraction, ...], ...]
    metric: Tuple[int, ...]

    @property
    def inertia(self) -> Tuple[int, int]:
        positives = sum(1 for g in self.metric if g == 1)
        return positives, len(self.metric) - positives


def _to_fraction(value) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _symmetric_unknowns(dim: int) -> List[Tuple[int, int]]:
    return list(combinations_with_replacement(range(dim), 2))


def _solution_space(generators: Sequence[SignedPermutationMatrix], dim: int) -> List[sympy.Matrix]:
    unknowns = _symmetric_unknowns(dim)
    index = {pair: n for n, pair in enumerate(unknowns)}

    def slot(i, j):
        return index[(i, j) if i <= j else (j, i)]

    rows = []
    # (J^T G + G J)_{ij} = s_i G_{p(i) j} + s_j G_{i p(j)}
    for generator in generators:
        for i in range(dim):
            p_i, s_i = generator.image(i)
            for j in range(i, dim):
                p_j, s_j = generator.image(j)
                row = [0] * len(unknowns)
                row[slot(p_i, j)] += s_i
                row[slot(i, p_j)] += s_j
                if any(row):
                    rows.append(row)
    if not rows:
        rows.append([0] * len(unknowns))
    system = sympy.Matrix(rows)
    basis = system.nullspace()
    grams = []
    for vector in basis:
        gram = sympy.zeros(dim, dim)
        for (i, j), n in index.items():
            gram[i, j] = vector[n]
            gram[j, i] = vector[n]
        grams.append(gram)
    return grams


def _inertia_signs(gram: Sequence[Sequence[Fraction]]) -> Optional[List[int]]:
    """Signs of the diagonal after symmetric Gaussian elimination, None if singular."""
    a = [[Fraction(x) for x in row] for row in gram]
    signs: List[int] = []
    while a:
        n = len(a)
        if a[0][0] == 0:
            pivot = next((j for j in range(1, n) if a[j][j] != 0), None)
            if pivot is not None:
                a[0], a[pivot] = a[pivot], a[0]
                for row in a:
                    row[0], row[pivot] = row[pivot], row[0]
            else:
                partner = next((j for j in range(1, n) if a[0][j] != 0), None)
                if partner is None:
                    return None
                for col in range(n):
                    a[0][col] += a[partner][col]
                for row in range(n):
                    a[row][0] += a[row][partner]
        head = a[0][0]
        signs.append(1 if head > 0 else -1)
        a = [[a[i][j] - a[i][0] * a[0][j] / head for j in range(1, n)] for i in range(1, n)]
    return signs


def find_admissible_form(generators: Sequence[SignedPermutationMatrix], sig) -> Optional[AdmissibleForm]:
    """Return a nondegenerate admissible form, or None when every solution is degenerate."""
    sig = Signature.coerce(sig)
    if len(generators) != sig.d:
        raise ValueError(f"expected {sig.d} generators for {sig}, got {len(generators)}")
    dim = generators[0].dim
    grams = _solution_space(generators, dim)
    if not grams:
        logger.info("No symmetric form is compatible with the %s generators", sig)
        return None
    for weights in _WEIGHT_SEQUENCES:
        coefficients = weights(len(grams))
        candidate = sum((c * g for c, g in zip(coefficients, grams)), sympy.zeros(dim, dim))
        if candidate.det() == 0:
            continue
        entries = [[_to_fraction(candidate[i, j]) for j in range(dim)] for i in range(dim)]
        signs = _inertia_signs(entries)
        if signs is None:
            continue
        positives = signs.count(1)
        if positives < len(signs) - positives:
            entries = [[-x for x in row] for row in entries]
            signs = [-x for x in signs]
            positives = len(signs) - positives
        metric = (1,) * positives + (-1,) * (len(signs) - positives)
        return AdmissibleForm(tuple(tuple(row) for row in entries), metric)
    logger.info("All tried combinations of the %d-dimensional solution space are degenerate", len(grams))
    return None
