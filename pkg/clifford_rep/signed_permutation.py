"""Signed permutation matrices with exact integer arithmetic.

A ``SignedPermutationMatrix`` M acts on the standard basis by
``M e_i = signs[i] * e_{perm[i]}`` (0-based indices), i.e. column i has a single
nonzero entry ``signs[i]`` in row ``perm[i]``.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np


def parity(value: int) -> int:
    return bin(value).count("1") & 1


@dataclass(frozen=True)
class SignedPermutationMatrix:
    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.perm) != len(self.signs):
            raise ValueError("perm and signs must have the same length")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if any(sign not in (1, -1) for sign in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, dim: int) -> "SignedPermutationMatrix":
        return cls(tuple(range(dim)), (1,) * dim)

    @classmethod
    def from_pauli(cls, x_bits: int, z_bits: int, qubits: int, sign: int = 1) -> "SignedPermutationMatrix":
        """Real Pauli string ``sign * X^x Z^z`` on ``qubits`` tensor factors.

        Bit ``qubits - 1`` is the leftmost tensor factor. With this convention
        ``X^x Z^z e_i = (-1)^{popcount(z & i)} e_{i ^ x}``.
        """
        dim = 1 << qubits
        perm = tuple(i ^ x_bits for i in range(dim))
        signs = tuple(sign * (-1 if parity(z_bits & i) else 1) for i in range(dim))
        return cls(perm, signs)

    @classmethod
    def from_dense(cls, matrix) -> "SignedPermutationMatrix":
        array = np.asarray(matrix)
        dim = array.shape[0]
        perm, signs = [], []
        for col in range(dim):
            rows = np.nonzero(array[:, col])[0]
            if len(rows) != 1 or abs(int(array[rows[0], col])) != 1:
                raise ValueError(f"column {col} is not a signed unit vector")
            perm.append(int(rows[0]))
            signs.append(int(array[rows[0], col]))
        return cls(tuple(perm), tuple(signs))

    @property
    def dim(self) -> int:
        return len(self.perm)

    def image(self, index: int) -> Tuple[int, int]:
        return self.perm[index], self.signs[index]

    def compose(self, other: "SignedPermutationMatrix") -> "SignedPermutationMatrix":
        """Matrix product ``self @ other``."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        perm = tuple(self.perm[other.perm[i]] for i in range(self.dim))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.dim))
        return SignedPermutationMatrix(perm, signs)

    def __matmul__(self, other: "SignedPermutationMatrix") -> "SignedPermutationMatrix":
        return self.compose(other)

    def __neg__(self) -> "SignedPermutationMatrix":
        return SignedPermutationMatrix(self.perm, tuple(-sign for sign in self.signs))

    def transpose(self) -> "SignedPermutationMatrix":
        perm = [0] * self.dim
        signs = [0] * self.dim
        for i, (j, sign) in enumerate(zip(self.perm, self.signs)):
            perm[j] = i
            signs[j] = sign
        return SignedPermutationMatrix(tuple(perm), tuple(signs))

    def scalar_multiple_of_identity(self) -> Optional[int]:
        """Return c if the matrix equals c * Id (c = +-1), else None."""
        if any(j != i for i, j in enumerate(self.perm)):
            return None
        if len(set(self.signs)) != 1:
            return None
        return self.signs[0]

    def kron(self, other: "SignedPermutationMatrix") -> "SignedPermutationMatrix":
        """Kronecker product, ``self`` being the outer factor."""
        inner = other.dim
        perm, signs = [], []
        for i in range(self.dim):
            for j in range(inner):
                perm.append(self.perm[i] * inner + other.perm[j])
                signs.append(self.signs[i] * other.signs[j])
        return SignedPermutationMatrix(tuple(perm), tuple(signs))

    def relabel(self, order: Sequence[int]) -> "SignedPermutationMatrix":
        """Conjugate by the basis reordering that puts old index ``order[k]`` at position k."""
        old_to_new = {old: new for new, old in enumerate(order)}
        perm = tuple(old_to_new[self.perm[old]] for old in order)
        signs = tuple(self.signs[old] for old in order)
        return SignedPermutationMatrix(perm, signs)

    def direct_sum(self, other: "SignedPermutationMatrix") -> "SignedPermutationMatrix":
        shift = self.dim
        return SignedPermutationMatrix(
            self.perm + tuple(j + shift for j in other.perm),
            self.signs + other.signs,
        )

    def to_dense(self) -> np.ndarray:
        matrix = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, (j, sign) in enumerate(zip(self.perm, self.signs)):
            matrix[j, i] = sign
        return matrix

    def to_dict(self) -> dict:
        return {"perm": list(self.perm), "signs": list(self.signs)}

    @classmethod
    def from_dict(cls, payload: dict) -> "SignedPermutationMatrix":
        return cls(tuple(int(v) for v in payload["perm"]), tuple(int(v) for v in payload["signs"]))
