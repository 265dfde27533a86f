# htype_algebra/lattice.py
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple


@dataclass(frozen=True)
class StandardLattice:
    """Integer combinations of X_i plus half-integer combinations of Z_k."""

    horizontal_spacing: int = 1
    vertical_spacing: Fraction = Fraction(1, 2)
    p0: int = 2

    def to_dict(self) -> dict:
        return {
            "horizontal_spacing": self.horizontal_spacing,
            "vertical_spacing": str(self.vertical_spacing),
            "p0": self.p0,
        }


@dataclass(frozen=True)
class DualLatticeVector:
    """The functional 2(sum m_i Z_i + sum n_j Z_{r+j}) on the center.

    ``m`` holds the r positive coefficients (mu), ``n`` the s negative ones (nu).
    """

    m: Tuple[int, ...]
    n: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))

    @classmethod
    def zero(cls, r: int, s: int) -> "DualLatticeVector":
        return cls((0,) * r, (0,) * s)

    @classmethod
    def from_center(cls, values, r: int) -> "DualLatticeVector":
        values = tuple(values)
        return cls(values[:r], values[r:])

    @property
    def mu_norm_sq(self) -> int:
        return sum(v * v for v in self.m)

    @property
    def nu_norm_sq(self) -> int:
        return sum(v * v for v in self.n)

    @property
    def is_zero(self) -> bool:
        return not any(self.m) and not any(self.n)

    @property
    def coefficients(self) -> Tuple[int, ...]:
        """(mu, nu) concatenated."""
        return self.m + self.n

    @property
    def functional(self) -> Tuple[int, ...]:
        """The dual vector itself, 2(mu, nu)."""
        return tuple(2 * v for v in self.coefficients)

    @property
    def d0(self) -> int:
        result = 0
        for value in self.coefficients:
            result = gcd(result, value)
        return result

    def __neg__(self) -> "DualLatticeVector":
        return DualLatticeVector(tuple(-v for v in self.m), tuple(-v for v in self.n))
