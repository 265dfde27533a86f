"""Dimensions of minimal admissible Cl(r,s)-modules.

``MINIMAL_DIMENSIONS[(r, s)] = (dim, two_irreducibles)`` for 0 <= r, s <= 8 with
r + s <= 8 plus the filled cells of rows s <= 3 up to r = 7. ``two_irreducibles``
marks the cells where two non-equivalent minimal admissible modules exist
(the "x2" entries); for those the minimal admissible module is the
irreducible one (black entries) or a double of one (bold entries), and in both
cases two variants exist.
"""

from typing import Dict, List, Tuple

from common.errors import SignatureError

# Provenance: appendix dimension table, one comment per row of the table.
MINIMAL_DIMENSIONS: Dict[Tuple[int, int], Tuple[int, bool]] = {
    # row s=0: 1, 2, 4, 4x2, 8, 8, 8, 8x2, 16
    (0, 0): (1, False), (1, 0): (2, False), (2, 0): (4, False), (3, 0): (4, True),
    (4, 0): (8, False), (5, 0): (8, False), (6, 0): (8, False), (7, 0): (8, True),
    (8, 0): (16, False),
    # row s=1: 2, 4, 8, 8, 16, 16, 16, 16
    (0, 1): (2, False), (1, 1): (4, False), (2, 1): (8, False), (3, 1): (8, False),
    (4, 1): (16, False), (5, 1): (16, False), (6, 1): (16, False), (7, 1): (16, False),
    # row s=2: 4, 4x2, 8, 8, 16, 16x2, 32, 32
    (0, 2): (4, False), (1, 2): (4, True), (2, 2): (8, False), (3, 2): (8, False),
    (4, 2): (16, False), (5, 2): (16, True), (6, 2): (32, False), (7, 2): (32, False),
    # row s=3: 8, 8, 8, 8, 16, 32, 64, 64
    (0, 3): (8, False), (1, 3): (8, False), (2, 3): (8, False), (3, 3): (8, False),
    (4, 3): (16, False), (5, 3): (32, False), (6, 3): (64, False), (7, 3): (64, False),
    # row s=4: 8, 8, 8, 8x2, 16
    (0, 4): (8, False), (1, 4): (8, False), (2, 4): (8, False), (3, 4): (8, True),
    (4, 4): (16, False),
    # row s=5: 16, 16, 16, 16
    (0, 5): (16, False), (1, 5): (16, False), (2, 5): (16, False), (3, 5): (16, False),
    # row s=6: 16, 16x2, 32, 32
    (0, 6): (16, False), (1, 6): (16, True), (2, 6): (32, False), (3, 6): (32, False),
    # row s=7: 16, 32, 64, 64
    (0, 7): (16, False), (1, 7): (32, False), (2, 7): (64, False), (3, 7): (64, False),
    # row s=8: 16
    (0, 8): (16, False),
}

PERIOD_FACTOR = 16


def validate_signature(r: int, s: int) -> None:
    if r < 0 or s < 0:
        raise SignatureError(f"signature must be nonnegative, got ({r},{s})")
    if r + s == 0:
        raise SignatureError("signature (0,0) has no Clifford generators")


def periodicity_steps(r: int, s: int) -> Tuple[Tuple[int, int], List[Tuple[int, int]]]:
    """Reduce (r, s) to a table cell.

    Returns the table cell and the periods removed on the way, each one of
    (4, 4), (8, 0) or (0, 8), in the order they were removed.
    """
    steps: List[Tuple[int, int]] = []
    while (r, s) not in MINIMAL_DIMENSIONS:
        if r >= 4 and s >= 4:
            step = (4, 4)
        elif r >= 8:
            step = (8, 0)
        elif s >= 8:
            step = (0, 8)
        else:
            raise SignatureError(f"signature ({r},{s}) cannot be reduced to the dimension table")
        steps.append(step)
        r, s = r - step[0], s - step[1]
    return (r, s), steps


def min_admissible_dim(r: int, s: int) -> int:
    validate_signature(r, s)
    cell, steps = periodicity_steps(r, s)
    return MINIMAL_DIMENSIONS[cell][0] * PERIOD_FACTOR ** len(steps)


def has_two_irreducibles(r: int, s: int) -> bool:
    validate_signature(r, s)
    cell, _ = periodicity_steps(r, s)
    return MINIMAL_DIMENSIONS[cell][1]
