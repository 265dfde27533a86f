# heat_trace/precision.py
import math
from contextlib import contextmanager
from typing import Iterable, Literal

import mpmath

from common import config

Precision = Literal["double", "extended"]


@contextmanager
def numeric_context(precision: Precision = "double", dps: int = None):
    """Yield ``mpmath.fp`` for double precision or ``mpmath.mp`` at ``dps`` digits."""
    if precision == "extended":
        with mpmath.workdps(dps or config.EXTENDED_DPS):
            yield mpmath.mp
    elif precision == "double":
        yield mpmath.fp
    else:
        raise ValueError(f"unknown precision {precision!r}")


def accumulate(ctx, terms: Iterable):
    """Order-independent sum: math.fsum in double, mpmath.fsum otherwise."""
    if ctx is mpmath.fp:
        return math.fsum(terms)
    return ctx.fsum(terms)


def unit_roundoff(ctx):
    if ctx is mpmath.fp:
        return 2.0 ** -52
    return ctx.mpf(10) ** (-ctx.dps)


def log_sinh(ctx, x):
    """log(sinh x) for x > 0 without overflow."""
    if x < 1:
        return ctx.log(ctx.sinh(x))
    return x + ctx.log(1 - ctx.exp(-2 * x)) - ctx.log(2)


def x_over_sinh(ctx, x):
    """The even function x / sinh x with value 1 at 0."""
    x = abs(x)
    if x == 0:
        return ctx.mpf(1)
    if x < 1:
        return x / ctx.sinh(x)
    return 2 * x * ctx.exp(-x) / (1 - ctx.exp(-2 * x))
