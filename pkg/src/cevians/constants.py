"""The extremal constant theta_n and the metallic means, in three forms each.

theta_n is the smaller root of x^2 - (n+1)x + 1 = 0; it is the common value
of the first n barycentric weights at the maximizer of the corner-volume
objective.  The metallic mean phi_n is the positive root of x^2 - nx - 1 = 0
(phi_1 is the golden ratio).  Both satisfy continued-fraction and hyperbolic
identities:

    theta_n = exp(-acosh((n+1)/2)) = 1 / ((n+1) - 1/((n+1) - ...))
    phi_n   = exp(asinh(n/2))      = n + 1/(n + 1/(n + ...))
"""
from __future__ import annotations

import math

from .errors import UnsupportedDimensionError


def theta(n: int) -> float:
    """Smaller root of x^2 - (n+1)x + 1, strictly inside (0, 1/n).

    Evaluated in the rationalized form 2 / (n+1 + sqrt((n+3)(n-1))) so no
    cancellation occurs for large n (the naive difference form loses all
    precision near n ~ 1e8).
    """
    if n < 2:
        # At n=1 the formula gives 1, outside (0, 1/n); smaller n is meaningless.
        raise UnsupportedDimensionError(f"theta requires n >= 2, got {n}")
    return 2.0 / (n + 1.0 + math.sqrt((n + 3.0) * (n - 1.0)))


def theta_cf(n: int, depth: int) -> float:
    """Continued-fraction convergent of theta_n.

    Truncates the tower 1/((n+1) - 1/((n+1) - ...)) after ``depth`` division
    levels, evaluated innermost-first: x <- 1/((n+1) - x) starting from
    x = 0, applied ``depth`` times.  depth=1 gives 1/(n+1).
    """
    if n < 2:
        raise UnsupportedDimensionError(f"theta_cf requires n >= 2, got {n}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    x = 0.0
    for _ in range(depth):
        x = 1.0 / (n + 1.0 - x)
    return x


def theta_hyperbolic(n: int) -> float:
    """theta_n via the hyperbolic identity exp(-acosh((n+1)/2))."""
    if n < 2:
        raise UnsupportedDimensionError(f"theta_hyperbolic requires n >= 2, got {n}")
    return math.exp(-math.acosh((n + 1.0) / 2.0))


def metallic(n: int) -> float:
    """Metallic mean phi_n = (n + sqrt(n^2 + 4)) / 2, defined for n >= 1."""
    if n < 1:
        raise UnsupportedDimensionError(f"metallic requires n >= 1, got {n}")
    return (n + math.sqrt(n * n + 4.0)) / 2.0


def metallic_cf(n: int, depth: int) -> float:
    """Continued-fraction convergent of phi_n.

    Truncates n + 1/(n + 1/(n + ...)) with innermost term n: x <- n + 1/x
    starting from x = n, applied ``depth`` times.  depth=1 gives n + 1/n.
    """
    if n < 1:
        raise UnsupportedDimensionError(f"metallic_cf requires n >= 1, got {n}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    x = float(n)
    for _ in range(depth):
        x = n + 1.0 / x
    return x


def metallic_hyperbolic(n: int) -> float:
    """phi_n via the hyperbolic identity exp(asinh(n/2))."""
    if n < 1:
        raise UnsupportedDimensionError(f"metallic_hyperbolic requires n >= 1, got {n}")
    return math.exp(math.asinh(n / 2.0))
