"""Simplex geometry kernel: barycentric coordinates, volumes, cevian feet.

Conventions used throughout the package:

* an n-simplex lives in R^n and is given by n+1 vertices, one per row of an
  (n+1, n) array; indices are 0-based, so vertex i pairs with barycentric
  weight i and with cevian foot i (the foot on the facet opposite vertex i);
* all values are float64 and arrays are frozen (read-only) after
  construction, so every object here is safe to share between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSimplexError,
    DimensionMismatchError,
    NotInteriorError,
    UnsupportedDimensionError,
)

# Interior margin for barycentric weights: points with any weight below this
# are rejected so that downstream formulas never divide by a vanishing
# complement 1 - weight.
EPS_BOUNDARY = 1e-9

# Degeneracy guard, relative to (max edge length)^n so the kernel is
# scale-free: |det(edge matrix)| must exceed this times the scale factor.
DELTA_DEGENERACY = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=float)
    out.flags.writeable = False
    return out


def max_edge_length(vertices: np.ndarray) -> float:
    """Largest pairwise distance between the given points (rows)."""
    diff = vertices[:, None, :] - vertices[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1).max()))


@dataclass(frozen=True)
class BarycentricPoint:
    """Interior point of an n-simplex as positive weights summing to 1.

    The constructor renormalizes the weights by their sum (hand-entered
    weights rarely sum to 1 exactly) and rejects anything within
    EPS_BOUNDARY of the boundary.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise DimensionMismatchError("weights must be a flat vector")
        if w.shape[0] < 3:
            raise UnsupportedDimensionError(
                f"need n >= 2, i.e. at least 3 weights, got {w.shape[0]}"
            )
        if not np.all(np.isfinite(w)):
            raise NotInteriorError("weights must be finite")
        total = float(w.sum())
        if total <= 0.0:
            raise NotInteriorError(f"weights must have positive sum, got {total}")
        w = w / total
        if float(w.min()) < EPS_BOUNDARY:
            raise NotInteriorError(
                f"weight {w.min():.3e} below the interior margin {EPS_BOUNDARY:.0e}"
            )
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        """Dimension of the ambient simplex (= number of weights - 1)."""
        return self.weights.shape[0] - 1


@dataclass(frozen=True)
class CartesianSimplex:
    """n+1 vertices (rows) of a nondegenerate n-simplex in R^n."""

    vertices: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
            raise DimensionMismatchError(
                f"expected (n+1, n) vertex array, got {v.shape}"
            )
        if v.shape[1] < 2:
            raise UnsupportedDimensionError("need dimension n >= 2")
        if not np.all(np.isfinite(v)):
            raise DegenerateSimplexError("vertices must be finite")
        n = v.shape[1]
        det = float(np.linalg.det(v[:-1] - v[-1]))
        scale = max_edge_length(v)
        if not abs(det) > DELTA_DEGENERACY * scale**n:
            raise DegenerateSimplexError(
                f"|det| = {abs(det):.3e} under the guard "
                f"{DELTA_DEGENERACY:.0e} * (max edge)^{n}"
            )
        object.__setattr__(self, "vertices", _frozen(v))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True)
class CevianConfiguration:
    """A simplex, an interior point, and the n+1 cevians through it.

    ``feet`` holds the barycentric coordinates of the cevian feet, one per
    row; row i has an exact zero in column i (foot i lies on the facet
    opposite vertex i).  ``dist_to_vertices[i]`` is the distance from the
    interior point to vertex i and ``dist_to_feet[i]`` the distance from the
    interior point to foot i, so ``dist_to_feet[i] / dist_to_vertices[i]``
    equals ``weights[i] / (1 - weights[i])``.
    """

    simplex: CartesianSimplex
    point: BarycentricPoint
    point_cart: np.ndarray
    feet: np.ndarray
    feet_cart: np.ndarray
    dist_to_vertices: np.ndarray
    dist_to_feet: np.ndarray


def simplex_volume(vertices: np.ndarray) -> float:
    """Unsigned volume of the simplex spanned by the given (m+1, m) vertices.

    No degeneracy guard: flat simplices return (near-)zero volume.  This is
    the raw determinant evaluation used as an oracle for possibly degenerate
    sub-simplices; use :func:`volume` for guarded top-level simplices.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
        raise DimensionMismatchError(f"expected (m+1, m) vertex array, got {v.shape}")
    n = v.shape[1]
    return abs(float(np.linalg.det(v[:-1] - v[-1]))) / math.factorial(n)


def volume(s: CartesianSimplex) -> float:
    """Volume of a nondegenerate simplex: |det(A_i - A_last)| / n!."""
    return simplex_volume(s.vertices)


def to_cartesian(weights, s: CartesianSimplex) -> np.ndarray:
    """Map barycentric weights to the Cartesian point sum_i w_i A_i.

    Accepts a BarycentricPoint or any weight vector of length n+1 (cevian
    feet carry a zero entry and are passed as plain arrays).
    """
    w = weights.weights if isinstance(weights, BarycentricPoint) else np.asarray(weights, dtype=float)
    if w.shape != (s.vertices.shape[0],):
        raise DimensionMismatchError(
            f"{w.shape[0] if w.ndim == 1 else w.shape} weights against "
            f"{s.vertices.shape[0]} vertices"
        )
    return w @ s.vertices


def to_barycentric(p, s: CartesianSimplex) -> BarycentricPoint:
    """Barycentric coordinates of a point strictly inside the simplex.

    Solves the (n+1) x (n+1) linear system [vertices^T; row of ones] w =
    [p; 1].  Raises NotInteriorError if any solved weight falls below
    EPS_BOUNDARY.
    """
    p = np.asarray(p, dtype=float)
    n = s.dim
    if p.shape != (n,):
        raise DimensionMismatchError(f"point shape {p.shape} against dimension {n}")
    a = np.empty((n + 1, n + 1))
    a[:n, :] = s.vertices.T
    a[n, :] = 1.0
    rhs = np.append(p, 1.0)
    try:
        w = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:  # guarded at construction; belt and braces
        raise DegenerateSimplexError(str(exc)) from exc
    return BarycentricPoint(w)


def cevian_foot(i: int, m: BarycentricPoint) -> np.ndarray:
    """Barycentric coordinates of the cevian foot opposite vertex i.

    The foot is the intersection of line (vertex i, M) with the facet
    opposite vertex i: zero out weight i and renormalize the rest by
    1 - w_i.  Entry i of the result is exactly 0.
    """
    if not 0 <= i <= m.n:
        raise IndexError(f"foot index {i} out of range 0..{m.n}")
    w = np.array(m.weights)
    wi = w[i]
    w[i] = 0.0
    w /= 1.0 - wi
    return _frozen(w)


def build_configuration(s: CartesianSimplex, m: BarycentricPoint) -> CevianConfiguration:
    """Assemble the full cevian configuration for simplex s and point m."""
    if m.n != s.dim:
        raise DimensionMismatchError(f"point n={m.n} against simplex n={s.dim}")
    k = s.dim + 1
    feet = np.empty((k, k))
    for i in range(k):
        feet[i] = cevian_foot(i, m)
    feet_cart = feet @ s.vertices
    point_cart = m.weights @ s.vertices
    dist_to_vertices = np.linalg.norm(s.vertices - point_cart, axis=1)
    dist_to_feet = np.linalg.norm(feet_cart - point_cart, axis=1)
    return CevianConfiguration(
        simplex=s,
        point=m,
        point_cart=_frozen(point_cart),
        feet=_frozen(feet),
        feet_cart=_frozen(feet_cart),
        dist_to_vertices=_frozen(dist_to_vertices),
        dist_to_feet=_frozen(dist_to_feet),
    )


def feet_simplex_vertices(config: CevianConfiguration) -> np.ndarray:
    """Vertices of the cevian simplex N_0 ... N_n (the feet, in order)."""
    return config.feet_cart


def corner_simplex_vertices(config: CevianConfiguration, k: int) -> np.ndarray:
    """Vertices of corner sub-simplex k: the interior point plus every foot
    except foot k."""
    n = config.simplex.dim
    if not 0 <= k <= n:
        raise IndexError(f"corner index {k} out of range 0..{n}")
    keep = [j for j in range(n + 1) if j != k]
    return np.vstack([config.feet_cart[keep], config.point_cart[None, :]])
