"""Vector algebra of the Galilean 3-space G3.

The first coordinate spans the absolute direction; a vector whose first
coordinate is zero is isotropic, and lengths of isotropic vectors are the
Euclidean lengths of their (y, z) parts.  The scalar product is degenerate:
it sees only the first components unless both vectors are isotropic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonIsotropicInput, ZeroVector

ZERO_NORM_FLOOR = 1e-14


@dataclass(frozen=True)
class G3Vector:
    """A vector (x, y, z); x is the absolute component, y and z isotropic."""

    x: float
    y: float
    z: float

    @property
    def is_isotropic(self) -> bool:
        # Exact test on purpose: every isotropic vector in this package is
        # constructed with a literal zero first component (cross products,
        # principal normals, binormals), never by cancellation.
        return self.x == 0.0

    def __add__(self, other: "G3Vector") -> "G3Vector":
        return G3Vector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "G3Vector") -> "G3Vector":
        return G3Vector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "G3Vector":
        return G3Vector(-self.x, -self.y, -self.z)

    def __mul__(self, k: float) -> "G3Vector":
        return G3Vector(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


def dot(a: G3Vector, b: G3Vector) -> float:
    """Galilean scalar product: a1*b1 unless both vectors are isotropic."""
    if a.x != 0.0 or b.x != 0.0:
        return a.x * b.x
    return a.y * b.y + a.z * b.z


def cross(a: G3Vector, b: G3Vector) -> G3Vector:
    """Galilean cross product; the result is always isotropic."""
    return G3Vector(0.0, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)


def isotropic_norm(a: G3Vector) -> float:
    """Euclidean length of an isotropic vector's (y, z) part."""
    if a.x != 0.0:
        raise NonIsotropicInput(f"vector {a.as_tuple()} has nonzero absolute component")
    return math.hypot(a.y, a.z)


def normalize_isotropic(a: G3Vector) -> G3Vector:
    """Scale an isotropic vector to unit isotropic norm."""
    n = isotropic_norm(a)
    if n < ZERO_NORM_FLOOR:
        raise ZeroVector(f"cannot normalize near-zero vector {a.as_tuple()}")
    return G3Vector(0.0, a.y / n, a.z / n)


def galilean_norm(a: G3Vector) -> float:
    """|x| for non-isotropic vectors, the isotropic norm otherwise."""
    if a.x != 0.0:
        return abs(a.x)
    return math.hypot(a.y, a.z)


def isotropic_wedge(a: G3Vector, b: G3Vector) -> float:
    """Signed area spanned by the (y, z) parts of two isotropic vectors.

    Zero iff the vectors are parallel.  The G3 cross product of two
    isotropic vectors vanishes identically, so parallelism tests must use
    this planar wedge instead.
    """
    if a.x != 0.0 or b.x != 0.0:
        raise NonIsotropicInput("wedge is defined for isotropic vectors only")
    return a.y * b.z - a.z * b.y
