"""Minkowski-signature linear algebra on real four-component vectors.

Signature is fixed to (+, -, -, -). Components are stored with the index
down, and the inner product reads a0*b0 - a1*b1 - a2*b2 - a3*b3 on
components (the same formula applies to a pair of contravariant vectors).
Natural units hbar = c = 1, so gradient covectors carry units of mass.

Causal verdicts are tolerance-based and relative to a Euclidean component
scale, which makes them invariant under overall rescaling well above the
tolerance. The zero vector classifies as null; callers treat null as a
boundary verdict, not an error.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Iterable, NamedTuple

__all__ = [
    "DEFAULT_CLASS_TOL",
    "CausalClass",
    "PlaneClass",
    "FourVector",
    "inner",
    "raise_index",
    "euclidean_sq",
    "euclidean_norm",
    "causal_class",
    "plane_class",
]

DEFAULT_CLASS_TOL = 1e-9


class CausalClass(Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    NULL = "null"


class PlaneClass(Enum):
    SPACELIKE_PLANE = "spacelike_plane"
    LORENTZIAN_PLANE = "lorentzian_plane"
    DEGENERATE_PLANE = "degenerate_plane"


class FourVector(NamedTuple):
    """Real four-component vector; components are finite floats.

    Used both for covariant gradient/wave covectors and, where stated by
    the caller, for contravariant events and tangents. Arithmetic is
    componentwise; the tuple semantics of ``+`` and ``*`` are overridden
    so no silent concatenation or repetition can occur.
    """

    c0: float
    c1: float
    c2: float
    c3: float

    def __add__(self, other):
        if not isinstance(other, FourVector):
            return NotImplemented
        return FourVector(
            self.c0 + other.c0,
            self.c1 + other.c1,
            self.c2 + other.c2,
            self.c3 + other.c3,
        )

    def __sub__(self, other):
        if not isinstance(other, FourVector):
            return NotImplemented
        return FourVector(
            self.c0 - other.c0,
            self.c1 - other.c1,
            self.c2 - other.c2,
            self.c3 - other.c3,
        )

    def __mul__(self, s):
        if not isinstance(s, (int, float)):
            return NotImplemented
        return FourVector(self.c0 * s, self.c1 * s, self.c2 * s, self.c3 * s)

    def __rmul__(self, s):
        return self.__mul__(s)

    def __neg__(self):
        return FourVector(-self.c0, -self.c1, -self.c2, -self.c3)

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "FourVector":
        vals = [float(v) for v in values]
        if len(vals) != 4:
            raise ValueError(f"expected 4 components, got {len(vals)}")
        return cls(*vals)

    def is_finite(self) -> bool:
        return (
            math.isfinite(self.c0)
            and math.isfinite(self.c1)
            and math.isfinite(self.c2)
            and math.isfinite(self.c3)
        )


def inner(a: FourVector, b: FourVector) -> float:
    """Minkowski inner product a0*b0 - a1*b1 - a2*b2 - a3*b3.

    Symmetric and bilinear; assumes finite inputs.
    """
    return a.c0 * b.c0 - a.c1 * b.c1 - a.c2 * b.c2 - a.c3 * b.c3


def raise_index(v: FourVector) -> FourVector:
    """Flip the index position: (c0, c1, c2, c3) -> (c0, -c1, -c2, -c3).

    The metric is its own inverse up to index placement, so the same map
    also lowers; it is an involution.
    """
    return FourVector(v.c0, -v.c1, -v.c2, -v.c3)


def euclidean_sq(v: FourVector) -> float:
    """Component square sum c0^2 + c1^2 + c2^2 + c3^2 (tolerance scale)."""
    return v.c0 * v.c0 + v.c1 * v.c1 + v.c2 * v.c2 + v.c3 * v.c3


def euclidean_norm(v: FourVector) -> float:
    return math.sqrt(euclidean_sq(v))


def causal_class(v: FourVector, tol: float = DEFAULT_CLASS_TOL) -> CausalClass:
    """Classify v as timelike, spacelike, or null.

    Null means |v.v| <= tol * (component square sum), so the verdict is
    unit-independent and the zero vector is null rather than an error.
    """
    q = inner(v, v)
    threshold = tol * euclidean_sq(v)
    if abs(q) <= threshold:
        return CausalClass.NULL
    if q > 0.0:
        return CausalClass.TIMELIKE
    return CausalClass.SPACELIKE


def plane_class(
    a: FourVector, b: FourVector, tol: float = DEFAULT_CLASS_TOL
) -> PlaneClass:
    """Classify the 2-plane spanned by a and b via their Gram matrix.

    With G = [[a.a, a.b], [a.b, b.b]] and scale the product of the two
    Euclidean square sums:

      det G >  tol*scale and a.a < 0  ->  spacelike plane (form negative
                                          definite on the span)
      det G < -tol*scale              ->  Lorentzian plane
      otherwise                       ->  degenerate plane

    Linearly dependent inputs land in the degenerate verdict since their
    Gram determinant vanishes. The verdict depends only on G, hence is
    invariant under invertible change of the spanning pair away from
    tolerance boundaries.
    """
    aa = inner(a, a)
    ab = inner(a, b)
    bb = inner(b, b)
    det = aa * bb - ab * ab
    threshold = tol * euclidean_sq(a) * euclidean_sq(b)
    if det > threshold and aa < 0.0:
        return PlaneClass.SPACELIKE_PLANE
    if det < -threshold:
        return PlaneClass.LORENTZIAN_PLANE
    return PlaneClass.DEGENERATE_PLANE
