"""Candidate velocity covectors and the timelike-selection verdict.

From the gradient pair (p, s) of psi = exp(p + i*s), build the hyperbolic
mixing angle theta with

    sinh(theta) = (p.p - s.s) / (2 p.s)

and the two candidate covectors

    w_plus  =  exp(theta) p + s
    w_minus = -exp(-theta) p + s.

The value of theta makes w_plus and w_minus orthogonal, which is exactly
why they can never both be timelike. The selection rule takes whichever is
timelike as the particle velocity; this module also surfaces the cases
where that rule breaks down: both candidates spacelike (equivalently, p
and s span a spacelike 2-plane), a null candidate at the tolerance
boundary, and the excluded p.s ~ 0 case where theta itself is undefined.

No fallback velocity is invented for the broken cases; exposing them is
the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    BothTimelikeError,
    FieldOverflowError,
    OrthogonalDegenerateError,
)
from .minkowski import (
    CausalClass,
    FourVector,
    PlaneClass,
    causal_class,
    euclidean_sq,
    inner,
    plane_class,
)
from .wavefield import Superposition

__all__ = [
    "DEFAULT_ORTHO_TOL",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "Selection",
    "PointAnalysis",
    "theta",
    "w_fields",
    "select",
    "classify_pair",
    "analyze_point",
]

DEFAULT_ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances for the analysis pipeline.

    causal: causal classification threshold, |v.v| vs component scale
    ortho:  degeneracy threshold on |p.s| vs |p||s| (Euclidean norms)
    node:   nodal threshold on |psi| vs sum of mode amplitude moduli
    """

    causal: float = 1e-9
    ortho: float = DEFAULT_ORTHO_TOL
    node: float = 1e-12

    def __post_init__(self):
        for name in ("causal", "ortho", "node"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise ValueError(f"tolerance {name!r} must be positive, got {v!r}")


DEFAULT_TOLERANCES = Tolerances()


class Selection(Enum):
    """Verdict of the timelike-selection rule at one point."""

    PLUS_TIMELIKE = "plus_timelike"
    MINUS_TIMELIKE = "minus_timelike"
    BOTH_SPACELIKE = "both_spacelike"
    BOUNDARY = "boundary"
    ORTHOGONAL_DEGENERATE = "orthogonal_degenerate"


@dataclass(frozen=True)
class PointAnalysis:
    """Full analysis of one space-time event x (contravariant components).

    gram_consistent records the cross-check of the selection verdict
    against the Gram-matrix plane criterion: a both-spacelike selection
    must coincide with a spacelike plane. Boundary or degenerate-plane
    verdicts are not contradictions, so the flag stays true there.
    """

    x: FourVector
    psi: complex
    p_mu: FourVector
    s_mu: FourVector
    theta: float
    w_plus: FourVector
    w_minus: FourVector
    class_plus: CausalClass
    class_minus: CausalClass
    plane: PlaneClass
    selection: Selection
    gram_consistent: bool

    def to_dict(self) -> dict:
        """JSON-friendly view: vectors as lists, psi as [re, im]."""
        return {
            "x": list(self.x),
            "psi": [self.psi.real, self.psi.imag],
            "p_mu": list(self.p_mu),
            "s_mu": list(self.s_mu),
            "theta": self.theta,
            "w_plus": list(self.w_plus),
            "w_minus": list(self.w_minus),
            "class_plus": self.class_plus.value,
            "class_minus": self.class_minus.value,
            "plane": self.plane.value,
            "selection": self.selection.value,
            "gram_consistent": self.gram_consistent,
        }


def theta(p: FourVector, s: FourVector, ortho_tol: float = DEFAULT_ORTHO_TOL) -> float:
    """Hyperbolic mixing angle, asinh((p.p - s.s) / (2 p.s)).

    Evaluated through math.asinh, i.e. the overflow-safe logarithmic form
    sign(u) * ln(|u| + sqrt(u^2 + 1)).

    Raises OrthogonalDegenerateError when |p.s| <= ortho_tol * |p| * |s|
    (Euclidean norms); in particular the zero covector is always
    degenerate.
    """
    if ortho_tol <= 0:
        raise ValueError("ortho_tol must be positive")
    q = inner(p, s)
    scale = math.sqrt(euclidean_sq(p)) * math.sqrt(euclidean_sq(s))
    if abs(q) <= ortho_tol * scale:
        raise OrthogonalDegenerateError(q, ortho_tol * scale)
    return math.asinh((inner(p, p) - inner(s, s)) / (2.0 * q))


def w_fields(
    p: FourVector, s: FourVector, th: float
) -> tuple[FourVector, FourVector]:
    """The candidate covectors (exp(th) p + s, -exp(-th) p + s).

    Raises FieldOverflowError if exp(|th|) is not representable; the
    overflow is reported, never silently saturated.
    """
    if math.isnan(th):
        raise ValueError("theta is NaN")
    try:
        ep = math.exp(th)
        em = math.exp(-th)
    except OverflowError as e:
        raise FieldOverflowError(th) from e
    return (p * ep + s, p * (-em) + s)


def select(class_plus: CausalClass, class_minus: CausalClass) -> Selection:
    """Apply the selection table to the two causal classes.

    (timelike, spacelike) -> plus side is the velocity
    (spacelike, timelike) -> minus side is the velocity
    (spacelike, spacelike) -> rule ill-defined, both spacelike
    any null              -> boundary verdict
    (timelike, timelike)  -> BothTimelikeError; impossible for orthogonal
                             vectors, so it flags numerical inconsistency
    """
    if class_plus is CausalClass.NULL or class_minus is CausalClass.NULL:
        return Selection.BOUNDARY
    plus_t = class_plus is CausalClass.TIMELIKE
    minus_t = class_minus is CausalClass.TIMELIKE
    if plus_t and minus_t:
        raise BothTimelikeError(
            "both candidate covectors classified timelike; orthogonal vectors "
            "cannot both be timelike, check tolerances"
        )
    if plus_t:
        return Selection.PLUS_TIMELIKE
    if minus_t:
        return Selection.MINUS_TIMELIKE
    return Selection.BOTH_SPACELIKE


def classify_pair(
    p: FourVector, s: FourVector, tols: Tolerances = DEFAULT_TOLERANCES
) -> Selection:
    """Classify a raw (p, s) pair through theta, the candidates, and select.

    Lightweight path for pair-space sampling; raises
    OrthogonalDegenerateError for the excluded case.
    """
    th = theta(p, s, tols.ortho)
    wp, wm = w_fields(p, s, th)
    return select(causal_class(wp, tols.causal), causal_class(wm, tols.causal))


def _gram_consistent(selection: Selection, plane: PlaneClass) -> bool:
    if selection is Selection.BOUNDARY or plane is PlaneClass.DEGENERATE_PLANE:
        return True
    return (selection is Selection.BOTH_SPACELIKE) == (
        plane is PlaneClass.SPACELIKE_PLANE
    )


def analyze_point(
    w: Superposition, x: FourVector, tols: Tolerances = DEFAULT_TOLERANCES
) -> PointAnalysis:
    """Run the full pipeline at one event x.

    polar gradients -> theta -> candidate covectors -> causal classes ->
    selection, plus the independent Gram-criterion cross-check.

    Raises NodeError on the nodal set and OrthogonalDegenerateError in the
    excluded p.s ~ 0 case; both are verdicts about x that tallying callers
    catch.
    """
    pol = w.polar_gradients(x, node_tol=tols.node)
    th = theta(pol.p_mu, pol.s_mu, tols.ortho)
    wp, wm = w_fields(pol.p_mu, pol.s_mu, th)
    cp = causal_class(wp, tols.causal)
    cm = causal_class(wm, tols.causal)
    sel = select(cp, cm)
    plane = plane_class(pol.p_mu, pol.s_mu, tols.causal)
    return PointAnalysis(
        x=x,
        psi=pol.psi,
        p_mu=pol.p_mu,
        s_mu=pol.s_mu,
        theta=th,
        w_plus=wp,
        w_minus=wm,
        class_plus=cp,
        class_minus=cm,
        plane=plane,
        selection=sel,
        gram_consistent=_gram_consistent(sel, plane),
    )
