"""Integral curves of the selected timelike candidate field.

The tangent at an event is the timelike candidate covector with its index
raised, normalized to a unit future-pointing vector (u.u = 1, u0 > 0), so
the curve parameter is proper time and step control is decoupled from the
magnitude of the raw field. Integration is classic fixed-step RK4; when
any stage point falls in a region where the velocity is ill-defined (both
candidates spacelike, degenerate p.s, a null-boundary verdict, or the
nodal set) the whole step is rejected, the last accepted point is kept,
and the cause is recorded. No continuation rule is invented past such a
region and no interpolation to its boundary is attempted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple

from .construction import (
    DEFAULT_TOLERANCES,
    PointAnalysis,
    Selection,
    Tolerances,
    analyze_point,
)
from .errors import (
    FieldOverflowError,
    IllDefinedVelocityError,
    NodeError,
    OrthogonalDegenerateError,
)
from .minkowski import FourVector, inner, raise_index
from .wavefield import Superposition

__all__ = [
    "Termination",
    "TrajectoryConfig",
    "TrajectoryPoint",
    "TrajectoryResult",
    "velocity",
    "integrate",
    "write_trajectory_csv",
]


class Termination(Enum):
    MAX_STEPS = "max_steps"
    ENTERED_BOTH_SPACELIKE = "entered_both_spacelike"
    ENTERED_ORTHOGONAL_DEGENERATE = "entered_orthogonal_degenerate"
    ENTERED_BOUNDARY = "entered_boundary"
    HIT_NODE = "hit_node"
    OVERFLOW = "overflow"


@dataclass(frozen=True)
class TrajectoryConfig:
    """Fixed proper-time step (units 1/m), step count cap, and tolerances.

    step * m <= 1 is recommended; larger steps only draw a warning at
    integration time since the mass lives on the superposition.
    """

    step: float
    max_steps: int
    tols: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self):
        if not (isinstance(self.step, (int, float)) and self.step > 0):
            raise ValueError(f"step must be positive, got {self.step!r}")
        if not (isinstance(self.max_steps, int) and self.max_steps >= 1):
            raise ValueError(f"max_steps must be an integer >= 1, got {self.max_steps!r}")


class TrajectoryPoint(NamedTuple):
    """One accepted point: proper time, event, unit tangent, raw selected
    covector, and the selection verdict there."""

    tau: float
    x: FourVector
    u: FourVector
    w: FourVector
    selection: Selection


@dataclass
class TrajectoryResult:
    points: list[TrajectoryPoint]
    termination: Termination
    # Stage point whose analysis triggered a non-MaxSteps termination;
    # re-analyzing it independently reproduces the verdict.
    failed_at: FourVector | None = None


def _tangent(
    w: Superposition, x: FourVector, tols: Tolerances
) -> tuple[FourVector, PointAnalysis]:
    try:
        a = analyze_point(w, x, tols)
    except OrthogonalDegenerateError as e:
        raise IllDefinedVelocityError(Selection.ORTHOGONAL_DEGENERATE) from e
    if a.selection is Selection.PLUS_TIMELIKE:
        w_sel = a.w_plus
    elif a.selection is Selection.MINUS_TIMELIKE:
        w_sel = a.w_minus
    else:
        raise IllDefinedVelocityError(a.selection)
    norm = math.sqrt(inner(w_sel, w_sel))
    u = raise_index(w_sel) * (1.0 / norm)
    if u.c0 < 0.0:
        u = -u
    return u, a


def velocity(
    w: Superposition, x: FourVector, tols: Tolerances = DEFAULT_TOLERANCES
) -> FourVector:
    """Unit future-pointing tangent at x (contravariant, u.u = 1, u0 > 0).

    Selects the timelike candidate, raises its index, normalizes, and
    orients it forward in time. Raises IllDefinedVelocityError carrying
    the verdict when no unique timelike candidate exists, and NodeError on
    the nodal set. Scaling psi by a nonzero constant leaves the result
    unchanged (constants drop out of grad(psi)/psi).
    """
    u, _ = _tangent(w, x, tols)
    return u


def _termination_for(exc: Exception) -> Termination:
    if isinstance(exc, NodeError):
        return Termination.HIT_NODE
    if isinstance(exc, FieldOverflowError):
        return Termination.OVERFLOW
    if isinstance(exc, IllDefinedVelocityError):
        if exc.selection is Selection.BOTH_SPACELIKE:
            return Termination.ENTERED_BOTH_SPACELIKE
        if exc.selection is Selection.ORTHOGONAL_DEGENERATE:
            return Termination.ENTERED_ORTHOGONAL_DEGENERATE
        return Termination.ENTERED_BOUNDARY
    raise exc


def integrate(
    w: Superposition, x0: FourVector, cfg: TrajectoryConfig
) -> TrajectoryResult:
    """Integrate dx/dtau = velocity(x) from x0 with fixed-step RK4.

    The result records every accepted point (x0 included) with its unit
    tangent, raw selected covector, verdict, and strictly increasing proper
    time. Stops after max_steps accepted steps, or at the first step where
    any RK4 stage point has an ill-defined velocity, recording the cause
    and the offending stage point. A degenerate x0 raises immediately
    instead of returning a result.

    Deterministic: identical inputs give bit-identical point sequences.
    """
    if cfg.step * w.mass > 1.0:
        warnings.warn(
            f"step * mass = {cfg.step * w.mass:.3g} > 1; accuracy may suffer",
            stacklevel=2,
        )
    tols = cfg.tols
    h = cfg.step
    u, a = _tangent(w, x0, tols)
    points = [TrajectoryPoint(0.0, x0, u, _selected_w(a), a.selection)]
    x = x0
    tau = 0.0
    termination = Termination.MAX_STEPS
    failed_at: FourVector | None = None
    for _ in range(cfg.max_steps):
        k1 = u
        stage_x = x
        try:
            stage_x = x + k1 * (h / 2.0)
            k2, _unused = _tangent(w, stage_x, tols)
            stage_x = x + k2 * (h / 2.0)
            k3, _unused = _tangent(w, stage_x, tols)
            stage_x = x + k3 * h
            k4, _unused = _tangent(w, stage_x, tols)
            stage_x = x + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
            u_next, a_next = _tangent(w, stage_x, tols)
        except (IllDefinedVelocityError, NodeError, FieldOverflowError) as e:
            termination = _termination_for(e)
            failed_at = stage_x
            break
        x = stage_x
        u = u_next
        tau += h
        points.append(TrajectoryPoint(tau, x, u, _selected_w(a_next), a_next.selection))
    return TrajectoryResult(points=points, termination=termination, failed_at=failed_at)


def _selected_w(a: PointAnalysis) -> FourVector:
    return a.w_plus if a.selection is Selection.PLUS_TIMELIKE else a.w_minus


def write_trajectory_csv(result: TrajectoryResult, path: str | Path) -> None:
    """Write points as CSV, one row per point, with a trailing comment line
    naming the termination cause.

    Header: tau,x0,x1,x2,x3,u0,u1,u2,u3,selection
    """
    with open(path, "w") as fh:
        fh.write("tau,x0,x1,x2,x3,u0,u1,u2,u3,selection\n")
        for pt in result.points:
            fh.write(
                f"{pt.tau!r},{pt.x.c0!r},{pt.x.c1!r},{pt.x.c2!r},{pt.x.c3!r},"
                f"{pt.u.c0!r},{pt.u.c1!r},{pt.u.c2!r},{pt.u.c3!r},"
                f"{pt.selection.value}\n"
            )
        fh.write(f"# termination: {result.termination.value}\n")
