"""Bohm-type trajectories for Klein-Gordon plane-wave superpositions.

Implements the construction that splits the logarithmic gradient of a
positive-energy plane-wave superposition into real covectors p_mu and s_mu,
forms the two candidate velocity covectors

    w_plus = exp(theta) p + s,   w_minus = -exp(-theta) p + s,
    sinh(theta) = (p.p - s.s) / (2 p.s),

and selects whichever is timelike. The two candidates are mutually
orthogonal, so they are never both timelike -- but they can be both
spacelike, and then the selection rule has no answer. This package
classifies events by that verdict, integrates the trajectories where they
exist, and estimates the measure of the region where they do not.
"""

from .construction import (
    DEFAULT_ORTHO_TOL,
    DEFAULT_TOLERANCES,
    PointAnalysis,
    Selection,
    Tolerances,
    analyze_point,
    classify_pair,
    select,
    theta,
    w_fields,
)
from .errors import (
    BothTimelikeError,
    FieldOverflowError,
    IllDefinedVelocityError,
    KgBohmError,
    NodeError,
    OrthogonalDegenerateError,
)
from .measure import (
    TALLY_KEYS,
    FractionEstimate,
    Region,
    ScanCell,
    ScanResult,
    estimate_spacetime_fraction,
    grid_scan,
    sample_pair_space,
    wilson_interval,
    write_scan_csv,
)
from .minkowski import (
    DEFAULT_CLASS_TOL,
    CausalClass,
    FourVector,
    PlaneClass,
    causal_class,
    euclidean_norm,
    euclidean_sq,
    inner,
    plane_class,
    raise_index,
)
from .trajectory import (
    Termination,
    TrajectoryConfig,
    TrajectoryPoint,
    TrajectoryResult,
    integrate,
    velocity,
    write_trajectory_csv,
)
from .wavefield import (
    DEFAULT_NODE_TOL,
    ON_SHELL_RTOL,
    PlaneWaveMode,
    PolarGradients,
    Superposition,
    counterexample,
    load_superposition,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # minkowski
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
    # wavefield
    "ON_SHELL_RTOL",
    "DEFAULT_NODE_TOL",
    "PlaneWaveMode",
    "PolarGradients",
    "Superposition",
    "counterexample",
    "load_superposition",
    # construction
    "DEFAULT_ORTHO_TOL",
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "Selection",
    "PointAnalysis",
    "theta",
    "w_fields",
    "select",
    "classify_pair",
    "analyze_point",
    # trajectory
    "Termination",
    "TrajectoryConfig",
    "TrajectoryPoint",
    "TrajectoryResult",
    "velocity",
    "integrate",
    "write_trajectory_csv",
    # measure
    "TALLY_KEYS",
    "Region",
    "FractionEstimate",
    "ScanCell",
    "ScanResult",
    "wilson_interval",
    "estimate_spacetime_fraction",
    "sample_pair_space",
    "grid_scan",
    "write_scan_csv",
    # errors
    "KgBohmError",
    "NodeError",
    "OrthogonalDegenerateError",
    "BothTimelikeError",
    "FieldOverflowError",
    "IllDefinedVelocityError",
]
