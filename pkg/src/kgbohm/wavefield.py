"""Finite positive-energy plane-wave superpositions of the Klein-Gordon field.

A wave function is psi(x) = sum_i c_i exp(i k^(i)_mu x^mu) with every wave
covector k on the mass shell (k.k = m^2) and k_0 > 0, which makes psi an
exact solution of -box(psi) = m^2 psi built purely from positive-energy
modes. The phase pairs the covariant k with the event's contravariant
coordinates, so it is the plain component sum k0*x0 + k1*x1 + k2*x2 + k3*x3,
not the Minkowski form.

Off the nodal set, writing psi = exp(p + i*s) with real p and s defines the
gradient covectors p_mu and s_mu through grad(psi)/psi = p_mu + i*s_mu,
evaluated here from the exact analytic gradient (no discretization).

Wave functions here are finite mode sums only; richer square-integrable
packets are approximated by adding modes, not by a separate function class.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .errors import NodeError
from .minkowski import FourVector, inner

__all__ = [
    "ON_SHELL_RTOL",
    "DEFAULT_NODE_TOL",
    "PlaneWaveMode",
    "PolarGradients",
    "Superposition",
    "counterexample",
    "load_superposition",
]

ON_SHELL_RTOL = 1e-12
DEFAULT_NODE_TOL = 1e-12


@dataclass(frozen=True)
class PlaneWaveMode:
    """One on-shell positive-energy plane wave: covector k and amplitude c."""

    k: FourVector
    c: complex


class PolarGradients(NamedTuple):
    """psi and its log-gradient split at one point, p_mu + i*s_mu = grad(psi)/psi.

    Only constructed off the nodal set.
    """

    psi: complex
    p_mu: FourVector
    s_mu: FourVector


def _validate_mode(index: int, mode: PlaneWaveMode, mass: float) -> None:
    if not isinstance(mode.k, FourVector):
        raise ValueError(f"mode {index}: k must be a FourVector")
    if not mode.k.is_finite():
        raise ValueError(f"mode {index}: k has non-finite components: {mode.k}")
    c = complex(mode.c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"mode {index}: amplitude is not finite: {c!r}")
    if c == 0:
        raise ValueError(f"mode {index}: amplitude must be nonzero")
    if mode.k.c0 <= 0.0:
        raise ValueError(
            f"mode {index}: k0 = {mode.k.c0!r} violates the positive-energy "
            f"requirement k0 > 0"
        )
    residual = inner(mode.k, mode.k) - mass * mass
    if abs(residual) > ON_SHELL_RTOL * mass * mass:
        raise ValueError(
            f"mode {index}: off the mass shell: |k.k - m^2| = {abs(residual):.3e} "
            f"exceeds {ON_SHELL_RTOL:.1e} * m^2 = {ON_SHELL_RTOL * mass * mass:.3e}"
        )


@dataclass(frozen=True)
class Superposition:
    """Mass m plus an ordered list of on-shell positive-energy modes.

    Immutable after construction; every evaluation is pure, so instances
    are safe to share across concurrent workers. Mode order is preserved
    but irrelevant to outputs up to float roundoff (the wave function is
    a sum).
    """

    mass: float
    modes: tuple[PlaneWaveMode, ...]
    amp_sum: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (isinstance(self.mass, (int, float)) and self.mass > 0):
            raise ValueError(f"mass must be a positive real, got {self.mass!r}")
        object.__setattr__(self, "mass", float(self.mass))
        modes = tuple(self.modes)
        if len(modes) < 1:
            raise ValueError("a superposition needs at least one mode")
        object.__setattr__(self, "modes", modes)
        for i, mode in enumerate(modes):
            _validate_mode(i, mode, self.mass)
        object.__setattr__(
            self, "amp_sum", sum(abs(complex(m.c)) for m in modes)
        )

    def evaluate(self, x: FourVector) -> complex:
        """psi(x) = sum_i c_i exp(i k^(i) . x), plain covariant pairing."""
        total = 0j
        for mode in self.modes:
            k = mode.k
            phase = k.c0 * x.c0 + k.c1 * x.c1 + k.c2 * x.c2 + k.c3 * x.c3
            total += mode.c * complex(math.cos(phase), math.sin(phase))
        return total

    def gradient(self, x: FourVector) -> tuple[complex, complex, complex, complex]:
        """Exact analytic gradient (d_mu psi)(x) = sum_i i c_i k^(i)_mu e^{i k.x}."""
        g0 = g1 = g2 = g3 = 0j
        for mode in self.modes:
            k = mode.k
            phase = k.c0 * x.c0 + k.c1 * x.c1 + k.c2 * x.c2 + k.c3 * x.c3
            f = 1j * mode.c * complex(math.cos(phase), math.sin(phase))
            g0 += f * k.c0
            g1 += f * k.c1
            g2 += f * k.c2
            g3 += f * k.c3
        return (g0, g1, g2, g3)

    def polar_gradients(
        self, x: FourVector, node_tol: float = DEFAULT_NODE_TOL
    ) -> PolarGradients:
        """Split grad(psi)/psi into real and imaginary covectors at x.

        Raises NodeError when |psi| <= node_tol * sum_i |c_i|; the
        threshold is relative to the maximum attainable |psi|, so nodal
        detection is scale-free in the amplitudes.
        """
        if node_tol <= 0:
            raise ValueError("node_tol must be positive")
        psi = self.evaluate(x)
        threshold = node_tol * self.amp_sum
        if abs(psi) <= threshold:
            raise NodeError(abs(psi), threshold)
        g0, g1, g2, g3 = self.gradient(x)
        r0 = g0 / psi
        r1 = g1 / psi
        r2 = g2 / psi
        r3 = g3 / psi
        return PolarGradients(
            psi=psi,
            p_mu=FourVector(r0.real, r1.real, r2.real, r3.real),
            s_mu=FourVector(r0.imag, r1.imag, r2.imag, r3.imag),
        )

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "modes": [
                {"k": list(m.k), "c": [complex(m.c).real, complex(m.c).imag]}
                for m in self.modes
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Superposition":
        """Build from the JSON structure {"mass": m, "modes": [{"k": [...], "c": [re, im]}]}.

        Validation failures report the offending mode index.
        """
        if not isinstance(data, dict):
            raise ValueError("superposition config must be a JSON object")
        if "mass" not in data:
            raise ValueError("superposition config missing 'mass'")
        if "modes" not in data or not isinstance(data["modes"], list):
            raise ValueError("superposition config missing 'modes' list")
        mass = data["mass"]
        if not isinstance(mass, (int, float)) or isinstance(mass, bool) or mass <= 0:
            raise ValueError(f"mass must be a positive number, got {mass!r}")
        modes = []
        for i, entry in enumerate(data["modes"]):
            if not isinstance(entry, dict):
                raise ValueError(f"mode {i}: entry must be an object")
            k_list = entry.get("k")
            if (
                not isinstance(k_list, list)
                or len(k_list) != 4
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in k_list)
            ):
                raise ValueError(f"mode {i}: 'k' must be a list of 4 numbers")
            c_list = entry.get("c")
            if (
                not isinstance(c_list, list)
                or len(c_list) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in c_list)
            ):
                raise ValueError(f"mode {i}: 'c' must be [re, im]")
            modes.append(
                PlaneWaveMode(
                    k=FourVector.from_iterable(k_list),
                    c=complex(c_list[0], c_list[1]),
                )
            )
        return cls(mass=float(mass), modes=tuple(modes))


def counterexample(mass: float = 1.0) -> Superposition:
    """Three-wave superposition whose candidate velocity covectors are both
    spacelike in a neighborhood of the coordinate origin.

    Modes (covariant components, units of mass):

        k^(1) = (m, 0, 0, 0)              c1 = 3
        k^(2) = (sqrt(27) m, sqrt(26) m, 0, 0)   c2 = -1/sqrt(3) - i
        k^(3) = (sqrt(27) m, 0, sqrt(26) m, 0)   c3 = i

    At the origin the gradient covectors come out as p = (0, a, -a, 0) and
    s = (0, -b, 0, 0) with a = sqrt(26) m / g, b = a/sqrt(3), g = 3 - 1/sqrt(3),
    which span a spacelike 2-plane. Two modes cannot produce this (p and s
    always lie in the span of the mode covectors).
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    m = float(mass)
    root26 = math.sqrt(26.0)
    root27 = math.sqrt(27.0)
    return Superposition(
        mass=m,
        modes=(
            PlaneWaveMode(FourVector(m, 0.0, 0.0, 0.0), 3.0 + 0.0j),
            PlaneWaveMode(
                FourVector(root27 * m, root26 * m, 0.0, 0.0),
                complex(-1.0 / math.sqrt(3.0), -1.0),
            ),
            PlaneWaveMode(FourVector(root27 * m, 0.0, root26 * m, 0.0), 1.0j),
        ),
    )


def load_superposition(path: str | Path) -> Superposition:
    """Read and validate a superposition config from a JSON file."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: not valid JSON: {e}") from e
    return Superposition.from_dict(data)
