"""Static-patch geometry of de Sitter spacetime and thermal flat-space parameters.

Natural units throughout (hbar = c = k_B = 1).  Every length is a multiple of
one caller-chosen reference length; temperatures and frequencies are inverse
lengths.  Only the dimensionless combinations L/kappa, omega0*kappa, T*kappa
enter the physics downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DeSitterPatch",
    "ThermalBath",
    "SpacetimeConfig",
    "AtomPairGeometry",
    "TemperatureDecomposition",
    "kappa",
    "local_temperature",
    "ricci_scalar",
    "euclidean_separation",
    "embed",
]


@dataclass(frozen=True)
class DeSitterPatch:
    """Static de Sitter patch of curvature radius ``alpha``, atoms at radius ``r``.

    The horizon r = alpha is rejected rather than clamped: the redshift factor
    vanishes there, the local temperature diverges, and every derived quantity
    downstream blows up.  Failing fast beats returning infinities.
    """

    alpha: float
    r: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"de Sitter radius must be positive and finite, got alpha={self.alpha}")
        if not (0.0 <= self.r < self.alpha):
            raise ValueError(
                f"atoms must sit strictly inside the horizon (0 <= r < alpha), got r={self.r}, alpha={self.alpha}"
            )


@dataclass(frozen=True)
class ThermalBath:
    """Minkowski spacetime with the field in a thermal state; T = 0 is the vacuum."""

    temperature: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.temperature) and self.temperature >= 0):
            raise ValueError(f"bath temperature must be >= 0, got {self.temperature}")


SpacetimeConfig = DeSitterPatch | ThermalBath


@dataclass(frozen=True)
class AtomPairGeometry:
    """Two static atoms at common radius ``r``, separated by the angle ``delta_theta``."""

    r: float
    delta_theta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r) and self.r > 0):
            raise ValueError(f"radius must be positive, got r={self.r}")
        if not (0.0 < self.delta_theta <= math.pi):
            raise ValueError(f"angular separation must lie in (0, pi], got {self.delta_theta}")

    @property
    def L(self) -> float:
        """Euclidean chord distance between the two atoms."""
        return euclidean_separation(self.r, self.delta_theta)


@dataclass(frozen=True)
class TemperatureDecomposition:
    """Local temperature split into its Gibbons-Hawking and Unruh contributions.

    Satisfies T^2 = T_f^2 + T_a^2 with T_f set by the curvature radius and
    T_a = a / 2 pi by the proper acceleration of the static trajectory.
    """

    T: float
    T_f: float
    T_a: float
    a: float


def kappa(patch: DeSitterPatch) -> float:
    """Redshifted curvature scale sqrt(alpha^2 - r^2) of a static trajectory."""
    return math.sqrt((patch.alpha - patch.r) * (patch.alpha + patch.r))


def local_temperature(patch: DeSitterPatch) -> TemperatureDecomposition:
    """Temperature felt by a static atom, with its curvature/acceleration split."""
    k = kappa(patch)
    T = 1.0 / (2.0 * math.pi * k)
    T_f = 1.0 / (2.0 * math.pi * patch.alpha)
    a = patch.r / (patch.alpha * k)
    return TemperatureDecomposition(T=T, T_f=T_f, T_a=a / (2.0 * math.pi), a=a)


def ricci_scalar(patch: DeSitterPatch) -> float:
    """Constant curvature scalar 12 / alpha^2."""
    return 12.0 / patch.alpha**2


def euclidean_separation(r: float, delta_theta: float) -> float:
    """Chord distance 2 r sin(delta_theta / 2) between two points on the radius-r sphere."""
    if not (math.isfinite(r) and r > 0):
        raise ValueError(f"radius must be positive, got r={r}")
    if not (0.0 < delta_theta <= math.pi):
        raise ValueError(f"angular separation must lie in (0, pi], got {delta_theta}")
    return 2.0 * r * math.sin(0.5 * delta_theta)


def embed(patch: DeSitterPatch, t: float, theta: float, phi: float) -> np.ndarray:
    """Embed a static-coordinate event into the 5D hyperboloid.

    Returns the flat 5-vector (z0, ..., z4); the result satisfies
    z0^2 - z1^2 - z2^2 - z3^2 - z4^2 = -alpha^2 identically.
    """
    k = kappa(patch)
    r = patch.r
    return np.array(
        [
            k * math.sinh(t / patch.alpha),
            k * math.cosh(t / patch.alpha),
            r * math.cos(theta),
            r * math.sin(theta) * math.cos(phi),
            r * math.sin(theta) * math.sin(phi),
        ]
    )
