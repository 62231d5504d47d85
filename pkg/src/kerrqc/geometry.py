"""
Near-horizon Kerr scalars that parameterize the detector bath.

Geometric units G = c = hbar = k_B = 1. Detector positions are given as a
multiple of the outer horizon radius r_+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class BlackHoleParams:
    """Kerr black hole with mass ``mass`` and spin per unit mass ``spin``."""

    mass: float
    spin: float

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if self.spin < 0:
            raise DomainError(f"spin must be non-negative, got {self.spin}")
        if self.spin > self.mass:
            raise DomainError(
                f"naked singularity: spin {self.spin} exceeds mass {self.mass}"
            )

    @property
    def extremal(self) -> bool:
        return self.spin == self.mass


@dataclass(frozen=True)
class HorizonData:
    r_plus: float
    r_minus: float
    kappa: float
    omega_plus: float
    extremal: bool = False


@dataclass(frozen=True)
class DetectorPosition:
    """Detector at ``r = radial_factor * r_plus``."""

    radial_factor: float

    def __post_init__(self):
        if not self.radial_factor > 1.0:
            raise DomainError(
                f"radial_factor must exceed 1, got {self.radial_factor}"
            )


def horizons(bh: BlackHoleParams) -> HorizonData:
    """Outer/inner horizons, surface gravity and horizon angular speed."""
    m, a = bh.mass, bh.spin
    root = math.sqrt(max(m * m - a * a, 0.0))
    r_plus = m + root
    # r_- = a^2 / r_+ avoids cancellation when a << M
    r_minus = a * a / r_plus
    kappa = (r_plus - r_minus) / (2.0 * (r_plus**2 + a * a))
    omega_plus = a / (r_plus**2 + a * a)
    return HorizonData(r_plus, r_minus, kappa, omega_plus, extremal=bh.extremal)


def metric_function(bh: BlackHoleParams, r: float) -> float:
    """F(r) = (r - r_+)(r - r_-) / (r^2 + a^2).

    Negative inside the outer horizon; callers decide whether that is allowed.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    h = horizons(bh)
    return (r - h.r_plus) * (r - h.r_minus) / (r * r + bh.spin**2)


def local_acceleration(bh: BlackHoleParams, pos: DetectorPosition) -> float:
    """Local acceleration kappa_r = kappa / sqrt(F(r)) at ``pos``.

    Returns 0.0 for an extremal hole (kappa = 0); check ``bh.extremal``.
    """
    h = horizons(bh)
    if h.extremal:
        return 0.0
    f = metric_function(bh, pos.radial_factor * h.r_plus)
    if f <= 0:
        raise DomainError(f"F(r) = {f} is not positive at the detector")
    return h.kappa / math.sqrt(f)


def effective_temperature(bh: BlackHoleParams, pos: DetectorPosition) -> float:
    return local_acceleration(bh, pos) / (2.0 * math.pi)


def tortoise(bh: BlackHoleParams, r: float) -> float:
    """Tortoise coordinate r_*(r) outside the outer horizon.

    Closed-form antiderivative of (r^2 + a^2)/Delta with integration
    constant zero.
    """
    h = horizons(bh)
    if h.extremal:
        raise DomainError("tortoise coordinate undefined for extremal hole")
    if not r > h.r_plus:
        raise DomainError(f"r = {r} must lie outside r_+ = {h.r_plus}")
    a2 = bh.spin**2
    gap = h.r_plus - h.r_minus
    out = (h.r_plus**2 + a2) / gap * math.log(r - h.r_plus)
    if h.r_minus > 0:
        out -= (h.r_minus**2 + a2) / gap * math.log(r - h.r_minus)
    return r + out


def kerr_spring_gravity(bh: BlackHoleParams) -> float:
    """Spring-model surface gravity 1/(4M) - M * Omega_+^2."""
    h = horizons(bh)
    return 1.0 / (4.0 * bh.mass) - bh.mass * h.omega_plus**2
