"""
Spectral functions of the near-horizon scalar field and the dissipative
coefficients built from them.

The Unruh-vacuum response is

    G(w) = w / (2 pi) / (1 - exp(-2 pi w / kappa_r)),

a Planckian spectrum at temperature kappa_r / (2 pi). The Boulware response
vanishes identically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


class VacuumKind(enum.Enum):
    BOULWARE = "boulware"
    UNRUH = "unruh"


@dataclass(frozen=True)
class BathSpectrum:
    kind: VacuumKind
    kappa_r: float = 0.0

    def __post_init__(self):
        if self.kappa_r < 0 or not math.isfinite(self.kappa_r):
            raise DomainError(f"kappa_r must be finite and >= 0, got {self.kappa_r}")

    @classmethod
    def unruh(cls, kappa_r: float) -> "BathSpectrum":
        return cls(VacuumKind.UNRUH, kappa_r)

    @property
    def temperature(self) -> float:
        return self.kappa_r / (2.0 * math.pi)

    def __call__(self, omega: float) -> float:
        return wightman_fourier(self, omega)


@dataclass(frozen=True)
class DissipationCoeffs:
    """Kossakowski coefficients A, B, C with R = B/A, plus the single-qubit
    emission (``gamma_minus``) and absorption (``gamma_plus``) rates."""

    A: float
    B: float
    C: float
    R: float
    gamma_plus: float
    gamma_minus: float
    mu: float


def wightman_fourier(spec: BathSpectrum, omega: float) -> float:
    if spec.kind is VacuumKind.BOULWARE:
        return 0.0
    k = spec.kappa_r
    if k == 0.0:
        return omega / (2.0 * math.pi) if omega > 0 else 0.0
    if omega == 0.0:
        return k / (4.0 * math.pi**2)
    x = 2.0 * math.pi * omega / k
    # w / (1 - e^{-x}) = w e^{x} / (e^{x} - 1); expm1 keeps small |x| accurate
    if x > 0:
        return omega / (2.0 * math.pi) / -math.expm1(-x)
    if x < -700.0:
        return 0.0
    return -omega / (2.0 * math.pi) * math.exp(x) / -math.expm1(x)


def detailed_balance_ratio(spec: BathSpectrum, omega: float) -> float:
    """R = tanh(pi w / kappa_r), the analytic form of (G(w)-G(-w))/(G(w)+G(-w))."""
    if spec.kind is VacuumKind.BOULWARE:
        raise DomainError("no dissipation: R undefined for the Boulware vacuum")
    if spec.kappa_r == 0.0:
        return 1.0 if omega > 0 else (-1.0 if omega < 0 else 0.0)
    return math.tanh(math.pi * omega / spec.kappa_r)


def dissipation_coeffs(spec: BathSpectrum, omega: float, mu: float) -> DissipationCoeffs:
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if spec.kind is VacuumKind.BOULWARE:
        raise DomainError("no dissipation: R undefined for the Boulware vacuum")
    g_up = wightman_fourier(spec, omega)
    g_dn = wightman_fourier(spec, -omega)
    A = mu * mu / 4.0 * (g_up + g_dn)
    B = mu * mu / 4.0 * (g_up - g_dn)
    C = wightman_fourier(spec, 0.0) - A
    return DissipationCoeffs(
        A=A,
        B=B,
        C=C,
        R=detailed_balance_ratio(spec, omega),
        gamma_plus=2.0 * math.pi * mu * mu * g_dn,
        gamma_minus=2.0 * math.pi * mu * mu * g_up,
        mu=mu,
    )
