"""Continuous mass-spring-damper reference in normalized units.

With m = 1 and T = 1 the reference oscillator is ``s**2 + b*s + k = 0``.
Physical values are converted at the boundary only: ``k = k_phys*T**2/m``
and ``b = b_phys*T/m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ContinuousParams",
    "ContinuousPoles",
    "PhysicalUnits",
    "NORMALIZED",
    "denormalize",
    "normalize",
    "params_from_pole_pair",
    "poles_of",
]

CRITICAL_RTOL = 1e-12


@dataclass(frozen=True)
class ContinuousParams:
    k: float
    b: float


@dataclass(frozen=True)
class PhysicalUnits:
    m: float = 1.0
    T: float = 1.0

    def __post_init__(self):
        if not (self.m > 0 and self.T > 0):
            raise ValueError(f"mass and period must be positive, got m={self.m}, T={self.T}")


NORMALIZED = PhysicalUnits()


@dataclass(frozen=True)
class ContinuousPoles:
    regime: str  # "underdamped" | "critical" | "overdamped"
    poles: tuple[complex, complex]

    @property
    def upper(self) -> complex:
        """Pole with non-negative imaginary part (the larger one if real)."""
        return self.poles[0]


def poles_of(c: ContinuousParams) -> ContinuousPoles:
    """Poles of ``s**2 + b*s + k`` with regime classification."""
    k, b = c.k, c.b
    disc = b * b - 4.0 * k
    if abs(disc) <= CRITICAL_RTOL * max(1.0, b * b, abs(4.0 * k)):
        s = complex(-b / 2.0)
        return ContinuousPoles("critical", (s, s))
    if disc < 0.0:
        s = complex(-b / 2.0, math.sqrt(k - b * b / 4.0))
        return ContinuousPoles("underdamped", (s, s.conjugate()))
    # stable split: larger-magnitude root first, other one from the product
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    s1, s2 = (q, k / q) if q != 0.0 else (0.0, -b)
    if s2 > s1:
        s1, s2 = s2, s1
    return ContinuousPoles("overdamped", (complex(s1), complex(s2)))


def params_from_pole_pair(s: complex) -> ContinuousParams:
    """(k, b) of the oscillator whose poles are `s` and its conjugate."""
    s = complex(s)
    return ContinuousParams(k=s.real * s.real + s.imag * s.imag, b=-2.0 * s.real)


def normalize(k_phys: float, b_phys: float, u: PhysicalUnits) -> ContinuousParams:
    return ContinuousParams(k=k_phys * u.T**2 / u.m, b=b_phys * u.T / u.m)


def denormalize(c: ContinuousParams, u: PhysicalUnits) -> tuple[float, float]:
    """Inverse of :func:`normalize`, returns ``(k_phys, b_phys)``."""
    return c.k * u.m / u.T**2, c.b * u.m / u.T
