"""Spring-assembly consistency experiment.

A real mass on a real spring k (I) and the same mass on a virtual spring K
tuned to the same frequency (II) are equivalent. Doubling the springs breaks
the equivalence: two real springs (III), two virtual springs (IV) and one of
each (V) oscillate at three different frequencies.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .deformation import tune
from .errors import NyquistExceeded
from .reference import NORMALIZED, PhysicalUnits

__all__ = ["Table1Report", "hybrid_system_V", "run_table1", "zoh_matrices"]

HOLDS = ("hold", "impulse")


@dataclass(frozen=True)
class Table1Report:
    k: float
    K_used: float
    omega_I: float
    omega_II: float
    omega_III: float
    omega_IV: float
    omega_V: float
    detuning_IV: float
    detuning_V: float
    hold: str = "hold"

    def as_dict(self) -> dict:
        return asdict(self)


def _digital_frequency(K: float, u: PhysicalUnits) -> float:
    # m/T^2 (1-z)^2 + K z = 0  =>  cos(omega T) = 1 - K T^2 / (2m)
    c = 1.0 - K * u.T**2 / (2.0 * u.m)
    if c < -1.0:
        raise NyquistExceeded(f"virtual stiffness {K:.6g} beyond the digital oscillator's range")
    return math.acos(c) / u.T


def zoh_matrices(k: float, u: PhysicalUnits = NORMALIZED, hold: str = "hold"):
    """One-period transition and input column of ``m x'' = -k x + F``.

    State is (position, velocity). With ``hold`` the force is held over the
    period; with ``impulse`` it acts as a momentum kick ``T*F`` at the start
    of the period.
    """
    if hold not in HOLDS:
        raise ValueError(f"hold must be one of {HOLDS}")
    m, T = u.m, u.T
    w = math.sqrt(k / m)
    x = w * T
    c = math.cos(x)
    # sin(x)/w and (1-cos x)/w^2, continuous at w = 0
    sinc_t = T * np.sinc(x / math.pi)
    one_minus_cos = 0.5 * T * T * np.sinc(x / (2.0 * math.pi)) ** 2
    A = np.array([[c, sinc_t], [-w * w * sinc_t, c]])
    if hold == "hold":
        g = np.array([one_minus_cos / m, sinc_t / m])
    else:
        g = A @ np.array([0.0, T / m])
    return A, g


def hybrid_system_V(k: float, K: float, u: PhysicalUnits = NORMALIZED, hold: str = "hold") -> complex:
    """Dominant closed-loop eigenvalue of a mass on a real spring `k` plus a
    sampled virtual spring `K` (force ``-K*x_n`` each period, no delay).
    """
    A, g = zoh_matrices(k, u, hold)
    closed = A - K * np.outer(g, [1.0, 0.0])
    ev = np.linalg.eigvals(closed)
    return complex(max(ev, key=lambda z: (abs(z), z.imag)))


def run_table1(k: float, u: PhysicalUnits = NORMALIZED, hold: str = "hold") -> Table1Report:
    """Angular frequencies of the five spring assemblies for stiffness `k`."""
    if k <= 0:
        raise ValueError(f"stiffness must be positive, got {k!r}")
    if u.T * math.sqrt(2.0 * k / u.m) >= math.pi:
        raise NyquistExceeded("the doubled real spring is beyond Nyquist")
    K = tune(k, u)
    omega_I = math.sqrt(k / u.m)
    omega_II = _digital_frequency(K, u)
    omega_III = math.sqrt(2.0 * k / u.m)
    omega_IV = _digital_frequency(2.0 * K, u)
    zV = hybrid_system_V(k, K, u, hold)
    omega_V = abs(cmath.phase(zV)) / u.T
    return Table1Report(
        k=k, K_used=K,
        omega_I=omega_I, omega_II=omega_II, omega_III=omega_III,
        omega_IV=omega_IV, omega_V=omega_V,
        detuning_IV=omega_IV / omega_III - 1.0,
        detuning_V=omega_V / omega_III - 1.0,
        hold=hold,
    )
