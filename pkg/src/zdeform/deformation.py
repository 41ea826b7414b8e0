"""Mapping between virtual (K, B) and equivalent continuous (k, b).

The inverse map imposes the sampled image ``z = exp(s)`` of the reference
poles on the characteristic form and solves the resulting linear equation
for (K, B). The forward map extracts the roots of the assembled polynomial,
picks a dominant pair and reads (k, b) back off its logarithm.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import CharacteristicForm, DiscreteParams, assemble
from .errors import MathDomainError, NonRepresentable, NyquistExceeded, SingularSystem
from .poly import derivative, evaluate, roots, solve_complex_linear, solve_real_linear2
from .reference import NORMALIZED, ContinuousParams, PhysicalUnits, poles_of

__all__ = [
    "BoundaryPoint",
    "DistortionMetrics",
    "PoleReport",
    "boundary_axis_crossing",
    "boundary_max_K",
    "continuous_from_roots",
    "distortion_at",
    "invmap",
    "invmap_residual",
    "map_params",
    "pole_report",
    "select_dominant",
    "stability_boundary",
    "tune",
]

_TIE_RTOL = 1e-12
_AXIS_ATOL = 1e-9
# poles within this of the unit circle are marginal and count as not stable
STABILITY_MARGIN = 1e-12


@dataclass(frozen=True)
class PoleReport:
    all_roots: tuple[complex, ...]
    dominant: tuple[complex, complex] | None
    dominant_modulus: float
    representable: bool
    stable: bool
    kind: str  # "complex" | "real" | "none"

    @property
    def max_modulus(self) -> float:
        return max(abs(r) for r in self.all_roots)

    @property
    def extra_roots(self) -> tuple[tuple[complex, float], ...]:
        """Roots outside the dominant pair, with their moduli."""
        rest = list(self.all_roots)
        for p in self.dominant or ():
            rest.remove(p)
        return tuple((r, abs(r)) for r in rest)


@dataclass(frozen=True)
class DistortionMetrics:
    jacobian: tuple[tuple[float, float], tuple[float, float]]
    orthogonality_angle_deg: float
    singular_values: tuple[float, float]
    identity_deviation: float


@dataclass(frozen=True)
class BoundaryPoint:
    K: float
    B: float
    theta: float


def _imposed_roots(c: ContinuousParams) -> tuple[str, tuple[complex, ...]]:
    cp = poles_of(c)
    if cp.regime == "underdamped":
        theta = cp.upper.imag
        if theta >= math.pi:
            raise NyquistExceeded(f"pole frequency {theta:.6g} rad/sample is not below pi")
        z = cmath.exp(cp.upper)
        return cp.regime, (z, z.conjugate())
    if cp.regime == "critical":
        z = math.exp(cp.upper.real)
        return cp.regime, (complex(z), complex(z))
    z1, z2 = (math.exp(s.real) for s in cp.poles)
    if z1 == z2:
        raise SingularSystem("overdamped poles collapse to one sampled root")
    return cp.regime, (complex(z1), complex(z2))


def invmap(f: CharacteristicForm, c: ContinuousParams) -> DiscreteParams:
    """(K, B) placing the sampled image of the poles of (k, b) on `f`.

    Underdamped targets give one complex equation at the upper pole,
    overdamped targets two real equations, and critical targets a double
    root constraint on the polynomial and its derivative.
    """
    regime, (z1, z2) = _imposed_roots(c)
    P, Q, R = f.P, f.Q, f.R
    if regime == "underdamped":
        K, B = solve_complex_linear(evaluate(P, z1), evaluate(Q, z1), evaluate(R, z1))
    elif regime == "overdamped":
        a, b = z1.real, z2.real
        K, B = solve_real_linear2(
            ((evaluate(P, a), evaluate(Q, a)), (evaluate(P, b), evaluate(Q, b))),
            (-evaluate(R, a), -evaluate(R, b)),
        )
    else:
        z = z1.real
        dP, dQ, dR = derivative(P), derivative(Q), derivative(R)
        K, B = solve_real_linear2(
            ((evaluate(P, z), evaluate(Q, z)), (evaluate(dP, z), evaluate(dQ, z))),
            (-evaluate(R, z), -evaluate(dR, z)),
        )
    return DiscreteParams(K, B)


def invmap_residual(f: CharacteristicForm, c: ContinuousParams, d: DiscreteParams) -> float:
    """Largest |K*P + B*Q + R| over the roots imposed by (k, b).

    For a critical target the derivative residual is included too.
    """
    regime, zs = _imposed_roots(c)
    poly = assemble(f, d)
    res = max(abs(evaluate(poly, z)) for z in zs)
    if regime == "critical":
        res = max(res, abs(evaluate(derivative(poly), zs[0])))
    return res


def select_dominant(rts) -> tuple[str, tuple[complex, complex] | None]:
    """Dominant pair of a root multiset.

    Complex pairs win over real roots: the largest-modulus pair, ties broken
    towards the lower frequency. Without complex roots the two largest
    strictly positive real roots form the pair. Returns ``("none", None)``
    when neither exists.
    """
    upper = [r for r in rts if r.imag > 0.0]
    if len(upper) == 1:
        z = upper[0]
        return "complex", (z, z.conjugate())
    if upper:
        top = max(abs(r) for r in upper)
        tied = [r for r in upper if abs(r) >= top * (1.0 - _TIE_RTOL)]
        z = min(tied, key=lambda r: (abs(cmath.phase(r)), -abs(r)))
        return "complex", (z, z.conjugate())
    positive = sorted((r.real for r in rts if r.imag == 0.0 and r.real > 0.0), reverse=True)
    if len(positive) >= 2:
        return "real", (complex(positive[0]), complex(positive[1]))
    return "none", None


def _report(rts: list[complex]) -> PoleReport:
    kind, pair = select_dominant(rts)
    stable = max(abs(r) for r in rts) < 1.0 - STABILITY_MARGIN
    if pair is None:
        return PoleReport(tuple(rts), None, float("nan"), False, stable, kind)
    return PoleReport(tuple(rts), pair, max(abs(pair[0]), abs(pair[1])), True, stable, kind)


def pole_report(f: CharacteristicForm, d: DiscreteParams) -> PoleReport:
    poly = assemble(f, d)
    if poly.degree < 1:
        raise NonRepresentable(f"assembled polynomial has degree {poly.degree}")
    return _report(roots(poly))


def continuous_from_roots(kind: str, pair) -> ContinuousParams:
    """Equivalent (k, b) of a dominant pair selected by :func:`select_dominant`."""
    if kind == "complex":
        z = pair[0]
        lnr = math.log(abs(z))
        theta = cmath.phase(z)
        return ContinuousParams(k=lnr * lnr + theta * theta, b=-2.0 * lnr)
    if kind == "real":
        l1, l2 = math.log(pair[0].real), math.log(pair[1].real)
        return ContinuousParams(k=l1 * l2, b=-(l1 + l2))
    raise NonRepresentable("no complex pair and fewer than two positive real roots")


def map_params(f: CharacteristicForm, d: DiscreteParams) -> tuple[ContinuousParams, PoleReport]:
    """Forward map (K, B) -> (k, b) with the pole report behind it.

    Raises NonRepresentable when the dominant behaviour is an alternating
    (negative real) mode with no principal-branch continuous equivalent.
    """
    rep = pole_report(f, d)
    if not rep.representable:
        raise NonRepresentable(
            "dominant root is real and non-positive; no continuous equivalent exists"
        )
    return continuous_from_roots(rep.kind, rep.dominant), rep


def tune(k: float, u: PhysicalUnits = NORMALIZED) -> float:
    """Virtual stiffness giving a digital mass-spring the frequency of `k`.

    ``K = (m/T**2) * (2 - 2*cos(T*sqrt(k/m)))``, in the units of `u`. The
    Nyquist edge ``T*sqrt(k/m) == pi`` is accepted (K = 4 m/T**2); beyond it
    NyquistExceeded is raised.
    """
    if k < 0:
        raise ValueError(f"stiffness must be non-negative, got {k!r}")
    theta = u.T * math.sqrt(k / u.m)
    if theta > math.pi:
        raise NyquistExceeded(f"T*sqrt(k/m) = {theta:.6g} exceeds pi")
    # 2 - 2 cos(x) = 4 sin^2(x/2) keeps relative accuracy for small x
    return u.m / u.T**2 * 4.0 * math.sin(theta / 2.0) ** 2


def stability_boundary(f: CharacteristicForm, theta_range=(1e-3, 0.95 * math.pi), n_points: int = 200,
                       extra_thetas=()):
    """Image of the zero-damping curve ``(k=theta**2, b=0)`` under :func:`invmap`.

    Returns ``(points, skipped)`` where `skipped` lists ``(theta, reason)``
    for points whose inverse map failed.
    """
    lo, hi = theta_range
    if not (0.0 < lo < hi < math.pi):
        raise ValueError(f"theta range must satisfy 0 < lo < hi < pi, got {theta_range}")
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    thetas = np.linspace(lo, hi, n_points).tolist()
    thetas = sorted(set(thetas) | {t for t in extra_thetas if lo <= t <= hi})
    points, skipped = [], []
    for th in thetas:
        try:
            d = invmap(f, ContinuousParams(th * th, 0.0))
        except MathDomainError as exc:
            skipped.append((th, f"{type(exc).__name__}: {exc}"))
            continue
        points.append(BoundaryPoint(d.K, d.B, th))
    return points, skipped


def _boundary_K(f, th):
    return invmap(f, ContinuousParams(th * th, 0.0)).K


def boundary_max_K(f: CharacteristicForm, theta_range=(1e-3, 0.95 * math.pi), n_scan: int = 400):
    """Refined vertex of largest K on the zero-damping curve.

    A coarse scan brackets the maximum, a bounded scalar search refines it.
    Returns None when no point of the scan is solvable.
    """
    thetas = np.linspace(*theta_range, n_scan)
    vals = []
    for th in thetas:
        try:
            vals.append(_boundary_K(f, th))
        except MathDomainError:
            vals.append(-math.inf)
    i = int(np.argmax(vals))
    if not math.isfinite(vals[i]):
        return None
    lo = thetas[max(i - 1, 0)]
    hi = thetas[min(i + 1, n_scan - 1)]
    res = minimize_scalar(lambda th: -_boundary_K(f, th), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    th = float(res.x) if -res.fun >= vals[i] else float(thetas[i])
    d = invmap(f, ContinuousParams(th * th, 0.0))
    return BoundaryPoint(d.K, d.B, th)


def boundary_axis_crossing(f: CharacteristicForm, theta_range=(1e-3, 0.95 * math.pi), n_scan: int = 400):
    """First point where the zero-damping curve crosses ``B = 0`` with K > 0.

    This is the stiffness limit of the configuration without virtual
    damping. Returns None if the curve never changes sign in B.
    """
    thetas = np.linspace(*theta_range, n_scan)
    prev = None
    for th in thetas:
        try:
            d = invmap(f, ContinuousParams(th * th, 0.0))
        except MathDomainError:
            prev = None
            continue
        # B at rounding level counts as zero: a boundary lying on the axis has no crossing
        sign = 0.0 if abs(d.B) <= _AXIS_ATOL * max(1.0, abs(d.K)) else math.copysign(1.0, d.B)
        if prev is not None and sign != 0.0 and prev[1] == -sign:
            t0 = brentq(lambda t: invmap(f, ContinuousParams(t * t, 0.0)).B, prev[0], th,
                        xtol=1e-14, rtol=4 * np.finfo(float).eps)
            hit = invmap(f, ContinuousParams(t0 * t0, 0.0))
            if hit.K > 0.0:
                return BoundaryPoint(hit.K, hit.B, t0)
        prev = (th, sign) if sign != 0.0 else None
    return None


def distortion_at(f: CharacteristicForm, d: DiscreteParams, h: float | None = None) -> DistortionMetrics:
    """Local distortion of the forward map at (K, B).

    The Jacobian ``d(k, b)/d(K, B)`` is taken by central differences. The
    angle is the one between the iso-k and iso-b curves through the point,
    folded into [0, 90] degrees.
    """
    if h is None:
        h = 1e-5 * max(1.0, abs(d.K), abs(d.B))

    def kb(K, B):
        c, _ = map_params(f, DiscreteParams(K, B))
        return np.array([c.k, c.b])

    dK = (kb(d.K + h, d.B) - kb(d.K - h, d.B)) / (2 * h)
    dB = (kb(d.K, d.B + h) - kb(d.K, d.B - h)) / (2 * h)
    J = np.column_stack([dK, dB])
    # iso-curves are normal to the gradients of k and b (the rows of J)
    g1, g2 = J[0], J[1]
    n1, n2 = np.linalg.norm(g1), np.linalg.norm(g2)
    if n1 == 0.0 or n2 == 0.0:
        angle = 0.0
    else:
        cosang = min(1.0, abs(float(g1 @ g2)) / (n1 * n2))
        angle = math.degrees(math.acos(cosang))
    sv = np.linalg.svd(J, compute_uv=False)
    return DistortionMetrics(
        jacobian=((float(J[0, 0]), float(J[0, 1])), (float(J[1, 0]), float(J[1, 1]))),
        orthogonality_angle_deg=angle,
        singular_values=(float(sv[0]), float(sv[1])),
        identity_deviation=float(np.linalg.norm(J - np.eye(2))),
    )
