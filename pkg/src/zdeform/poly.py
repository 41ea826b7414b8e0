"""Real-coefficient polynomials evaluated at complex points.

Coefficients are stored in ascending order, ``coeffs[i]`` multiplies ``z**i``.
Root finding uses closed forms up to degree three and the companion matrix
beyond that; every root comes out of a final Newton polish, and complex roots
are produced one per conjugate pair and mirrored so that pairs are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import SingularSystem, ZeroPolynomial

__all__ = [
    "Polynomial",
    "companion",
    "derivative",
    "evaluate",
    "roots",
    "root_residual_bound",
    "solve_complex_linear",
    "solve_real_linear2",
]

_NEWTON_STEPS = 3


@dataclass(frozen=True)
class Polynomial:
    """Immutable polynomial with trailing (highest-degree) zeros trimmed."""

    coeffs: tuple[float, ...] = ()

    def __init__(self, coeffs: Iterable[float] = ()):
        c = list(map(float, coeffs))
        while c and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(
            (a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0) for i in range(n)
        )

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero() or other.is_zero():
                return Polynomial()
            out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        return Polynomial(float(other) * a for a in self.coeffs)

    __rmul__ = __mul__

    def __neg__(self) -> Polynomial:
        return Polynomial(-a for a in self.coeffs)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    @classmethod
    def from_roots(cls, rts: Sequence[complex], scale: float = 1.0) -> Polynomial:
        c = np.array([1.0 + 0j])
        for r in rts:
            c = np.convolve(c, [-r, 1.0])
        return cls(float(scale) * c.real)

    def derivative(self) -> Polynomial:
        return derivative(self)

    def roots(self) -> list[complex]:
        return roots(self)


def evaluate(p: Polynomial, z):
    """Horner evaluation of `p` at `z` (real or complex)."""
    return _horner(p.coeffs, z)


def derivative(p: Polynomial) -> Polynomial:
    return Polynomial(i * a for i, a in enumerate(p.coeffs) if i > 0)


def root_residual_bound(p: Polynomial, z: complex, rel: float = 1e-10) -> float:
    """Admissible |p(z)| for a computed root `z` of `p`."""
    scale = max(abs(a) for a in p.coeffs)
    return rel * scale * max(1.0, abs(z)) ** p.degree


def companion(p: Polynomial) -> np.ndarray:
    """Shift-form companion matrix of the monic version of `p`.

    Row ``i < n-1`` maps state component ``i+1`` into ``i``; the last row holds
    the negated monic coefficients, so ``x[t+n] = -sum(c[i] * x[t+i])``.
    """
    n = p.degree
    if n < 1:
        raise ZeroPolynomial("companion matrix needs degree >= 1")
    c = np.asarray(p.coeffs, dtype=float)
    monic = c[:-1] / c[-1]
    a = np.zeros((n, n))
    a[np.arange(n - 1), np.arange(1, n)] = 1.0
    a[-1, :] = -monic
    return a


def _horner(c, z):
    n = len(c)
    # unrolled for the low degrees that dominate the workload
    if n == 4:
        return ((c[3] * z + c[2]) * z + c[1]) * z + c[0]
    if n == 3:
        return (c[2] * z + c[1]) * z + c[0]
    acc = 0.0
    for a in reversed(c):
        acc = acc * z + a
    return acc


def _polish(c, dc, z):
    """Up to a few Newton steps on coefficients `c` (derivative `dc`), each
    kept only if it lowers the residual."""
    fz = _horner(c, z)
    for _ in range(_NEWTON_STEPS):
        if fz == 0:
            break
        d = _horner(dc, z)
        if d == 0:
            break
        znew = z - fz / d
        fnew = _horner(c, znew)
        if abs(fnew) >= abs(fz):
            break
        z, fz = znew, fnew
    return z


def _quadratic(c0: float, c1: float, c2: float) -> list[complex]:
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc >= 0.0:
        q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
        if q == 0.0:
            # c1 == 0 and c0 == 0: double root at the origin
            return [0j, 0j]
        r1, r2 = q / c2, c0 / q
        if abs(r2) > abs(r1):
            r1, r2 = r2, r1
        return [complex(r1), complex(r2)]
    re = -c1 / (2.0 * c2)
    im = math.sqrt(-disc) / (2.0 * abs(c2))
    return [complex(re, im), complex(re, -im)]


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _cubic(c: Sequence[float]) -> tuple[list[complex], int]:
    """Roots of a cubic, and how many leading ones are already polished."""
    a = c[2] / c[3]
    b = c[1] / c[3]
    d = c[0] / c[3]
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc < 0.0:
        # three distinct real roots, trigonometric form
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)
        phi = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        return [complex(r * math.cos(phi - 2.0 * math.pi * k / 3.0) - shift) for k in range(3)], 0
    s = -q / 2.0 - math.copysign(math.sqrt(disc), q)
    u = _cbrt(s)
    v = -p / (3.0 * u) if u != 0.0 else 0.0
    real_root = u + v - shift
    real_root = _polish((d, b, a, 1.0), (b, 2.0 * a, 3.0), real_root)
    # deflate the real root out of the monic cubic; forward division is
    # stable for a small root, backward for a large one, keep the better fit
    q1 = a + real_root
    q0 = b + real_root * q1
    if real_root != 0.0:
        back = -d / real_root

        def misfit(q0):
            return abs(q0 - real_root * q1 - b) + abs(real_root * q0 + d)

        if misfit(back) < misfit(q0):
            q0 = back
    return [complex(real_root)] + _quadratic(q0, q1, 1.0), 1


def _companion_roots(p: Polynomial) -> list[complex]:
    ev = np.linalg.eigvals(companion(p))
    # LAPACK returns real-matrix eigenvalues in exact conjugate pairs; keep the
    # upper half and mirror it
    reals = [complex(e.real) for e in ev if e.imag == 0.0]
    upper = [complex(e) for e in ev if e.imag > 0.0]
    if len(reals) + 2 * len(upper) != p.degree:
        raise ArithmeticError("eigenvalues of a real companion matrix are not conjugate-paired")
    return reals + upper


def roots(p: Polynomial) -> list[complex]:
    """All complex roots of `p`, with multiplicity.

    Conjugate pairs are exact mirror images. Raises ZeroPolynomial when `p`
    is zero or constant.
    """
    c = list(p.coeffs)
    if not c:
        raise ZeroPolynomial("zero polynomial has no roots")
    if len(c) == 1:
        raise ZeroPolynomial("constant polynomial has no roots")
    nzero = 0
    while c[nzero] == 0.0:
        nzero += 1
    c = c[nzero:]
    deg = len(c) - 1
    done: list[complex] = []
    if deg == 0:
        raw: list[complex] = []
    elif deg == 1:
        raw = [complex(-c[0] / c[1])]
    elif deg == 2:
        raw = _quadratic(c[0], c[1], c[2])
    elif deg == 3:
        raw, n = _cubic(c)
        done, raw = raw[:n], raw[n:]
    else:
        raw = _companion_roots(Polynomial(c))

    dc = [i * a for i, a in enumerate(c)][1:]
    out: list[complex] = [0j] * nzero + done
    for r in raw:
        if r.imag == 0.0:
            out.append(complex(_polish(c, dc, r.real)))
        elif r.imag > 0.0:
            z = _polish(c, dc, r)
            if z.imag <= 0.0:
                z = r
            out.extend((z, z.conjugate()))
    return out


def solve_complex_linear(a: complex, b: complex, c: complex) -> tuple[float, float]:
    """Real ``(x, y)`` such that ``a*x + b*y + c == 0``.

    Real and imaginary parts of the complex equation give a 2x2 real system.
    Raises SingularSystem when `a` and `b` are collinear in the complex plane.
    """
    a, b, c = complex(a), complex(b), complex(c)
    det = a.real * b.imag - a.imag * b.real
    if abs(det) <= 1e-14 * abs(a) * abs(b) or det == 0.0:
        raise SingularSystem(f"collinear coefficients a={a!r}, b={b!r}")
    x = (-c.real * b.imag + b.real * c.imag) / det
    y = (-a.real * c.imag + a.imag * c.real) / det
    return x, y


def solve_real_linear2(m: Sequence[Sequence[float]], rhs: Sequence[float]) -> tuple[float, float]:
    """Cramer solve of a 2x2 real system with a relative singularity check."""
    (a, b), (c, d) = m
    det = a * d - b * c
    scale = math.hypot(a, c) * math.hypot(b, d)
    if det == 0.0 or abs(det) <= 1e-14 * scale:
        raise SingularSystem("2x2 system is singular")
    x = (rhs[0] * d - b * rhs[1]) / det
    y = (a * rhs[1] - rhs[0] * c) / det
    return x, y
