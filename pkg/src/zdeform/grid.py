"""Iso-k / iso-b curve networks in the (K, B) plane.

Each iso-k curve is the image of a sweep over b at fixed k, each iso-b
curve the image of a sweep over k at fixed b. Points whose inverse map
fails are recorded and split the curve into separate segments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import CharacteristicForm, DiscreteParams
from .deformation import (
    BoundaryPoint,
    DistortionMetrics,
    boundary_axis_crossing,
    boundary_max_K,
    distortion_at,
    invmap,
    pole_report,
    stability_boundary,
)
from .errors import MathDomainError, NyquistExceeded
from .reference import ContinuousParams, poles_of

__all__ = [
    "Curve",
    "DeformationGrid",
    "GridSpec",
    "Node",
    "default_spec",
    "generate",
    "reference_grid",
]

DEFAULT_K = (0.05, 2.5, 12)
DEFAULT_B = (0.0, 1.0, 11)
DEFAULT_SAMPLES = 60
DEFAULT_THETA_MAX = 0.95 * math.pi
DEFAULT_BOUNDARY_POINTS = 200
BOUNDARY_THETA_MIN = 1e-3


@dataclass(frozen=True, eq=False)
class GridSpec:
    form: CharacteristicForm
    k_values: tuple[float, ...]
    b_values: tuple[float, ...]
    samples_per_curve: int = DEFAULT_SAMPLES
    theta_max: float = DEFAULT_THETA_MAX
    boundary_points: int = DEFAULT_BOUNDARY_POINTS

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(float(v) for v in self.k_values))
        object.__setattr__(self, "b_values", tuple(float(v) for v in self.b_values))
        for name, vals in (("k_values", self.k_values), ("b_values", self.b_values)):
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if self.samples_per_curve < 2:
            raise ValueError("samples_per_curve must be at least 2")
        if not 0.0 < self.theta_max < math.pi:
            raise ValueError("theta_max must lie in (0, pi)")
        if self.boundary_points < 2:
            raise ValueError("boundary_points must be at least 2")


def default_spec(form: CharacteristicForm) -> GridSpec:
    return GridSpec(
        form,
        tuple(np.linspace(*DEFAULT_K).tolist()),
        tuple(np.linspace(*DEFAULT_B).tolist()),
    )


@dataclass
class Curve:
    """One iso-parameter curve.

    `level` is the fixed parameter value, `segments` hold vertices
    ``(K, B, swept)`` where `swept` is the running parameter.
    """

    family: str  # "iso_k" | "iso_b"
    level: float
    segments: list[list[tuple[float, float, float]]] = field(default_factory=list)
    skipped: list[tuple[float, str]] = field(default_factory=list)

    def vertices(self):
        return [v for seg in self.segments for v in seg]


@dataclass
class Node:
    k: float
    b: float
    K: float | None
    B: float | None
    representable: bool
    stable: bool | None
    metrics: DistortionMetrics | None
    error: str | None = None


@dataclass
class DeformationGrid:
    spec: GridSpec
    iso_k: list[Curve]
    iso_b: list[Curve]
    boundary: list[BoundaryPoint]
    boundary_skipped: list[tuple[float, str]]
    nodes: list[list[Node]]  # nodes[i][j] <-> (k_values[i], b_values[j])
    landmarks: dict = field(default_factory=dict)
    identity: bool = False

    def iter_nodes(self):
        for row in self.nodes:
            yield from row

    @property
    def failed_nodes(self) -> int:
        return sum(1 for n in self.iter_nodes() if n.K is None)


def _sweep_values(levels, n) -> list[float]:
    if not levels:
        return []
    dense = np.linspace(levels[0], levels[-1], n).tolist() if len(levels) > 1 else []
    return sorted(set(dense) | set(levels))


def _solve_point(f, k, b, theta_max):
    cp = poles_of(ContinuousParams(k, b))
    if cp.regime == "underdamped" and cp.upper.imag >= theta_max:
        raise NyquistExceeded(f"theta {cp.upper.imag:.6g} beyond theta_max {theta_max:.6g}")
    return invmap(f, ContinuousParams(k, b))


def _trace(f, family, level, sweep, theta_max) -> Curve:
    curve = Curve(family, level)
    current: list = []
    for s in sweep:
        k, b = (level, s) if family == "iso_k" else (s, level)
        try:
            d = _solve_point(f, k, b, theta_max)
        except MathDomainError as exc:
            curve.skipped.append((s, type(exc).__name__))
            if current:
                curve.segments.append(current)
                current = []
            continue
        current.append((d.K, d.B, s))
    if current:
        curve.segments.append(current)
    return curve


def _node(f, k, b, theta_max) -> Node:
    try:
        d = _solve_point(f, k, b, theta_max)
    except MathDomainError as exc:
        return Node(k, b, None, None, False, None, None, type(exc).__name__)
    try:
        rep = pole_report(f, d)
        stable = rep.stable
        metrics = distortion_at(f, d) if rep.representable else None
    except MathDomainError as exc:
        return Node(k, b, d.K, d.B, False, None, None, type(exc).__name__)
    if metrics is None:
        return Node(k, b, d.K, d.B, False, stable, None, "NonRepresentable")
    return Node(k, b, d.K, d.B, True, stable, metrics)


def generate(spec: GridSpec) -> DeformationGrid:
    """Curve network, boundary and per-node distortion for `spec`.

    Failures at individual points never abort the grid; they are kept in
    the curves' `skipped` lists and as nodes without coordinates.
    """
    f = spec.form
    k_sweep = _sweep_values(spec.k_values, spec.samples_per_curve)
    b_sweep = _sweep_values(spec.b_values, spec.samples_per_curve)
    iso_k = [_trace(f, "iso_k", k, b_sweep, spec.theta_max) for k in spec.k_values]
    iso_b = [_trace(f, "iso_b", b, k_sweep, spec.theta_max) for b in spec.b_values]

    theta_range = (BOUNDARY_THETA_MIN, spec.theta_max)
    landmarks = {}
    top = boundary_max_K(f, theta_range)
    if top is not None:
        landmarks["boundary_max_K"] = top
    cross = boundary_axis_crossing(f, theta_range)
    if cross is not None:
        landmarks["boundary_B0_crossing"] = cross
    # iso-b=0 vertices lie on the boundary by construction; include them
    extra = [math.sqrt(k) for k in k_sweep if 0.0 < k and math.sqrt(k) < spec.theta_max]
    extra += [p.theta for p in landmarks.values()]
    boundary, skipped = stability_boundary(f, theta_range, spec.boundary_points, extra)

    nodes = [[_node(f, k, b, spec.theta_max) for b in spec.b_values] for k in spec.k_values]
    return DeformationGrid(spec, iso_k, iso_b, boundary, skipped, nodes, landmarks)


def reference_grid(spec: GridSpec) -> DeformationGrid:
    """Identity grid ``K = k, B = b`` on the lattice of `spec`."""
    k_sweep = _sweep_values(spec.k_values, spec.samples_per_curve)
    b_sweep = _sweep_values(spec.b_values, spec.samples_per_curve)
    iso_k = [Curve("iso_k", k, [[(k, b, b) for b in b_sweep]]) for k in spec.k_values]
    iso_b = [Curve("iso_b", b, [[(k, b, k) for k in k_sweep]]) for b in spec.b_values]
    ident = DistortionMetrics(((1.0, 0.0), (0.0, 1.0)), 90.0, (1.0, 1.0), 0.0)
    nodes = [[Node(k, b, k, b, True, k > 0 and b > 0, ident) for b in spec.b_values]
             for k in spec.k_values]
    return DeformationGrid(spec, iso_k, iso_b, [], [], nodes, identity=True)
