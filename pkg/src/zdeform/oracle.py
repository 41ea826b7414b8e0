"""Independent pole extraction for cross-checking the root finder.

Three routes lead to the closed-loop poles of a configuration:

(a) closed-form / companion roots of the assembled polynomial,
(b) eigenvalues of the state-transition matrix of the recurrence,
(c) linear-prediction identification from a simulated trajectory.

Routes (a) and (b) should agree to rounding; (c) only sees the modes the
initial state excites and is compared on those.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .config import CharacteristicForm, DiscreteParams, assemble, builtin
from .deformation import continuous_from_roots, select_dominant
from .errors import DegenerateModel, GrowthOverflow, MathDomainError, RankDeficient
from .poly import Polynomial, companion, roots

__all__ = [
    "CrossCheckReport",
    "LoopStateModel",
    "Trajectory",
    "build_state_model",
    "compare_variants",
    "cross_check",
    "fallback_seed",
    "identify_poles",
    "simulate",
]

DEFAULT_SEED = 0xC0D15
GROWTH_LIMIT = 1e12
EIG_TOL = 1e-10
IDENT_TOL = 1e-6
RANK_RTOL = 1e-10


def fallback_seed() -> int:
    raw = os.environ.get("ZDEFORM_SEED")
    return int(raw, 0) if raw else DEFAULT_SEED


@dataclass(frozen=True, eq=False)
class LoopStateModel:
    transition: np.ndarray
    initial_state: np.ndarray
    poly: Polynomial

    @property
    def order(self) -> int:
        return self.transition.shape[0]

    def with_state(self, state) -> LoopStateModel:
        return LoopStateModel(self.transition, np.asarray(state, dtype=float), self.poly)


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[float, ...]
    period: float = 1.0

    def __len__(self):
        return len(self.samples)


def build_state_model(f: CharacteristicForm, d: DiscreteParams) -> LoopStateModel:
    """Companion-form realization of the closed loop at (K, B).

    The state is a window of consecutive positions ``(x_t, ..., x_{t+n-1})``
    and starts as an impulse ``(1, 0, ..., 0)``.
    """
    poly = assemble(f, d)
    if poly.degree < 1:
        raise DegenerateModel(f"assembled polynomial has degree {poly.degree}")
    a = companion(poly)
    x0 = np.zeros(poly.degree)
    x0[0] = 1.0
    return LoopStateModel(a, x0, poly)


def random_unit_state(n: int, seed: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(fallback_seed() if seed is None else seed)
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def simulate(m: LoopStateModel, steps: int) -> Trajectory:
    """Positions ``x_0 .. x_steps`` of the recurrence (``steps + 1`` samples)."""
    if steps < m.order:
        raise ValueError(f"need at least {m.order} steps, got {steps}")
    # states A^t x0 for t = 0..steps by doubling: [S, A^(2^j) S]
    states = m.initial_state[:, None]
    power = m.transition
    while states.shape[1] <= steps:
        states = np.hstack([states, power @ states])
        power = power @ power
    out = states[0, : steps + 1]
    bad = np.flatnonzero(~(np.abs(out) <= GROWTH_LIMIT))
    if bad.size:
        raise GrowthOverflow(f"|x| exceeded {GROWTH_LIMIT:g} at step {bad[0]}")
    return Trajectory(tuple(out.tolist()))


def identify_poles(tr: Trajectory, order: int) -> list[complex]:
    """Poles of the order-`order` linear predictor fitted to `tr`.

    Least squares on ``x[t+order] = sum(a[i] * x[t+i])``. Each equation is
    scaled to unit norm first; for noiseless data this leaves the exact
    solution unchanged while keeping fast-growing and fast-decaying parts
    of the record on an equal footing.
    """
    x = np.asarray(tr.samples, dtype=float)
    if order < 1:
        raise ValueError("order must be positive")
    if len(x) < 2 * order + 2:
        raise ValueError(f"trajectory of {len(x)} samples is too short for order {order}")
    rows = len(x) - order
    X = np.lib.stride_tricks.sliding_window_view(x, order + 1)[:rows]
    norms = np.linalg.norm(X, axis=1)
    keep = norms > 0.0
    X = X[keep] / norms[keep, None]
    A, y = X[:, :order], X[:, order]
    if len(A) < order:
        raise RankDeficient("trajectory is identically zero")
    coef, _, _, sv = np.linalg.lstsq(A, y, rcond=None)
    if sv[-1] <= RANK_RTOL * sv[0]:
        raise RankDeficient(f"order {order} predictor is not identifiable from this trajectory")
    return roots(Polynomial(list(-coef) + [1.0]))


def _match(ref: list[complex], found: list[complex]) -> float:
    """Smallest worst-case distance over assignments of `found` into `ref`."""
    if not found:
        return 0.0
    best = math.inf
    for perm in itertools.permutations(range(len(ref)), len(found)):
        err = max(abs(ref[i] - z) for i, z in zip(perm, found))
        best = min(best, err)
    return best


def _kb(rts):
    kind, pair = select_dominant(rts)
    try:
        c = continuous_from_roots(kind, pair)
    except MathDomainError:
        return None
    return (c.k, c.b)


@dataclass
class CrossCheckReport:
    form: str
    K: float
    B: float
    poly_roots: list[complex]
    eig_roots: list[complex]
    ident_roots: list[complex]
    ident_order: int
    ident_init: str
    eig_discrepancy: float
    ident_discrepancy: float
    kb_poly: tuple[float, float] | None
    kb_eig: tuple[float, float] | None
    kb_ident: tuple[float, float] | None
    notes: list[str] = field(default_factory=list)

    @property
    def eig_ok(self) -> bool:
        return self.eig_discrepancy <= EIG_TOL

    @property
    def ident_ok(self) -> bool:
        return self.ident_discrepancy <= IDENT_TOL

    @property
    def passed(self) -> bool:
        return self.eig_ok and self.ident_ok

    @property
    def kb_discrepancy(self) -> float | None:
        vals = [v for v in (self.kb_eig, self.kb_ident) if v is not None]
        if self.kb_poly is None or not vals:
            return None
        return max(math.hypot(v[0] - self.kb_poly[0], v[1] - self.kb_poly[1]) for v in vals)


def _identify(model: LoopStateModel, steps: int):
    """Try impulse then random excitation, lowering the order as needed."""
    n = model.order
    attempts = [("impulse", lambda: model),
                ("random", lambda: model.with_state(random_unit_state(n)))]
    last: Exception | None = None
    for order in range(n, 0, -1):
        for label, make in attempts:
            m = make()
            s = steps
            while True:
                try:
                    tr = simulate(m, s)
                    break
                except GrowthOverflow:
                    s //= 2
                    if s < 2 * order + 2:
                        raise
            try:
                return identify_poles(tr, order), order, label
            except (RankDeficient, ValueError) as exc:
                last = exc
    raise RankDeficient(f"no order identifiable: {last}")


def cross_check(f: CharacteristicForm, d: DiscreteParams, steps: int = 64) -> CrossCheckReport:
    """Compare polynomial roots, companion eigenvalues and identified poles.

    Never raises for numerical trouble; failures are recorded in the report.
    """
    model = build_state_model(f, d)
    notes: list[str] = []
    poly_roots = roots(model.poly)
    eig = [complex(e) for e in np.linalg.eigvals(model.transition)]
    eig_disc = _match(poly_roots, eig)
    try:
        ident, order, init = _identify(model, steps)
        ident_disc = _match(poly_roots, ident)
        if order < model.order:
            notes.append(f"identified {order} of {model.order} modes")
    except MathDomainError as exc:
        ident, order, init = [], 0, "none"
        ident_disc = math.inf
        notes.append(f"identification failed: {exc}")
    return CrossCheckReport(
        form=f.label(), K=d.K, B=d.B,
        poly_roots=poly_roots, eig_roots=eig, ident_roots=ident,
        ident_order=order, ident_init=init,
        eig_discrepancy=eig_disc, ident_discrepancy=ident_disc,
        kb_poly=_kb(poly_roots), kb_eig=_kb(eig), kb_ident=_kb(ident) if ident else None,
        notes=notes,
    )


def compare_variants(b0: float, d: DiscreteParams) -> dict:
    """Cross-check both real-damping variants at (K, B) and measure their gap.

    No variant is treated as ground truth; the gap is reported, not judged.
    """
    reps = {v: cross_check(builtin("real_damping", b0=b0, variant=v), d)
            for v in ("as_printed", "reconstructed")}
    a, r = reps["as_printed"].kb_poly, reps["reconstructed"].kb_poly
    gap = None if a is None or r is None else (r[0] - a[0], r[1] - a[1])
    return {"reports": reps, "kb_gap": gap}
