"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]`` or ``[FAIL]`` line with the measured
quantity next to its tolerance. Tolerances are fixed here and never relaxed.
"""
import math
import time

import numpy as np
import pytest

from zdeform.cli import main
from zdeform.config import DiscreteParams, builtin
from zdeform.deformation import (
    boundary_axis_crossing,
    boundary_max_K,
    distortion_at,
    invmap,
    invmap_residual,
    map_params,
    pole_report,
    stability_boundary,
    tune,
)
from zdeform.errors import NonRepresentable
from zdeform.experiments import run_table1
from zdeform.grid import default_spec, generate
from zdeform.oracle import cross_check
from zdeform.reference import ContinuousParams

FORMS = ("no_delay", "unit_delay", "real_damping")
SEED = 20240917

TUNE_TOL = 1e-10
ROUNDTRIP_RTOL = 1e-9
RESIDUAL_TOL = 1e-11
ROUNDTRIP_SECONDS = 2.0
BOUNDARY_TOL = 1e-9
BOUNDARY_MAX_TOL = 1e-6
AXIS_TOL = 1e-9
JACOBIAN_TOL = 1e-2
JURY_TOL = 1e-3
ORACLE_SECONDS = 3.0
DETUNING_TOL = 1e-4
OMEGA_SEPARATION = 1e-3
GRID_SECONDS = 1.0

OMEGA_V_ANCHOR = 1.2913562290761629


def report(capsys, n, ok, what):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {what}")
    assert ok, what


def test_1_tuning_identity(capsys):
    f = builtin("no_delay")
    worst = 0.0
    for k in (0.01, 0.1, 1.0, 2.0, 4.0, 9.0):
        c, _ = map_params(f, DiscreteParams(tune(k), 0.0))
        worst = max(worst, abs(c.k - k), abs(c.b))
    anchor = abs(tune(1.0) - (2 - 2 * math.cos(1.0)))
    ok = worst <= TUNE_TOL and anchor <= 1e-15 and abs(tune(1.0) - 0.9193953) < 1e-7
    report(capsys, 1, ok, f"tuning identity max error {worst:.2e} (tol {TUNE_TOL:g}), "
                          f"tune(1) = {tune(1.0):.10f}")


def test_2_roundtrip(capsys):
    rng = np.random.default_rng(SEED)
    n = 10_000
    theta = rng.uniform(0.01, 0.95 * math.pi, n).tolist()
    b = rng.uniform(0.0, 2.0, n).tolist()
    targets = [ContinuousParams(t * t + bb * bb / 4, bb) for t, bb in zip(theta, b)]
    worst_rel, worst_res, dominated = 0.0, 0.0, 0
    t0 = time.perf_counter()
    for name in FORMS:
        f = builtin(name)
        for c in targets:
            d = invmap(f, c)
            worst_res = max(worst_res, invmap_residual(f, c, d))
            back, rep = map_params(f, d)
            z = complex(math.exp(-c.b / 2) * math.cos(math.sqrt(c.k - c.b**2 / 4)),
                        math.exp(-c.b / 2) * math.sin(math.sqrt(c.k - c.b**2 / 4)))
            if abs(rep.dominant[0] - z) > 1e-6:
                continue
            dominated += 1
            rel = math.hypot(back.k - c.k, back.b - c.b) / math.hypot(c.k, c.b)
            worst_rel = max(worst_rel, rel)
    elapsed = time.perf_counter() - t0
    ok = (worst_rel <= ROUNDTRIP_RTOL and worst_res <= RESIDUAL_TOL
          and elapsed < ROUNDTRIP_SECONDS and dominated == 3 * n)
    report(capsys, 2, ok,
           f"3 x {n} roundtrips, {dominated} with the imposed pair selected, worst relative "
           f"{worst_rel:.1e} (tol {ROUNDTRIP_RTOL:g}), worst residual {worst_res:.1e} "
           f"(tol {RESIDUAL_TOL:g}), {elapsed:.2f} s (limit {ROUNDTRIP_SECONDS:g} s)")


def test_3_unit_delay_boundary(capsys):
    f = builtin("unit_delay")
    pts, skipped = stability_boundary(f, n_points=200)
    worst = 0.0
    for p in pts:
        c = math.cos(p.theta)
        worst = max(worst, abs(p.K - 2 * (1 - c) * (2 * c - 1)), abs(p.B - 2 * (1 - c)))
    top = boundary_max_K(f)
    err_top = max(abs(top.K - 0.25), abs(top.B - 0.5))
    ok = len(pts) == 200 and not skipped and worst <= BOUNDARY_TOL and err_top <= BOUNDARY_MAX_TOL
    report(capsys, 3, ok, f"{len(pts)} boundary points, closed-form error {worst:.1e} "
                          f"(tol {BOUNDARY_TOL:g}); max K {top.K:.9f} at B {top.B:.9f} "
                          f"(tol {BOUNDARY_MAX_TOL:g})")


def test_4_no_delay_boundary(capsys):
    pts, _ = stability_boundary(builtin("no_delay"), n_points=200)
    worst = max(abs(p.B) for p in pts)
    inside = all(0.0 < p.K < 4.0 for p in pts)
    ok = worst < AXIS_TOL and inside
    report(capsys, 4, ok, f"no_delay boundary max |B| = {worst:.1e} (tol {AXIS_TOL:g}), "
                          f"K in ({min(p.K for p in pts):.2e}, {max(p.K for p in pts):.4f})")


def test_5_asymptotic_tangency(capsys):
    d = DiscreteParams(1e-4, 1e-4)
    J_nd = np.array(distortion_at(builtin("no_delay"), d).jacobian)
    J_ud = np.array(distortion_at(builtin("unit_delay"), d).jacobian)
    e_nd = np.linalg.norm(J_nd - np.eye(2))
    e_ud = np.linalg.norm(J_ud - np.array([[1.0, 0.0], [-1.0, 1.0]]))
    ok = e_nd <= JACOBIAN_TOL and e_ud <= JACOBIAN_TOL
    report(capsys, 5, ok, f"Jacobian distance no_delay->I {e_nd:.1e}, unit_delay->[[1,0],[-1,1]] "
                          f"{e_ud:.1e} (tol {JACOBIAN_TOL:g})")


def _stable(f, K, B):
    return pole_report(f, DiscreteParams(K, B)).stable


def test_6_real_damping_improvement(capsys):
    ud = builtin("unit_delay")
    rd = builtin("real_damping", b0=0.5, variant="reconstructed")
    hit = boundary_axis_crossing(rd)
    jury_err = abs(hit.K - 0.5)
    # along B = 0: real damping is stable right up to K = 0.5, unit delay nowhere with K > 0
    axis = np.linspace(1e-3, 1.0, 400)
    rd_axis = [K for K in axis if _stable(rd, K, 0.0)]
    ud_axis = [K for K in axis if _stable(ud, K, 0.0)]
    rd_axis_edge = max(rd_axis)
    # the unit-delay boundary enters B = 0 only at the origin
    ud_pts, _ = stability_boundary(ud, theta_range=(1e-6, 0.5), n_points=50)
    ud_edge = min(ud_pts, key=lambda p: p.B)

    spec = default_spec(ud)
    nodes = list(generate(spec).iter_nodes())
    Ks = [n.K for n in nodes]
    Bs = [n.B for n in nodes]
    lattice = [(K, B) for K in np.linspace(min(Ks), max(Ks), 101)
               for B in np.linspace(min(Bs), max(Bs), 101)]
    lattice += [(n.K, n.B) for n in nodes]
    violations = only_rd = 0
    for K, B in lattice:
        s_ud, s_rd = _stable(ud, K, B), _stable(rd, K, B)
        violations += s_ud and not s_rd
        only_rd += s_rd and not s_ud
    ok = (jury_err <= JURY_TOL and abs(rd_axis_edge - 0.5) <= JURY_TOL and not ud_axis
          and abs(ud_edge.K) < 1e-9 and violations == 0 and only_rd > 0)
    report(capsys, 6, ok,
           f"real_damping B=0 limit K = {hit.K:.6f} (tol {JURY_TOL:g}, scan edge {rd_axis_edge:.4f}); "
           f"unit_delay stable B=0 points with K>0: {len(ud_axis)}, boundary reaches B=0 at "
           f"K = {ud_edge.K:.1e}; subset violations {violations}, real_damping-only points {only_rd}")


def test_7_oracle_triangulation(capsys):
    rng = np.random.default_rng(SEED + 7)
    pts = rng.uniform(0.0, 1.0, (1000, 2))
    checked = passed = 0
    worst_eig = worst_ident = 0.0
    t0 = time.perf_counter()
    for name in FORMS:
        f = builtin(name)
        for K, B in pts:
            d = DiscreteParams(float(K), float(B))
            try:
                if not pole_report(f, d).representable:
                    continue
            except NonRepresentable:
                continue
            r = cross_check(f, d)
            checked += 1
            passed += r.passed
            worst_eig = max(worst_eig, r.eig_discrepancy)
            worst_ident = max(worst_ident, r.ident_discrepancy)
    elapsed = time.perf_counter() - t0
    ok = checked > 0 and passed == checked and elapsed < ORACLE_SECONDS
    report(capsys, 7, ok, f"{passed}/{checked} representable points PASS, worst eig {worst_eig:.1e} "
                          f"(tol 1e-10), worst identification {worst_ident:.1e} (tol 1e-6), "
                          f"{elapsed:.2f} s (limit {ORACLE_SECONDS:g} s)")


def test_8_table1(capsys):
    r = run_table1(1.0)
    exact_IV = math.acos(2 * math.cos(1.0) - 1)
    checks = [
        r.omega_I == 1.0,
        abs(r.omega_II - 1.0) <= 1e-15,
        abs(r.omega_IV - exact_IV) <= 1e-12,
        abs(r.omega_IV - 1.490089) <= DETUNING_TOL,
        abs(r.detuning_IV - 0.053651) <= DETUNING_TOL,
        abs(r.omega_V - r.omega_III) > OMEGA_SEPARATION,
        abs(r.omega_V - r.omega_IV) > OMEGA_SEPARATION,
        abs(r.omega_V - OMEGA_V_ANCHOR) <= 1e-9,
    ]
    report(capsys, 8, all(checks),
           f"omega I/II/III/IV/V = {r.omega_I:.6f}/{r.omega_II:.6f}/{r.omega_III:.6f}/"
           f"{r.omega_IV:.6f}/{r.omega_V:.6f}, detuning_IV {100 * r.detuning_IV:+.4f}% "
           f"(0.053651 +- {DETUNING_TOL:g}), detuning_V {100 * r.detuning_V:+.4f}%")


def test_9_determinism(capsys, tmp_path):
    args = {
        "no_delay": ["--config", "no_delay"],
        "unit_delay": ["--config", "unit_delay"],
        "real_damping": ["--config", "real_damping", "--b0", "0.5", "--variant", "reconstructed"],
    }
    same = True
    for name, extra in args.items():
        for run in ("a", "b"):
            (tmp_path / run).mkdir(exist_ok=True)
            code = main(["grid", *extra, "--defaults", "--out-prefix", str(tmp_path / run / name)])
            capsys.readouterr()
            same &= code == 0
        for ext in ("json", "csv", "svg"):
            a = (tmp_path / "a" / f"{name}.{ext}").read_bytes()
            b = (tmp_path / "b" / f"{name}.{ext}").read_bytes()
            same &= a == b
    t0 = time.perf_counter()
    for name in FORMS:
        generate(default_spec(builtin(name)))
    elapsed = time.perf_counter() - t0
    ok = same and elapsed < GRID_SECONDS
    report(capsys, 9, ok, f"byte-identical JSON/CSV/SVG across two runs: {same}; three default "
                          f"grids in {elapsed:.2f} s (limit {GRID_SECONDS:g} s)")
