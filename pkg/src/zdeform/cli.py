"""Command-line interface.

Exit codes: 0 success, 2 bad arguments or configuration, 3 math-domain
error (pole beyond Nyquist, non-representable point, singular system, or a
grid in which every node failed).
"""
from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import BUILTINS, VARIANTS, DiscreteParams, form_to_dict, resolve
from .deformation import invmap, map_params, stability_boundary, tune
from .errors import InputError, MathDomainError
from .experiments import HOLDS, run_table1
from .grid import (
    DEFAULT_B,
    DEFAULT_BOUNDARY_POINTS,
    DEFAULT_K,
    DEFAULT_SAMPLES,
    DEFAULT_THETA_MAX,
    GridSpec,
    generate,
    reference_grid,
)
from .oracle import compare_variants, cross_check
from .reference import ContinuousParams, PhysicalUnits
from .serialize import dumps, grid_to_csv, grid_to_dict
from .svg import grid_to_svg

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3
FORMATS = ("json", "csv", "svg", "png", "all")


def _num(x: float) -> str:
    return format(x + 0.0, "#.9g")


def _cnum(z: complex) -> str:
    return f"{_num(z.real)}{'+' if z.imag >= 0 else '-'}{_num(abs(z.imag))}j"


def _range(text: str):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from None
    if n < 1 or (n > 1 and not b > a):
        raise argparse.ArgumentTypeError(f"need n >= 1 and b > a, got {text!r}")
    return a, b, n


def _linspace(a, b, n):
    return tuple(np.linspace(a, b, n).tolist())


def _units(args) -> PhysicalUnits:
    return PhysicalUnits(m=args.m, T=args.T)


def _form(args):
    return resolve(args.config, b0=args.b0, variant=args.variant)


def _print_record(rows):
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")


def _write_json(path, obj):
    Path(path).write_text(dumps(obj))


def cmd_map(args) -> int:
    f = _form(args)
    u = _units(args)
    d = DiscreteParams(args.K * u.T**2 / u.m, args.B * u.T / u.m)
    c, rep = map_params(f, d)
    top = rep.dominant[0]
    rows = [
        ("config", f.label()),
        ("K", _num(d.K)), ("B", _num(d.B)),
        ("k", _num(c.k)), ("b", _num(c.b)),
        ("k_phys", _num(c.k * u.m / u.T**2)), ("b_phys", _num(c.b * u.m / u.T)),
        ("dominant", _cnum(top)),
        ("modulus", _num(rep.dominant_modulus)),
        ("max_modulus", _num(rep.max_modulus)),
        ("stable", "true" if rep.stable else "false"),
    ]
    _print_record(rows)
    if args.json:
        _write_json(args.json, {
            "config": f.label(), "K": d.K, "B": d.B, "k": c.k, "b": c.b,
            "dominant": [top.real, top.imag], "dominant_modulus": rep.dominant_modulus,
            "roots": [[r.real, r.imag] for r in rep.all_roots], "stable": rep.stable,
        })
    return EXIT_OK


def cmd_invmap(args) -> int:
    f = _form(args)
    u = _units(args)
    c = ContinuousParams(args.k * u.T**2 / u.m, args.b * u.T / u.m)
    d = invmap(f, c)
    c2, rep = map_params(f, d)
    top = rep.dominant[0] if rep.dominant else complex("nan")
    rows = [
        ("config", f.label()),
        ("k", _num(c.k)), ("b", _num(c.b)),
        ("K", _num(d.K)), ("B", _num(d.B)),
        ("K_phys", _num(d.K * u.m / u.T**2)), ("B_phys", _num(d.B * u.m / u.T)),
        ("dominant", _cnum(top)),
        ("modulus", _num(rep.dominant_modulus)),
        ("max_modulus", _num(rep.max_modulus)),
        ("stable", "true" if rep.stable else "false"),
    ]
    _print_record(rows)
    if args.json:
        _write_json(args.json, {
            "config": f.label(), "k": c.k, "b": c.b, "K": d.K, "B": d.B,
            "dominant": [top.real, top.imag], "dominant_modulus": rep.dominant_modulus,
            "roots": [[r.real, r.imag] for r in rep.all_roots], "stable": rep.stable,
        })
    return EXIT_OK


def cmd_tune(args) -> int:
    u = _units(args)
    K = tune(args.k, u)
    k_norm = args.k * u.T**2 / u.m
    K_norm = K * u.T**2 / u.m
    if math.isclose(math.sqrt(k_norm), math.pi, rel_tol=1e-12):
        print("warning: frequency at the Nyquist limit", file=sys.stderr)
    _print_record([("K", _num(K)), ("K_normalized", _num(K_norm)), ("k_normalized", _num(k_norm))])
    return EXIT_OK


def _grid_spec(args, form) -> GridSpec:
    k_rng = DEFAULT_K if args.k_range is None else args.k_range
    b_rng = DEFAULT_B if args.b_range is None else args.b_range
    return GridSpec(
        form,
        _linspace(*k_rng),
        _linspace(*b_rng),
        samples_per_curve=args.samples,
        theta_max=args.theta_max,
        boundary_points=args.boundary_points,
    )


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _manifest(args, spec_doc, outputs, prefix):
    config_hash = hashlib.sha256(dumps(spec_doc).encode()).hexdigest()
    doc = {
        "command": ["zdeform"] + list(args.argv),
        "config_hash": config_hash,
        "tool_version": __version__,
        "outputs": [{"path": str(p), "sha256": _sha256(p)} for p in outputs],
        "sidecar": {"timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()},
    }
    path = Path(f"{prefix}.manifest.json")
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def cmd_grid(args) -> int:
    form = _form(args)
    spec = _grid_spec(args, form)
    g = generate(spec)
    nodes = list(g.iter_nodes())
    if nodes and g.failed_nodes == len(nodes):
        print("error: every grid node failed", file=sys.stderr)
        return EXIT_DOMAIN
    skipped = sum(len(c.skipped) for c in g.iso_k + g.iso_b) + len(g.boundary_skipped)
    if skipped or g.failed_nodes:
        print(f"warning: {skipped} curve points skipped, {g.failed_nodes} nodes failed",
              file=sys.stderr)

    formats = set(args.format)
    if "all" in formats:
        formats |= {"json", "csv", "svg"}
    prefix = args.out_prefix
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    ref = reference_grid(spec) if args.reference else None
    data = grid_to_dict(g, b_axis=args.b_axis)
    outputs = []
    if "json" in formats:
        p = Path(f"{prefix}.json")
        p.write_text(dumps(data))
        outputs.append(p)
    if "csv" in formats:
        p = Path(f"{prefix}.csv")
        p.write_text(grid_to_csv(g))
        outputs.append(p)
    if "svg" in formats:
        p = Path(f"{prefix}.svg")
        p.write_text(grid_to_svg(g, reference=ref, b_axis=args.b_axis))
        outputs.append(p)
    if "png" in formats:
        from .plotting import plot_grid

        p = Path(f"{prefix}.png")
        plot_grid(g, p, reference=ref, b_axis=args.b_axis)
        outputs.append(p)
    manifest = _manifest(args, {"form": data["form"], "spec": data["spec"],
                                "b_axis": args.b_axis, "reference": args.reference}, outputs, prefix)
    for p in outputs + [manifest]:
        print(p)
    for name, lm in g.landmarks.items():
        print(f"{name}: K={_num(lm.K)} B={_num(lm.B)} theta={_num(lm.theta)}", file=sys.stderr)
    return EXIT_OK


def cmd_boundary(args) -> int:
    form = _form(args)
    pts, skipped = stability_boundary(form, (1e-3, args.theta_max), args.n)
    for th, reason in skipped:
        print(f"warning: theta={th:.6g} skipped ({reason})", file=sys.stderr)
    if not pts:
        return EXIT_DOMAIN
    lines = ["K,B,theta"] + [f"{p.K:.9g},{p.B:.9g},{p.theta:.9g}" for p in pts]
    text = "\n".join(lines) + "\n"
    if args.out_prefix:
        Path(f"{args.out_prefix}.csv").write_text(text)
        print(f"{args.out_prefix}.csv")
        if args.plot:
            from .plotting import plot_boundaries

            plot_boundaries({form.label(): pts}, f"{args.out_prefix}.png")
            print(f"{args.out_prefix}.png")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_experiment(args) -> int:
    rep = run_table1(args.k, _units(args), hold=args.hold)
    rows = [
        ("system", "omega", "detuning vs III"),
        ("I   real k", _num(rep.omega_I), ""),
        ("II  virtual K", _num(rep.omega_II), ""),
        ("III real 2k", _num(rep.omega_III), ""),
        ("IV  virtual 2K", _num(rep.omega_IV), f"{100 * rep.detuning_IV:+.4f}%"),
        ("V   real k + virtual K", _num(rep.omega_V), f"{100 * rep.detuning_V:+.4f}%"),
    ]
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    print(f"k = {_num(rep.k)}, K = {_num(rep.K_used)}, hold = {rep.hold}")
    for a, b, c in rows:
        print(f"{a:<{w0}}  {b:>{w1}}  {c}")
    print(f"detuning_IV = {100 * rep.detuning_IV:+.4f}%")
    print(f"detuning_V = {100 * rep.detuning_V:+.4f}%")
    if args.json:
        _write_json(args.json, rep.as_dict())
    return EXIT_OK


def _report_dict(r):
    return {
        "form": r.form, "K": r.K, "B": r.B, "passed": r.passed,
        "eig_discrepancy": r.eig_discrepancy, "ident_discrepancy": r.ident_discrepancy,
        "kb_discrepancy": r.kb_discrepancy,
        "ident_order": r.ident_order, "ident_init": r.ident_init,
        "poly_roots": r.poly_roots, "eig_roots": r.eig_roots, "ident_roots": r.ident_roots,
        "kb_poly": list(r.kb_poly) if r.kb_poly else None,
        "kb_eig": list(r.kb_eig) if r.kb_eig else None,
        "kb_ident": list(r.kb_ident) if r.kb_ident else None,
        "notes": r.notes,
    }


def _print_check(r):
    kb = r.kb_discrepancy
    _print_record([
        ("config", r.form),
        ("K", _num(r.K)), ("B", _num(r.B)),
        ("roots", "  ".join(_cnum(z) for z in r.poly_roots)),
        ("eig_vs_roots", f"{r.eig_discrepancy:.3e}"),
        ("ident_vs_roots", f"{r.ident_discrepancy:.3e} (order {r.ident_order}, {r.ident_init})"),
        ("kb_discrepancy", "n/a" if kb is None else f"{kb:.3e}"),
        ("result", "PASS" if r.passed else "FAIL"),
    ] + [("note", n) for n in r.notes])


def cmd_oracle(args) -> int:
    d = DiscreteParams(args.K, args.B)
    if args.compare_variants:
        b0 = 0.5 if args.b0 is None else args.b0
        out = compare_variants(b0, d)
        for r in out["reports"].values():
            _print_check(r)
            print()
        gap = out["kb_gap"]
        print("kb_gap      " + ("n/a (a variant is not representable here)" if gap is None
                                else f"dk={_num(gap[0])} db={_num(gap[1])}"))
        if args.json:
            _write_json(args.json, {
                "reports": {v: _report_dict(r) for v, r in out["reports"].items()},
                "kb_gap": list(gap) if gap else None,
            })
        return EXIT_OK if all(r.passed for r in out["reports"].values()) else EXIT_DOMAIN
    r = cross_check(_form(args), d)
    _print_check(r)
    if args.json:
        _write_json(args.json, _report_dict(r))
    return EXIT_OK if r.passed else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    cfg = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    cfg.add_argument("--config", default="no_delay",
                     help=f"built-in ({', '.join(BUILTINS)}) or path to a JSON configuration")
    cfg.add_argument("--variant", choices=VARIANTS, default=None,
                     help="real_damping variant (default reconstructed)")
    cfg.add_argument("--b0", type=float, default=None, help="real damping, normalized (default 0.5)")
    units = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    units.add_argument("--m", type=float, default=1.0, help="mass [kg] (default 1: normalized)")
    units.add_argument("--T", type=float, default=1.0, help="sampling period [s] (default 1)")

    p = argparse.ArgumentParser(prog="zdeform", allow_abbrev=False,
                                description="Parameter-space deformation of sampled haptic simulators")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("map", parents=[cfg, units], allow_abbrev=False,
                       help="virtual (K, B) -> equivalent continuous (k, b)")
    s.add_argument("--K", type=float, required=True)
    s.add_argument("--B", type=float, required=True)
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("invmap", parents=[cfg, units], allow_abbrev=False,
                       help="continuous (k, b) -> virtual (K, B)")
    s.add_argument("--k", type=float, required=True)
    s.add_argument("--b", type=float, required=True)
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_invmap)

    s = sub.add_parser("tune", parents=[units], allow_abbrev=False,
                       help="virtual stiffness matching the frequency of a real spring")
    s.add_argument("--k", type=float, required=True)
    s.set_defaults(func=cmd_tune)

    s = sub.add_parser("grid", parents=[cfg], allow_abbrev=False,
                       help="iso-k / iso-b deformation grid")
    s.add_argument("--defaults", action="store_true",
                   help="default window: k 0.05:2.5:12, b 0:1:11, 60 samples, theta_max 0.95 pi")
    s.add_argument("--k-range", type=_range, default=None, metavar="a:b:n")
    s.add_argument("--b-range", type=_range, default=None, metavar="a:b:n")
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    s.add_argument("--theta-max", type=float, default=DEFAULT_THETA_MAX)
    s.add_argument("--boundary-points", type=int, default=DEFAULT_BOUNDARY_POINTS)
    s.add_argument("--out-prefix", default="grid")
    s.add_argument("--format", choices=FORMATS, action="append", default=None,
                   help="repeatable; all = json, csv and svg (png only on request)")
    s.add_argument("--b-axis", choices=("virtual", "total"), default="virtual",
                   help="plot B as virtual damping or virtual plus b0")
    s.add_argument("--no-reference", dest="reference", action="store_false",
                   help="omit the dashed identity grid overlay")
    s.set_defaults(func=cmd_grid)

    s = sub.add_parser("boundary", parents=[cfg], allow_abbrev=False,
                       help="zero-damping (stability limit) curve as CSV")
    s.add_argument("--theta-max", type=float, default=DEFAULT_THETA_MAX)
    s.add_argument("--n", type=int, default=DEFAULT_BOUNDARY_POINTS)
    s.add_argument("--out-prefix", default=None)
    s.add_argument("--plot", action="store_true", help="also write a PNG figure")
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("experiment", parents=[units], allow_abbrev=False,
                       help="spring-assembly consistency experiment")
    s.add_argument("name", choices=("table1",))
    s.add_argument("--k", type=float, default=1.0)
    s.add_argument("--hold", choices=HOLDS, default="hold")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("oracle", parents=[cfg], allow_abbrev=False,
                       help="cross-check poles by roots, eigenvalues and identification")
    s.add_argument("--K", type=float, required=True)
    s.add_argument("--B", type=float, required=True)
    s.add_argument("--compare-variants", action="store_true",
                   help="check both real_damping variants and report their (k, b) gap")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    if getattr(args, "format", None) is None and args.command == "grid":
        args.format = ["all"]
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MathDomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
