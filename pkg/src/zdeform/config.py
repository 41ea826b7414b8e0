"""Simulator configurations as characteristic forms.

A configuration is the triple (P, Q, R) such that the closed-loop poles of
the hybrid oscillator are the roots of ``P(z)*K + Q(z)*B + R(z)``. Three
configurations are built in; others are read from JSON files::

    {"name": "two_delay",
     "P": [0, 1], "Q": [-1, 1], "R": [0, 0, 1, -2, 1],
     "params": {}, "variant": "reconstructed"}

Coefficients are ascending in degree and may be JSON numbers or decimal
strings (``"1e-3"``). Saved files write every coefficient as a 17-digit
decimal string so a save/load cycle is exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import InvalidParam, InvariantError, ParseError, SchemaError, UnknownName
from .poly import Polynomial

__all__ = [
    "BUILTINS",
    "VARIANTS",
    "CharacteristicForm",
    "DiscreteParams",
    "assemble",
    "builtin",
    "load_config",
    "resolve",
    "save_config",
]

BUILTINS = ("no_delay", "unit_delay", "real_damping")
VARIANTS = ("reconstructed", "as_printed")
DEFAULT_B0 = 0.5


@dataclass(frozen=True)
class DiscreteParams:
    """Normalized virtual stiffness ``K`` and damping ``B``."""

    K: float
    B: float


@dataclass(frozen=True, eq=False)
class CharacteristicForm:
    name: str
    P: Polynomial
    Q: Polynomial
    R: Polynomial
    params: Mapping[str, float] = field(default_factory=dict)
    provenance: str = "builtin"
    variant: str | None = None

    def __post_init__(self):
        if self.P.is_zero() and self.Q.is_zero() and self.R.is_zero():
            raise InvariantError(f"form {self.name!r}: P, Q and R are all zero")
        for poly in (self.P, self.Q, self.R):
            if not all(math.isfinite(a) for a in poly.coeffs):
                raise InvariantError(f"form {self.name!r}: non-finite coefficient")

    def same_polynomials(self, other: CharacteristicForm) -> bool:
        return (self.P, self.Q, self.R) == (other.P, other.Q, other.R)

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Q.degree, self.R.degree)

    def label(self) -> str:
        parts = [self.name]
        if self.variant:
            parts.append(self.variant)
        parts += [f"{k}={v:g}" for k, v in sorted(self.params.items())]
        return " ".join(parts)


def damping_gain(b0: float) -> float:
    """``b0 / (1 - exp(-b0))``, accurate for small `b0`."""
    return b0 / -math.expm1(-b0)


def builtin(name: str, b0: float = DEFAULT_B0, variant: str = "reconstructed") -> CharacteristicForm:
    """One of the built-in simulator configurations.

    ``no_delay``     ideal sampling, no computation delay
    ``unit_delay``   one sample of computation delay
    ``real_damping`` unit delay plus a real device damping `b0`

    For ``real_damping`` the ``as_printed`` variant uses ``R = g*z*(z-1)`` and
    ``reconstructed`` uses ``R = g*z*(z-1)*(z-exp(-b0))``, with
    ``g = b0/(1-exp(-b0))``. Only the latter tends to ``unit_delay`` as
    ``b0 -> 0``.
    """
    z = Polynomial([0.0, 1.0])
    zm1 = Polynomial([-1.0, 1.0])
    if name == "no_delay":
        return CharacteristicForm(name, z, zm1, zm1 * zm1)
    if name == "unit_delay":
        return CharacteristicForm(name, z, zm1, z * zm1 * zm1)
    if name == "real_damping":
        if variant not in VARIANTS:
            raise InvalidParam(f"unknown variant {variant!r}, expected one of {VARIANTS}")
        if not (b0 > 0 and math.isfinite(b0)):
            raise InvalidParam(f"real damping b0 must be positive, got {b0!r}")
        g = damping_gain(b0)
        r = g * z * zm1
        if variant == "reconstructed":
            r = r * Polynomial([-math.exp(-b0), 1.0])
        return CharacteristicForm(name, z, zm1, r, {"b0": float(b0)}, "builtin", variant)
    raise UnknownName(f"unknown configuration {name!r}, expected one of {BUILTINS}")


def assemble(f: CharacteristicForm, d: DiscreteParams) -> Polynomial:
    """``K*P + B*Q + R`` as one polynomial."""
    P, Q, R = f.P.coeffs, f.Q.coeffs, f.R.coeffs
    out = [0.0] * max(len(P), len(Q), len(R))
    for i, a in enumerate(P):
        out[i] += d.K * a
    for i, a in enumerate(Q):
        out[i] += d.B * a
    for i, a in enumerate(R):
        out[i] += a
    return Polynomial(out)


def _parse_real(value, where: str) -> float:
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a real number, got {value!r}")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(value.strip())
        except ValueError:
            raise ParseError(f"{where}: cannot parse {value!r} as a real number") from None
    else:
        raise ParseError(f"{where}: expected a real number, got {type(value).__name__}")
    if not math.isfinite(out):
        raise ParseError(f"{where}: non-finite value {value!r}")
    return out


def _parse_poly(doc: dict, key: str) -> Polynomial:
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    raw = doc[key]
    if not isinstance(raw, list):
        raise SchemaError(f"field {key!r} must be a list of coefficients")
    return Polynomial(_parse_real(v, f"{key}[{i}]") for i, v in enumerate(raw))


def form_from_dict(doc, provenance: str = "file") -> CharacteristicForm:
    if not isinstance(doc, dict):
        raise SchemaError("configuration must be a JSON object")
    if "name" not in doc:
        raise SchemaError("missing field 'name'")
    if not isinstance(doc["name"], str):
        raise SchemaError("field 'name' must be a string")
    polys = {key: _parse_poly(doc, key) for key in ("P", "Q", "R")}
    params = doc.get("params", {}) or {}
    if not isinstance(params, dict):
        raise SchemaError("field 'params' must be an object")
    params = {str(k): _parse_real(v, f"params.{k}") for k, v in params.items()}
    variant = doc.get("variant")
    if variant is not None and variant not in VARIANTS:
        raise SchemaError(f"field 'variant' must be one of {VARIANTS}")
    return CharacteristicForm(doc["name"], params=params, provenance=provenance,
                              variant=variant, **polys)


def form_to_dict(f: CharacteristicForm) -> dict:
    doc = {
        "name": f.name,
        "P": [format(a, ".17g") for a in f.P.coeffs],
        "Q": [format(a, ".17g") for a in f.Q.coeffs],
        "R": [format(a, ".17g") for a in f.R.coeffs],
        "params": {k: format(v, ".17g") for k, v in sorted(f.params.items())},
    }
    if f.variant is not None:
        doc["variant"] = f.variant
    return doc


def load_config(path) -> CharacteristicForm:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return form_from_dict(doc, provenance="file")


def save_config(f: CharacteristicForm, path) -> None:
    Path(path).write_text(json.dumps(form_to_dict(f), indent=2) + "\n")


def resolve(spec: str, b0: float | None = None, variant: str | None = None) -> CharacteristicForm:
    """A built-in name or a path to a configuration file."""
    if spec in BUILTINS:
        kwargs = {}
        if b0 is not None:
            kwargs["b0"] = b0
        if variant is not None:
            kwargs["variant"] = variant
        if spec != "real_damping" and kwargs:
            raise InvalidParam(f"{spec} takes no --b0/--variant")
        return builtin(spec, **kwargs)
    path = Path(spec)
    if not path.exists():
        raise UnknownName(f"{spec!r} is neither a built-in ({', '.join(BUILTINS)}) nor a file")
    return load_config(path)
