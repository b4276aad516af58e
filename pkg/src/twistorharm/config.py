"""Analysis configurations: a versioned JSON document and builtin examples.

Schema (``"version": 1``)::

    {
      "version": 1,
      "name": "kodaira",
      "frame": "A",                         # display letter, default "E"
      "parameters": [{"name": "a1", "kind": "real"},
                     {"name": "epsilon1", "kind": "sign"}],
      "brackets": [{"i": 1, "j": 2, "coeffs": ["0", "0", "0", "-2"]}],
      "J": [["0", "epsilon1", "0", "0"], ...],   # row c lists J E_c
      "tau": ["a1", "a2", "a3", "a4"]
    }

Indices are 1-based and only ``i < j`` bracket entries are accepted.  Scalar
entries may be JSON integers or expression strings such as ``"-1/2"`` or
``"-(a3^2+a4^2+4)/2"``.  ``tau`` lists frame components of the torsion
1-form, related to the 3-form by ``𝒯123 = τ4, 𝒯124 = -τ3, 𝒯134 = τ2,
𝒯234 = -τ1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError
from .exterior import DIM, Endomorphism, KVector
from .hermitian import HermitianData, validate_J
from .liealg import MetricLieAlgebra
from .scalars import Parameter, ParameterSet, Polynomial, Scalar, format_scalar, parse_scalar

SCHEMA_VERSION = 1
_KEYS = {"version", "name", "frame", "parameters", "brackets", "J", "tau"}


@dataclass(frozen=True)
class AnalysisConfig:
    name: str
    params: ParameterSet
    brackets: tuple[tuple[tuple[int, int], tuple[Fraction, ...]], ...]
    J_images: tuple[KVector, ...]
    tau: KVector
    frame: str = "E"

    def algebra(self) -> MetricLieAlgebra:
        return MetricLieAlgebra.from_brackets(dict(self.brackets), self.name)

    def J(self) -> Endomorphism:
        return Endomorphism.from_images(self.J_images)

    def hermitian(self) -> HermitianData:
        return validate_J(self.J(), self.algebra())

    def to_document(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "frame": self.frame,
            "parameters": [{"name": p.name, "kind": p.kind} for p in self.params],
            "brackets": [
                {"i": i + 1, "j": j + 1, "coeffs": [format_scalar(c) for c in coeffs]}
                for (i, j), coeffs in self.brackets
            ],
            "J": [[format_scalar(c) for c in v.coeffs] for v in self.J_images],
            "tau": [format_scalar(c) for c in self.tau.coeffs],
        }

    def with_tau(self, tau: KVector, name: str = None) -> "AnalysisConfig":
        return AnalysisConfig(name or self.name, self.params, self.brackets, self.J_images, tau, self.frame)


def render_config(cfg: AnalysisConfig) -> str:
    return json.dumps(cfg.to_document(), indent=2) + "\n"


def _scalar(value, params: ParameterSet, where: str) -> Scalar:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError(f"{where}: expected an integer or expression string, got {value!r}")
    try:
        return parse_scalar(str(value), params)
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _index(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= DIM:
        raise ConfigError(f"{where}: index must be an integer in 1..4, got {value!r}")
    return value - 1


def _vector(values, params, where, *, rational: bool = False) -> KVector:
    if not isinstance(values, list) or len(values) != DIM:
        raise ConfigError(f"{where}: expected a list of 4 entries")
    out = [_scalar(v, params, f"{where}[{n + 1}]") for n, v in enumerate(values)]
    if rational:
        for n, v in enumerate(out):
            if isinstance(v, Polynomial):
                raise ConfigError(f"{where}[{n + 1}]: structure constants must be rational")
    return KVector(1, out)


def from_document(doc) -> AnalysisConfig:
    """Validate a decoded document; Jacobi and J checks run here."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")
    if doc.get("version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported or missing version (expected {SCHEMA_VERSION})")
    for key in ("J", "tau"):
        if key not in doc:
            raise ConfigError(f"missing required key {key!r}")
    name = doc.get("name", "unnamed")
    frame = doc.get("frame", "E")
    if not isinstance(name, str) or not isinstance(frame, str) or not frame.isalpha():
        raise ConfigError("name and frame must be strings; frame must be a letter")
    plist = doc.get("parameters", [])
    if not isinstance(plist, list):
        raise ConfigError("parameters must be a list")
    params = []
    for n, p in enumerate(plist):
        if not isinstance(p, dict) or set(p) - {"name", "kind"} or "name" not in p:
            raise ConfigError(f"parameters[{n + 1}]: expected {{name, kind}}")
        params.append(Parameter(p["name"], p.get("kind", "real")))
    params = ParameterSet(params)
    blist = doc.get("brackets", [])
    if not isinstance(blist, list):
        raise ConfigError("brackets must be a list")
    brackets = {}
    for n, b in enumerate(blist):
        where = f"brackets[{n + 1}]"
        if not isinstance(b, dict) or set(b) != {"i", "j", "coeffs"}:
            raise ConfigError(f"{where}: expected keys i, j, coeffs")
        i, j = _index(b["i"], where + ".i"), _index(b["j"], where + ".j")
        if not i < j:
            raise ConfigError(f"{where}: only entries with i < j are accepted")
        if (i, j) in brackets:
            raise ConfigError(f"{where}: duplicate bracket [E{i + 1},E{j + 1}]")
        brackets[(i, j)] = _vector(b["coeffs"], params, where + ".coeffs", rational=True).coeffs
    Jrows = doc["J"]
    if not isinstance(Jrows, list) or len(Jrows) != DIM:
        raise ConfigError("J: expected 4 rows, row c listing the components of J E_c")
    J_images = tuple(_vector(r, params, f"J[{n + 1}]") for n, r in enumerate(Jrows))
    tau = _vector(doc["tau"], params, "tau")
    cfg = AnalysisConfig(name, params, tuple(sorted(brackets.items())), J_images, tau, frame)
    cfg.hermitian()
    return cfg


def parse_config(text: str) -> AnalysisConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def _doc(name, frame, params, brackets, J, tau) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "name": name,
        "frame": frame,
        "parameters": params,
        "brackets": [{"i": i, "j": j, "coeffs": c} for (i, j), c in brackets.items()],
        "J": J,
        "tau": tau,
    }


_REAL4 = [{"name": f"a{k}", "kind": "real"} for k in range(1, 5)]

BUILTINS = {
    "inoue-s0": _doc(
        "inoue-s0", "E", _REAL4,
        {(1, 2): ["-1", "0", "0", "0"], (2, 3): ["0", "0", "-1/2", "0"], (2, 4): ["0", "0", "0", "-1/2"]},
        [["0", "1", "0", "0"], ["-1", "0", "0", "0"], ["0", "0", "0", "1"], ["0", "0", "-1", "0"]],
        ["a1", "a2", "a3", "a4"],
    ),
    "kodaira": _doc(
        "kodaira", "A",
        _REAL4 + [{"name": "epsilon1", "kind": "sign"}, {"name": "epsilon2", "kind": "sign"}],
        {(1, 2): ["0", "0", "0", "-2"]},
        [["0", "epsilon1", "0", "0"], ["-epsilon1", "0", "0", "0"],
         ["0", "0", "0", "epsilon2"], ["0", "0", "-epsilon2", "0"]],
        ["a1", "a2", "a3", "a4"],
    ),
    "flat-torus": _doc(
        "flat-torus", "E", [], {},
        [["0", "1", "0", "0"], ["-1", "0", "0", "0"], ["0", "0", "0", "1"], ["0", "0", "-1", "0"]],
        ["0", "0", "0", "0"],
    ),
}


def builtin_document(name: str) -> str:
    if name not in BUILTINS:
        raise ConfigError(f"unknown example {name!r}; choose from {', '.join(BUILTINS)}")
    return json.dumps(BUILTINS[name], indent=2) + "\n"


def builtin(name: str) -> AnalysisConfig:
    return parse_config(builtin_document(name))
