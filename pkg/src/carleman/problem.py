"""Problem descriptions: JSON ingestion, validation and sampling."""
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import jsonschema
import numpy as np

from .config import Tolerances
from .errors import ExprError, ExprSyntaxError, GeometryError, ProblemError, ShiftError
from .exprparse import evaluate, parse
from .funcspace import SampledFunction
from .geometry import Contour, contour_sample, induce_shift
from .shift_system import CoefficientSet

_NUMBER_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

PROBLEM_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["contour", "shift", "coefficients", "rhs"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "meta": {"type": "object"},
        "contour": {
            "oneOf": [
                {"type": "object", "required": ["type"], "additionalProperties": False,
                 "properties": {"type": {"const": "unit_circle"}}},
                {"type": "object", "required": ["type", "coeffs"], "additionalProperties": False,
                 "properties": {"type": {"const": "fourier"},
                                "coeffs": {"type": "array", "items": _NUMBER_PAIR, "minItems": 1},
                                "modes": {"type": "array", "items": {"type": "integer"}}}},
            ]},
        "shift": {
            "oneOf": [
                {"type": "object", "required": ["type"], "additionalProperties": False,
                 "properties": {"type": {"enum": ["identity", "antipodal"]}}},
                {"type": "object", "required": ["type"], "additionalProperties": False,
                 "properties": {"type": {"const": "reflection"}, "c": {"type": "number"}}},
                {"type": "object", "required": ["type"], "additionalProperties": False,
                 "properties": {"type": {"const": "custom"},
                                "sigma_samples": {"type": "array", "items": {"type": "number"}},
                                "sigma": {"type": "string"}},
                 "oneOf": [{"required": ["sigma_samples"]}, {"required": ["sigma"]}]},
            ]},
        "coefficients": {
            "type": "object", "required": ["a", "b", "c", "d"], "additionalProperties": False,
            "properties": {k: {"type": "string"} for k in "abcd"}},
        "rhs": {"type": "string"},
        "kernel": {"type": "object", "required": ["expr"], "additionalProperties": False,
                   "properties": {"expr": {"type": "string"}}},
        "discretization": {
            "type": "object", "additionalProperties": False,
            "properties": {"modes": {"type": "integer", "minimum": 1},
                           "collocation": {"type": "integer", "minimum": 8},
                           "cauchy": {"enum": ["spectral-circle", "nystrom"]}}},
        "tolerances": {"type": "object",
                       "additionalProperties": False,
                       "properties": {k: {"type": "number", "exclusiveMinimum": 0}
                                      for k in Tolerances().as_dict()}},
    },
}

DEFAULT_MODES = 16


def _pointer(path):
    return "/" + "/".join(str(p) for p in path) if path else ""


def _normalize(doc):
    """Expand the shorthand form (string contour/shift, top-level a..d and g)."""
    if not isinstance(doc, dict):
        raise ProblemError("problem must be a JSON object")
    doc = dict(doc)
    if isinstance(doc.get("contour"), str):
        doc["contour"] = {"type": doc["contour"]}
    if isinstance(doc.get("shift"), str):
        doc["shift"] = {"type": doc["shift"]}
    if "coefficients" not in doc and any(k in doc for k in "abcd"):
        doc["coefficients"] = {k: doc.pop(k) for k in "abcd" if k in doc}
    if "rhs" not in doc and "g" in doc:
        doc["rhs"] = doc.pop("g")
    if isinstance(doc.get("kernel"), str):
        doc["kernel"] = {"expr": doc["kernel"]}
    return doc


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Validated problem: contour, shift, coefficient expressions and discretization."""
    contour: Contour
    shift_desc: dict
    expressions: dict            # name -> source text for a, b, c, d, g
    asts: dict                   # name -> parsed tree (plus "K" when a kernel is given)
    modes: int
    collocation: int
    tolerances: Tolerances = field(default_factory=Tolerances)
    cauchy_mode: object = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def kernel(self):
        return self.asts.get("K")

    def with_resolution(self, modes, collocation):
        if collocation < 4 * modes:
            raise ProblemError(f"collocation {collocation} < 4 * modes {modes}", "/discretization")
        return replace(self, modes=int(modes), collocation=int(collocation))

    def with_tolerances(self, **overrides):
        return replace(self, tolerances=self.tolerances.override(**overrides))

    def grid(self):
        return contour_sample(self.contour, self.collocation, self.tolerances)

    def shift(self, grid=None):
        grid = self.grid() if grid is None else grid
        desc = self.shift_desc
        kind = desc["type"]
        if kind != "custom":
            return induce_shift(self.contour, kind, grid, c=desc.get("c", 0.0), tol=self.tolerances)
        if "sigma" in desc:
            samples = np.real(evaluate(parse(desc["sigma"], ("theta",)), theta=grid.theta))
        else:
            samples = np.asarray(desc["sigma_samples"], dtype=float)
            if samples.size != grid.n:
                base = contour_sample(self.contour, samples.size, self.tolerances)
                samples = induce_shift(self.contour, "custom", base, sigma_samples=samples,
                                       tol=self.tolerances).sigma_at(grid.theta)
        return induce_shift(self.contour, "custom", grid, sigma_samples=samples, tol=self.tolerances)

    def coefficients(self, grid=None, shift=None):
        grid = self.grid() if grid is None else grid
        shift = self.shift(grid) if shift is None else shift
        vals = {}
        for key in "abcdg":
            v = evaluate(self.asts[key], t=grid.nodes)
            vals[key] = SampledFunction(grid, np.broadcast_to(v, (grid.n,)))
        return CoefficientSet(grid, shift, vals["a"], vals["b"], vals["c"], vals["d"],
                              vals["g"], self.kernel)

    def to_dict(self):
        contour = ({"type": "unit_circle"} if self.contour.kind == "unit_circle" else
                   {"type": "fourier",
                    "coeffs": [[c.real, c.imag] for _, c in self.contour.coeffs],
                    "modes": [n for n, _ in self.contour.coeffs]})
        doc = {"contour": contour, "shift": dict(self.shift_desc),
               "coefficients": {k: self.expressions[k] for k in "abcd"},
               "rhs": self.expressions["g"],
               "discretization": {"modes": self.modes, "collocation": self.collocation},
               "tolerances": self.tolerances.as_dict()}
        if self.kernel is not None:
            doc["kernel"] = {"expr": self.expressions["K"]}
        if self.cauchy_mode:
            doc["discretization"]["cauchy"] = self.cauchy_mode
        if self.name:
            doc["name"] = self.name
        if self.meta:
            doc["meta"] = self.meta
        return doc


def _contour_from(desc):
    if desc["type"] == "unit_circle":
        return Contour.unit_circle()
    coeffs = [complex(re, im) for re, im in desc["coeffs"]]
    if "modes" in desc:
        modes = desc["modes"]
        if len(modes) != len(coeffs):
            raise ProblemError("modes and coeffs differ in length", "/contour/modes")
    else:
        if len(coeffs) % 2 == 0:
            raise ProblemError("centered coefficient list must have odd length", "/contour/coeffs")
        k = len(coeffs) // 2
        modes = range(-k, k + 1)
    return Contour.fourier(dict(zip(modes, coeffs)))


def problem_from_dict(doc):
    doc = _normalize(doc)
    validator = jsonschema.Draft7Validator(PROBLEM_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ProblemError(err.message, _pointer(err.absolute_path))

    tol = Tolerances().override(**doc.get("tolerances", {}))
    disc = doc.get("discretization", {})
    modes = disc.get("modes", DEFAULT_MODES)
    collocation = disc.get("collocation", 8 * modes)
    if collocation % 2:
        raise ProblemError("collocation must be even", "/discretization/collocation")
    if collocation < 4 * modes:
        raise ProblemError(f"collocation {collocation} < 4 * modes {modes}", "/discretization")

    exprs, asts = {}, {}
    sources = [(k, doc["coefficients"][k], f"/coefficients/{k}") for k in "abcd"]
    sources.append(("g", doc["rhs"], "/rhs"))
    for key, src, ptr in sources:
        try:
            ast = parse(src, ("t",))
        except ExprSyntaxError as exc:
            raise ProblemError(str(exc), ptr, exc.offset) from exc
        exprs[key], asts[key] = src, ast
    if "kernel" in doc:
        src = doc["kernel"]["expr"]
        try:
            asts["K"] = parse(src, ("t", "tau"))
        except ExprSyntaxError as exc:
            raise ProblemError(str(exc), "/kernel/expr", exc.offset) from exc
        exprs["K"] = src
    if doc["shift"]["type"] == "custom" and "sigma" in doc["shift"]:
        try:
            parse(doc["shift"]["sigma"], ("theta",))
        except ExprSyntaxError as exc:
            raise ProblemError(str(exc), "/shift/sigma", exc.offset) from exc

    try:
        contour = _contour_from(doc["contour"])
    except GeometryError as exc:
        raise ProblemError(str(exc), "/contour") from exc
    spec = ProblemSpec(contour, dict(doc["shift"]), exprs, asts, modes, collocation, tol,
                       disc.get("cauchy"), doc.get("name", ""), doc.get("meta", {}))
    # sample once so that geometry, shift and expression errors surface at load time
    try:
        grid = spec.grid()
    except GeometryError as exc:
        raise ProblemError(str(exc), "/contour") from exc
    try:
        shift = spec.shift(grid)
    except (ShiftError, ExprError) as exc:
        raise ProblemError(str(exc), "/shift") from exc
    for key, _, ptr in sources:
        try:
            evaluate(asts[key], t=grid.nodes)
        except ExprError as exc:
            raise ProblemError(str(exc), ptr) from exc
    return spec


def load_problem(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON: {exc}") from exc
    return problem_from_dict(doc)


__all__ = ["PROBLEM_SCHEMA", "ProblemSpec", "load_problem", "problem_from_dict"]
