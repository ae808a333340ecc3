"""JSON problem files: schema, validation, and loading.

A problem file carries one equation in the documented expression grammar
plus the metadata runs need (domain boxes, an optional closed-form
solution, tolerances).  Named constants are substituted into every
expression at parse time; numeric literals are read exactly so a constant
like 0.06 stays the rational 3/50 inside the expressions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Tuple

import jsonschema

from . import expr as ex
from .exactfn import ExactSolution
from .fracseries import FracSeries
from .solver import ProblemSpec, SolverError

__all__ = ["PROBLEM_SCHEMA", "ProblemFileError", "ProblemBundle", "load_problem", "bundled_path", "bundled_names"]

PROBLEM_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "grps problem file",
    "type": "object",
    "required": ["name", "order_n", "alpha", "spatial_vars", "nonlinearity", "initials"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "order_n": {"type": "integer", "minimum": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "spatial_vars": {
            "type": "array",
            "items": {"type": "string", "pattern": "^[a-z]$"},
            "minItems": 1,
            "maxItems": 3,
        },
        "nonlinearity": {"type": "string"},
        "initials": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "source_h": {"type": "array", "items": {"type": "string"}, "default": []},
        "constants": {
            "type": "object",
            "additionalProperties": {"type": "number"},
            "default": {},
        },
        "exact_solution": {"type": "string"},
        "domain": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 2,
                "maxItems": 2,
            },
            "default": {},
        },
        "t_max": {"type": "number", "exclusiveMinimum": 0, "default": 1.0},
        "exact_tol": {"type": "number", "exclusiveMinimum": 0, "default": 1e-6},
    },
}


class ProblemFileError(Exception):
    pass


@dataclass(frozen=True)
class ProblemBundle:
    """A loaded problem plus run metadata."""

    name: str
    spec: ProblemSpec
    boxes: Dict[str, Tuple[float, float]]
    exact: Optional[ExactSolution]
    t_max: float
    exact_tol: float
    path: Optional[str] = None

    def with_alpha(self, alpha: float) -> "ProblemBundle":
        spec = ProblemSpec(
            order_n=self.spec.order_n,
            alpha=alpha,
            spatial_vars=self.spec.spatial_vars,
            nonlinearity=self.spec.nonlinearity,
            initials=self.spec.initials,
            source_h=FracSeries(alpha, self.spec.source_h.coeffs),
        )
        exact = self.exact.with_alpha(alpha) if self.exact is not None else None
        return ProblemBundle(
            self.name, spec, self.boxes, exact, self.t_max, self.exact_tol, self.path
        )


def _pointer(err: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in err.absolute_path)


def load_problem(source) -> ProblemBundle:
    """Load and validate a problem file (path, JSON text, or dict)."""
    path = None
    if isinstance(source, (str, Path)) and str(source).lstrip()[:1] != "{":
        path = str(source)
        try:
            text = Path(source).read_text()
        except OSError as err:
            raise ProblemFileError(f"cannot read {source}: {err}") from err
    elif isinstance(source, (str, Path)):
        text = str(source)
    else:
        text = json.dumps(source)

    try:
        plain = json.loads(text)
    except json.JSONDecodeError as err:
        raise ProblemFileError(f"invalid JSON: {err}") from err
    try:
        jsonschema.validate(plain, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as err:
        raise ProblemFileError(f"schema error at {_pointer(err)!r}: {err.message}") from err

    # re-read with exact decimal constants
    doc = json.loads(text, parse_float=Fraction)

    n = doc["order_n"]
    if len(doc["initials"]) != n:
        raise ProblemFileError(
            f"schema error at '/initials': expected {n} initial functions "
            f"(one per derivative order), got {len(doc['initials'])}"
        )
    constants = dict(doc.get("constants", {}))
    spatial = tuple(doc["spatial_vars"])
    clash = set(constants) & set(spatial)
    if clash:
        raise ProblemFileError(
            f"schema error at '/constants': {sorted(clash)} also declared as variables"
        )

    def parse_field(textval: str, where: str) -> ex.Expr:
        try:
            return ex.parse(textval, constants)
        except ex.ParseError as err:
            raise ProblemFileError(f"parse error at {where!r}: {err}") from err

    nonlinearity = parse_field(doc["nonlinearity"], "/nonlinearity")
    initials = tuple(
        parse_field(s, f"/initials/{i}") for i, s in enumerate(doc["initials"])
    )
    h_exprs = tuple(
        parse_field(s, f"/source_h/{i}") for i, s in enumerate(doc.get("source_h", []))
    )
    alpha = float(doc["alpha"])
    source_h = FracSeries(alpha, h_exprs if h_exprs else (ex.const(0),))

    try:
        spec = ProblemSpec(
            order_n=n,
            alpha=alpha,
            spatial_vars=spatial,
            nonlinearity=nonlinearity,
            initials=initials,
            source_h=source_h,
        )
    except (ValueError, SolverError) as err:
        raise ProblemFileError(f"invalid problem: {err}") from err

    boxes = {v: (0.0, 1.0) for v in spatial}
    for v, pair in doc.get("domain", {}).items():
        if v not in spatial:
            raise ProblemFileError(f"schema error at '/domain/{v}': unknown variable")
        lo, hi = float(pair[0]), float(pair[1])
        if not lo < hi:
            raise ProblemFileError(f"schema error at '/domain/{v}': empty interval")
        boxes[v] = (lo, hi)

    exact = None
    if "exact_solution" in doc:
        try:
            exact = ExactSolution(doc["exact_solution"], constants, alpha)
        except Exception as err:
            raise ProblemFileError(
                f"parse error at '/exact_solution': {err}"
            ) from err

    return ProblemBundle(
        name=doc["name"],
        spec=spec,
        boxes=boxes,
        exact=exact,
        t_max=float(doc.get("t_max", 1.0)),
        exact_tol=float(doc.get("exact_tol", 1e-6)),
        path=path,
    )


def bundled_names() -> Tuple[str, ...]:
    from importlib.resources import files

    root = files("grps").joinpath("problems")
    return tuple(sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json")))


def bundled_path(name: str) -> Optional[str]:
    """Resolve a bundled problem by bare name ('biological') or filename."""
    from importlib.resources import files

    stem = name[:-5] if name.endswith(".json") else name
    candidate = files("grps").joinpath("problems").joinpath(f"{stem}.json")
    if candidate.is_file():
        return str(candidate)
    return None
