"""Series solver for time-fractional equations D^(n*alpha) psi = N[psi] + h.

The solution ansatz is a fractional power series whose first n
coefficients are the initial functions.  Each later coefficient comes
from one explicit extraction: substitute the series of everything already
known into the operator, expand, and read off one coefficient - no
residual equations are solved along the way.  A linear fast path applies
the operator coefficientwise, and `residual_probe` expands the defect
series of a finished table so tests can confirm it vanishes order by
order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Tuple

from . import expr as ex
from .expr import Expr
from .fracseries import (
    FracSeries,
    caputo_shift,
    lift,
    series_add,
    series_mul,
    series_scale,
    series_sub,
    spatial_diff,
    value_at_zero,
)
from .specfun import log_gamma

__all__ = [
    "ProblemSpec",
    "CoefficientTable",
    "SolverError",
    "UnsupportedOperatorError",
    "NotAffineError",
    "PSI",
    "deriv_symbol",
    "psi_symbols",
    "apply_nonlinearity",
    "solve",
    "solve_linear",
    "partial_sum_eval",
    "residual_probe",
]

PSI = "psi"
_DERIV_RE = re.compile(r"^D([a-z])\(psi,(\d+)\)$")


class SolverError(Exception):
    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"[coefficient {step}] {message}")
        self.step = step


class UnsupportedOperatorError(SolverError):
    pass


class NotAffineError(SolverError):
    pass


def deriv_symbol(v: str, k: int) -> str:
    """Reserved placeholder name for the k-th spatial derivative of psi."""
    if k == 0:
        return PSI
    return f"D{v}(psi,{k})"


def psi_symbols(e: Expr) -> frozenset:
    """Names of solution placeholders occurring in a template."""
    return frozenset(
        nm for nm in e.free_vars if nm == PSI or _DERIV_RE.match(nm)
    )


def _deriv_of(name: str):
    m = _DERIV_RE.match(name)
    if not m:
        return None
    return m.group(1), int(m.group(2))


@dataclass(frozen=True)
class ProblemSpec:
    """One equation D^(n*alpha) psi = N[psi] + h with initial data.

    `nonlinearity` is an expression over the declared variables and the
    reserved placeholders psi / Dx(psi,k) / Dy(psi,k) / Dz(psi,k);
    `source_h` holds the expansion coefficients h_j of the source in the
    same fractional basis (a finite expansion: unlisted coefficients are
    zero)."""

    order_n: int
    alpha: float
    spatial_vars: Tuple[str, ...]
    nonlinearity: Expr
    initials: Tuple[Expr, ...]
    source_h: FracSeries

    def __post_init__(self):
        if self.order_n < 1:
            raise ValueError("order_n must be a positive integer")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha!r}")
        if len(self.initials) != self.order_n:
            raise ValueError(
                f"need {self.order_n} initial functions, got {len(self.initials)}"
            )
        if self.source_h.alpha != self.alpha:
            raise ValueError("source series alpha differs from the problem alpha")
        declared = set(self.spatial_vars)
        for nm in self.nonlinearity.free_vars:
            d = _deriv_of(nm)
            if d is not None:
                if d[0] not in declared:
                    raise UnsupportedOperatorError(
                        f"operator differentiates along undeclared variable {d[0]!r}"
                    )
            elif nm != PSI and nm not in declared:
                raise UnsupportedOperatorError(
                    f"operator references undeclared variable {nm!r}"
                )


@dataclass(frozen=True)
class CoefficientTable:
    """Solved coefficients with per-entry provenance
    (initial-condition | formula | linear-fast-path | oracle)."""

    alpha: float
    coeffs: Tuple[Expr, ...]
    provenance: Tuple[str, ...]

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def as_series(self, upto: int | None = None) -> FracSeries:
        upto = self.truncation if upto is None else upto
        return FracSeries(self.alpha, self.coeffs[: upto + 1])


def apply_nonlinearity(spec: ProblemSpec, theta: FracSeries) -> FracSeries:
    """Substitute the series into the operator template and add the source.

    psi becomes theta, Dv(psi,k) the k-th coefficientwise derivative of
    theta along v; sums/products/integer powers of series expand through
    the weighted series arithmetic.  Source coefficients beyond the listed
    expansion are zero.  The result keeps theta's truncation."""
    if theta.alpha != spec.alpha:
        raise ValueError("series alpha differs from the problem alpha")
    K = theta.truncation

    def as_series(part) -> FracSeries:
        return part if isinstance(part, FracSeries) else lift(part, K, spec.alpha)

    def go(e: Expr):
        if not psi_symbols(e):
            return e
        if isinstance(e, ex.Var):
            if e.name == PSI:
                return theta
            v, k = _deriv_of(e.name)
            return spatial_diff(theta, v, k)
        if isinstance(e, ex.Add):
            exprs, series = [], []
            for t in e.terms:
                part = go(t)
                (series if isinstance(part, FracSeries) else exprs).append(part)
            acc = series[0]
            for s in series[1:]:
                acc = series_add(acc, s)
            if exprs:
                acc = series_add(acc, lift(ex.add(*exprs), K, spec.alpha))
            return acc
        if isinstance(e, ex.Mul):
            exprs, series = [], []
            for f in e.factors:
                part = go(f)
                (series if isinstance(part, FracSeries) else exprs).append(part)
            acc = series[0]
            for s in series[1:]:
                acc = series_mul(acc, s)
            if exprs:
                acc = series_scale(acc, ex.mul(*exprs))
            return acc
        if isinstance(e, ex.Pow):
            q = e.exponent
            if q.denominator != 1 or q < 1:
                raise UnsupportedOperatorError(
                    f"only positive integer powers of the unknown are supported, got ^{q}"
                )
            base = go(e.base)
            base = as_series(base)
            acc = base
            for _ in range(int(q) - 1):
                acc = series_mul(acc, base)
            return acc
        raise UnsupportedOperatorError(
            f"operator applies {ex.to_text(e)!r} to the unknown; only sums, products "
            "and integer powers of psi and its spatial derivatives are supported"
        )

    result = as_series(go(spec.nonlinearity))
    h = spec.source_h.coeffs
    out = list(result.coeffs)
    for j in range(min(len(out), len(h))):
        out[j] = ex.add(out[j], h[j])
    return FracSeries(spec.alpha, tuple(out))


def solve(spec: ProblemSpec, K: int) -> CoefficientTable:
    """Build coefficients 0..K.

    The first n are the initial functions.  For k >= n the coefficient is
    entry k-n of the expanded operator applied to the series of all
    already-known coefficients, i.e. the value at t=0 of the (k-n)-fold
    shifted expansion; the recurrence is strictly causal."""
    n = spec.order_n
    if K < n - 1:
        raise ValueError(f"K must be at least order_n - 1 = {n - 1}")
    coeffs = [ex.normalize(f) for f in spec.initials]
    prov = ["initial-condition"] * n
    for k in range(n, K + 1):
        try:
            theta = FracSeries(spec.alpha, tuple(coeffs))
            expanded = apply_nonlinearity(spec, theta)
            phi = value_at_zero(caputo_shift(expanded, k - n))
        except ex.ExprError as err:
            raise SolverError(str(err), step=k) from err
        coeffs.append(phi)
        prov.append("formula")
    return CoefficientTable(spec.alpha, tuple(coeffs), tuple(prov))


def _affine_offset(spec: ProblemSpec) -> Expr:
    """Validate that the operator is affine in psi and its derivatives and
    return the psi-free offset term."""
    template = spec.nonlinearity
    terms = template.terms if isinstance(template, ex.Add) else (template,)
    for t in terms:
        factors = t.factors if isinstance(t, ex.Mul) else (t,)
        count = 0
        for f in factors:
            syms = psi_symbols(f)
            if not syms:
                continue
            if isinstance(f, ex.Var):
                count += 1
            else:
                raise NotAffineError(
                    f"operator is not affine: the unknown appears inside {ex.to_text(f)!r}"
                )
        if count > 1:
            raise NotAffineError(
                f"operator is not affine: term {ex.to_text(t)!r} multiplies "
                "two occurrences of the unknown"
            )
    zero_map = {nm: ex.const(0) for nm in psi_symbols(template)}
    return ex.subst(template, zero_map)


def solve_linear(spec: ProblemSpec, K: int) -> CoefficientTable:
    """Fast path for affine operators: phi_k = L[phi_(k-n)] + h_(k-n),
    with the psi-free offset folded into the first produced coefficient.
    Must agree with `solve` wherever both apply."""
    n = spec.order_n
    if K < n - 1:
        raise ValueError(f"K must be at least order_n - 1 = {n - 1}")
    offset = _affine_offset(spec)
    template = spec.nonlinearity
    h = spec.source_h.coeffs

    def L(g: Expr) -> Expr:
        mapping = {}
        for nm in psi_symbols(template):
            if nm == PSI:
                mapping[nm] = g
            else:
                v, k = _deriv_of(nm)
                mapping[nm] = ex.diff(g, v, k)
        return ex.sub(ex.subst(template, mapping), offset)

    coeffs = [ex.normalize(f) for f in spec.initials]
    prov = ["initial-condition"] * n
    for k in range(n, K + 1):
        j = k - n
        pieces = [L(coeffs[j])]
        if j == 0:
            pieces.append(offset)
        if j < len(h):
            pieces.append(h[j])
        coeffs.append(ex.add(*pieces))
        prov.append("linear-fast-path")
    return CoefficientTable(spec.alpha, tuple(coeffs), tuple(prov))


def partial_sum_eval(
    table: CoefficientTable,
    binding: Mapping[str, float],
    t: float,
    upto: int | None = None,
) -> float:
    """Numeric partial sum of the solution series at (binding, t >= 0).

    Monomials are evaluated in log space (t = 0 handled exactly) so large
    orders stay finite."""
    if t < 0:
        raise ValueError("t must be non-negative")
    upto = table.truncation if upto is None else upto
    if upto > table.truncation:
        raise ValueError(f"upto={upto} beyond table truncation {table.truncation}")
    total = 0.0
    for k in range(upto + 1):
        c = ex.eval_expr(table.coeffs[k], binding)
        if t == 0.0:
            if k == 0:
                total += c
            continue
        total += c * math.exp(k * table.alpha * math.log(t) - log_gamma(1 + k * table.alpha))
    return total


def residual_probe(
    spec: ProblemSpec, table: CoefficientTable, upto: int | None = None
) -> Tuple[Expr, ...]:
    """Expand D^(n*alpha) Theta - N[Theta] - h for the table's series and
    return its leading coefficients; a correct table makes every returned
    coefficient identically zero."""
    n = spec.order_n
    limit = table.truncation - n
    upto = limit if upto is None else upto
    if upto > limit:
        raise ValueError(f"upto={upto} beyond available residual order {limit}")
    theta = table.as_series()
    defect = series_sub(caputo_shift(theta, n), apply_nonlinearity(spec, theta))
    return defect.coeffs[: upto + 1]
