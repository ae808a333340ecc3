"""Truncated fractional power series in t with symbolic coefficients.

A series holds coefficients phi_0..phi_K of the basis functions
t^(k*alpha) / Gamma(1 + k*alpha).  In that basis the repeated fractional
derivative of order j*alpha is an exact index shift, and products carry
Gamma-ratio weights (binomial coefficients when alpha = 1).

Arithmetic results are truncated to the shorter operand; coefficients the
inputs do not determine are never fabricated as zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Tuple, Union

from . import expr as ex
from .expr import Expr
from .specfun import gamma_ratio, log_gamma

__all__ = [
    "FracSeries",
    "CaputoMonomial",
    "caputo_monomial",
    "series_add",
    "series_sub",
    "series_scale",
    "series_mul",
    "spatial_diff",
    "caputo_shift",
    "value_at_zero",
    "lift",
    "eval_series",
    "product_weight",
]


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class FracSeries:
    """Sum over k <= K of coeffs[k] * t^(k*alpha) / Gamma(1 + k*alpha)."""

    alpha: float
    coeffs: Tuple[Expr, ...]

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.coeffs:
            raise ValueError("a series needs at least the order-zero coefficient")
        if not all(isinstance(c, Expr) for c in self.coeffs):
            raise TypeError("coefficients must be expressions")

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self):
        inner = ", ".join(ex.to_text(c) for c in self.coeffs)
        return f"FracSeries(alpha={self.alpha}, [{inner}])"


@dataclass(frozen=True)
class CaputoMonomial:
    """Result of m applications of the order-alpha derivative to
    t^(k*alpha): zero, a constant, or factor * t^(power)."""

    kind: str  # "zero" | "constant" | "monomial"
    factor: float
    power: float


def caputo_monomial(m: int, k: int, alpha: float) -> CaputoMonomial:
    """Three-branch monomial rule for the m-fold fractional derivative of
    t^(k*alpha): zero when k < m, Gamma(1+k*alpha) when k = m, otherwise
    Gamma(1+k*alpha)/Gamma(1+(k-m)*alpha) times t^((k-m)*alpha)."""
    if m < 0 or k < 0:
        raise ValueError("m and k must be non-negative")
    alpha = _check_alpha(alpha)
    if k < m:
        return CaputoMonomial("zero", 0.0, 0.0)
    if k == m:
        return CaputoMonomial("constant", math.exp(log_gamma(1 + k * alpha)), 0.0)
    factor = math.exp(log_gamma(1 + k * alpha) - log_gamma(1 + (k - m) * alpha))
    return CaputoMonomial("monomial", factor, (k - m) * alpha)


def product_weight(k: int, m: int, alpha: float) -> Union[Fraction, float]:
    """Coefficient weight of a_m * b_(k-m) in a series product; exact
    binomial at alpha = 1, Gamma ratio otherwise."""
    if alpha == 1.0:
        return Fraction(math.comb(k, m))
    return gamma_ratio(k, m, alpha)


def _require_same_alpha(a: FracSeries, b: FracSeries):
    if a.alpha != b.alpha:
        raise ValueError(f"alpha mismatch: {a.alpha} vs {b.alpha}")


def series_add(a: FracSeries, b: FracSeries) -> FracSeries:
    _require_same_alpha(a, b)
    n = min(len(a.coeffs), len(b.coeffs))
    return FracSeries(a.alpha, tuple(ex.add(a.coeffs[k], b.coeffs[k]) for k in range(n)))


def series_sub(a: FracSeries, b: FracSeries) -> FracSeries:
    _require_same_alpha(a, b)
    n = min(len(a.coeffs), len(b.coeffs))
    return FracSeries(a.alpha, tuple(ex.sub(a.coeffs[k], b.coeffs[k]) for k in range(n)))


def series_scale(a: FracSeries, g) -> FracSeries:
    """Multiply every coefficient by a t-independent expression or number."""
    return FracSeries(a.alpha, tuple(ex.mul(g, c) for c in a.coeffs))


def series_mul(a: FracSeries, b: FracSeries) -> FracSeries:
    _require_same_alpha(a, b)
    n = min(len(a.coeffs), len(b.coeffs))
    out = []
    for k in range(n):
        out.append(
            ex.add(
                *(
                    ex.mul(ex.const(product_weight(k, m, a.alpha)), a.coeffs[m], b.coeffs[k - m])
                    for m in range(k + 1)
                )
            )
        )
    return FracSeries(a.alpha, tuple(out))


def spatial_diff(a: FracSeries, v: str, order: int = 1) -> FracSeries:
    if order == 0:
        return a
    return FracSeries(a.alpha, tuple(ex.diff(c, v, order) for c in a.coeffs))


def caputo_shift(a: FracSeries, j: int) -> FracSeries:
    """Apply the order-alpha fractional derivative j times.

    Exact in this basis: the derivative maps t^(k*alpha)/Gamma(1+k*alpha)
    to t^((k-j)*alpha)/Gamma(1+(k-j)*alpha) for k >= j and kills lower
    monomials, so the coefficient list simply shifts left by j."""
    if j < 0:
        raise ValueError("shift count must be non-negative")
    if j > a.truncation:
        raise ValueError(f"cannot shift by {j}: series truncated at {a.truncation}")
    if j == 0:
        return a
    return FracSeries(a.alpha, a.coeffs[j:])


def value_at_zero(a: FracSeries) -> Expr:
    """The t -> 0+ value, which is the leading coefficient."""
    return a.coeffs[0]


def lift(g, truncation: int, alpha: float) -> FracSeries:
    """Embed a t-independent expression as a series (g, 0, ..., 0)."""
    g = g if isinstance(g, Expr) else ex.const(g)
    zero = ex.const(0)
    return FracSeries(alpha, (g,) + (zero,) * truncation)


def eval_series(a: FracSeries, binding: Mapping[str, float], t: float, upto: int | None = None) -> float:
    """Numeric value of the truncated series at (binding, t >= 0)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if upto is None:
        upto = a.truncation
    if upto > a.truncation:
        raise ValueError(f"upto={upto} beyond truncation {a.truncation}")
    total = 0.0
    for k in range(upto + 1):
        c = ex.eval_expr(a.coeffs[k], binding)
        if t == 0.0:
            if k == 0:
                total += c
            continue
        total += c * math.exp(k * a.alpha * math.log(t) - log_gamma(1 + k * a.alpha))
    return total
