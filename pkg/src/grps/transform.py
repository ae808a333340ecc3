"""Laplace-like transform family acting on fractional series.

Every transform in the family has the form nu(s) * integral of
f(t) * exp(-omega(s) * t); all algebra the solver needs (linearity, the
monomial image, the derivative rule, and limits as omega grows) depends
only on powers of nu and omega.  Series images are therefore tracked as a
formal ledger of (coefficient, nu-power, omega-exponent) terms, never by
quadrature, and omega-exponents are kept exact as pairs a + b*alpha so
that zero/positive exponent tests are decidable.

The named presets cover the usual family members; because the ledger
never consults omega/nu shapes, every computed result is identical across
presets (a property the test suite pins).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Tuple

from . import expr as ex
from .expr import Expr
from .fracseries import FracSeries

__all__ = [
    "OmegaExp",
    "TransformPreset",
    "PRESETS",
    "get_preset",
    "TransformTerm",
    "TransformSeries",
    "TransformError",
    "DivergenceError",
    "NuResidueError",
    "InverseFormError",
    "InitialMismatchError",
    "to_transform_domain",
    "from_transform_domain",
    "transform_of_caputo",
    "limit_at_infinity",
]


class TransformError(Exception):
    pass


class DivergenceError(TransformError):
    pass


class NuResidueError(TransformError):
    pass


class InverseFormError(TransformError):
    pass


class InitialMismatchError(TransformError):
    pass


@dataclass(frozen=True)
class OmegaExp:
    """Exact omega-exponent a + b*alpha."""

    const: Fraction
    alpha_mult: Fraction

    @staticmethod
    def of(const=0, alpha_mult=0) -> "OmegaExp":
        return OmegaExp(Fraction(const), Fraction(alpha_mult))

    def __add__(self, other: "OmegaExp") -> "OmegaExp":
        return OmegaExp(self.const + other.const, self.alpha_mult + other.alpha_mult)

    def __neg__(self) -> "OmegaExp":
        return OmegaExp(-self.const, -self.alpha_mult)

    def value_exact(self, alpha: float) -> Fraction:
        return self.const + self.alpha_mult * Fraction(alpha)

    def value(self, alpha: float) -> float:
        return float(self.const) + float(self.alpha_mult) * alpha

    def __str__(self):
        return f"{self.const}+{self.alpha_mult}a"


@dataclass(frozen=True)
class TransformPreset:
    """One named member of the family, described by its (omega, nu) pair."""

    name: str
    omega: str
    nu: str


# Registry in the conventional order; descriptors follow the defining
# integral nu(s) * int f(t) exp(-omega(s) t) dt.  's^-a' marks the member
# whose kernel rate is a negative rational power of s.
PRESETS: Tuple[TransformPreset, ...] = (
    TransformPreset("aboodh", "s", "1/s"),
    TransformPreset("elzaki", "1/s", "s"),
    TransformPreset("kamal", "1/s", "1"),
    TransformPreset("laplace", "s", "1"),
    TransformPreset("alpha-laplace", "s^-a", "1"),
    TransformPreset("g-transform", "1/s", "s^a"),
    TransformPreset("mohand", "s", "s^2"),
    TransformPreset("pourreza", "s^2", "s"),
    TransformPreset("sawi", "1/s", "1/s^2"),
    TransformPreset("sumudu", "1/s", "1/s"),
)

_BY_NAME = {p.name: p for p in PRESETS}


def get_preset(name: str) -> TransformPreset:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise TransformError(
            f"unknown transform preset {name!r}; choose from {', '.join(sorted(_BY_NAME))}"
        ) from None


@dataclass(frozen=True)
class TransformTerm:
    coeff: Expr
    nu_power: int
    exponent: OmegaExp


@dataclass(frozen=True)
class TransformSeries:
    """Formal sum of coeff * nu^p * omega^e terms.

    Terms are combined so no two share (p, e) and sorted by descending
    exponent value at this alpha.  The attached preset is labelling only;
    no computation reads it."""

    alpha: float
    terms: Tuple[TransformTerm, ...]
    preset: TransformPreset | None = None

    def shifted(self, nu_power: int = 0, exponent: OmegaExp = OmegaExp.of()) -> "TransformSeries":
        """Multiply every term by nu^nu_power * omega^exponent."""
        return TransformSeries(
            self.alpha,
            tuple(
                TransformTerm(t.coeff, t.nu_power + nu_power, t.exponent + exponent)
                for t in self.terms
            ),
            self.preset,
        )

    def __repr__(self):
        parts = [
            f"({ex.to_text(t.coeff)})*nu^{t.nu_power}*omega^({t.exponent})" for t in self.terms
        ]
        label = f", preset={self.preset.name}" if self.preset else ""
        return f"TransformSeries(alpha={self.alpha}{label}, {' + '.join(parts) or '0'})"


def _is_zero(e: Expr) -> bool:
    return isinstance(e, ex.Const) and e.value == 0


def combine(alpha: float, terms, preset=None) -> TransformSeries:
    """Merge equal (nu-power, exponent) ledger slots and sort."""
    merged: dict = {}
    for t in terms:
        key = (t.nu_power, t.exponent)
        if key in merged:
            merged[key] = ex.add(merged[key], t.coeff)
        else:
            merged[key] = t.coeff
    out = [
        TransformTerm(c, p, e)
        for (p, e), c in merged.items()
        if not _is_zero(c)
    ]
    out.sort(key=lambda t: (-t.exponent.value_exact(alpha), t.exponent.const, t.nu_power))
    return TransformSeries(alpha, tuple(out), preset)


def to_transform_domain(a: FracSeries, preset: TransformPreset | None = None) -> TransformSeries:
    """Image of a series: coefficient k maps to nu * omega^(-1-k*alpha).

    The Gamma factors of the monomial image cancel exactly against the
    basis normalization, so coefficients carry over unchanged."""
    terms = [
        TransformTerm(c, 1, OmegaExp.of(-1, -k)) for k, c in enumerate(a.coeffs)
    ]
    return combine(a.alpha, terms, preset)


def from_transform_domain(T: TransformSeries) -> FracSeries:
    """Exact inverse of `to_transform_domain` on series images."""
    slots: dict = {}
    top = -1
    for t in T.terms:
        if t.nu_power != 1:
            raise InverseFormError(f"term has nu-power {t.nu_power}, expected 1")
        e = t.exponent
        if e.const != -1 or e.alpha_mult > 0 or e.alpha_mult.denominator != 1:
            raise InverseFormError(f"exponent {e} is not of the image form -1-k*alpha")
        k = int(-e.alpha_mult)
        slots[k] = ex.add(slots.get(k, ex.const(0)), t.coeff)
        top = max(top, k)
    if top < 0:
        return FracSeries(T.alpha, (ex.const(0),))
    zero = ex.const(0)
    return FracSeries(T.alpha, tuple(slots.get(k, zero) for k in range(top + 1)))


def transform_of_caputo(
    a: FracSeries,
    n: int,
    initials: Sequence[Expr],
    preset: TransformPreset | None = None,
) -> TransformSeries:
    """Image of the n-fold fractional time derivative of the series:
    omega^(n*alpha) * image(a) minus the initial-data block
    nu * sum over k < n of omega^((n-k)*alpha - 1) * initials[k]."""
    if len(initials) != n:
        raise ValueError(f"need exactly {n} initial functions, got {len(initials)}")
    for k in range(min(n, len(a.coeffs))):
        if ex.normalize(initials[k]) != a.coeffs[k]:
            raise InitialMismatchError(
                f"initial function {k} does not match the series coefficient: "
                f"{ex.to_text(initials[k])!r} vs {ex.to_text(a.coeffs[k])!r}"
            )
    terms = list(to_transform_domain(a, preset).shifted(0, OmegaExp.of(0, n)).terms)
    for k in range(n):
        terms.append(
            TransformTerm(ex.neg(initials[k]), 1, OmegaExp.of(-1, n - k))
        )
    return combine(a.alpha, terms, preset)


def limit_at_infinity(
    T: TransformSeries,
    nu_power: int,
    omega_exponent: OmegaExp,
    zero_box: Mapping[str, tuple] | None = None,
) -> Expr:
    """Limit of nu^nu_power * omega^omega_exponent * T as omega grows.

    Every term must end up nu-free.  Terms whose omega-exponent stays
    positive must have identically-zero coefficients (structural check
    first, then sampled comparison against zero on `zero_box`, default
    [0, 1] per variable); otherwise the limit diverges.  The result is the
    sum of the exponent-zero coefficients."""
    shifted = T.shifted(nu_power, omega_exponent)
    at_zero = []
    for t in shifted.terms:
        if t.nu_power != 0:
            raise NuResidueError(
                f"term keeps nu-power {t.nu_power} after multiplication; limit undefined"
            )
        sign = t.exponent.value_exact(T.alpha)
        if sign > 0:
            if _is_zero(t.coeff):
                continue
            box = zero_box or {nm: (0.0, 1.0) for nm in t.coeff.free_vars}
            try:
                vanishes = ex.equiv(t.coeff, ex.const(0), box, samples=32, tol=1e-9)
            except ex.ExprError as err:
                raise DivergenceError(
                    f"cannot certify vanishing of omega^({t.exponent}) coefficient "
                    f"{ex.to_text(t.coeff)!r}: {err}"
                ) from err
            if not vanishes:
                raise DivergenceError(
                    f"omega^({t.exponent}) grows with nonzero coefficient "
                    f"{ex.to_text(t.coeff)!r}"
                )
        elif sign == 0:
            at_zero.append(t.coeff)
    return ex.add(*at_zero) if at_zero else ex.const(0)
