"""Independent coefficient computation through the transform domain.

Instead of reading coefficients off the series expansion the way the
solver does, this module reruns, step by step, the residual-limit
derivation: introduce an unknown symbol for the next coefficient, form
the transform-domain residual of the truncated solution, scale it by
omega^(1 + m*alpha)/nu, and extract the vanishing limit.  The resulting
linear equation pins the unknown.  The two routes share the expression
and series arithmetic but nothing about coefficient extraction, so
agreement is a real cross-check of the solver.

`residual_limit_decay` evaluates the scaled residual numerically over a
ladder of omega values; for a table truncated at K and probed at m = K
the ledger collapses to a single omega^(-alpha) term, so successive
values shrink by 2^(-alpha) per doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

from . import expr as ex
from .expr import Expr
from .fracseries import FracSeries
from .solver import CoefficientTable, ProblemSpec, apply_nonlinearity
from .transform import (
    OmegaExp,
    TransformPreset,
    TransformSeries,
    TransformTerm,
    combine,
    from_transform_domain,
    limit_at_infinity,
    to_transform_domain,
)

__all__ = [
    "OracleError",
    "UnknownSurvivesError",
    "ResidualStep",
    "DecayReport",
    "direct_coefficients",
    "residual_limit_decay",
]

_UNKNOWN_FMT = "_phi{m}"


class OracleError(Exception):
    pass


class UnknownSurvivesError(OracleError):
    pass


@dataclass(frozen=True)
class ResidualStep:
    """One extraction step: the m-th scaled residual with the unknown
    coefficient symbol still inside."""

    m: int
    unknown: str
    gres: TransformSeries


def _residual_ledger(
    spec: ProblemSpec,
    coeffs: Sequence[Expr],
    m: int,
    preset: TransformPreset | None,
) -> TransformSeries:
    """Transform-domain residual of the m-th truncated solution:
    image(Psi_m) - initial block - omega^(-n*alpha) * image(N[Theta_m] + h)."""
    n = spec.order_n
    alpha = spec.alpha
    psi_m = combine(
        alpha,
        [TransformTerm(c, 1, OmegaExp.of(-1, -k)) for k, c in enumerate(coeffs[: m + 1])],
        preset,
    )
    theta_m = from_transform_domain(psi_m)
    expanded = apply_nonlinearity(spec, theta_m)
    rhs = to_transform_domain(expanded, preset).shifted(0, OmegaExp.of(0, -n))
    terms = list(psi_m.terms)
    for k in range(n):
        terms.append(TransformTerm(ex.neg(spec.initials[k]), 1, OmegaExp.of(-1, -k)))
    terms.extend(TransformTerm(ex.neg(t.coeff), t.nu_power, t.exponent) for t in rhs.terms)
    return combine(alpha, terms, preset)


def _check_unknown_exponents(gres_scaled: TransformSeries, unknown: str):
    """Occurrences of the unknown coming from the operator expansion must
    sit at non-positive omega-exponents; anything at a growing power of
    omega means the residual structure is broken.  (Linearity of the
    exponent-zero slot is asserted separately on the extracted limit.)"""
    for t in gres_scaled.terms:
        if unknown not in t.coeff.free_vars:
            continue
        if t.exponent.value_exact(gres_scaled.alpha) > 0:
            raise UnknownSurvivesError(
                f"unknown {unknown} appears at growing omega-exponent {t.exponent}"
            )


def direct_coefficients(
    spec: ProblemSpec,
    K: int,
    preset: TransformPreset | None = None,
    zero_box: Mapping[str, tuple] | None = None,
) -> CoefficientTable:
    """Coefficients 0..K by residual-limit extraction.

    For each m >= n: put an unknown symbol at slot m, build the scaled
    residual, take the omega limit, and solve the resulting equation
    (linear with unit coefficient by construction).  The extracted
    expression must come out free of the unknown.  Results are identical
    for every preset because the ledger never reads it."""
    n = spec.order_n
    if K < n - 1:
        raise ValueError(f"K must be at least order_n - 1 = {n - 1}")
    coeffs = [ex.normalize(f) for f in spec.initials]
    prov = ["initial-condition"] * n
    for m in range(n, K + 1):
        name = _UNKNOWN_FMT.format(m=m)
        if name in spec.nonlinearity.free_vars or any(
            name in c.free_vars for c in coeffs
        ):
            raise OracleError(f"unknown symbol {name!r} collides with problem data")
        unknown = ex.var(name)
        step = ResidualStep(
            m, name, _residual_ledger(spec, coeffs + [unknown], m, preset)
        )
        scaled = step.gres.shifted(-1, OmegaExp.of(1, m))
        _check_unknown_exponents(scaled, name)
        limit = limit_at_infinity(step.gres, -1, OmegaExp.of(1, m), zero_box=zero_box)
        u_coeff = ex.diff(limit, name)
        if u_coeff != ex.const(1):
            raise UnknownSurvivesError(
                f"limit equation is not monic in {name}: coefficient "
                f"{ex.to_text(u_coeff)!r}"
            )
        phi = ex.neg(ex.subst(limit, {name: ex.const(0)}))
        if name in phi.free_vars:
            raise UnknownSurvivesError(
                f"extracted coefficient still references {name}: {ex.to_text(phi)!r}"
            )
        coeffs.append(phi)
        prov.append("oracle")
    return CoefficientTable(spec.alpha, tuple(coeffs), tuple(prov))


@dataclass(frozen=True)
class DecayReport:
    """Numeric trace of omega^(1+m*alpha) * GRes_m along an omega ladder."""

    m: int
    omegas: Tuple[float, ...]
    values: Tuple[float, ...]
    ratios: Tuple[float, ...]
    limit_value: float
    non_increasing: bool
    below_tol: bool
    tol: float


def residual_limit_decay(
    spec: ProblemSpec,
    table: CoefficientTable,
    m: int,
    omega_samples: Sequence[float],
    point: Mapping[str, float] | None = None,
    tol: float = 1e-8,
    preset: TransformPreset | None = None,
) -> DecayReport:
    """Evaluate the scaled m-th residual at a fixed spatial point over
    increasing omega values (nu treated as formally cancelled).

    Reports the value sequence, consecutive ratios, the exponent-zero
    ledger coefficient (the limit itself), whether |value| is
    non-increasing over the last half of the ladder, and whether the last
    value sits below `tol`."""
    if m > table.truncation:
        raise ValueError(f"m={m} beyond table truncation {table.truncation}")
    omegas = [float(w) for w in omega_samples]
    if not omegas or any(w <= 0 for w in omegas) or any(
        b <= a for a, b in zip(omegas, omegas[1:])
    ):
        raise ValueError("omega_samples must be positive and increasing")
    if point is None:
        point = {nm: 0.5 for nm in spec.spatial_vars}
    ledger = _residual_ledger(spec, table.coeffs, m, preset).shifted(
        -1, OmegaExp.of(1, m)
    )
    evaluated = []
    for t in ledger.terms:
        if t.nu_power != 0:
            raise OracleError(f"residual term keeps nu-power {t.nu_power}")
        evaluated.append((ex.eval_expr(t.coeff, point), t.exponent))
    limit_value = sum(
        c for c, e in evaluated if e.value_exact(table.alpha) == 0
    )
    values = []
    for w in omegas:
        values.append(sum(c * w ** e.value(table.alpha) for c, e in evaluated))
    half = len(values) // 2
    mags = [abs(v) for v in values]
    non_increasing = all(
        b <= a + 1e-300 for a, b in zip(mags[half:], mags[half + 1 :])
    )
    ratios = tuple(
        (b / a) if a != 0 else math.nan for a, b in zip(values, values[1:])
    )
    return DecayReport(
        m=m,
        omegas=tuple(omegas),
        values=tuple(values),
        ratios=ratios,
        limit_value=limit_value,
        non_increasing=non_increasing,
        below_tol=abs(values[-1]) <= tol,
        tol=tol,
    )
