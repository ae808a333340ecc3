"""Fractional power-series solutions of time-fractional differential
equations D^(n*alpha) psi = N[psi] + h, built from an explicit coefficient
recurrence and cross-checked coefficient-by-coefficient through a whole
family of Laplace-like transforms.

The pieces:

- `expr`        immutable symbolic expressions (parse, differentiate,
                evaluate, sampled equivalence)
- `fracseries`  truncated fractional power series with Gamma-weighted
                products and exact fractional-derivative shifts
- `solver`      the coefficient recurrence, a linear fast path, partial
                sums, and a time-domain residual probe
- `transform`   the (omega, nu) transform family as an exact exponent
                ledger
- `oracle`      independent coefficients via the residual-limit method,
                plus a numeric decay check of the scaled residual
- `specfun`     log-gamma, Gamma-ratio weights, Mittag-Leffler
- `cli`         `grps solve/list-presets/schema` on JSON problem files

>>> from grps import expr, solver, fracseries
>>> spec = solver.ProblemSpec(
...     order_n=1, alpha=0.5, spatial_vars=("x",),
...     nonlinearity=expr.parse("psi"),
...     initials=(expr.parse("x"),),
...     source_h=fracseries.FracSeries(0.5, (expr.const(0),)),
... )
>>> [str(c) for c in solver.solve(spec, 3).coeffs]
['x', 'x', 'x', 'x']
"""

from .expr import (
    DEFAULT_SEED,
    EquivCoverageError,
    EvalDomainError,
    Expr,
    ExprError,
    ParseError,
    diff,
    equiv,
    eval_expr,
    normalize,
    parse,
    to_text,
)
from .fracseries import (
    CaputoMonomial,
    FracSeries,
    caputo_monomial,
    caputo_shift,
    series_add,
    series_mul,
    series_scale,
    spatial_diff,
    value_at_zero,
)
from .oracle import DecayReport, direct_coefficients, residual_limit_decay
from .problemfile import ProblemBundle, ProblemFileError, load_problem
from .solver import (
    CoefficientTable,
    NotAffineError,
    ProblemSpec,
    SolverError,
    apply_nonlinearity,
    partial_sum_eval,
    residual_probe,
    solve,
    solve_linear,
)
from .specfun import gamma_ratio, log_gamma, mittag_leffler
from .transform import (
    PRESETS,
    OmegaExp,
    TransformPreset,
    TransformSeries,
    from_transform_domain,
    get_preset,
    limit_at_infinity,
    to_transform_domain,
    transform_of_caputo,
)

__version__ = "0.1.0"
