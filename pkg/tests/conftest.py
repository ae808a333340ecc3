"""Shared helpers: seeded random expression/series generators."""

from __future__ import annotations

import random
from fractions import Fraction

from grps import expr as ex
from grps.fracseries import FracSeries


def random_smooth_expr(rng: random.Random, variables, depth: int) -> ex.Expr:
    """Random tree over exp/sin/cos, sums, products, and small integer
    powers; stays finite on boxes within [-1, 1].  ln appears only as
    ln(2 + u^2) so the argument stays positive."""
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.5:
            return ex.var(rng.choice(variables))
        if roll < 0.8:
            return ex.const(Fraction(rng.randint(-3, 3), rng.randint(1, 4)))
        return ex.const(round(rng.uniform(-1.5, 1.5), 3))
    kind = rng.choice(("add", "mul", "pow", "exp", "sin", "cos", "ln"))
    if kind == "add":
        return ex.add(
            random_smooth_expr(rng, variables, depth - 1),
            random_smooth_expr(rng, variables, depth - 1),
        )
    if kind == "mul":
        return ex.mul(
            random_smooth_expr(rng, variables, depth - 1),
            random_smooth_expr(rng, variables, depth - 1),
        )
    if kind == "pow":
        return ex.pow_(random_smooth_expr(rng, variables, depth - 1), rng.randint(2, 3))
    if kind == "ln":
        inner = random_smooth_expr(rng, variables, depth - 2 if depth > 1 else 0)
        return ex.ln(ex.add(2, ex.pow_(inner, 2)))
    arg = ex.mul(
        ex.const(Fraction(rng.randint(1, 2), 2)),
        random_smooth_expr(rng, variables, depth - 1),
    )
    return ex.call(kind, arg)


def random_poly_expr(rng: random.Random, variables, max_terms=3, max_deg=2) -> ex.Expr:
    """Random small polynomial with rational coefficients."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        c = Fraction(rng.randint(-3, 3))
        if c == 0:
            c = Fraction(1)
        factors = [ex.const(c)]
        for v in variables:
            d = rng.randint(0, max_deg)
            if d:
                factors.append(ex.pow_(ex.var(v), d))
        terms.append(ex.mul(*factors))
    return ex.add(*terms)


def random_series(rng: random.Random, alpha: float, K: int, variables=("x",)) -> FracSeries:
    return FracSeries(
        alpha,
        tuple(random_poly_expr(rng, variables) for _ in range(K + 1)),
    )
