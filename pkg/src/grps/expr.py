"""Immutable symbolic expressions over named real variables.

The node set is deliberately small: exact constants (rationals or floats),
variables, n-ary sums and products, rational powers, and the unary
functions exp/ln/sin/cos plus ramp (max(u,0)) and step (indicator u>0).

Every public constructor normalizes: constants fold, sums and products
flatten, like terms collect with exact rational coefficients, repeated
factors merge into powers, and products distribute over sums.  There is
no trigonometric or exponential rewriting; identities beyond the normal
form are certified numerically by `equiv`, which samples a seeded
low-discrepancy sequence.

Everything here is immutable and hash-cached, so expressions are safe to
share across threads.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Add",
    "Mul",
    "Pow",
    "Call",
    "ExprError",
    "ParseError",
    "EvalDomainError",
    "EquivCoverageError",
    "const",
    "var",
    "add",
    "mul",
    "sub",
    "neg",
    "div",
    "pow_",
    "sqrt",
    "exp",
    "ln",
    "sin",
    "cos",
    "ramp",
    "step",
    "normalize",
    "diff",
    "subst",
    "eval_expr",
    "equiv",
    "parse",
    "to_text",
    "DEFAULT_SEED",
]

Number = Union[int, float, Fraction]
ExprLike = Union["Expr", int, float, Fraction]

DEFAULT_SEED = 0x5EED

# Integer exponents up to this bound expand (x+y)^k into a collected sum.
_MAX_POW_EXPAND = 8

_FUNCTIONS = ("exp", "ln", "sin", "cos", "ramp", "step")


class ExprError(Exception):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} (at offset {offset}: ...{text[offset:offset + 16]!r})")
        self.text = text
        self.offset = offset


class EvalDomainError(ExprError):
    def __init__(self, message: str, node: "Expr"):
        super().__init__(f"{message} in {to_text(node)!r}")
        self.node = node


class EquivCoverageError(ExprError):
    pass


# --------------------------------------------------------------------------
# Nodes


class Expr:
    __slots__ = ("_hash", "_vars", "_key")

    def __init__(self):
        self._hash = None
        self._vars = None
        self._key = None

    @property
    def free_vars(self) -> frozenset:
        if self._vars is None:
            self._vars = self._compute_vars()
        return self._vars

    def sort_key(self) -> str:
        if self._key is None:
            self._key = self._compute_key()
        return self._key

    def _compute_vars(self) -> frozenset:
        raise NotImplementedError

    def _compute_key(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"<{to_text(self)}>"

    # arithmetic sugar, used heavily when hand-entering reference formulas
    def __add__(self, other: ExprLike) -> "Expr":
        return add(self, other)

    def __radd__(self, other: ExprLike) -> "Expr":
        return add(other, self)

    def __sub__(self, other: ExprLike) -> "Expr":
        return sub(self, other)

    def __rsub__(self, other: ExprLike) -> "Expr":
        return sub(other, self)

    def __mul__(self, other: ExprLike) -> "Expr":
        return mul(self, other)

    def __rmul__(self, other: ExprLike) -> "Expr":
        return mul(other, self)

    def __truediv__(self, other: ExprLike) -> "Expr":
        return div(self, other)

    def __rtruediv__(self, other: ExprLike) -> "Expr":
        return div(other, self)

    def __pow__(self, other) -> "Expr":
        return pow_(self, other)

    def __neg__(self) -> "Expr":
        return neg(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        self.value = value

    def _compute_vars(self):
        return frozenset()

    def _compute_key(self):
        v = self.value
        return f"0:{float(v):+.17e}:{type(v).__name__}"

    def __eq__(self, other):
        return self is other or (isinstance(other, Const) and self.value == other.value)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((0, self.value))
        return self._hash


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        super().__init__()
        self.name = name

    def _compute_vars(self):
        return frozenset((self.name,))

    def _compute_key(self):
        return f"1:{self.name}"

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and self.name == other.name)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((1, self.name))
        return self._hash


class Call(Expr):
    __slots__ = ("fn", "arg")

    def __init__(self, fn: str, arg: Expr):
        super().__init__()
        self.fn = fn
        self.arg = arg

    def _compute_vars(self):
        return self.arg.free_vars

    def _compute_key(self):
        return f"2:{self.fn}({self.arg.sort_key()})"

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Call) and self.fn == other.fn and self.arg == other.arg

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((2, self.fn, self.arg))
        return self._hash


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: Fraction):
        super().__init__()
        self.base = base
        self.exponent = exponent

    def _compute_vars(self):
        return self.base.free_vars

    def _compute_key(self):
        return f"3:{self.base.sort_key()}^{self.exponent}"

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Pow)
            and self.exponent == other.exponent
            and self.base == other.base
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((3, self.base, self.exponent))
        return self._hash


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: Tuple[Expr, ...]):
        super().__init__()
        self.factors = factors

    def _compute_vars(self):
        return frozenset().union(*(f.free_vars for f in self.factors))

    def _compute_key(self):
        return "4:" + "*".join(f.sort_key() for f in self.factors)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Mul) and self.factors == other.factors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((4, self.factors))
        return self._hash


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: Tuple[Expr, ...]):
        super().__init__()
        self.terms = terms

    def _compute_vars(self):
        return frozenset().union(*(t.free_vars for t in self.terms))

    def _compute_key(self):
        return "5:" + "+".join(t.sort_key() for t in self.terms)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Add) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((5, self.terms))
        return self._hash


# --------------------------------------------------------------------------
# Smart constructors (these ARE the normalizer)

_ZERO = None  # set below
_ONE = None


def const(v: Number) -> Const:
    if isinstance(v, bool):
        raise TypeError("booleans are not expression constants")
    if isinstance(v, int):
        v = Fraction(v)
    elif isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite constant {v!r}")
    elif not isinstance(v, Fraction):
        raise TypeError(f"cannot build a constant from {type(v).__name__}")
    return Const(v)


def var(name: str) -> Var:
    return Var(name)


def _coerce(x: ExprLike) -> Expr:
    if isinstance(x, Expr):
        return x
    return const(x)


def _split_coeff(t: Expr):
    """Split a normal non-Add term into (numeric coefficient, monomial part)."""
    if isinstance(t, Mul) and isinstance(t.factors[0], Const):
        rest = t.factors[1:]
        mono = rest[0] if len(rest) == 1 else Mul(rest)
        return t.factors[0].value, mono
    return Fraction(1), t


def _with_coeff(c, mono: Expr) -> Expr:
    if c == 1:
        return mono
    if isinstance(mono, Mul):
        return Mul((const(c),) + mono.factors)
    return Mul((const(c), mono))


def add(*xs: ExprLike) -> Expr:
    terms = []
    for x in xs:
        e = _coerce(x)
        if isinstance(e, Add):
            terms.extend(e.terms)
        else:
            terms.append(e)
    const_acc = Fraction(0)
    bykey: dict = {}
    for t in terms:
        if isinstance(t, Const):
            const_acc = const_acc + t.value
            continue
        c, mono = _split_coeff(t)
        if mono in bykey:
            bykey[mono] = bykey[mono] + c
        else:
            bykey[mono] = c
    out = []
    for mono, c in bykey.items():
        if c == 0:
            continue
        out.append(_with_coeff(c, mono))
    if const_acc != 0:
        out.append(const(const_acc))
    if not out:
        return const(0)
    out.sort(key=Expr.sort_key)
    if len(out) == 1:
        return out[0]
    return Add(tuple(out))


def mul(*xs: ExprLike) -> Expr:
    factors = []
    for x in xs:
        e = _coerce(x)
        if isinstance(e, Mul):
            factors.extend(e.factors)
        else:
            factors.append(e)
    coeff = Fraction(1)
    others = []
    for f in factors:
        if isinstance(f, Const):
            coeff = coeff * f.value
        else:
            others.append(f)
    if coeff == 0:
        return const(0)
    # distribute over sums so that like terms can cancel across products
    if any(isinstance(f, Add) for f in others):
        parts = [f.terms if isinstance(f, Add) else (f,) for f in others]
        return add(*(mul(const(coeff), *combo) for combo in itertools.product(*parts)))
    # merge repeated bases into powers
    powmap: dict = {}
    order: list = []
    for f in others:
        if isinstance(f, Pow):
            base, e = f.base, f.exponent
        else:
            base, e = f, Fraction(1)
        if base in powmap:
            powmap[base] = powmap[base] + e
        else:
            powmap[base] = e
            order.append(base)
    rebuilt = []
    redo = []
    for base in order:
        e = powmap[base]
        p = pow_(base, e)
        if isinstance(p, Const):
            coeff = coeff * p.value
        elif isinstance(p, (Mul, Add)):
            redo.append(p)
        else:
            rebuilt.append(p)
    if redo:
        return mul(const(coeff), *rebuilt, *redo)
    if coeff == 0:
        return const(0)
    if not rebuilt:
        return const(coeff)
    rebuilt.sort(key=Expr.sort_key)
    if coeff == 1:
        if len(rebuilt) == 1:
            return rebuilt[0]
        return Mul(tuple(rebuilt))
    return Mul((const(coeff),) + tuple(rebuilt))


def _iroot(n: int, q: int):
    """Exact integer q-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == n:
            return cand
    return None


def _pow_const(v, e: Fraction):
    """Fold v**e when it is exact (rationals) or already inexact (floats)."""
    if isinstance(v, float):
        if v < 0 and e.denominator != 1:
            return None
        if v == 0 and e < 0:
            return None
        try:
            r = v ** float(e) if e.denominator != 1 else v ** int(e)
        except (OverflowError, ZeroDivisionError):
            return None
        return r if isinstance(r, float) and math.isfinite(r) else None
    if e.denominator == 1:
        if v == 0 and e < 0:
            return None
        return v ** int(e)
    if v < 0:
        return None
    if v == 0:
        return Fraction(0) if e > 0 else None
    rn = _iroot(v.numerator, e.denominator)
    rd = _iroot(v.denominator, e.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd) ** e.numerator


def pow_(b: ExprLike, e) -> Expr:
    base = _coerce(b)
    if isinstance(e, Expr):
        if not isinstance(e, Const):
            raise ExprError(f"exponent must be a rational constant, got {to_text(e)!r}")
        e = e.value
    exponent = Fraction(e)
    if exponent == 0:
        return const(1)
    if exponent == 1:
        return base
    if isinstance(base, Const):
        folded = _pow_const(base.value, exponent)
        if folded is not None:
            return const(folded)
        return Pow(base, exponent)
    if isinstance(base, Pow):
        if exponent.denominator == 1:
            return pow_(base.base, base.exponent * exponent)
        return Pow(base, exponent)
    if isinstance(base, Mul):
        if exponent.denominator == 1:
            return mul(*(pow_(f, exponent) for f in base.factors))
        if isinstance(base.factors[0], Const) and base.factors[0].value > 0:
            head = base.factors[0]
            rest = base.factors[1:]
            tail = rest[0] if len(rest) == 1 else Mul(rest)
            return mul(pow_(head, exponent), pow_(tail, exponent))
        return Pow(base, exponent)
    if isinstance(base, Add):
        if exponent.denominator == 1 and 2 <= exponent <= _MAX_POW_EXPAND:
            return mul(*([base] * int(exponent)))
        return Pow(base, exponent)
    return Pow(base, exponent)


def call(fn: str, a: ExprLike) -> Expr:
    if fn not in _FUNCTIONS:
        raise ExprError(f"unknown function {fn!r}")
    arg = _coerce(a)
    if isinstance(arg, Const):
        v = arg.value
        if fn == "ramp":
            return const(v if v > 0 else (0.0 if isinstance(v, float) else Fraction(0)))
        if fn == "step":
            return const(1 if v > 0 else 0)
        if fn == "exp" and v == 0:
            return const(1)
        if fn == "ln" and v == 1:
            return const(0)
        if fn == "sin" and v == 0:
            return const(0)
        if fn == "cos" and v == 0:
            return const(1)
    return Call(fn, arg)


def sub(a: ExprLike, b: ExprLike) -> Expr:
    return add(a, mul(-1, b))


def neg(a: ExprLike) -> Expr:
    return mul(-1, a)


def div(a: ExprLike, b: ExprLike) -> Expr:
    return mul(a, pow_(b, -1))


def sqrt(a: ExprLike) -> Expr:
    return pow_(a, Fraction(1, 2))


def exp(a: ExprLike) -> Expr:
    return call("exp", a)


def ln(a: ExprLike) -> Expr:
    return call("ln", a)


def sin(a: ExprLike) -> Expr:
    return call("sin", a)


def cos(a: ExprLike) -> Expr:
    return call("cos", a)


def ramp(a: ExprLike) -> Expr:
    return call("ramp", a)


def step(a: ExprLike) -> Expr:
    return call("step", a)


def normalize(e: Expr) -> Expr:
    """Rebuild through the constructors; idempotent by construction."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Add):
        return add(*(normalize(t) for t in e.terms))
    if isinstance(e, Mul):
        return mul(*(normalize(f) for f in e.factors))
    if isinstance(e, Pow):
        return pow_(normalize(e.base), e.exponent)
    if isinstance(e, Call):
        return call(e.fn, normalize(e.arg))
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# Differentiation / substitution


def diff(e: Expr, v: str, order: int = 1) -> Expr:
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    for _ in range(order):
        e = _d(e, v)
    return e


def _d(e: Expr, v: str) -> Expr:
    if isinstance(e, Const):
        return const(0)
    if isinstance(e, Var):
        return const(1 if e.name == v else 0)
    if v not in e.free_vars:
        return const(0)
    if isinstance(e, Add):
        return add(*(_d(t, v) for t in e.terms))
    if isinstance(e, Mul):
        pieces = []
        for i, f in enumerate(e.factors):
            df = _d(f, v)
            if isinstance(df, Const) and df.value == 0:
                continue
            pieces.append(mul(*e.factors[:i], df, *e.factors[i + 1 :]))
        return add(*pieces) if pieces else const(0)
    if isinstance(e, Pow):
        return mul(const(e.exponent), pow_(e.base, e.exponent - 1), _d(e.base, v))
    if isinstance(e, Call):
        du = _d(e.arg, v)
        if e.fn == "exp":
            return mul(e, du)
        if e.fn == "ln":
            return mul(pow_(e.arg, -1), du)
        if e.fn == "sin":
            return mul(cos(e.arg), du)
        if e.fn == "cos":
            return mul(-1, sin(e.arg), du)
        if e.fn == "ramp":
            return mul(step(e.arg), du)
        if e.fn == "step":
            # distributional delta dropped by design
            return const(0)
    raise TypeError(f"not an expression: {e!r}")


def subst(e: Expr, mapping: Mapping[str, ExprLike]) -> Expr:
    """Replace variables by expressions; result is normalized."""
    coerced = {k: _coerce(x) for k, x in mapping.items()}

    def go(node: Expr) -> Expr:
        if isinstance(node, Const):
            return node
        if isinstance(node, Var):
            return coerced.get(node.name, node)
        if not (node.free_vars & coerced.keys()):
            return node
        if isinstance(node, Add):
            return add(*(go(t) for t in node.terms))
        if isinstance(node, Mul):
            return mul(*(go(f) for f in node.factors))
        if isinstance(node, Pow):
            return pow_(go(node.base), node.exponent)
        if isinstance(node, Call):
            return call(node.fn, go(node.arg))
        raise TypeError(f"not an expression: {node!r}")

    return go(e)


# --------------------------------------------------------------------------
# Evaluation


def eval_expr(e: Expr, binding: Mapping[str, float]) -> float:
    """Evaluate at a full variable binding; raises EvalDomainError instead
    of ever returning nan/inf."""
    return _ev(e, binding)


def _finite(x: float, node: Expr) -> float:
    if not math.isfinite(x):
        raise EvalDomainError("overflow to non-finite value", node)
    return x


def _ev(e: Expr, b: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        try:
            return float(b[e.name])
        except KeyError:
            raise EvalDomainError(f"unbound variable {e.name!r}", e) from None
    if isinstance(e, Add):
        return _finite(sum(_ev(t, b) for t in e.terms), e)
    if isinstance(e, Mul):
        r = 1.0
        for f in e.factors:
            r *= _ev(f, b)
        return _finite(r, e)
    if isinstance(e, Pow):
        base = _ev(e.base, b)
        q = e.exponent
        if base == 0:
            if q < 0:
                raise EvalDomainError("division by zero", e)
            return 0.0
        if q.denominator == 1:
            try:
                return _finite(base ** int(q), e)
            except OverflowError:
                raise EvalDomainError("overflow in power", e) from None
        if base < 0:
            raise EvalDomainError("fractional power of a negative value", e)
        try:
            return _finite(base ** float(q), e)
        except OverflowError:
            raise EvalDomainError("overflow in power", e) from None
    if isinstance(e, Call):
        u = _ev(e.arg, b)
        if e.fn == "exp":
            try:
                return math.exp(u)
            except OverflowError:
                raise EvalDomainError("overflow in exp", e) from None
        if e.fn == "ln":
            if u <= 0:
                raise EvalDomainError("ln of a non-positive value", e)
            return math.log(u)
        if e.fn == "sin":
            return math.sin(u)
        if e.fn == "cos":
            return math.cos(u)
        if e.fn == "ramp":
            return u if u > 0 else 0.0
        if e.fn == "step":
            return 1.0 if u > 0 else 0.0
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# Sampled equivalence


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def _halton(i: int, base: int) -> float:
    f = 1.0
    r = 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def sample_points(names, box, samples, seed):
    """Deterministic low-discrepancy points in the box (Halton sequence with
    a seeded Cranley-Patterson rotation)."""
    rng = random.Random(seed)
    offsets = [rng.random() for _ in names]
    for i in range(1, samples + 1):
        binding = {}
        for d, nm in enumerate(names):
            lo, hi = box[nm]
            u = (_halton(i, _PRIMES[d % len(_PRIMES)]) + offsets[d]) % 1.0
            binding[nm] = lo + u * (hi - lo)
        yield binding


def equiv(
    a: Expr,
    b: Expr,
    box: Mapping[str, tuple],
    samples: int = 64,
    tol: float = 1e-10,
    seed: int = DEFAULT_SEED,
) -> bool:
    """True iff |a-b| <= tol*(1+|a|) at every sample point of a seeded
    quasi-random sweep of the box.  Domain errors skip the point; more than
    10% skipped points make the comparison unreliable and raise."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    names = sorted(a.free_vars | b.free_vars)
    missing = [nm for nm in names if nm not in box]
    if missing:
        raise ValueError(f"box is missing variables {missing}")
    skipped = 0
    for binding in sample_points(names, box, samples, seed):
        try:
            va = eval_expr(a, binding)
            vb = eval_expr(b, binding)
        except EvalDomainError:
            skipped += 1
            continue
        if abs(va - vb) > tol * (1.0 + abs(va)):
            return False
    if skipped > 0.1 * samples:
        raise EquivCoverageError(
            f"{skipped}/{samples} sample points hit domain errors; comparison unreliable"
        )
    return True


# --------------------------------------------------------------------------
# Parsing


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            toks.append(_Token("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            toks.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", text, i)
    toks.append(_Token("end", "", n))
    return toks


_PARSE_FUNCS = {"exp": exp, "ln": ln, "sin": sin, "cos": cos, "sqrt": sqrt, "step": step}
_DERIV_FUNCS = ("Dx", "Dy", "Dz")


class _Parser:
    def __init__(self, text: str, constants):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.constants = constants or {}

    def peek(self) -> _Token:
        return self.toks[self.i]

    def take(self, kind=None) -> _Token:
        t = self.toks[self.i]
        if kind is not None and t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text or 'end of input'!r}", self.text, t.pos)
        self.i += 1
        return t

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", self.text, t.pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek().kind == "-":
            self.take()
            return neg(self.unary())
        if self.peek().kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "^":
            tok = self.take()
            exp_expr = self.unary()
            if not isinstance(exp_expr, Const):
                raise ParseError("exponent must be a rational constant", self.text, tok.pos)
            return pow_(base, exp_expr.value)
        return base

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "num":
            self.take()
            return const(Fraction(t.text))
        if t.kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t.kind == "name":
            self.take()
            if self.peek().kind == "(":
                return self.func_call(t)
            if t.text in self.constants:
                return _coerce_constant(self.constants[t.text])
            return Var(t.text)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", self.text, t.pos)

    def func_call(self, name_tok: _Token) -> Expr:
        name = name_tok.text
        self.take("(")
        args = [self.expr()]
        while self.peek().kind == ",":
            self.take()
            args.append(self.expr())
        self.take(")")
        if name in _PARSE_FUNCS:
            if len(args) != 1:
                raise ParseError(f"{name} takes one argument", self.text, name_tok.pos)
            return _PARSE_FUNCS[name](args[0])
        if name == "max":
            if len(args) != 2:
                raise ParseError("max takes two arguments", self.text, name_tok.pos)
            a, b = args
            if isinstance(b, Const) and b.value == 0:
                return ramp(a)
            if isinstance(a, Const) and a.value == 0:
                return ramp(b)
            raise ParseError("max is supported as max(u, 0) only", self.text, name_tok.pos)
        if name in _DERIV_FUNCS:
            if (
                len(args) != 2
                or not isinstance(args[0], Var)
                or args[0].name != "psi"
                or not isinstance(args[1], Const)
                or Fraction(args[1].value).denominator != 1
                or args[1].value < 0
            ):
                raise ParseError(
                    f"{name} is reserved as {name}(psi, k) with integer k >= 0",
                    self.text,
                    name_tok.pos,
                )
            k = int(args[1].value)
            if k == 0:
                return Var("psi")
            return Var(f"{name}(psi,{k})")
        raise ParseError(f"unknown function {name!r}", self.text, name_tok.pos)


def _coerce_constant(v) -> Expr:
    if isinstance(v, Expr):
        return normalize(v)
    if isinstance(v, (int, Fraction)):
        return const(Fraction(v))
    if isinstance(v, float):
        return const(v)
    raise TypeError(f"cannot use {type(v).__name__} as a named constant")


def parse(text: str, constants: Mapping[str, Number] | None = None) -> Expr:
    """Parse the documented infix grammar into a normalized expression.

    `constants` maps identifiers to numbers substituted at parse time.
    The names `psi` and Dx/Dy/Dz(psi, k) are reserved placeholders for the
    solver's operator templates and come back as opaque variables.
    """
    if constants and "psi" in constants:
        raise ParseError("'psi' is a reserved name and cannot be a constant", text, 0)
    return _Parser(text, constants).parse()


# --------------------------------------------------------------------------
# Printing (parseable; round-trips through parse)


def _fmt_const(v, parens_if_negative=False) -> str:
    if isinstance(v, Fraction):
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    else:
        s = repr(v)
    if parens_if_negative and (v < 0 or (isinstance(v, Fraction) and v.denominator != 1)):
        return f"({s})"
    return s


def _is_neg(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value < 0
    if isinstance(e, Mul) and isinstance(e.factors[0], Const):
        return e.factors[0].value < 0
    return False


_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _p(e: Expr, ctx: int) -> str:
    if isinstance(e, Const):
        s = _fmt_const(e.value)
        if (e.value < 0 or (isinstance(e.value, Fraction) and e.value.denominator != 1)) and ctx >= _PREC_MUL:
            return f"({s})"
        return s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        inner = _p(e.arg, _PREC_ADD)
        if e.fn == "ramp":
            return f"max({inner},0)"
        return f"{e.fn}({inner})"
    if isinstance(e, Pow):
        base = _p(e.base, _PREC_ATOM)
        if isinstance(e.base, (Add, Mul, Pow)) or (
            isinstance(e.base, Const)
            and (e.base.value < 0 or (isinstance(e.base.value, Fraction) and e.base.value.denominator != 1))
        ):
            base = f"({_p(e.base, _PREC_ADD)})"
        q = e.exponent
        es = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        if q < 0 or q.denominator != 1:
            es = f"({es})"
        return f"{base}^{es}"
    if isinstance(e, Mul):
        parts = []
        for f in e.factors:
            s = _p(f, _PREC_MUL)
            parts.append(s)
        out = "*".join(parts)
        return f"({out})" if ctx > _PREC_MUL else out
    if isinstance(e, Add):
        first = e.terms[0]
        out = _p(first, _PREC_ADD)
        for t in e.terms[1:]:
            if _is_neg(t):
                out += " - " + _p(neg(t), _PREC_MUL)
            else:
                out += " + " + _p(t, _PREC_MUL)
        return f"({out})" if ctx > _PREC_ADD else out
    raise TypeError(f"not an expression: {e!r}")


def to_text(e: Expr) -> str:
    """Emit parseable text; parse(to_text(e)) is structurally equal to e."""
    return _p(e, 0)
