"""Symbolic expression kernel.

Expressions are immutable trees over exact rationals, named symbols, the
reserved constants pi / i / hbar, n-ary sums and products, rational powers,
and the unary functions sin, cos, exp.  Every constructor returns a
canonical form:

  * sums and products are flattened and sorted under a fixed term order,
  * rational constants are folded exactly (fractions.Fraction),
  * like terms are collected and equal bases have their exponents merged,
  * products distribute over sums and positive integer powers of sums are
    expanded, so polynomial identities collapse to a structural zero,
  * integer powers of the imaginary unit fold through the 4-cycle,
  * matched sin(u)^2 + cos(u)^2 pairs collapse to 1.

There is no division node: quotients are powers with negative exponents.
sqrt(x) is accepted by the parser and normalized to x^(1/2).

All operations are pure; expressions may be shared freely across threads.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import EvaluationError

__all__ = [
    "Expr", "Rational", "Symbol", "Constant", "Add", "Mul", "Pow", "Call",
    "PI", "IMAG", "HBAR", "ZERO", "ONE", "rational", "symbol", "add", "mul",
    "power", "call", "diff", "evalf", "subs", "free_symbols", "to_str",
]

ExprLike = Union["Expr", int, Fraction]

_FUNCTIONS = ("cos", "exp", "sin")
_CONSTANTS = ("hbar", "i", "pi")


def _as_expr(x: ExprLike) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Rational(Fraction(x))
    raise TypeError(f"cannot coerce {x!r} to Expr")


class Expr:
    """Base class.  Instances are immutable and canonical by construction."""

    __slots__ = ("_hash",)

    def __hash__(self):
        return self._hash

    # -- operator sugar (internal convenience; all routes canonicalize) --
    def __add__(self, other: ExprLike) -> "Expr":
        return add(self, _as_expr(other))

    __radd__ = __add__

    def __sub__(self, other: ExprLike) -> "Expr":
        return add(self, mul(Rational(Fraction(-1)), _as_expr(other)))

    def __rsub__(self, other: ExprLike) -> "Expr":
        return add(_as_expr(other), mul(Rational(Fraction(-1)), self))

    def __mul__(self, other: ExprLike) -> "Expr":
        return mul(self, _as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other: ExprLike) -> "Expr":
        return mul(self, power(_as_expr(other), -1))

    def __rtruediv__(self, other: ExprLike) -> "Expr":
        return mul(_as_expr(other), power(self, -1))

    def __pow__(self, e) -> "Expr":
        return power(self, e)

    def __neg__(self) -> "Expr":
        return mul(Rational(Fraction(-1)), self)

    def __repr__(self):
        return to_str(self)

    def is_zero(self) -> bool:
        return isinstance(self, Rational) and self.value == 0

    def is_one(self) -> bool:
        return isinstance(self, Rational) and self.value == 1


class Rational(Expr):
    """Exact rational literal."""

    __slots__ = ("value",)

    def __init__(self, value: Fraction):
        self.value = value
        self._hash = hash(("rat", value))

    def __eq__(self, other):
        return isinstance(other, Rational) and self.value == other.value

    __hash__ = Expr.__hash__


class Symbol(Expr):
    """A named coordinate, parameter, or fiber variable."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("sym", name))

    def __eq__(self, other):
        return isinstance(other, Symbol) and self.name == other.name

    __hash__ = Expr.__hash__


class Constant(Expr):
    """Reserved constant: pi, i, or hbar."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        assert name in _CONSTANTS
        self.name = name
        self._hash = hash(("const", name))

    def __eq__(self, other):
        return isinstance(other, Constant) and self.name == other.name

    __hash__ = Expr.__hash__


PI = Constant("pi")
IMAG = Constant("i")
HBAR = Constant("hbar")
ZERO = Rational(Fraction(0))
ONE = Rational(Fraction(1))
MINUS_ONE = Rational(Fraction(-1))
HALF = Rational(Fraction(1, 2))


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        self.terms = terms
        self._hash = hash(("add", terms))

    def __eq__(self, other):
        return isinstance(other, Add) and self.terms == other.terms

    __hash__ = Expr.__hash__


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: tuple):
        self.factors = factors
        self._hash = hash(("mul", factors))

    def __eq__(self, other):
        return isinstance(other, Mul) and self.factors == other.factors

    __hash__ = Expr.__hash__


class Pow(Expr):
    """base raised to an exact rational exponent (never 0 or 1)."""

    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: Fraction):
        self.base = base
        self.exponent = exponent
        self._hash = hash(("pow", base, exponent))

    def __eq__(self, other):
        return (isinstance(other, Pow) and self.base == other.base
                and self.exponent == other.exponent)

    __hash__ = Expr.__hash__


class Call(Expr):
    """Unary function application: sin, cos, exp."""

    __slots__ = ("fn", "arg")

    def __init__(self, fn: str, arg: Expr):
        assert fn in _FUNCTIONS
        self.fn = fn
        self.arg = arg
        self._hash = hash(("call", fn, arg))

    def __eq__(self, other):
        return isinstance(other, Call) and self.fn == other.fn and self.arg == other.arg

    __hash__ = Expr.__hash__


# ---------------------------------------------------------------------------
# canonical term order


def _key(e: Expr):
    # Rank-first tuples: payloads are only compared between same-rank nodes,
    # so the heterogeneous nesting is safe under tuple comparison.
    if isinstance(e, Rational):
        return (0, (e.value.numerator, e.value.denominator))
    if isinstance(e, Constant):
        return (1, e.name)
    if isinstance(e, Symbol):
        return (2, e.name)
    if isinstance(e, Call):
        return (3, (e.fn, _key(e.arg)))
    if isinstance(e, Pow):
        return (4, (_key(e.base), (e.exponent.numerator, e.exponent.denominator)))
    if isinstance(e, Mul):
        return (5, tuple(_key(f) for f in e.factors))
    if isinstance(e, Add):
        return (6, tuple(_key(t) for t in e.terms))
    raise TypeError(type(e))


# ---------------------------------------------------------------------------
# constructors


def rational(num, den=1) -> Expr:
    return Rational(Fraction(num, den))


def symbol(name: str) -> Symbol:
    return Symbol(name)


def _split_coeff(term: Expr):
    """term -> (Fraction coefficient, monomial Expr)."""
    if isinstance(term, Rational):
        return term.value, ONE
    if isinstance(term, Mul) and isinstance(term.factors[0], Rational):
        rest = term.factors[1:]
        mono = rest[0] if len(rest) == 1 else Mul(rest)
        return term.factors[0].value, mono
    return Fraction(1), term


def _monomial_factors(mono: Expr) -> tuple:
    return mono.factors if isinstance(mono, Mul) else (mono,)


def _rebuild_monomial(factors: Iterable[Expr]) -> Expr:
    factors = [f for f in factors if not f.is_one()]
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    factors.sort(key=_key)
    return Mul(tuple(factors))


def _pythagoras(terms: dict) -> None:
    """Collapse matched c*sin(u)^k*R + c*sin(u)^(k-2)*cos(u)^2*R pairs into
    c*sin(u)^(k-2)*R, in place.  Each rewrite lowers the total trig degree,
    so the loop terminates."""
    changed = True
    while changed:
        changed = False
        for mono in sorted(terms, key=_key):
            c = terms.get(mono)
            if c is None or c == 0:
                continue
            factors = _monomial_factors(mono)
            for idx, f in enumerate(factors):
                if not (isinstance(f, Pow) and isinstance(f.base, Call)
                        and f.base.fn == "sin" and f.exponent.denominator == 1
                        and f.exponent >= 2):
                    continue
                u = f.base.arg
                k = int(f.exponent)
                rest = factors[:idx] + factors[idx + 1:]
                sin_rem = () if k == 2 else (power(Call("sin", u), k - 2),)
                partner = mul(*rest, *sin_rem, Pow(Call("cos", u), Fraction(2)))
                if terms.get(partner) != c:
                    continue
                residual = mul(*rest, *sin_rem) if rest or sin_rem else ONE
                del terms[mono]
                del terms[partner]
                terms[residual] = terms.get(residual, Fraction(0)) + c
                changed = True
                break
            if changed:
                break


def add(*args: Expr) -> Expr:
    terms: dict = {}
    for a in args:
        parts = a.terms if isinstance(a, Add) else (a,)
        for t in parts:
            c, mono = _split_coeff(t)
            terms[mono] = terms.get(mono, Fraction(0)) + c
    _pythagoras(terms)
    out = []
    for mono in sorted(terms, key=_key):
        c = terms[mono]
        if c == 0:
            continue
        if mono.is_one():
            out.append(Rational(c))
        elif c == 1:
            out.append(mono)
        elif isinstance(mono, Mul):
            out.append(Mul((Rational(c),) + mono.factors))
        else:
            out.append(Mul((Rational(c), mono)))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Add(tuple(out))


def _expand_product(coeff: Fraction, plain: list, sums: list) -> Expr:
    # Distribute the Add factors; their terms are monomials, so the inner
    # products cannot reintroduce sums and the recursion is flat.
    partial = [Rational(coeff)] + plain
    out_terms = [tuple(partial)]
    for s in sums:
        out_terms = [prev + (t,) for prev in out_terms
                     for t in (s.terms if isinstance(s, Add) else (s,))]
    return add(*[mul(*combo) for combo in out_terms])


def mul(*args: Expr) -> Expr:
    coeff = Fraction(1)
    powers: dict = {}
    order: list = []

    def feed(base: Expr, exp: Fraction):
        nonlocal coeff
        if isinstance(base, Rational) and exp.denominator == 1:
            if base.value == 0 and exp < 0:
                raise EvaluationError("division by zero in a constant power")
            coeff *= base.value ** exp.numerator
            return
        if base not in powers:
            powers[base] = Fraction(0)
            order.append(base)
        powers[base] += exp

    for a in args:
        factors = a.factors if isinstance(a, Mul) else (a,)
        for f in factors:
            if isinstance(f, Rational):
                if f.value == 0:
                    return ZERO
                coeff *= f.value
            elif isinstance(f, Pow):
                feed(f.base, f.exponent)
            else:
                feed(f, Fraction(1))

    pieces = []
    for base in order:
        exp = powers[base]
        if exp == 0:
            continue
        if base == IMAG and exp.denominator == 1:
            r = exp.numerator % 4
            if r in (2, 3):
                coeff = -coeff
            if r in (1, 3):
                pieces.append(IMAG)
            continue
        pieces.append(power(base, exp))

    if coeff == 0:
        return ZERO
    plain, sums = [], []
    for p in pieces:
        if isinstance(p, Rational):
            coeff *= p.value
        elif isinstance(p, Add):
            sums.append(p)
        elif isinstance(p, Mul):
            # power() may fold a piece into a product (e.g. via i-cycling)
            for q in p.factors:
                if isinstance(q, Rational):
                    coeff *= q.value
                elif isinstance(q, Add):
                    sums.append(q)
                else:
                    plain.append(q)
        else:
            plain.append(p)
    if coeff == 0:
        return ZERO
    if sums:
        return _expand_product(coeff, plain, sums)
    bases = [f.base if isinstance(f, Pow) else f for f in plain]
    if len(set(bases)) != len(bases):
        # a distributed power reintroduced an existing base; one more merge
        # pass strictly shrinks the factor list, so this terminates
        return mul(Rational(coeff), *plain)
    plain.sort(key=_key)
    if not plain:
        return Rational(coeff)
    if coeff == 1:
        return plain[0] if len(plain) == 1 else Mul(tuple(plain))
    return Mul((Rational(coeff),) + tuple(plain))


def power(base: Expr, exponent) -> Expr:
    if isinstance(exponent, Rational):
        exponent = exponent.value
    exponent = Fraction(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Rational):
        if exponent.denominator == 1:
            if base.value == 0 and exponent < 0:
                raise EvaluationError("division by zero in a constant power")
            return Rational(base.value ** exponent.numerator)
        if base.value == 0:
            return ZERO
        if base.value == 1:
            return ONE
        return Pow(base, exponent)
    if base == IMAG and exponent.denominator == 1:
        r = exponent.numerator % 4
        return (ONE, IMAG, MINUS_ONE, mul(MINUS_ONE, IMAG))[r]
    if isinstance(base, Pow) and exponent.denominator == 1:
        return power(base.base, base.exponent * exponent)
    if isinstance(base, Mul) and exponent.denominator == 1:
        return mul(*[power(f, exponent) for f in base.factors])
    if isinstance(base, Add) and exponent.denominator == 1 and exponent >= 2:
        # expand by distributing term lists; the terms are monomials, so the
        # inner products cannot re-enter this branch with the same base
        terms = [ONE]
        for _ in range(int(exponent)):
            terms = [mul(t, s) for t in terms for s in base.terms]
        return add(*terms)
    return Pow(base, exponent)


def call(fn: str, arg: Expr) -> Expr:
    if fn == "sqrt":
        return power(arg, Fraction(1, 2))
    if fn not in _FUNCTIONS:
        raise ValueError(f"unsupported function '{fn}'")
    if arg.is_zero():
        return ZERO if fn == "sin" else ONE
    if fn in ("sin", "cos"):
        sign, stripped = _extract_sign(arg)
        if sign < 0:
            inner = Call(fn, stripped)
            return mul(MINUS_ONE, inner) if fn == "sin" else inner
    return Call(fn, arg)


def _extract_sign(e: Expr):
    """Deterministic sign split used to orient sin/cos arguments."""
    if isinstance(e, Rational):
        return (1, e) if e.value > 0 else (-1, Rational(-e.value))
    if isinstance(e, Mul) and isinstance(e.factors[0], Rational):
        c = e.factors[0].value
        if c < 0:
            return -1, mul(Rational(-c), *e.factors[1:])
        return 1, e
    if isinstance(e, Add):
        c, _ = _split_coeff(e.terms[0])
        if c < 0:
            return -1, mul(MINUS_ONE, e)
        return 1, e
    return 1, e


# ---------------------------------------------------------------------------
# calculus / evaluation / substitution


def diff(e: Expr, v: Symbol) -> Expr:
    """Exact partial derivative, returned in canonical form."""
    if isinstance(e, (Rational, Constant)):
        return ZERO
    if isinstance(e, Symbol):
        return ONE if e == v else ZERO
    if isinstance(e, Add):
        return add(*[diff(t, v) for t in e.terms])
    if isinstance(e, Mul):
        pieces = []
        for k, f in enumerate(e.factors):
            dk = diff(f, v)
            if dk.is_zero():
                continue
            pieces.append(mul(dk, *e.factors[:k], *e.factors[k + 1:]))
        return add(*pieces) if pieces else ZERO
    if isinstance(e, Pow):
        db = diff(e.base, v)
        if db.is_zero():
            return ZERO
        return mul(Rational(e.exponent), power(e.base, e.exponent - 1), db)
    if isinstance(e, Call):
        da = diff(e.arg, v)
        if da.is_zero():
            return ZERO
        if e.fn == "sin":
            outer = call("cos", e.arg)
        elif e.fn == "cos":
            outer = mul(MINUS_ONE, call("sin", e.arg))
        else:
            outer = e
        return mul(outer, da)
    raise TypeError(type(e))


def evalf(e: Expr, env: Mapping[str, complex]) -> complex:
    """Evaluate over complex doubles.  pi and i are bound; hbar and all
    symbols come from ``env``.  Raises EvaluationError on unbound symbols,
    division by zero, or non-finite results."""
    try:
        val = _evalf(e, env)
    except ZeroDivisionError as exc:
        raise EvaluationError("division by zero during evaluation") from exc
    except (OverflowError, ValueError) as exc:
        raise EvaluationError(f"numeric failure: {exc}") from exc
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise EvaluationError("non-finite value during evaluation")
    return val


def _evalf(e: Expr, env: Mapping[str, complex]) -> complex:
    if isinstance(e, Rational):
        return complex(e.value.numerator / e.value.denominator)
    if isinstance(e, Constant):
        if e.name == "pi":
            return complex(math.pi)
        if e.name == "i":
            return 1j
        return complex(env.get("hbar", 1.0))
    if isinstance(e, Symbol):
        try:
            return complex(env[e.name])
        except KeyError:
            raise EvaluationError(f"unbound symbol '{e.name}'") from None
    if isinstance(e, Add):
        return sum(_evalf(t, env) for t in e.terms)
    if isinstance(e, Mul):
        out = complex(1)
        for f in e.factors:
            out *= _evalf(f, env)
        return out
    if isinstance(e, Pow):
        b = _evalf(e.base, env)
        if e.exponent.denominator == 1:
            return b ** e.exponent.numerator
        if b == 0:
            if e.exponent > 0:
                return complex(0)
            raise ZeroDivisionError
        return b ** float(e.exponent)
    if isinstance(e, Call):
        a = _evalf(e.arg, env)
        return getattr(cmath, e.fn)(a)
    raise TypeError(type(e))


def subs(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Substitute symbols by name; the result is re-canonicalized."""
    if isinstance(e, Symbol):
        return mapping.get(e.name, e)
    if isinstance(e, (Rational, Constant)):
        return e
    if isinstance(e, Add):
        return add(*[subs(t, mapping) for t in e.terms])
    if isinstance(e, Mul):
        return mul(*[subs(f, mapping) for f in e.factors])
    if isinstance(e, Pow):
        return power(subs(e.base, mapping), e.exponent)
    if isinstance(e, Call):
        return call(e.fn, subs(e.arg, mapping))
    raise TypeError(type(e))


def free_symbols(e: Expr) -> set:
    if isinstance(e, Symbol):
        return {e.name}
    if isinstance(e, (Rational, Constant)):
        return set()
    if isinstance(e, Add):
        return set().union(*[free_symbols(t) for t in e.terms])
    if isinstance(e, Mul):
        return set().union(*[free_symbols(f) for f in e.factors])
    if isinstance(e, Pow):
        return free_symbols(e.base)
    if isinstance(e, Call):
        return free_symbols(e.arg)
    raise TypeError(type(e))


# ---------------------------------------------------------------------------
# printing (parse(to_str(e)) == e)


def _frac_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _paren_for_pow_base(b: Expr) -> bool:
    if isinstance(b, Rational):
        return not (b.value.denominator == 1 and b.value >= 0)
    return isinstance(b, (Add, Mul, Pow))


def _factor_str(f: Expr) -> str:
    s = to_str(f)
    return f"({s})" if isinstance(f, Add) else s


def to_str(e: Expr) -> str:
    if isinstance(e, Rational):
        return _frac_str(e.value)
    if isinstance(e, (Symbol, Constant)):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({to_str(e.arg)})"
    if isinstance(e, Pow):
        b = to_str(e.base)
        if _paren_for_pow_base(e.base):
            b = f"({b})"
        exp = e.exponent
        if exp.denominator == 1 and exp >= 0:
            return f"{b}^{exp.numerator}"
        return f"{b}^({_frac_str(exp)})"
    if isinstance(e, Mul):
        factors = e.factors
        prefix = ""
        if isinstance(factors[0], Rational):
            c = factors[0].value
            factors = factors[1:]
            if c == -1:
                prefix = "-"
            else:
                prefix = ("-" if c < 0 else "") + _frac_str(abs(c)) + "*"
        return prefix + "*".join(_factor_str(f) for f in factors)
    if isinstance(e, Add):
        parts = []
        for k, t in enumerate(e.terms):
            c, _ = _split_coeff(t)
            if k == 0:
                parts.append(to_str(t))
            elif c < 0:
                parts.append(" - " + to_str(mul(MINUS_ONE, t)))
            else:
                parts.append(" + " + to_str(t))
        return "".join(parts)
    raise TypeError(type(e))
