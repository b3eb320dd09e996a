"""Exact rational arithmetic in named parameters.

Three layers:

* ``Fraction`` (stdlib) as the scalar rational type,
* ``MPoly``: sparse multivariate polynomials, a dict from exponent tuple
  to nonzero Fraction over a sorted tuple of variable names,
* ``RatFun``: quotients of two MPoly values, stored without reduction
  (no multivariate gcd anywhere); equality is cross-multiplication.

Plus a recursive-descent parser for the expression grammar used by the
command-line documents, and a canonical graded-lex printer whose output
reparses to an equal value.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import gcd

if os.environ.get("QHEUN_PURE"):
    from . import _termops as termops
else:
    try:
        from . import _termops_c as termops  # type: ignore[no-redef]
    except ImportError:
        from . import _termops as termops

Rational = Fraction

__all__ = [
    "Rational", "MPoly", "RatFun", "DivergesAtZero", "UnknownParameter",
    "ParseError", "poly_arith", "ratfun_eq", "substitute", "limit_at_zero",
    "parse_expr", "sym", "rat", "as_ratfun", "termops",
]


class DivergesAtZero(ArithmeticError):
    """A one-variable limit at zero does not exist (pole in that variable)."""


class UnknownParameter(ValueError):
    """An identifier is not part of the declared parameter universe."""


class ParseError(SyntaxError):
    """Syntax error in an expression string; carries the byte offset."""

    def __init__(self, message, text, pos):
        super().__init__(f"{message} at offset {pos}: {text!r}")
        self.offset = pos


def _term_key(exp):
    # graded lexicographic: total degree first, then the exponent tuple
    return (sum(exp), exp)


class MPoly:
    """Sparse exact multivariate polynomial.

    ``vars`` is the sorted tuple of variable names that actually occur;
    ``terms`` maps exponent tuples (aligned with ``vars``) to nonzero
    Fractions.  Instances are immutable by convention and canonical:
    equal polynomials have equal (vars, terms).
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars_=(), terms=None):
        object.__setattr__(self, "vars", tuple(vars_))
        object.__setattr__(self, "terms", dict(terms) if terms else {})

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    # -- construction ------------------------------------------------------

    @staticmethod
    def _make(vars_, terms):
        """Canonicalize: drop zero coefficients, unused variables, sort vars."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return _MP_ZERO
        vars_ = tuple(vars_)
        if any(vars_[i] >= vars_[i + 1] for i in range(len(vars_) - 1)):
            order = sorted(range(len(vars_)), key=lambda i: vars_[i])
            vars_ = tuple(vars_[i] for i in order)
            terms = {tuple(e[i] for i in order): c for e, c in terms.items()}
        used = [i for i in range(len(vars_)) if any(e[i] for e in terms)]
        if len(used) != len(vars_):
            vars_ = tuple(vars_[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        return MPoly(vars_, terms)

    @staticmethod
    def const(c) -> "MPoly":
        c = Fraction(c)
        if not c:
            return _MP_ZERO
        return MPoly((), {(): c})

    @staticmethod
    def var(name: str) -> "MPoly":
        return MPoly((name,), {(1,): Fraction(1)})

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.vars

    def const_value(self) -> Fraction:
        if self.vars:
            raise ValueError("not a constant polynomial")
        return self.terms.get((), Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- alignment ---------------------------------------------------------

    def _embed(self, vars_):
        """Re-express the term dict over a superset variable tuple."""
        if self.vars == vars_:
            return self.terms
        pos = {v: i for i, v in enumerate(vars_)}
        idx = [pos[v] for v in self.vars]
        n = len(vars_)
        out = {}
        for e, c in self.terms.items():
            ee = [0] * n
            for i, x in zip(idx, e):
                ee[i] = x
            out[tuple(ee)] = c
        return out

    @staticmethod
    def _aligned(a: "MPoly", b: "MPoly"):
        if a.vars == b.vars:
            return a.vars, a.terms, b.terms
        vars_ = tuple(sorted(set(a.vars) | set(b.vars)))
        return vars_, a._embed(vars_), b._embed(vars_)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        vars_, ta, tb = MPoly._aligned(self, other)
        return MPoly._make(vars_, termops.add_terms(ta, tb))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        vars_, ta, tb = MPoly._aligned(self, other)
        return MPoly._make(vars_, termops.sub_terms(ta, tb))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MPoly(self.vars, termops.neg_terms(self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return _MP_ZERO
            return MPoly(self.vars, termops.scale_terms(self.terms, c))
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return _MP_ZERO
        vars_, ta, tb = MPoly._aligned(self, other)
        return MPoly._make(vars_, termops.mul_terms(ta, tb))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial power needs a nonnegative integer")
        result = _MP_ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def __truediv__(self, other):
        return as_ratfun(self) / other

    def __rtruediv__(self, other):
        return as_ratfun(other) / self

    # -- structure ---------------------------------------------------------

    def degree_in(self, var: str) -> int:
        """Highest exponent of var; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def order_in(self, var: str) -> int:
        """Lowest exponent of var; raises on the zero polynomial."""
        if self.is_zero:
            raise ValueError("zero polynomial has no order")
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return min(e[i] for e in self.terms)

    def univariate(self, var: str) -> dict:
        """View as a polynomial in var: degree -> MPoly in the other variables."""
        if var not in self.vars:
            return {} if self.is_zero else {0: self}
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        split: dict = {}
        for e, c in self.terms.items():
            split.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: MPoly._make(rest, t) for k, t in split.items()}

    def coefficient(self, var: str, k: int) -> "MPoly":
        return self.univariate(var).get(k, _MP_ZERO)

    def content_signed(self) -> Fraction:
        """Rational content carrying the sign of the graded-lex leading term."""
        if self.is_zero:
            return Fraction(0)
        g = 0
        l = 1
        for c in self.terms.values():
            g = gcd(g, c.numerator)
            l = l * c.denominator // gcd(l, c.denominator)
        content = Fraction(g, l)
        if self.terms[max(self.terms, key=_term_key)] < 0:
            content = -content
        return content

    def evaluate(self, values: dict):
        """Plug numbers in for every variable; exact for Fraction inputs."""
        total = None
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.vars, e):
                if k:
                    v = v * values[name] ** k
            total = v if total is None else total + v
        return Fraction(0) if total is None else total

    def substitute(self, binding: dict) -> "RatFun":
        """Simultaneous substitution of some variables by rational functions."""
        bound = [v for v in self.vars if v in binding]
        if not bound or self.is_zero:
            return RatFun(self)
        rfs = {v: as_ratfun(binding[v]) for v in bound}
        idx = [self.vars.index(v) for v in bound]
        emax = {v: max(e[i] for e in self.terms) for v, i in zip(bound, idx)}
        # shared denominator prod(den_v^emax_v); numerators via power tables
        npow = {}
        dpow = {}
        for v in bound:
            npow[v] = _power_table(rfs[v].num, emax[v])
            dpow[v] = _power_table(rfs[v].den, emax[v])
        keep = [i for i in range(len(self.vars)) if self.vars[i] not in binding]
        keep_vars = tuple(self.vars[i] for i in keep)
        total = _MP_ZERO
        for e, c in self.terms.items():
            part = MPoly._make(keep_vars, {tuple(e[i] for i in keep): c})
            for v, i in zip(bound, idx):
                part = part * npow[v][e[i]] * dpow[v][emax[v] - e[i]]
            total = total + part
        den = _MP_ONE
        for v in bound:
            den = den * dpow[v][emax[v]]
        return RatFun(total, den)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_term_key, reverse=True):
            c = self.terms[e]
            body = []
            if abs(c) != 1 or not any(e):
                body.append(str(abs(c)))
            for name, k in zip(self.vars, e):
                if k == 1:
                    body.append(name)
                elif k > 1:
                    body.append(f"{name}^{k}")
            if abs(c) == 1 and any(e) and c < 0 and not parts:
                # a bare leading "-x^2" would parse as (-x)^2 under the
                # grammar's unary-minus rule, so keep the explicit 1
                body.insert(0, "1")
            parts.append((c < 0, "*".join(body)))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"MPoly({self})"


def _power_table(p: MPoly, kmax: int):
    out = [_MP_ONE]
    for _ in range(kmax):
        out.append(out[-1] * p)
    return out


_MP_ZERO = MPoly()
_MP_ONE = MPoly((), {(): Fraction(1)})


class RatFun:
    """Quotient of two MPoly values, never reduced by a multivariate gcd.

    Normalization kept cheap and canonical-ish: common per-variable
    monomial content between numerator and denominator is cancelled, and
    the denominator is scaled to integer coprime coefficients with a
    positive graded-lex leading coefficient.  Equality is defined by
    cross-multiplication, so normalization never changes the value.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = MPoly.const(num)
        if den is None:
            den = _MP_ONE
        elif isinstance(den, (int, Fraction)):
            den = MPoly.const(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            object.__setattr__(self, "num", _MP_ZERO)
            object.__setattr__(self, "den", _MP_ONE)
            return
        shared = set(num.vars) & set(den.vars)
        for v in shared:
            m = min(num.order_in(v), den.order_in(v))
            if m:
                num = _shift_down(num, v, m)
                den = _shift_down(den, v, m)
        c = den.content_signed()
        if c != 1:
            inv = 1 / c
            num = num * inv
            den = den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    def variables(self):
        return tuple(sorted(set(self.num.vars) | set(self.den.vars)))

    def is_const(self) -> bool:
        return not self.num.vars and not self.den.vars

    def const_value(self) -> Fraction:
        return self.num.const_value() / self.den.const_value()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            other = as_ratfun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num - other.num, self.den)
        return RatFun(self.num * other.den - other.num * self.den,
                      self.den * other.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # cheap structural cancellations to slow coefficient growth
        a_num, a_den = self.num, self.den
        b_num, b_den = other.num, other.den
        if a_num == b_den and not a_num.is_const():
            a_num, b_den = _MP_ONE, _MP_ONE
        if b_num == a_den and not b_num.is_const():
            b_num, a_den = _MP_ONE, _MP_ONE
        return RatFun(a_num * b_num, a_den * b_den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return self * RatFun(other.den, other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("rational-function power needs an integer")
        if k < 0:
            if self.num.is_zero:
                raise ZeroDivisionError("negative power of zero")
            return RatFun(self.den ** (-k), self.num ** (-k))
        return RatFun(self.num ** k, self.den ** k)

    # -- operations --------------------------------------------------------

    def substitute(self, binding: dict) -> "RatFun":
        rn = self.num.substitute(binding)
        rd = self.den.substitute(binding)
        if rd.num.is_zero:
            raise ZeroDivisionError(
                "denominator vanishes identically under substitution")
        return rn / rd

    def limit_at_zero(self, var: str) -> "RatFun":
        if self.num.is_zero:
            return _RF_ZERO
        nu = self.num.univariate(var)
        du = self.den.univariate(var)
        on, od = min(nu), min(du)
        if on < od:
            raise DivergesAtZero(
                f"pole of order {od - on} in {var} at 0")
        if on > od:
            return _RF_ZERO
        return RatFun(nu[on], du[od])

    def evaluate(self, values: dict):
        d = self.den.evaluate(values)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the given point")
        return self.num.evaluate(values) / d

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if self.den == _MP_ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFun({self})"


def _shift_down(p: MPoly, var: str, m: int) -> MPoly:
    i = p.vars.index(var)
    return MPoly._make(p.vars,
                       {e[:i] + (e[i] - m,) + e[i + 1:]: c
                        for e, c in p.terms.items()})


def _coerce(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (int, Fraction, MPoly)):
        return as_ratfun(x)
    return NotImplemented


_RF_ZERO = RatFun(_MP_ZERO)


def as_ratfun(x) -> RatFun:
    """Coerce an int, Fraction, MPoly, or RatFun to RatFun."""
    if isinstance(x, RatFun):
        return x
    if isinstance(x, MPoly):
        return RatFun(x)
    if isinstance(x, (int, Fraction)):
        return RatFun(MPoly.const(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as RatFun")


def sym(name: str) -> RatFun:
    """A single parameter as a RatFun."""
    return RatFun(MPoly.var(name))


def rat(p, q=1) -> RatFun:
    """An exact rational constant as a RatFun."""
    return RatFun(MPoly.const(Fraction(p, q)))


# -- spec-level operation names -------------------------------------------

def poly_arith(op: str, lhs, rhs):
    """add | sub | mul on MPoly or RatFun operands (RatFun wins coercion)."""
    if isinstance(lhs, RatFun) or isinstance(rhs, RatFun):
        lhs, rhs = as_ratfun(lhs), as_ratfun(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown operation {op!r}")


def ratfun_eq(lhs, rhs) -> bool:
    """Exact equality by cross-multiplication of unreduced quotients."""
    return as_ratfun(lhs) == as_ratfun(rhs)


def substitute(target, binding: dict) -> RatFun:
    """Simultaneous substitution parameter -> RatFun (no chaining)."""
    return as_ratfun(target).substitute(
        {k: as_ratfun(v) for k, v in binding.items()})


def limit_at_zero(target, var: str) -> RatFun:
    """Exact limit as var -> 0, or DivergesAtZero on a pole."""
    return as_ratfun(target).limit_at_zero(var)


# -- expression parser -----------------------------------------------------

def parse_expr(text: str, universe) -> RatFun:
    """Parse the document grammar into a RatFun.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' nonneg-integer)?
    base   := identifier | integer | '(' expr ')' | '-' base

    Identifiers must belong to ``universe``; '/' is exact division and
    '^' takes nonnegative integer exponents only.
    """
    return _Parser(text, frozenset(universe)).run()


class _Parser:
    def __init__(self, text, universe):
        self.text = text
        self.universe = universe
        self.pos = 0

    def run(self) -> RatFun:
        value = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError("trailing input", self.text, self.pos)
        return value

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> RatFun:
        value = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                value = value + self.term()
            elif ch == "-":
                self.pos += 1
                value = value - self.term()
            else:
                return value

    def term(self) -> RatFun:
        value = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                value = value * self.factor()
            elif ch == "/":
                self.pos += 1
                rhs = self.factor()
                if rhs.is_zero:
                    raise ParseError("division by zero", self.text, self.pos)
                value = value / rhs
            else:
                return value

    def factor(self) -> RatFun:
        value = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                raise ParseError("expected a nonnegative integer exponent",
                                 self.text, start)
            value = value ** int(self.text[start:self.pos])
        return value

    def base(self) -> RatFun:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.base()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.text, self.pos)
            self.pos += 1
            return value
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return rat(int(self.text[start:self.pos]))
        if ch.isalpha():
            start = self.pos
            while (self.pos < len(self.text)
                   and (self.text[self.pos].isalnum()
                        or self.text[self.pos] == "_")):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.universe:
                raise UnknownParameter(
                    f"unknown parameter {name!r} at offset {start}")
            return sym(name)
        raise ParseError("expected a value", self.text, self.pos)
