"""Passage from three-term q-difference equations to Heun-class ODEs.

Write q = 1 + eps.  Expanding g(q*x) and g(x/q) around eps = 0 turns the
three coefficient rows into a second order differential operator,
provided nine scaled combinations of the rows converge.  The surviving
leading coefficients then decide which member of the Heun family the
limit is: the full equation, a confluent one, or a reduced shape with a
ramified irregular point.

The exact path keeps every entry a rational function of eps and takes
limits by valuation, so the limit data is exact.  Families given as
black-box callables fall back to Richardson extrapolation.
"""

from fractions import Fraction
import math

from .symkernel import (DivergesAtZero, as_ratfun, limit_at_zero,
                        parse_expr, rat, sym)
from .qdiff import QDiffEq
from .local import Resonance, char_exponents, series_solution
from .lax import reference_equation

__all__ = [
    "AllZero", "EpsilonFamily", "HeunODE", "IrregularAtZero", "LimitData",
    "LimitDiverges", "ODE_CLASSES", "Unclassifiable", "classify_ode",
    "crosscheck", "emit_ode", "limit_coefficients", "ode_series",
    "preset_family", "preset_names", "preset_note", "preset_target",
    "richardson_limit",
]

SIGMAS = ("minus", "zero", "plus")

ODE_CLASSES = ("HE", "CHE", "ReducedCHE", "BHE", "DHE", "ReducedDHE",
               "DoublyReducedDHE", "THE", "Other")


class LimitDiverges(ArithmeticError):
    """A required eps -> 0 limit does not exist."""


class AllZero(ValueError):
    """Every limit coefficient vanished; there is no equation to emit."""


class Unclassifiable(ValueError):
    """The limit operator matches none of the catalogued patterns."""


class IrregularAtZero(ValueError):
    """No power-series branch exists at the origin."""


def _coerce_entry(value, parameter):
    if callable(value):
        return value
    if isinstance(value, str):
        return parse_expr(value, {parameter})
    r = as_ratfun(value)
    extra = set(r.variables()) - {parameter}
    if extra:
        raise ValueError("entry depends on %s; only %r is allowed"
                         % (sorted(extra), parameter))
    return r


class EpsilonFamily:
    """Nine coefficient slots a[sigma][k] depending on one small parameter.

    sigma = "plus" multiplies g(q*x), "zero" multiplies g(x) and "minus"
    multiplies g(x/q); k in {0, 1, 2} is the x-degree of the slot, and
    q = 1 + eps.  Entries are rational expressions in the parameter, or
    plain callables eps -> number for families only available
    numerically.
    """

    __slots__ = ("plus", "zero", "minus", "parameter")

    def __init__(self, plus, zero, minus, parameter="eps"):
        for name, row in (("plus", plus), ("zero", zero), ("minus", minus)):
            if len(row) != 3:
                raise ValueError("row %r must have exactly 3 entries" % name)
            object.__setattr__(self, name, tuple(
                _coerce_entry(v, parameter) for v in row))
        object.__setattr__(self, "parameter", parameter)

    def __setattr__(self, name, value):
        raise AttributeError("EpsilonFamily is immutable")

    def entry(self, sigma, k):
        if sigma not in SIGMAS:
            raise KeyError(sigma)
        return getattr(self, sigma)[k]

    def is_symbolic(self) -> bool:
        """True when every entry is an exact rational function."""
        return not any(callable(v)
                       for row in (self.plus, self.zero, self.minus)
                       for v in row)

    def value(self, sigma, k, eps):
        v = self.entry(sigma, k)
        if callable(v):
            return v(eps)
        return v.evaluate({self.parameter: eps})

    def equation(self, eps) -> QDiffEq:
        """The three-term equation at one numeric eps, with q = 1 + eps."""
        rows = []
        for sigma in ("plus", "zero", "minus"):
            vals = [self.value(sigma, k, eps) for k in range(3)]
            rows.append([rat(v if isinstance(v, (int, Fraction))
                             else Fraction(v)) for v in vals])
        return QDiffEq(rows[0], rows[1], rows[2], "x")

    def __repr__(self):
        shape = ",".join(
            "".join("1" if (callable(v) or not v.is_zero) else "0"
                    for v in row)
            for row in (self.plus, self.zero, self.minus))
        return "EpsilonFamily(%s in %s)" % (shape, self.parameter)


class LimitData:
    """The nine limit coefficients, graded by x-degree and by order.

    b2, b1, b0 multiply g''; b21, b11, b01 correct the g' row; b20, b10,
    b00 make up the g row.
    """

    __slots__ = ("b2", "b1", "b0", "b21", "b11", "b01", "b20", "b10", "b00")

    def __init__(self, b2, b1, b0, b21, b11, b01, b20, b10, b00):
        for name in self.__slots__:
            object.__setattr__(self, name, locals()[name])

    def __setattr__(self, name, value):
        raise AttributeError("LimitData is immutable")

    def row(self, k):
        """(b_k, b_k1, b_k0) for one x-degree k."""
        return (getattr(self, "b%d" % k),
                getattr(self, "b%d1" % k),
                getattr(self, "b%d0" % k))

    def as_dict(self):
        return {name: getattr(self, name) for name in self.__slots__}

    def __eq__(self, other):
        if not isinstance(other, LimitData):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n)
                   for n in self.__slots__)

    def __repr__(self):
        return "LimitData(%s)" % ", ".join(
            "%s=%s" % (n, getattr(self, n)) for n in self.__slots__)


def _limit_value(expr, parameter, what):
    try:
        v = limit_at_zero(expr, parameter)
    except DivergesAtZero as exc:
        raise LimitDiverges("%s: %s" % (what, exc)) from exc
    return v.const_value()


def limit_coefficients(fam: EpsilonFamily) -> LimitData:
    """Take the nine eps -> 0 limits of a family.

    Exact when the family is symbolic; Richardson extrapolation when any
    entry is a callable.  Raises LimitDiverges naming the offending slot
    when a limit fails to exist.
    """
    if not fam.is_symbolic():
        return _limit_coefficients_numeric(fam)
    e = fam.parameter
    ev = sym(e)
    out = {}
    at0 = {}
    for sigma in SIGMAS:
        for k in range(3):
            at0[sigma, k] = _limit_value(
                fam.entry(sigma, k), e,
                "slot (%s, %d) has no finite value at %s = 0" % (sigma, k, e))
    for k in range(3):
        ap, az, am = (fam.entry(s, k) for s in ("plus", "zero", "minus"))
        out["b%d" % k] = _limit_value(
            (ap + am) / 2, e, "degree-%d half sum" % k)
        out["b%d1" % k] = _limit_value(
            (ap - am) / ev, e,
            "degree-%d first-order limit (shifted-row difference over %s)"
            % (k, e))
        out["b%d0" % k] = _limit_value(
            (ap + am + az) / (ev * ev), e,
            "degree-%d second-order limit (full row sum over %s^2)" % (k, e))
        # the three slot values at 0 are forced to (b, -2b, b); anything
        # else means the limits above were computed inconsistently
        b = out["b%d" % k]
        assert at0["plus", k] == b and at0["minus", k] == b
        assert at0["zero", k] == -2 * b
    return LimitData(**out)


def richardson_limit(fn, steps=8, start=4):
    """Extrapolate fn(eps) to eps = 0 over the samples eps = 2^-j.

    Assumes an asymptotic power-series error.  Raises LimitDiverges when
    the samples keep growing instead of settling.
    """
    xs = [Fraction(1, 2 ** (start + j)) for j in range(steps)]
    t = [float(fn(x)) for x in xs]
    tail = [abs(v) for v in t[-4:]]
    if (abs(t[-1]) > 100
            and all(b > 1.5 * a for a, b in zip(tail, tail[1:]))):
        raise LimitDiverges("samples grow without settling: %.3g -> %.3g"
                            % (tail[0], tail[-1]))
    for m in range(1, steps):
        w = float(2 ** m)
        t = [(w * t[i + 1] - t[i]) / (w - 1) for i in range(len(t) - 1)]
    return t[0]


def _limit_coefficients_numeric(fam):
    def vf(sigma, k):
        v = fam.entry(sigma, k)
        if callable(v):
            return v
        return lambda e: v.evaluate({fam.parameter: e})

    out = {}
    for k in range(3):
        ap, az, am = (vf(s, k) for s in ("plus", "zero", "minus"))
        try:
            out["b%d" % k] = richardson_limit(lambda e: (ap(e) + am(e)) / 2)
            out["b%d1" % k] = richardson_limit(
                lambda e: (ap(e) - am(e)) / e)
            out["b%d0" % k] = richardson_limit(
                lambda e: (ap(e) + am(e) + az(e)) / (e * e))
        except LimitDiverges as exc:
            raise LimitDiverges("degree-%d slot: %s" % (k, exc)) from exc
    return LimitData(**out)


class HeunODE:
    """Operator data of  x^2*S(x)*g'' + x*F(x)*g' + Q(x)*g = 0.

    second, first and zeroth hold the coefficient tuples of S, F and Q
    by ascending degree (quadratic rows for everything the q -> 1 limit
    emits; the triconfluent shape needs cubic entries).  class_ is None
    until classify_ode fills it; rho records the power-law prefactor
    x^rho split off to clear the constant slot of the zeroth row.
    """

    __slots__ = ("second", "first", "zeroth", "class_", "rho", "limits",
                 "singularities")

    def __init__(self, second, first, zeroth, class_=None, rho=None,
                 limits=None, singularities=None):
        object.__setattr__(self, "second", _trim(second))
        object.__setattr__(self, "first", _trim(first))
        object.__setattr__(self, "zeroth", _trim(zeroth))
        if not (self.second or self.first or self.zeroth):
            raise AllZero("every coefficient row is zero")
        object.__setattr__(self, "class_", class_)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "limits", limits)
        object.__setattr__(self, "singularities", singularities)

    def __setattr__(self, name, value):
        raise AttributeError("HeunODE is immutable")

    def coefficient(self, row, k):
        r = getattr(self, row)
        return r[k] if k < len(r) else 0

    @property
    def accessory(self):
        """The slot a canonical form leaves free once exponents are set."""
        if self.class_ == "THE":
            return self.coefficient("zeroth", 2)
        return self.coefficient("zeroth", 1)

    def __repr__(self):
        tag = self.class_ if self.class_ else "unclassified"
        return "HeunODE(%s, S=%s, F=%s, Q=%s)" % (
            tag, list(self.second), list(self.first), list(self.zeroth))


def _trim(row):
    row = list(row)
    while row and row[-1] == 0:
        row.pop()
    return tuple(row)


def _pad(row, n):
    return tuple(row) + (0,) * (n - len(row))


def emit_ode(b: LimitData) -> HeunODE:
    """Assemble the limiting differential operator from limit data."""
    if all(v == 0 for v in b.as_dict().values()):
        raise AllZero("all nine limit coefficients vanish")
    return HeunODE(
        (b.b0, b.b1, b.b2),
        (b.b01 + b.b0, b.b11 + b.b1, b.b21 + b.b2),
        (b.b00, b.b10, b.b20),
        limits=b)


def _sqrt_exact(f):
    """Exact nonnegative square root of a rational, or None."""
    f = Fraction(f)
    if f < 0:
        return None
    pn, pd = math.isqrt(f.numerator), math.isqrt(f.denominator)
    if pn * pn == f.numerator and pd * pd == f.denominator:
        return Fraction(pn, pd)
    return None


def _div(p, q):
    if isinstance(p, (int, Fraction)) and isinstance(q, (int, Fraction)):
        return Fraction(p) / Fraction(q)
    return p / q


def _quad_roots(a, b, c):
    """Both roots of a*x^2 + b*x + c, exact when the data allows."""
    if a == 0:
        return [_div(-c, b)]
    disc = b * b - 4 * a * c
    if isinstance(disc, (int, Fraction)):
        r = _sqrt_exact(disc)
        if r is not None:
            return sorted([_div(-b - r, 2 * a), _div(-b + r, 2 * a)])
    d = complex(disc) ** 0.5
    out = []
    for z in ((-b - d) / (2 * a), (-b + d) / (2 * a)):
        out.append(z.real if abs(z.imag) < 1e-13 * (1 + abs(z)) else z)
    return sorted(out, key=lambda z: (complex(z).real, complex(z).imag))


def _gauge_data(b, rho):
    """Limit data after the substitution g -> x^rho * g."""
    vals = {}
    for k in range(3):
        bk, bk1, bk0 = b.row(k)
        vals["b%d" % k] = bk
        vals["b%d1" % k] = bk1 + 2 * rho * bk
        vals["b%d0" % k] = bk0 + rho * (rho - 1) * bk + rho * (bk1 + bk)
    return LimitData(**vals)


def classify_ode(ode: HeunODE) -> HeunODE:
    """Decide which Heun-class pattern the operator realizes.

    When the constant slot of the zeroth row is nonzero the operator is
    first normalized by g -> x^rho * g with rho a root of the exponent
    equation at the origin; the chosen rho is recorded.  Raises
    Unclassifiable (with a diagnostic) when no catalogued pattern fits.
    """
    if any(len(getattr(ode, r)) > 3 for r in ("second", "first", "zeroth")):
        return _classify_cubic(ode)
    b = ode.limits
    if b is None:
        s2 = _pad(ode.second, 3)
        f1 = _pad(ode.first, 3)
        q0 = _pad(ode.zeroth, 3)
        b = LimitData(s2[2], s2[1], s2[0],
                      f1[2] - s2[2], f1[1] - s2[1], f1[0] - s2[0],
                      q0[2], q0[1], q0[0])
    rho = 0
    if b.b00 != 0:
        if b.b0 != 0:
            rho = _quad_roots(b.b0, b.b01, b.b00)[0]
        elif b.b01 != 0:
            rho = _div(-b.b00, b.b01)
        else:
            raise Unclassifiable(
                "constant slot of the zeroth row is nonzero but the origin "
                "exponent equation is degenerate (b0 = b01 = 0)")
        b = _gauge_data(b, rho)
        res = b.b00
        if res != 0:
            # a float root leaves rounding residue; anything larger means
            # the exponent equation was not actually solved
            scale = 1 + abs(b.b0) + abs(b.b01)
            if abs(res) > 1e-9 * scale:
                raise Unclassifiable(
                    "origin exponent relation not satisfied (residual %r)"
                    % (res,))
            vals = b.as_dict()
            vals["b00"] = 0
            b = LimitData(**vals)

    if b.b2 != 0:
        if b.b0 == 0:
            raise Unclassifiable(
                "quartic leading row with a double root at the origin "
                "(b2 != 0, b0 = 0) matches no catalogued confluence")
        if b.b1 * b.b1 == 4 * b.b0 * b.b2:
            raise Unclassifiable(
                "the two finite branch points collide "
                "(b1^2 = 4*b0*b2); the pattern is degenerate")
        r1, r2 = _quad_roots(b.b2, b.b1, b.b0)
        label = "HE"
        sing = (0, r1, r2, "Infinity")
    elif b.b1 != 0 and b.b0 != 0:
        label = "ReducedCHE" if b.b21 == 0 else "CHE"
        sing = (0, _div(-b.b0, b.b1), "Infinity")
    elif b.b1 == 0 and b.b0 != 0:
        label = "BHE"
        sing = (0, "Infinity")
    elif b.b1 != 0:
        flags = (b.b21 == 0) + (b.b01 == 0)
        label = ("DHE", "ReducedDHE", "DoublyReducedDHE")[flags]
        sing = (0, "Infinity")
    else:
        raise Unclassifiable(
            "the whole second-derivative row vanishes in the limit")
    out = emit_ode(b)
    return HeunODE(out.second, out.first, out.zeroth, class_=label,
                   rho=rho, limits=b, singularities=sing)


def _classify_cubic(ode):
    s = _pad(ode.second, 4)
    f = _pad(ode.first, 4)
    q = _pad(ode.zeroth, 4)
    the = (s[0] != 0 and s[1] == s[2] == s[3] == 0
           and f[3] != 0 and f[0] == f[2] == 0
           and q[0] == q[1] == 0)
    label = "THE" if the else "Other"
    return HeunODE(ode.second, ode.first, ode.zeroth, class_=label,
                   rho=0, limits=None,
                   singularities=("Infinity",) if the else None)


def ode_series(ode: HeunODE, N=10):
    """Series coefficients c[0..N] of the origin branch with exponent 0.

    The operator is classified (and x^rho-normalized) first if needed;
    the returned coefficients expand the analytic factor, starting from
    c_0 = 1.  Raises IrregularAtZero when the origin is ramified and no
    power branch exists, and Resonance when the recurrence denominator
    vanishes at a finite order.
    """
    if ode.class_ is None:
        ode = classify_ode(ode)
    if ode.class_ in ("THE", "Other"):
        raise ValueError("series expansion is only provided for the "
                         "quadratic-row classes, not %r" % ode.class_)
    b = ode.limits
    if b.b0 == 0 and b.b01 == 0:
        raise IrregularAtZero(
            "origin is ramified (b0 = 0 and b01 = 0); the slot carries "
            "no exponent equation")
    exact = all(isinstance(v, (int, Fraction)) for v in b.as_dict().values())
    c = [Fraction(1) if exact else 1.0]
    for m in range(1, N + 1):
        den = m * (b.b0 * m + b.b01)
        if den == 0:
            raise Resonance(
                "recurrence denominator vanishes at order %d" % m)
        acc = 0
        for j in (1, 2):
            n = m - j
            if n < 0:
                continue
            bj, bj1, bj0 = b.row(j)
            acc += (bj * n * (n - 1) + (bj1 + bj) * n + bj0) * c[n]
        c.append(_div(-acc, den))
    return c


def crosscheck(fam: EpsilonFamily, eps, xs, N=12) -> float:
    """Largest gap between the q-series at q = 1 + eps and the ODE series.

    The q-side expands the family's equation at the given eps along the
    characteristic root closest to 1; the ODE side expands the exponent-0
    branch of the classified limit operator.  Both truncated sums are
    evaluated at the points xs and the maximal absolute difference is
    returned.  The comparison drops both power-law prefactors, so it is
    meaningful when the chosen q-branch tends to the exponent-0 branch
    (true for every shipped preset, whose unit root is exact).
    """
    eps = Fraction(eps) if not isinstance(eps, (int, Fraction)) else eps
    eq = fam.equation(eps)
    ch = char_exponents(eq, at="Zero")
    if not ch.roots:
        raise ValueError("no characteristic root at the origin")
    idx = min(range(len(ch.roots)),
              key=lambda i: abs(complex(ch.roots[i]) - 1))
    sol = series_solution(eq, {"q": 1 + eps}, rootIndex=idx, N=N)
    d = ode_series(classify_ode(emit_ode(limit_coefficients(fam))), N=N)
    c = sol.coefficients
    dev = 0.0
    for x in xs:
        qv = sum(cn * x ** n for n, cn in enumerate(c))
        ov = sum(dn * x ** n for n, dn in enumerate(d))
        dev = max(dev, abs(float(qv - ov)))
    return dev


# -- shipped presets -------------------------------------------------------

def _family_from_row(catalog, family, binding):
    eq = reference_equation(catalog, family)
    bound = {name: parse_expr(text, {"eps"}) for name, text in binding.items()}
    rows = []
    for side in ("P", "Z", "M"):
        rows.append(tuple(eq.coeff(side, k).substitute(bound)
                          for k in range(3)))
    return EpsilonFamily(plus=rows[0], zero=rows[1], minus=rows[2])


def _heun_preset():
    # the base catalog row with both branch points frozen at 2 and 3;
    # the degree-0 and degree-2 row sums vanish identically, so s = 1 is
    # a characteristic root at every eps, and g ~ 1/eps feeds the
    # accessory slot at exactly the second-order rate
    return _family_from_row("kny", "D5", {
        "q": "1 + eps",
        "k1": "1", "k2": "1",
        "n1": "1/(1 - eps)", "n2": "1/(1 + eps)",
        "n3": "2/(1 + eps)", "n4": "3",
        "n5": "1", "n6": "1 - eps^2",
        "n7": "1/2", "n8": "1/3",
        "g": "1/eps",
    })


def _confluent_preset():
    # the confluent catalog shape: the down-shift row is damped by
    # k1 = eps while a3 = -1/eps keeps its degree-0 and degree-1 slots
    # finite, which empties the x^2 column in the limit; the half-shift
    # rate on a2 puts the second origin exponent at 1/2
    return _family_from_row("murata", "A4", {
        "q": "1 + eps",
        "k1": "eps", "k2": "1 + eps",
        "a1": "2", "a2": "(2 + eps)/(1 + eps)", "a3": "-1/eps",
        "t": "1/2",
        "th1": "-4 - eps", "th2": "0",
        "d": "2 + eps - 5*eps^2/2 - eps^3/2",
    })


def _biconfluent_preset():
    # up-shift row of degree 0: both top slots drain through the
    # down-shift row at first order
    return EpsilonFamily(
        plus=("1 + eps/2", "0", "0"),
        zero=("-2 - eps/2", "eps + eps^2", "-eps - eps^2"),
        minus=("1", "-eps", "eps"))


def _doubly_confluent_preset():
    # up-shift row of pure degree 1: both ends of the diagram drain at
    # first order, leaving the middle column in charge
    return EpsilonFamily(
        plus=("0", "1", "0"),
        zero=("eps/2", "-2 + eps^2", "-eps - eps^2"),
        minus=("-eps/2", "1", "eps"))


_BRANCH_NOTE = ("the unit characteristic root at the origin is exact for "
                "every eps and tracks the exponent-0 branch of the limit")

_PRESETS = {
    "heun": (_heun_preset, "HE", _BRANCH_NOTE),
    "confluent": (_confluent_preset, "CHE", _BRANCH_NOTE),
    "biconfluent": (_biconfluent_preset, "BHE", _BRANCH_NOTE),
    "doubly-confluent": (_doubly_confluent_preset, "DHE", _BRANCH_NOTE),
}


def preset_names():
    return tuple(_PRESETS)


def _preset(name):
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError("unknown preset %r; have %s"
                         % (name, ", ".join(_PRESETS))) from None


def preset_family(name) -> EpsilonFamily:
    """A shipped eps-family by name."""
    return _preset(name)[0]()


def preset_target(name) -> str:
    """The ODE class the named preset limits to."""
    return _preset(name)[1]


def preset_note(name) -> str:
    """How the preset's q-branch maps to the ODE branch."""
    return _preset(name)[2]
