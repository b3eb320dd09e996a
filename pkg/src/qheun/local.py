"""Local analysis of three-term equations at the origin and at infinity.

Exponents of trial solutions x^r(c0 + c1 x + ...) enter only through
s = q^r: at the origin the lowest-order balance gives a quadratic in s
built from the constant coefficient slots, at infinity the top-degree
balance gives the mirrored quadratic.  Generic series coefficients then
follow from a first-order recurrence; a vanishing recurrence denominator
is reported as resonance rather than patched with logarithms.
"""

import math
from fractions import Fraction

from .qdiff import QDiffEq


class DegenerateEquation(ValueError):
    """All three extreme coefficient slots vanish; no exponent data."""


class Resonance(ZeroDivisionError):
    """A recurrence denominator vanished at some positive order."""


class UnboundParameter(ValueError):
    """A coefficient still contains a free parameter."""


_LOCATIONS = ("Zero", "Infinity")


class CharData:
    """Quadratic c2 s^2 + c1 s + c0 for s = q^r at one boundary point.

    ``roots`` holds the nonzero admissible values of s when all three
    coefficients are numeric, and None in symbolic mode (the quadratic
    itself is then the result).  ``regularity`` is "RegularLike" when
    both extreme coefficients are nonzero and "IrregularLike" otherwise.
    """

    __slots__ = ("location", "c2", "c1", "c0", "roots", "regularity")

    def __init__(self, location, c2, c1, c0, roots, regularity):
        self.location = location
        self.c2 = c2
        self.c1 = c1
        self.c0 = c0
        self.roots = roots
        self.regularity = regularity

    def __repr__(self):
        return ("CharData(%s, c2=%s, c1=%s, c0=%s, roots=%r, %s)"
                % (self.location, self.c2, self.c1, self.c0, self.roots,
                   self.regularity))


def _exact_sqrt(f):
    """Square root of a nonnegative Fraction if it is one, else None."""
    n, d = f.numerator, f.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _quad_roots(c2, c1, c0):
    """Nonzero roots of c2 s^2 + c1 s + c0, exact when possible."""
    if not c2:
        if not c1:
            return ()
        r = -c0 / c1
        return (r,) if r else ()
    disc = c1 * c1 - 4 * c2 * c0
    if isinstance(disc, Fraction) and disc >= 0:
        root = _exact_sqrt(disc)
        if root is not None:
            pair = ((-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2))
            return tuple(r for r in pair if r)
    if isinstance(disc, complex) or disc < 0:
        root = (disc + 0j) ** 0.5
    else:
        root = math.sqrt(disc)
    pair = ((-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2))
    return tuple(r for r in pair if r)


def _sort_key(r):
    c = complex(r)
    return (c.real, c.imag)


def char_exponents(eq: QDiffEq, at="Zero") -> CharData:
    """Characteristic quadratic for s = q^r at one boundary point.

    At "Zero" the quadratic is P0 s^2 + Z0 s + M0 from the constant
    slots; at "Infinity" it is M_D s^2 + Z_D s + P_D from the top degree
    D.  Raises DegenerateEquation when all three slots vanish.
    """
    if at not in _LOCATIONS:
        raise ValueError("unknown location %r" % (at,))
    if at == "Zero":
        c2, c1, c0 = (eq.coeff(n, 0) for n in ("P", "Z", "M"))
    else:
        top = eq.degree
        c2, c1, c0 = (eq.coeff(n, top) for n in ("M", "Z", "P"))
    if c2.is_zero and c1.is_zero and c0.is_zero:
        raise DegenerateEquation(
            "no exponent data at %s: extreme coefficients all vanish" % at)
    regularity = ("RegularLike"
                  if not c2.is_zero and not c0.is_zero else "IrregularLike")
    roots = None
    if c2.is_const() and c1.is_const() and c0.is_const():
        vals = _quad_roots(c2.const_value(), c1.const_value(),
                           c0.const_value())
        roots = tuple(sorted(vals, key=_sort_key))
    return CharData(at, c2, c1, c0, roots, regularity)


class SeriesSolution:
    """Truncated local solution x^r (c[0] + c[1] x + ... + c[N] x^N).

    The exponent enters as s = q^r only.  c[0] = 1.  ``sides`` keeps the
    numeric coefficient values (P, Z, M lists by degree) the series was
    computed against, so residual evaluation needs no rebinding.
    """

    __slots__ = ("location", "s", "coefficients", "q", "binding", "sides")

    def __init__(self, location, s, coefficients, q, binding, sides):
        self.location = location
        self.s = s
        self.coefficients = coefficients
        self.q = q
        self.binding = binding
        self.sides = sides

    def __repr__(self):
        return ("SeriesSolution(%s, s=%r, N=%d)"
                % (self.location, self.s, len(self.coefficients) - 1))


def _side_values(eq, binding):
    """Numeric per-degree values of the three sides, or UnboundParameter."""
    out = {}
    for name in ("P", "Z", "M"):
        vals = []
        for k in range(eq.degree + 1):
            try:
                vals.append(eq.coeff(name, k).evaluate(binding))
            except KeyError as missing:
                raise UnboundParameter(
                    "coefficient (%s, %d) needs parameter %s"
                    % (name, k, missing))
        out[name] = vals
    return out


def series_solution(eq: QDiffEq, binding, rootIndex=0, N=10):
    """Series coefficients c[0..N] at the origin for one exponent choice.

    ``binding`` must give numbers for every parameter in the equation
    and for q.  The exponent value s is the rootIndex-th nonzero root
    (sorted) of the characteristic quadratic.  c[0] = 1 and each c[m]
    solves the order-m collected equation; a vanishing denominator
    raises Resonance.
    """
    binding = dict(binding or {})
    if "q" not in binding:
        raise UnboundParameter("the recurrence needs a numeric q")
    q = binding["q"]
    sides = _side_values(eq, binding)
    pv, zv, mv = sides["P"], sides["Z"], sides["M"]
    roots = tuple(sorted(_quad_roots(pv[0], zv[0], mv[0]), key=_sort_key))
    if not 0 <= rootIndex < len(roots):
        raise ValueError("rootIndex %d out of range: %d admissible root(s)"
                         % (rootIndex, len(roots)))
    s = roots[rootIndex]

    def slot(k, n):
        # multiplier of c[n] coming from degree-k coefficient slots
        total = zv[k]
        if pv[k]:
            total += pv[k] * s * q ** n
        if mv[k]:
            total += mv[k] * q ** (-n) / s
        return total

    coeffs = [1]
    top = eq.degree
    for m in range(1, N + 1):
        den = slot(0, m)
        if not den:
            raise Resonance("recurrence denominator vanishes at order %d" % m)
        acc = 0
        for n in range(max(0, m - top), m):
            acc += slot(m - n, n) * coeffs[n]
        coeffs.append(-acc / den)
    return SeriesSolution("Zero", s, tuple(coeffs), q, binding, sides)


def residual(eq: QDiffEq, sol: SeriesSolution, x):
    """|P(x) f(qx) + Z(x) f(x) + M(x) f(x/q)| on the truncated series.

    The common factor x^r is dropped: the three shifted copies of the
    series are evaluated through s and powers of q, so the value is a
    plain number (exactly zero for an exact polynomial solution).
    """
    sides = _side_values(eq, sol.binding)
    q, s = sol.q, sol.s
    up = sum(c * q ** n * x ** n for n, c in enumerate(sol.coefficients))
    mid = sum(c * x ** n for n, c in enumerate(sol.coefficients))
    low = sum(c * q ** (-n) * x ** n
              for n, c in enumerate(sol.coefficients))

    def poly(vals):
        return sum(v * x ** k for k, v in enumerate(vals))

    total = (poly(sides["P"]) * s * up + poly(sides["Z"]) * mid
             + poly(sides["M"]) * low / s)
    return abs(total)
