"""Catalog of the five Heun-class differential operators.

Each member of the degeneration chain (the four-point equation, its
confluent, biconfluent, doubly confluent and triconfluent collapses) is
held as a record of named parameters.  to_operator expands a record into
the polynomial-row operator format of climit.HeunODE, and match_class
runs the other way: it normalizes an operator by an affine change of
variable plus an overall scale and reads the named parameters back off,
or reports the obstruction as a NoMatch value.

Conventions baked into the displays, written for the function y(z):

    four-point   y'' + (gamma/z + delta/(z-1) + ehat/(z-t)) y'
                     + (alpha*beta*z - B) / (z(z-1)(z-t)) y = 0
    confluent    y'' + (gamma/z + delta/(z-1) - beta) y'
                     + (-alpha*beta*z + B) / (z(z-1)) y = 0
    biconfluent  y'' + (-z - delta + gamma/z) y' + (-alpha + B/z) y = 0
    doubly conf. y'' + (-1 - gamma/z - delta/z**2) y'
                     + (-alpha/z + B/z**2) y = 0
    triconfluent y'' + (-z**2 - gamma) y' + (alpha*z + B) y = 0

The accessory field holds B throughout.  The letter ehat stands in for
the third local exponent weight of the four-point display so the name
cannot collide with the small expansion parameter used by climit.
"""

import math
from fractions import Fraction

from .climit import (AllZero, HeunODE, Unclassifiable, _div, _pad,
                     _quad_roots, _sqrt_exact, classify_ode)

__all__ = ["ConstraintViolation", "NoMatch", "HeunParams", "HEParams",
           "CHEParams", "BHEParams", "DHEParams", "THEParams",
           "PARAM_CLASSES", "to_operator", "match_class"]


class ConstraintViolation(ValueError):
    """Parameter record breaks an exact defining relation of its class."""


class NoMatch:
    """Negative match_class outcome; falsy, keeps the obstruction text."""

    __slots__ = ("obstruction",)

    def __init__(self, obstruction):
        object.__setattr__(self, "obstruction", obstruction)

    def __setattr__(self, name, value):
        raise AttributeError("NoMatch is immutable")

    def __bool__(self):
        return False

    def __repr__(self):
        return "NoMatch(%r)" % (self.obstruction,)


def _coerce(value, field):
    if isinstance(value, bool):
        raise TypeError("parameter %s must be a number" % field)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, (float, complex)):
        return value
    raise TypeError("parameter %s must be rational, float or complex, "
                    "got %r" % (field, type(value).__name__))


def _close(a, b):
    """Equality, exact for exact operands, tolerant once floats enter."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(a - b) <= 1e-9 * (1 + abs(a) + abs(b))


class HeunParams:
    """Common behaviour of the five parameter records."""

    CLASS = None
    FIELDS = ()
    __slots__ = ()

    def __init__(self, *args, **kw):
        names = self.FIELDS
        if len(args) > len(names):
            raise TypeError("%s takes %d parameters" % (
                type(self).__name__, len(names)))
        got = dict(zip(names, args))
        for k, v in kw.items():
            if k not in names:
                raise TypeError("unknown parameter %r" % k)
            if k in got:
                raise TypeError("parameter %r given twice" % k)
            got[k] = v
        missing = [n for n in names if n not in got]
        if missing:
            raise TypeError("missing parameters: %s" % ", ".join(missing))
        for n in names:
            object.__setattr__(self, n, _coerce(got[n], n))
        self._validate()

    def _validate(self):
        pass

    def __setattr__(self, name, value):
        raise AttributeError("%s is immutable" % type(self).__name__)

    def as_dict(self):
        d = {"class": self.CLASS}
        d.update((n, getattr(self, n)) for n in self.FIELDS)
        return d

    def __eq__(self, other):
        if not isinstance(other, HeunParams):
            return NotImplemented
        return (self.CLASS == other.CLASS and
                all(getattr(self, n) == getattr(other, n)
                    for n in self.FIELDS))

    def __hash__(self):
        return hash((self.CLASS,) + tuple(
            str(getattr(self, n)) for n in self.FIELDS))

    def __repr__(self):
        body = ", ".join("%s=%s" % (n, getattr(self, n))
                         for n in self.FIELDS)
        return "%s(%s)" % (type(self).__name__, body)


class HEParams(HeunParams):
    """Four regular points 0, 1, t, infinity.

    The exponent weights satisfy gamma + delta + ehat = alpha + beta + 1
    exactly; t may not sit on 0 or 1.  match_class returns alpha, beta
    in sorted order, the declared two-element symmetry orbit.
    """

    CLASS = "HE"
    FIELDS = ("alpha", "beta", "gamma", "delta", "ehat", "t", "accessory")
    __slots__ = FIELDS

    def _validate(self):
        lhs = self.gamma + self.delta + self.ehat
        rhs = self.alpha + self.beta + 1
        if not _close(lhs, rhs):
            raise ConstraintViolation(
                "exponent weights unbalanced: gamma + delta + ehat = %s "
                "but alpha + beta + 1 = %s" % (lhs, rhs))
        if self.t == 0 or self.t == 1:
            raise ConstraintViolation(
                "t = %s places the movable branch point on a fixed one"
                % (self.t,))

    def singular_points(self):
        return {"regular": (0, 1, self.t, "Infinity"), "irregular": ()}


class CHEParams(HeunParams):
    """Regular points 0 and 1, irregular point at infinity."""

    CLASS = "CHE"
    FIELDS = ("alpha", "beta", "gamma", "delta", "accessory")
    __slots__ = FIELDS

    def _validate(self):
        if self.beta == 0:
            # the -beta drift term is what keeps infinity irregular
            raise ConstraintViolation(
                "beta = 0 collapses the irregular point at infinity "
                "(reduced confluent shape)")

    def singular_points(self):
        return {"regular": (0, 1), "irregular": ("Infinity",)}


class BHEParams(HeunParams):
    """Regular origin, irregular infinity of doubled rank."""

    CLASS = "BHE"
    FIELDS = ("alpha", "gamma", "delta", "accessory")
    __slots__ = FIELDS

    def singular_points(self):
        return {"regular": (0,), "irregular": ("Infinity",)}


class DHEParams(HeunParams):
    """Irregular points at both the origin and infinity."""

    CLASS = "DHE"
    FIELDS = ("alpha", "gamma", "delta", "accessory")
    __slots__ = FIELDS

    def _validate(self):
        if self.delta == 0:
            raise ConstraintViolation(
                "delta = 0 ramifies the origin (reduced shape)")

    def singular_points(self):
        return {"regular": (), "irregular": (0, "Infinity")}


class THEParams(HeunParams):
    """Single irregular point at infinity; the origin is ordinary."""

    CLASS = "THE"
    FIELDS = ("alpha", "gamma", "accessory")
    __slots__ = FIELDS

    def singular_points(self):
        return {"regular": (), "irregular": ("Infinity",)}


PARAM_CLASSES = {c.CLASS: c for c in
                 (HEParams, CHEParams, BHEParams, DHEParams, THEParams)}


# -- expansion into operator rows ------------------------------------------

def to_operator(p: HeunParams) -> HeunODE:
    """Expand a parameter record into classified operator rows.

    The display is multiplied through by the least power of z clearing
    all denominators, giving  z^2*S(z)*y'' + z*F(z)*y' + Q(z)*y = 0
    with polynomial rows.  The result is run through classify_ode, so
    its class tag and singularity list always agree with the limit
    module's reading of the same rows.
    """
    if not isinstance(p, HeunParams) or p.CLASS is None:
        raise TypeError("expected a parameter record, got %r" % (p,))
    p._validate()
    a, B = p.alpha, p.accessory
    g = p.gamma
    if p.CLASS == "HE":
        b, d, e, t = p.beta, p.delta, p.ehat, p.t
        rows = ([t, -(1 + t), 1],
                [g * t, -(g * (1 + t) + d * t + e), g + d + e],
                [0, -B, a * b])
    elif p.CLASS == "CHE":
        b, d = p.beta, p.delta
        rows = ([-1, 1, 0],
                [-g, g + d + b, -b],
                [0, B, -a * b])
    elif p.CLASS == "BHE":
        d = p.delta
        rows = ([1, 0, 0],
                [g, -d, -1],
                [0, B, -a])
    elif p.CLASS == "DHE":
        d = p.delta
        rows = ([0, 1, 0],
                [-d, -g, -1],
                [0, B, -a])
    else:
        rows = ([1, 0, 0, 0],
                [0, -g, 0, -1],
                [0, 0, B, a])
    return classify_ode(HeunODE(*rows))


# -- recovery --------------------------------------------------------------

def _sqrt_any(v):
    if isinstance(v, Fraction):
        r = _sqrt_exact(v)
        if r is not None:
            return r
    return math.sqrt(v)


def _cbrt_any(v):
    """Real cube root, exact on perfect rational cubes."""
    if isinstance(v, Fraction):
        sign = -1 if v < 0 else 1
        num, den = abs(v.numerator), v.denominator
        rn = round(num ** (1 / 3))
        rd = round(den ** (1 / 3))
        for cn in (rn - 1, rn, rn + 1):
            for cd in (rd - 1, rd, rd + 1):
                if cn > 0 and cd > 0 and cn ** 3 == num and cd ** 3 == den:
                    return Fraction(sign * cn, cd)
        v = float(v)
    return math.copysign(abs(v) ** (1 / 3), v)


def _key(v):
    z = complex(v)
    return (z.real, z.imag)


def _rows(ode, width=3):
    return (_pad(ode.second, width), _pad(ode.first, width),
            _pad(ode.zeroth, width))


def _match_he(ode):
    s, f, q = _rows(ode)
    if q[0] != 0:
        return NoMatch("a constant term survives in the undifferentiated "
                       "row; split off an origin power first")
    roots = _quad_roots(s[2], s[1], s[0])
    if len(roots) != 2 or roots[0] == roots[1]:
        return NoMatch("the finite branch points coincide")
    if 1 in roots:
        pairs = [(Fraction(1), roots[1] if roots[0] == 1 else roots[0])]
    else:
        pairs = [(roots[0], roots[1]), (roots[1], roots[0])]
    candidates = []
    for sigma, other in pairs:
        n = s[2] * sigma * sigma
        t = _div(other, sigma)
        total = _div(f[2] * sigma * sigma, n)   # gamma + delta + ehat
        gamma = _div(_div(f[0], n), t)
        m1 = -_div(f[1] * sigma, n)
        delta = _div(m1 - gamma * t - total, t - 1)
        ehat = total - gamma - delta
        ab = _div(q[2] * sigma * sigma, n)
        B = -_div(q[1] * sigma, n)
        alpha, beta = _quad_roots(Fraction(1), -(total - 1), ab)
        candidates.append(
            HEParams(alpha, beta, gamma, delta, ehat, t, B))
    candidates.sort(key=lambda c: tuple(_key(getattr(c, n))
                                        for n in HEParams.FIELDS))
    return candidates[0]


def _match_che(ode):
    s, f, q = _rows(ode)
    if q[0] != 0:
        return NoMatch("a constant term survives in the undifferentiated "
                       "row; split off an origin power first")
    sigma = _div(-s[0], s[1])
    n = -s[0]
    beta = -_div(f[2] * sigma * sigma, n)
    if beta == 0:
        return NoMatch("reduced confluent shape: no quadratic term in "
                       "the first-derivative row")
    gamma = -_div(f[0], n)
    delta = _div(f[1] * sigma, n) - gamma - beta
    alpha = _div(-_div(q[2] * sigma * sigma, n), beta)
    B = _div(q[1] * sigma, n)
    return CHEParams(alpha, beta, gamma, delta, B)


def _match_bhe(ode):
    s, f, q = _rows(ode)
    if q[0] != 0:
        return NoMatch("a constant term survives in the undifferentiated "
                       "row; split off an origin power first")
    if f[2] == 0:
        return NoMatch("no quadratic term in the first-derivative row; "
                       "the infinity structure is too degenerate")
    sig2 = _div(-s[0], f[2])
    if isinstance(sig2, Fraction) and sig2 < 0:
        return NoMatch("normalizing the infinity rows needs an imaginary "
                       "stretch; outside the real catalog")
    sigma = _sqrt_any(sig2)
    n = s[0]
    gamma = _div(f[0], n)
    delta = -_div(f[1] * sigma, n)
    alpha = -_div(q[2] * sig2, n)
    B = _div(q[1] * sigma, n)
    return BHEParams(alpha, gamma, delta, B)


def _match_dhe(ode):
    s, f, q = _rows(ode)
    if q[0] != 0:
        return NoMatch("a constant term survives in the undifferentiated "
                       "row; split off an origin power first")
    if f[2] == 0:
        return NoMatch("no quadratic term in the first-derivative row; "
                       "the infinity structure is too degenerate")
    sigma = _div(-s[1], f[2])
    n = s[1] * sigma
    gamma = -_div(f[1] * sigma, n)
    delta = -_div(f[0], n)
    if delta == 0:
        return NoMatch("reduced DHE: the origin is ramified")
    alpha = -_div(q[2] * sigma * sigma, n)
    B = _div(q[1] * sigma, n)
    return DHEParams(alpha, gamma, delta, B)


def _match_the(ode):
    s, f, q = _rows(ode, width=4)
    if s[1] or s[2] or s[3] or f[0] or f[2] or q[0] or q[1]:
        return NoMatch("extra terms outside the triconfluent sparsity "
                       "pattern")
    if f[3] == 0:
        return NoMatch("no cubic drift term; infinity is too tame for "
                       "the triconfluent display")
    sig3 = _div(-s[0], f[3])
    sigma = _cbrt_any(sig3)
    n = s[0]
    gamma = -_div(f[1] * sigma, n)
    alpha = _div(q[3] * sig3, n)
    B = _div(q[2] * sigma * sigma, n)
    return THEParams(alpha, gamma, B)


_REFUSED = {
    "ReducedCHE": "reduced confluent shape: no quadratic term in the "
                  "first-derivative row",
    "ReducedDHE": "reduced DHE: the origin is ramified or infinity is "
                  "too tame",
    "DoublyReducedDHE": "reduced DHE: ramified at the origin and tame "
                        "at infinity",
    "Other": "cubic rows outside the triconfluent sparsity pattern",
}

_MATCHERS = {"HE": _match_he, "CHE": _match_che, "BHE": _match_bhe,
             "DHE": _match_dhe, "THE": _match_the}


def match_class(ode: HeunODE):
    """Read named parameters off an operator, or say why that fails.

    Unclassified input is classified first.  The operator is normalized
    by x -> sigma*x and an overall scale; the stretch sigma is pinned by
    the highest-degree drift entry, with ties broken toward an exact
    identity map and then toward the lexicographically least parameter
    tuple.  Never raises: every obstruction comes back as a NoMatch
    value whose obstruction attribute says what blocked the reading.

    Orbit declarations: the four-point reading returns alpha, beta as a
    sorted pair (the display is symmetric in them), and the biconfluent
    stretch uses the positive square root (the negative one negates
    delta and the accessory entry).
    """
    if ode.class_ is None:
        try:
            ode = classify_ode(ode)
        except (AllZero, Unclassifiable) as exc:
            return NoMatch(str(exc))
    matcher = _MATCHERS.get(ode.class_)
    if matcher is None:
        return NoMatch(_REFUSED.get(
            ode.class_, "unrecognized operator class %r" % (ode.class_,)))
    try:
        return matcher(ode)
    except (ZeroDivisionError, ConstraintViolation, ValueError) as exc:
        # rows inconsistent with the declared class tag
        return NoMatch("degenerate rows for class %s: %s"
                       % (ode.class_, exc))
