"""Univariate polynomial helpers over exact rational-function coefficients.

A polynomial in the shift variable is stored as a plain list of RatFun
coefficients indexed by degree (index 0 is the constant term), with no
trailing zeros.  The zero polynomial is the empty list.  Coefficients are
rational functions of the remaining parameters, so division, gcd and lcm
are exact field operations.
"""

from .symkernel import RatFun, as_ratfun, _RF_ZERO

_ZERO = _RF_ZERO
_ONE = as_ratfun(1)


def trim(p):
    """Drop trailing zero coefficients; canonical form for all helpers."""
    p = [as_ratfun(c) for c in p]
    while p and p[-1].is_zero:
        p.pop()
    return p


def is_zero(p):
    return len(trim(p)) == 0


def degree(p):
    """Degree of p, or -1 for the zero polynomial."""
    return len(trim(p)) - 1


def valuation(p):
    """Lowest degree with a nonzero coefficient, or -1 for zero."""
    p = trim(p)
    for k, c in enumerate(p):
        if not c.is_zero:
            return k
    return -1


def constant(c):
    return trim([as_ratfun(c)])


def add(a, b):
    a, b = trim(a), trim(b)
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        ca = a[k] if k < len(a) else _ZERO
        cb = b[k] if k < len(b) else _ZERO
        out.append(ca + cb)
    return trim(out)


def neg(a):
    return [-c for c in trim(a)]


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    """Multiply every coefficient by the same x-free factor."""
    c = as_ratfun(c)
    if c.is_zero:
        return []
    return trim([ci * c for ci in trim(a)])


def mul(a, b):
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca.is_zero:
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return trim(out)


def shift_arg(a, c):
    """Substitute x -> c*x: the degree-k coefficient picks up c^k."""
    c = as_ratfun(c)
    out = []
    ck = _ONE
    for k, ca in enumerate(trim(a)):
        if k:
            ck = ck * c
        out.append(ca * ck)
    return trim(out)


def reverse(a, d):
    """Coefficients of x^d * a(1/x); d must be >= degree(a)."""
    a = trim(a)
    if d + 1 < len(a):
        raise ValueError("reversal degree below actual degree")
    out = [_ZERO] * (d + 1)
    for k, ca in enumerate(a):
        out[d - k] = ca
    return trim(out)


def eval_at(a, v):
    """Evaluate at an exact point by Horner's rule."""
    v = as_ratfun(v)
    acc = _ZERO
    for ca in reversed(trim(a)):
        acc = acc * v + ca
    return acc


def eq(a, b):
    a, b = trim(a), trim(b)
    if len(a) != len(b):
        return False
    return all(ca == cb for ca, cb in zip(a, b))


def divmod_x(a, b):
    """Polynomial division with remainder over the coefficient field."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [_ZERO] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    lead = b[-1]
    while len(rem) >= len(b) and trim(rem):
        rem = trim(rem)
        if len(rem) < len(b):
            break
        k = len(rem) - len(b)
        c = rem[-1] / lead
        quot[k] = c
        for j, cb in enumerate(b):
            rem[k + j] = rem[k + j] - c * cb
        rem = rem[:-1]
    return trim(quot), trim(rem)


def divexact(a, b):
    quot, rem = divmod_x(a, b)
    if rem:
        raise ValueError("polynomial division is not exact")
    return quot


def monic(a):
    a = trim(a)
    if not a:
        return a
    return scale(a, _ONE / a[-1])


def gcd(a, b):
    """Monic gcd by the Euclidean algorithm over the coefficient field."""
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_x(a, b)
        a, b = b, r
    return monic(a)


def lcm(a, b):
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    g = gcd(a, b)
    return monic(mul(divexact(a, g), b))


def from_ratfun(r, var):
    """Split a rational function into (numerator, denominator) polynomial
    pairs in `var`, with var-free RatFun entries."""
    r = as_ratfun(r)
    num_u = r.num.univariate(var)
    den_u = r.den.univariate(var)
    nmax = max(num_u, default=-1)
    dmax = max(den_u, default=-1)
    num = [RatFun(num_u.get(k, 0)) for k in range(nmax + 1)]
    den = [RatFun(den_u.get(k, 0)) for k in range(dmax + 1)]
    return trim(num), trim(den)
