"""Boundary exponents and local series solutions."""

from fractions import Fraction
import random

import pytest
from hypothesis import given, strategies as st

from qheun.gauge import gauge_power
from qheun.lax import derive_equation
from qheun.local import (CharData, DegenerateEquation, Resonance,
                         SeriesSolution, UnboundParameter, char_exponents,
                         residual, series_solution)
from qheun.qdiff import QDiffEq
from qheun.symkernel import parse_expr, rat, ratfun_eq, sym

V = ("x", "z", "q", "t", "l", "m", "w", "d", "g", "k1", "k2",
     "th1", "th2", "a1", "a2", "a3",
     "n1", "n2", "n3", "n4", "n5", "n6", "n7", "n8")


def P(text):
    return parse_expr(text, V)


def _eq(p, z, m, variable="x"):
    return QDiffEq.from_scalar_coefficients(P(p), P(z), P(m), variable)


def _a4_binding(r1, r2, q=Fraction(9, 10)):
    """Bindings whose origin exponents are exactly s in {r1, r2}."""
    a1, a2, a3 = Fraction(2), Fraction(3), Fraction(5)
    k1 = Fraction(7, 2)
    t = Fraction(1, 4)
    th1, th2 = -a1 * r1, -a1 * r2
    k2 = -a1 * r1 * r2 / (k1 * a2 * a3)
    return {"q": q, "t": t, "k1": k1, "k2": k2, "th1": th1, "th2": th2,
            "a1": a1, "a2": a2, "a3": a3, "m": Fraction(5, 3)}


# -- characteristic quadratics ----------------------------------------------

def test_catalog_origin_quadratic():
    cz = char_exponents(derive_equation("murata", "A4"), "Zero")
    assert cz.location == "Zero"
    assert cz.regularity == "RegularLike"
    assert cz.roots is None
    scalar = P("-t")
    assert ratfun_eq(cz.c2, scalar * P("a1"))
    assert ratfun_eq(cz.c1, scalar * P("th1 + th2"))
    assert ratfun_eq(cz.c0, scalar * P("-k1*k2*a2*a3"))


def test_catalog_infinity_single_root():
    ci = char_exponents(derive_equation("murata", "A4"), "Infinity")
    assert ci.regularity == "IrregularLike"
    assert ci.c0.is_zero
    # the one admissible exponent solves k2*s - q = 0
    assert ratfun_eq(ci.c1 * P("k2"), -ci.c2 * P("q"))
    numeric = char_exponents(
        derive_equation("murata", "A4", _a4_binding(rat(2), rat(3))),
        "Infinity")
    b = _a4_binding(rat(2), rat(3))
    assert numeric.roots == (b["q"] / b["k2"],)


def test_factored_quadratic_roots():
    c = Fraction(3, 7)
    eq = _eq("1", "-(1 + 3/7)", "3/7")
    cz = char_exponents(eq, "Zero")
    assert cz.roots == (c, 1)
    assert cz.regularity == "RegularLike"


def test_irrational_roots_fall_back_to_floats():
    cz = char_exponents(_eq("1", "-3", "1"), "Zero")
    assert len(cz.roots) == 2
    assert all(isinstance(r, float) for r in cz.roots)
    assert abs(cz.roots[0] * cz.roots[1] - 1) < 1e-12


def test_complex_roots():
    cz = char_exponents(_eq("1", "1", "1"), "Zero")
    assert len(cz.roots) == 2
    assert all(isinstance(r, complex) for r in cz.roots)


def test_degenerate_origin():
    with pytest.raises(DegenerateEquation):
        char_exponents(_eq("x", "x", "x"), "Zero")
    with pytest.raises(ValueError):
        char_exponents(_eq("1", "1", "1"), "Everywhere")


@given(st.fractions(min_value=-5, max_value=5),
       st.fractions(min_value=-5, max_value=5))
def test_vieta(r1, r2):
    eq = QDiffEq.from_scalar_coefficients(
        rat(1), rat(-(r1 + r2)), rat(r1 * r2), "x")
    cz = char_exponents(eq, "Zero")
    want = tuple(sorted({r for r in (r1, r2) if r}
                        if r1 * r2 == 0 else (r1, r2)))
    assert cz.roots == want


def test_gauge_power_shifts_characteristic():
    eq = derive_equation("murata", "A4")
    base = char_exponents(eq, "Zero")
    shifted = char_exponents(gauge_power(eq, 2), "Zero")
    q2 = P("q^2")
    assert ratfun_eq(shifted.c2, base.c2 * q2)
    assert ratfun_eq(shifted.c1, base.c1)
    assert ratfun_eq(shifted.c0, base.c0 / q2)
    b = _a4_binding(rat(2), rat(3))
    bound = derive_equation("murata", "A4", b)
    num = char_exponents(bound, "Zero")
    gauged = gauge_power(bound, 1)
    renum = QDiffEq.from_scalar_coefficients(
        *(gauged.scalar_coefficient(n).substitute({"q": rat(b["q"])})
          for n in ("P", "Z", "M")), "x")
    gnum = char_exponents(renum, "Zero")
    assert gnum.roots == tuple(r / b["q"] for r in num.roots)


_CORNERS = {
    ("murata", "A4"): ("RegularLike", "IrregularLike"),
    ("murata", "A5"): ("IrregularLike", "IrregularLike"),
    ("murata", "A5s"): ("IrregularLike", "IrregularLike"),
    ("murata", "A6"): ("IrregularLike", "IrregularLike"),
    ("murata", "A6s"): ("IrregularLike", "IrregularLike"),
    ("murata", "A7"): ("IrregularLike", "IrregularLike"),
    ("murata", "A7p"): ("IrregularLike", "IrregularLike"),
    ("kny", "D5"): ("RegularLike", "RegularLike"),
    ("kny", "A4w"): ("RegularLike", "IrregularLike"),
    ("kny", "E3a"): ("RegularLike", "IrregularLike"),
    ("kny", "E3b"): ("IrregularLike", "IrregularLike"),
    ("kny", "E2a"): ("IrregularLike", "IrregularLike"),
    ("kny", "E2b"): ("IrregularLike", "IrregularLike"),
    ("kny", "A1w"): ("IrregularLike", "IrregularLike"),
    ("kny", "A1w8"): ("IrregularLike", "IrregularLike"),
}


@pytest.mark.parametrize("catalog,family", sorted(_CORNERS))
def test_regularity_matches_corner_pattern(catalog, family):
    eq = derive_equation(catalog, family)
    sup = eq.support()
    want_zero, want_inf = _CORNERS[(catalog, family)]
    cz = char_exponents(eq, "Zero")
    assert cz.regularity == want_zero
    assert (cz.regularity == "RegularLike") == (
        ("P", 0) in sup and ("M", 0) in sup)
    ci = char_exponents(eq, "Infinity")
    assert ci.regularity == want_inf
    top = eq.degree
    assert (ci.regularity == "RegularLike") == (
        ("P", top) in sup and ("M", top) in sup)


# -- series solutions -------------------------------------------------------

def test_geometric_product_coefficients():
    # f(x) - f(qx) = x f(x) has the classical product-denominator series
    eq = _eq("-1", "1 - x", "0")
    q = Fraction(1, 2)
    sol = series_solution(eq, {"q": q}, rootIndex=0, N=12)
    assert sol.s == 1
    assert sol.coefficients[0] == 1
    denom = Fraction(1)
    for n in range(1, 13):
        denom *= 1 - q ** n
        assert sol.coefficients[n] == 1 / denom


def test_constant_solution():
    eq = _eq("1 + x", "-2 - 3*x", "1 + 2*x")
    sol = series_solution(eq, {"q": Fraction(1, 3)}, rootIndex=0, N=8)
    assert sol.s == 1
    assert sol.coefficients == (1,) + (0,) * 8


def test_engineered_power_solution_and_exact_residual():
    # Z chosen so x^3 solves the equation exactly
    q = Fraction(1, 3)
    k = 3
    p, m = P("1 + 2*x"), P("5*x + x^2")
    z = -(P("q") ** k * p + m / P("q") ** k)
    eq = QDiffEq.from_scalar_coefficients(p, z, m, "x")
    binding = {"q": q}
    target = q ** k
    cz = char_exponents(
        QDiffEq.from_scalar_coefficients(
            *(c.substitute({"q": rat(q)}) for c in (p, z, m)), "x"), "Zero")
    idx = cz.roots.index(target)
    sol = series_solution(eq, binding, rootIndex=idx, N=10)
    assert sol.s == target
    assert sol.coefficients == (1,) + (0,) * 10
    for xv in (Fraction(1, 20), Fraction(3, 5), Fraction(7)):
        assert residual(eq, sol, xv) == 0


def _dense_solve(slot, N, top):
    """Gaussian-elimination oracle for the first N collected equations."""
    rows = []
    rhs = []
    for m in range(1, N + 1):
        rows.append([slot(m - n, n) if 0 <= m - n <= top else 0
                     for n in range(1, N + 1)])
        rhs.append(-(slot(m, 0) if m <= top else 0))
    for col in range(N):
        piv = next(r for r in range(col, N) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(N):
            if r != col and rows[r][col]:
                f = rows[r][col] / rows[col][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
                rhs[r] -= f * rhs[col]
    return [rhs[r] / rows[r][r] for r in range(N)]


def test_series_matches_dense_solve():
    rng = random.Random(424242)
    for _ in range(3):
        r1 = Fraction(rng.randrange(1, 9), rng.randrange(1, 5))
        r2 = r1 + Fraction(rng.randrange(1, 7), 3)
        b = _a4_binding(r1, r2)
        eq = derive_equation("murata", "A4", b)
        q = b["q"]
        vals = {n: [eq.coeff(n, k).evaluate({}) for k in range(3)]
                for n in ("P", "Z", "M")}
        for idx in (0, 1):
            sol = series_solution(eq, {"q": q}, rootIndex=idx, N=10)
            s = sol.s

            def slot(k, n):
                return (vals["P"][k] * s * q ** n + vals["Z"][k]
                        + vals["M"][k] * q ** (-n) / s)

            oracle = _dense_solve(slot, 10, eq.degree)
            assert list(sol.coefficients[1:]) == oracle


def test_resonant_exponent_pair():
    q = Fraction(1, 2)
    eq = _eq("1", "-(1 + 1/2) + x", "1/2")
    # roots 1/2 and 1 differ by q, so the larger one resonates at order 1
    with pytest.raises(Resonance):
        series_solution(eq, {"q": q}, rootIndex=1, N=5)
    sol = series_solution(eq, {"q": q}, rootIndex=0, N=5)
    assert sol.s == q


def test_unbound_parameter():
    eq = derive_equation("murata", "A4")
    with pytest.raises(UnboundParameter):
        series_solution(eq, {"q": Fraction(1, 2)}, 0, 5)
    with pytest.raises(UnboundParameter):
        series_solution(_eq("1", "-2", "1"), {}, 0, 5)


def test_root_index_out_of_range():
    eq = _eq("1", "-2", "1")
    with pytest.raises(ValueError):
        series_solution(eq, {"q": Fraction(1, 2)}, rootIndex=2, N=5)


def test_catalog_series_residual_bound():
    b = _a4_binding(Fraction(2), Fraction(3))
    eq = derive_equation("murata", "A4", b)
    sol = series_solution(eq, {"q": b["q"]}, rootIndex=0, N=30)
    magnitudes = [abs(eq.coeff(n, k).evaluate({}))
                  for n in ("P", "Z", "M") for k in range(3)]
    res = residual(eq, sol, Fraction(1, 20))
    assert res > 0
    assert float(res) < 1e-12 * float(max(magnitudes))


def test_residual_decreases_with_truncation_order():
    b = _a4_binding(Fraction(2), Fraction(3))
    eq = derive_equation("murata", "A4", b)
    values = []
    for n in (5, 15, 30):
        sol = series_solution(eq, {"q": b["q"]}, rootIndex=0, N=n)
        values.append(residual(eq, sol, Fraction(1, 20)))
    assert values[0] > values[1] > values[2]


def test_float_backend():
    eq = _eq("-1", "1 - x", "0")
    sol = series_solution(eq, {"q": 0.5}, rootIndex=0, N=12)
    assert isinstance(sol.coefficients[3], float)
    assert abs(residual(eq, sol, 0.05)) < 1e-12


def test_series_repr_and_chardata_repr():
    eq = _eq("1", "-2", "1")
    cz = char_exponents(eq, "Zero")
    assert "Zero" in repr(cz)
    sol = series_solution(eq, {"q": Fraction(1, 3)}, 0, 4)
    assert isinstance(sol, SeriesSolution)
    assert "N=4" in repr(sol)
    assert isinstance(cz, CharData)
