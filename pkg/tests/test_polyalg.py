"""Polynomial kernel: ring ops, composition, division, Yun, profiles."""

from fractions import Fraction

import pytest

from etale_forge.chebyshab import chebyshev_T, chebyshev_U
from etale_forge.numfield import QQ, NumberField
from etale_forge.polyalg import (ArityError, NotDivisible, Poly, compose,
                                 critical_values, exact_div, gcd_univariate,
                                 monic, multiplicity_profile, poly_arith,
                                 squarefree_decomposition, variables)
from etale_forge.surface import SplitMix64

X = Poly.variable("x", QQ)


def _random_poly(rng, max_deg=8, field=QQ, var="x"):
    x = Poly.variable(var, field)
    p = Poly.zero(field, (var,))
    deg = rng.randint(0, max_deg)
    for e in range(deg + 1):
        if rng.randint(0, 2):
            p = p + Poly.constant(field.elem(rng.fraction(20)), field, (var,)) * x ** e
    return p


def test_ring_arithmetic_examples():
    t2, t4 = chebyshev_T(2), chebyshev_T(4)
    # T2^2 - T4 = -4x^4 + 4x^2 = -4x^2(x^2 - 1), expanded both ways
    diff = poly_arith(t2 * t2, t4, "sub")
    assert diff == -4 * X ** 4 + 4 * X ** 2
    assert diff == -4 * X ** 2 * (X ** 2 - 1)
    p = 3 * X ** 2 - X + 7
    assert poly_arith(p, Poly.zero(QQ, ("x",)), "add") == p
    assert poly_arith(X - 1, X + 1, "mul") == X ** 2 - 1


def test_compose_examples():
    assert compose(chebyshev_T(2), chebyshev_T(2)) == chebyshev_T(4)
    p = 5 * X ** 3 - 2
    assert compose(p, X) == p
    assert compose(chebyshev_T(2), chebyshev_T(3)) == chebyshev_T(6)
    with pytest.raises(ArityError):
        x, y = variables("x,y")
        compose(x * y, x)


def test_exact_div_examples():
    t = Poly.variable("t", QQ)
    # ((1-2t)^2 - 1) / (t(t-1)) = 4: the cyclic Galois R0 at eps = -1
    num = (1 - 2 * t) ** 2 - 1
    assert num == 4 * t ** 2 - 4 * t
    assert exact_div(num, t * (t - 1)) == Poly.constant(4, QQ, ("t",))
    assert exact_div(X ** 2 - 1, X - 1) == X + 1
    # (T3 - 1)/(x - 1) = (2x + 1)^2 by long division of 4x^3 - 3x - 1
    q = exact_div(chebyshev_T(3) - 1, X - 1)
    assert q == (2 * X + 1) ** 2
    with pytest.raises(NotDivisible) as err:
        exact_div(X ** 2 + 1, X - 1)
    assert not err.value.remainder.is_zero()


def test_exact_div_random_round_trip():
    rng = SplitMix64(99)
    done = 0
    while done < 60:
        p = _random_poly(rng)
        q = _random_poly(rng)
        if q.is_zero():
            continue
        assert exact_div(p * q, q) == p
        done += 1


def test_squarefree_examples():
    # (x-1)^2 (x+2) expands to x^3 - 3x + 2
    p = X ** 3 - 3 * X + 2
    assert p == (X - 1) ** 2 * (X + 2)
    sf = squarefree_decomposition(p)
    assert [(mf.factor, mf.multiplicity) for mf in sf] == [(X + 2, 1), (X - 1, 2)]
    sf2 = squarefree_decomposition(X ** 2 - 1)
    assert [(mf.factor, mf.multiplicity) for mf in sf2] == [(X ** 2 - 1, 1)]
    # T3 - 1 = 4x^3 - 3x - 1 = 4(x - 1)(x + 1/2)^2 up to the unit
    sf3 = squarefree_decomposition(chebyshev_T(3) - 1)
    assert [(mf.factor, mf.multiplicity) for mf in sf3] == \
        [(X - 1, 1), (X + Fraction(1, 2), 2)]
    assert monic((2 * X + 1) ** 2) == (X + Fraction(1, 2)) ** 2


def test_squarefree_reconstruction_property():
    rng = SplitMix64(5)
    for _ in range(40):
        p = _random_poly(rng, max_deg=4)
        q = _random_poly(rng, max_deg=3)
        prod = p * p * q
        if prod.is_zero() or prod.total_degree() < 1:
            continue
        sf = squarefree_decomposition(prod)
        rebuilt = Poly.constant(prod.leading_coeff(), QQ, ("x",))
        for mf in sf:
            rebuilt = rebuilt * mf.factor ** mf.multiplicity
            # factors are separable
            assert gcd_univariate(mf.factor, mf.factor.derivative()).total_degree() == 0
        assert rebuilt == prod
        for i in range(len(sf)):
            for j in range(i + 1, len(sf)):
                assert gcd_univariate(sf[i].factor, sf[j].factor).total_degree() == 0
        assert [mf.multiplicity for mf in sf] == sorted(mf.multiplicity for mf in sf)


def test_multiplicity_profile_examples():
    t3 = chebyshev_T(3)
    # T3 - 1 = (x-1)(2x+1)^2 checked by expansion
    assert (X - 1) * (2 * X + 1) ** 2 == 4 * X ** 3 - 3 * X - 1
    assert multiplicity_profile(t3, 1) == (2, 1)
    # parity: T_n(-x) = (-1)^n T_n(x)
    assert multiplicity_profile(t3, -1) == (2, 1)
    assert multiplicity_profile(X ** 3, 0) == (3,)


def test_multiplicity_profile_sums_to_degree():
    rng = SplitMix64(31)
    for _ in range(30):
        p = _random_poly(rng, max_deg=7)
        if p.total_degree() < 1:
            continue
        for c in (0, 1, -2):
            assert sum(multiplicity_profile(p, c)) == p.total_degree()


def test_critical_values_examples():
    cv = critical_values(chebyshev_T(3))
    assert cv.complete and cv.values == frozenset({QQ.elem(1), QQ.elem(-1)})
    cv = critical_values(X ** 2)
    assert cv.complete and cv.values == frozenset({QQ.elem(0)})
    # T4' = 16x(2x^2-1) has irrational roots +-1/sqrt(2), yet the values
    # are certified inside Q
    cv = critical_values(chebyshev_T(4))
    assert cv.complete and cv.values == frozenset({QQ.elem(1), QQ.elem(-1)})


def test_critical_values_incomplete_flag():
    # phi' = 3x^2 + 1 has irrational roots with irrational values
    cv = critical_values(X ** 3 + X)
    assert not cv.complete
    assert cv.values == frozenset()


def test_critical_values_over_extension():
    field = NumberField([2, 0, 1])
    x = Poly.variable("x", field)
    th = Poly.constant(field.gen(), field, ("x",))
    # phi = (x - theta)^2 + 5: critical point theta, value 5
    cv = critical_values((x - th) ** 2 + 5)
    assert cv.complete and cv.values == frozenset({field.elem(5)})


def test_chebyshev_relation_suite_small():
    for n in range(1, 21):
        tn = chebyshev_T(n)
        un1 = chebyshev_U(n - 1)
        assert n * un1 == tn.derivative()
        assert tn * tn - 1 == (X ** 2 - 1) * un1 * un1
