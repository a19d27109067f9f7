"""Closed-form constructors and the (3,2) solver."""

from fractions import Fraction

import pytest

from etale_forge.chebyshab import chebyshev_T, chebyshev_U
from etale_forge.constructor import (BadEpsilon, DegreeTriple, Infeasible,
                                     InfeasibleDegree, PreconditionViolated,
                                     chebyshev_endo, cyclic_galois_endo,
                                     degrees_from, factor_through_cover,
                                     solve_kr32)
from etale_forge.endo import (base_polynomial, build_from_params,
                              compose_maps, degree_of, etale_certificate,
                              identity_map, jacobian_spotcheck, make_map,
                              maps_equal, cstar_equivariant)
from etale_forge.family import covering
from etale_forge.numfield import QQ, NumberField, cyclotomic_field
from etale_forge.polyalg import (Poly, compose, divmod_poly, exact_div,
                                 gcd_univariate, monic, squarefree_decomposition)
from etale_forge.surface import hyper_surface, tilde_surface

T = Poly.variable("t", QQ)


def test_degrees_from_examples():
    assert degrees_from(2, 2, 1, 3) == DegreeTriple(0, 1, 1)
    assert degrees_from(3, 2, 1, 4) == DegreeTriple(1, 1, 1)
    assert isinstance(degrees_from(2, 2, 1, 2), Infeasible)
    with pytest.raises(ValueError):
        degrees_from(3, 2, 0, 6)   # alpha = 0 needs k | r


def test_chebyshev_endo_examples():
    p3 = chebyshev_endo(3)
    built = build_from_params(p3)
    s = tilde_surface(2, 2)
    x, y, z = (Poly.variable(v, QQ, s.vars) for v in s.vars)
    expected = make_map(s, s, (x * compose(chebyshev_U(2), z), y,
                               compose(chebyshev_T(3), z)))
    assert maps_equal(built.tilde_map, expected)
    p1 = chebyshev_endo(1)
    assert maps_equal(build_from_params(p1).tilde_map, identity_map(s))
    p5 = chebyshev_endo(5)
    third = build_from_params(p5).tilde_map.coords[2]
    assert third == compose(chebyshev_T(5), z)
    assert chebyshev_T(5) == 16 * Poly.variable("x", QQ) ** 5 \
        - 20 * Poly.variable("x", QQ) ** 3 + 5 * Poly.variable("x", QQ)
    with pytest.raises(InfeasibleDegree):
        chebyshev_endo(4)


def test_chebyshev_endo_lambda_action():
    lam = QQ.elem(Fraction(3, 2))
    built = build_from_params(chebyshev_endo(3, lam)).tilde_map
    s = tilde_surface(2, 2)
    x, y, z = (Poly.variable(v, QQ, s.vars) for v in s.vars)
    inv = Poly.constant(lam.inverse(), QQ, s.vars)
    lam2 = Poly.constant(lam * lam, QQ, s.vars)
    expected = make_map(s, s, (x * inv * compose(chebyshev_U(2), z), lam2 * y,
                               compose(chebyshev_T(3), z)))
    assert maps_equal(built, expected)


def test_chebyshev_base_map_is_one_minus_td_squared():
    for d in (3, 5, 7):
        params = chebyshev_endo(d)
        eta_rho = base_polynomial(build_from_params(params).tilde_map)
        z = Poly.variable("z", QQ)
        # eta_rho(1 - z^2) = 1 - T_d(z)^2 as a polynomial identity
        lhs = compose(eta_rho, 1 - z ** 2)
        td = chebyshev_T(d).substitute({"x": z})
        assert lhs == 1 - td * td


def test_cyclic_galois_examples():
    params, j = cyclic_galois_endo(2)
    h = hyper_surface(2, 1)
    u, v, w = (Poly.variable(name, QQ, h.vars) for name in h.vars)
    expected = make_map(h, tilde_surface(2, 2), (w, 4 * v, 1 + 2 * u * v))
    assert maps_equal(j, expected)
    # k = 3: R0 = (((zeta-1)t+1)^3 - 1)/(t(t-1)) has degree 1 over Q(zeta_3)
    params3, j3 = cyclic_galois_endo(3)
    assert params3.R0.total_degree() == 1
    assert etale_certificate(params3).verdict
    zeta = cyclotomic_field(3).gen()
    tt = Poly.variable("t", cyclotomic_field(3))
    r1 = (zeta - 1) * tt + 1
    assert params3.R0 == exact_div(r1 ** 3 - 1, tt * (tt - 1))
    with pytest.raises(BadEpsilon):
        cyclic_galois_endo(2, eps_power=2)
    with pytest.raises(BadEpsilon):
        cyclic_galois_endo(3, eps_power=3)


def test_cyclic_galois_single_critical_point():
    # eta_rho' is a unit times R1^(k-1): exactly one multiple critical point
    for k in (2, 3, 4):
        params, _ = cyclic_galois_endo(k)
        eta_rho = 1 - params.R1 ** k
        deriv = eta_rho.derivative()
        ratio = exact_div(deriv, params.R1 ** (k - 1))
        assert ratio.total_degree() == 0 and not ratio.is_zero()
        sf = squarefree_decomposition(deriv)
        assert len(sf) == 1 and sf[0].multiplicity == k - 1


def test_cyclic_galois_base_map():
    for k in (2, 3, 4):
        params, j = cyclic_galois_endo(k)
        built = build_from_params(params)
        eta_rho = base_polynomial(built.hyper_map)
        assert eta_rho == 1 - params.R1 ** k


def test_solve_kr32_d0_1():
    sols = solve_kr32(1)
    assert len(sols) == 2
    field = NumberField([2, 0, 1])
    expect = {field.from_coords([Fraction(-7, 3), Fraction(4, 3)]),
              field.from_coords([Fraction(-7, 3), Fraction(-4, 3)])}
    got = {s.R1.univariate_coeffs()[1] for s in sols}
    assert got == expect
    for s in sols:
        assert etale_certificate(s).verdict
        assert s.d == 4
        assert (s.R0.total_degree(), s.R1.total_degree(), s.R2.total_degree()) \
            == (1, 1, 1)


def test_solve_kr32_printed_value_is_an_erratum():
    # the printed a1 = (-7 + i sqrt2)/3 fails the printed divisibility
    field = NumberField([2, 0, 1])
    tt = Poly.variable("t", field)
    a1 = field.from_coords([Fraction(-7, 3), Fraction(1, 3)])
    r1 = a1 * tt + 1
    e = r1 + 3 * (tt - 1) * r1.derivative()
    _, rem = divmod_poly(1 - (1 - tt) * r1 ** 3, e * e)
    assert not rem.is_zero()
    # while the corrected pair reproduces the printed R0 exactly
    from etale_forge.polyparse import parse_poly
    r0_paper = parse_poly("(6 + 12*theta)*t + 8 - 4*theta", ("t",), field)
    plus = [s for s in solve_kr32(1)
            if s.R1.univariate_coeffs()[1].coords[1] > 0][0]
    assert plus.R0 == r0_paper


def test_solve_kr32_d0_2_verification():
    sols = solve_kr32(2)
    assert len(sols) == 1
    s = sols[0]
    assert s.d == 7 and etale_certificate(s).verdict
    # divisibility holds exactly
    field = s.field
    tt = Poly.variable("t", field)
    e = s.R1 + 3 * (tt - 1) * s.R1.derivative()
    _, rem = divmod_poly(1 - (1 - tt) * s.R1 ** 3, e * e)
    assert rem.is_zero()


def test_solve_kr32_d0_2_rejects_bad_candidates():
    bad = [{"minpoly": [7, 0, 1],
            "a1": [Fraction(87, 24), Fraction(91, 24)],
            "a2": [Fraction(-139, 24), Fraction(-63, 24)]}]
    assert solve_kr32(2, bad) == []


def test_factor_through_cover_examples():
    params, j = cyclic_galois_endo(2)
    assert degree_of(j) == 1
    j2 = factor_through_cover(params)
    assert maps_equal(j, j2)
    # alpha = 1 parameters cannot factor
    with pytest.raises(PreconditionViolated):
        factor_through_cover(chebyshev_endo(3))


def test_factor_through_cover_degree_4():
    # externally supplied R-triple for (k, r, alpha, d) = (2, 2, 0, 4)
    from etale_forge.reproduce import _alpha0_22_params
    params = _alpha0_22_params(2)
    assert etale_certificate(params).verdict
    j = factor_through_cover(params)
    assert degree_of(j) == 2
    assert (degree_of(j) - 1) % 1 == 0   # deg j = rbar mod (r - 1): 2 = 1 mod 1
    pi = covering(2, 1)
    eta = build_from_params(params).hyper_map
    assert maps_equal(compose_maps(pi, j), eta)


def test_constructor_outputs_pass_everything():
    for params in (chebyshev_endo(5), cyclic_galois_endo(3)[0], solve_kr32(1)[0]):
        assert etale_certificate(params).verdict
        built = build_from_params(params)
        assert cstar_equivariant(built.tilde_map)
        assert jacobian_spotcheck(built.tilde_map, 25, seed=7)
