import random

import pytest

from cigraph.field import field_of_order, make_field
from cigraph.weil import (HypothesisViolation, Poly, audit_bound1, audit_bound2, audit_weil_bound,
                          brute_force_count, build_bound1_product, build_theta, conic_base_point,
                          conic_points, count_solutions, eq3_closed_form, eq3_discriminant,
                          f_gamma, gamma_of, is_perfect_square, parametrize_conic, poly_gcd,
                          run_audits, squarefree_decomposition, squarefree_part_degree, valid_taus)

ODD_Q_UP_TO_31 = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31]


def roots_poly(F, roots):
    f = Poly.const(F, 1)
    for r in roots:
        f = f * (Poly.x(F) - Poly.const(F, r))
    return f


def test_gcd_examples():
    F = make_field(7)
    x = Poly.x(F)
    assert poly_gcd(x * x - Poly.const(F, 1), x - Poly.const(F, 1)) == x - Poly.const(F, 1)
    f = (x * x + Poly.const(F, 3)).scale(5)
    assert poly_gcd(f, Poly(F, [])) == f.monic()
    with pytest.raises(ValueError):
        poly_gcd(Poly(F, []), Poly(F, []))


def test_squarefree_examples():
    F = make_field(7)
    assert squarefree_part_degree(roots_poly(F, [1, 1, 2])) == 2
    F9 = make_field(3, 2)
    x = Poly.x(F9)
    f = (x ** 3 + Poly.const(F9, 1)) * (x + Poly.const(F9, 2)) ** 2  # (x+1)^3 (x-1)^2
    parts = squarefree_decomposition(f)
    assert {k: v.degree for k, v in parts.items()} == {2: 1, 3: 1}
    assert squarefree_part_degree(f) == 2
    with pytest.raises(ValueError):
        squarefree_part_degree(Poly(F, []))


def test_pth_power_handled():
    F = make_field(5)
    x = Poly.x(F)
    f = x ** 5 - x  # separable, all of GF(5)
    assert squarefree_part_degree(f) == 5
    g = x ** 10 + Poly.const(F, 1)  # (x^2 + 1)^5
    assert squarefree_part_degree(g) == 2


@pytest.mark.parametrize("q", [7, 11, 13])
def test_count_examples(q):
    F = field_of_order(q)
    x = Poly.x(F)
    assert count_solutions(x).N == q
    assert count_solutions(x * x).N == 2 * q - 1


def test_count_x_over_gf7():
    assert count_solutions(Poly.x(make_field(7))).N == 7


@pytest.mark.parametrize("q", ODD_Q_UP_TO_31)
def test_count_matches_brute_force(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for _ in range(100 // len(ODD_Q_UP_TO_31) + 1):
        deg = rng.randrange(0, 9)
        f = Poly(F, [rng.randrange(q) for _ in range(deg + 1)])
        assert count_solutions(f).N == brute_force_count(f)


def test_perfect_square_refused():
    F = make_field(13)
    g = Poly(F, [3, 1, 4])
    assert is_perfect_square(g * g)
    with pytest.raises(HypothesisViolation):
        audit_weil_bound(g * g)
    with pytest.raises(HypothesisViolation):
        audit_weil_bound(Poly(F, [0, 1]))  # one root only


def test_bound1_product_shape():
    F = make_field(73)
    taus = valid_taus(F)
    tau = taus[0]
    mu = next(m for m in taus if m not in (tau, F.neg(tau)))
    f = build_bound1_product(F, tau, mu)
    assert f.degree == 8 and f.c[0] == 1
    assert squarefree_part_degree(f) == 8
    assert build_bound1_product(F, tau, F.neg(tau)) == f_gamma(F, gamma_of(F, tau)) ** 2
    with pytest.raises(ValueError):
        build_bound1_product(F, 0, mu)
    inst = count_solutions(f)
    assert (inst.N - 73) ** 2 <= 49 * 73


def test_coprime_unless_equal_gamma():
    F = make_field(89)
    for g1 in range(0, 89, 7):
        for g2 in range(0, 89, 11):
            if g1 != g2:
                assert poly_gcd(f_gamma(F, g1), f_gamma(F, g2)).degree == 0


@pytest.mark.parametrize("q", [7, 11])
def test_conic_parametrisation(q):
    F = make_field(q)
    s0, t0 = conic_base_point(F)
    pts = [parametrize_conic(F, s0, t0, z) for z in range(q)]
    assert pts[0] == (s0, F.neg(t0))
    assert len(set(pts)) == q
    assert set(pts) <= set(conic_points(F))
    assert len(conic_points(F)) - len(set(pts)) <= 1
    with pytest.raises(ValueError):
        parametrize_conic(F, 0, 0, 1)


def test_theta_matches_discriminant_along_conic():
    from cigraph.verify import poly2_discriminant

    F = make_field(11)
    s0, t0 = conic_base_point(F)
    for alpha in range(0, 11, 3):
        for w in (2, 3, 5):
            th = build_theta(F, alpha, w, s0, t0)
            for z in range(11):
                s, t = parametrize_conic(F, s0, t0, z)
                scale = F.pow(F.add(F.mul(z, z), 1), 2)
                assert th(z) == F.mul(scale, poly2_discriminant(F, alpha, w, s, t))


def test_eq3_discriminant_closed_form():
    for q in (7, 11, 19):
        F = make_field(q)
        for lam in range(2, q - 1):
            assert eq3_discriminant(F, lam) == eq3_closed_form(F, lam)


@pytest.mark.parametrize("q,family", [(73, "bound1"), (89, "bound1"), (67, "bound2"), (71, "bound2")])
def test_audits_hold(q, family):
    audits = run_audits(make_field(q), family, 20, 1)
    assert len(audits) == 20
    for a in audits:
        assert a.holds and a.holds_7sqrtq
        if family == "bound1":
            assert a.checks["coprime"] and a.checks["separable_f_gamma"] and a.checks["gamma_not_pm2"]
    assert run_audits(make_field(q), family, 5, 1)[0].as_dict() == audits[0].as_dict()


def test_single_audits():
    assert audit_bound1(make_field(73), *valid_taus(make_field(73))[:2]).holds
    assert audit_bound2(make_field(67), 1, 2, 3).holds
