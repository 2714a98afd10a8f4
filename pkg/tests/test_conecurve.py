import random
from fractions import Fraction

import pytest

from curvecontact.conecurve import (
    ConeObstruction,
    IdealPresentation,
    cone_necessary_test,
    contact_curve,
    direction_report,
    intersection_multiplicity,
    lowest_form,
    second_order_constraints,
    tangent_space,
)
from curvecontact.exactla import SubspaceBasis
from curvecontact.polyring import CurveGerm, Jet, MultiPoly, compose, parse_polynomial


def poly(text, nvars=2):
    return parse_polynomial(text, nvars)


def ideal(*texts, nvars=2, point=None):
    return IdealPresentation(nvars, [poly(t, nvars) for t in texts], point)


CUSP = ideal("x1^2 - x2^3")
PARABOLA = ideal("x2 - x1^2")
NODE = ideal("x2^2 - x1^2 - x1^3")


def line(v, trunc=6, point=(0, 0)):
    return CurveGerm.from_taylor(point, [v], trunc)


# -- multiplicity -------------------------------------------------------------


def test_multiplicity_cusp_vertical_line():
    assert intersection_multiplicity(CUSP, line([0, 1])).order == 3


def test_multiplicity_curve_on_variety():
    germ = CurveGerm.from_taylor([0, 0], [[1, 0], [0, 1]], trunc=6)
    result = intersection_multiplicity(PARABOLA, germ)
    assert result.above_truncation


def test_multiplicity_parabola_tangent_line():
    assert intersection_multiplicity(PARABOLA, line([1, 0])).order == 2


def test_multiplicity_requires_smooth_curve():
    flat = CurveGerm.from_taylor([0, 0], [[0, 0], [1, 0]], trunc=6)
    with pytest.raises(ValueError):
        intersection_multiplicity(CUSP, flat)


def test_multiplicity_base_point_mismatch():
    with pytest.raises(ValueError):
        intersection_multiplicity(CUSP, line([0, 1], point=(1, 1)))


def test_multiplicity_positive_iff_point_on_variety():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 3)
        gens = []
        for _ in range(rng.randint(1, 2)):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                mono = [0] * n
                for _ in range(rng.randint(0, 2)):
                    mono[rng.randrange(n)] += 1
                terms[tuple(mono)] = Fraction(rng.randint(-3, 3))
            gens.append(MultiPoly(n, terms))
        if all(g.is_zero for g in gens):
            continue
        X = IdealPresentation(n, gens)
        v = [rng.randint(-2, 2) for _ in range(n)]
        if all(c == 0 for c in v):
            v[0] = 1
        m = intersection_multiplicity(X, CurveGerm.from_taylor([0] * n, [v], 6))
        vanish = all(g.evaluate([0] * n) == 0 for g in gens)
        assert m.at_least(1) == vanish


# -- tangent space ------------------------------------------------------------


def test_tangent_space_cusp_is_everything():
    assert tangent_space(CUSP) == SubspaceBasis.full(2)


def test_tangent_space_parabola():
    space = tangent_space(PARABOLA)
    assert space.dim == 1
    assert space.contains([1, 0])
    assert not space.contains([0, 1])


def test_tangent_space_full_rank_linears():
    X = ideal("x1", "x2")
    assert tangent_space(X).dim == 0


def test_tangent_space_off_variety_rejected():
    X = ideal("x1^2 - x2^3", point=(1, 2))
    with pytest.raises(ValueError):
        tangent_space(X)


def test_tangent_space_translated_base_point():
    # same cusp moved so the singular point is (1, 1) - x2^3 shape shifts
    f = poly("x1^2 - x2^3").translate([-1, -1])  # g(x) = f(x - 1), zero at (1,1)
    X = IdealPresentation(2, [f], (1, 1))
    assert tangent_space(X) == SubspaceBasis.full(2)


def test_multiplicity_at_least_2_iff_tangent():
    rng = random.Random(5)
    checked = 0
    while checked < 60:
        n = rng.randint(2, 3)
        gens = []
        for _ in range(rng.randint(1, 2)):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                mono = [0] * n
                for _ in range(rng.randint(1, 3)):
                    mono[rng.randrange(n)] += 1
                terms[tuple(mono)] = Fraction(rng.randint(-3, 3))
            g = MultiPoly(n, terms)
            if not g.is_zero:
                gens.append(g)
        if not gens:
            continue
        X = IdealPresentation(n, gens)
        v = [rng.randint(-2, 2) for _ in range(n)]
        if all(c == 0 for c in v):
            continue
        m = intersection_multiplicity(X, CurveGerm.from_taylor([0] * n, [v], 6))
        assert m.at_least(2) == tangent_space(X).contains(v)
        checked += 1


# -- second-order constraint span ----------------------------------------------


def test_constraints_parabola():
    space = second_order_constraints(PARABOLA, [1, 0])
    assert space.dim == 1
    assert space.contains([0, 1, -1])


def test_constraints_cusp_zero():
    assert second_order_constraints(CUSP, [0, 1]).dim == 0


def test_constraints_node():
    space = second_order_constraints(NODE, [1, 2])
    assert space.dim == 1
    assert space.contains([0, 0, 3])


def test_constraints_reject_non_tangent_direction():
    with pytest.raises(ValueError):
        second_order_constraints(PARABOLA, [0, 1])


def test_constraint_span_absorbs_ideal_combinations():
    # For f = sum h_i g_i the vector (linear part, quadratic at v) stays in
    # the generator span whenever v is tangent.
    rng = random.Random(9)
    checked = 0
    while checked < 50:
        n = rng.randint(2, 3)
        gens = []
        for _ in range(rng.randint(1, 3)):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                mono = [0] * n
                for _ in range(rng.randint(1, 3)):
                    mono[rng.randrange(n)] += 1
                terms[tuple(mono)] = Fraction(rng.randint(-3, 3))
            g = MultiPoly(n, terms)
            if not g.is_zero:
                gens.append(g)
        if not gens:
            continue
        X = IdealPresentation(n, gens)
        space = tangent_space(X)
        if space.dim == 0:
            continue
        v = space.vectors[rng.randrange(space.dim)]
        constraints = second_order_constraints(X, v)
        combo = MultiPoly.zero(n)
        for g in gens:
            h_terms = {}
            for _ in range(rng.randint(1, 3)):
                mono = [0] * n
                for _ in range(rng.randint(0, 2)):
                    mono[rng.randrange(n)] += 1
                h_terms[tuple(mono)] = Fraction(rng.randint(-2, 2))
            combo = combo + MultiPoly(n, h_terms) * g
        linear = combo.homogeneous_part(1)
        quadratic = combo.homogeneous_part(2)
        vec = [linear.coefficient(tuple(1 if i == j else 0 for j in range(n))) for i in range(n)]
        vec.append(quadratic.evaluate(v))
        assert constraints.contains(vec)
        checked += 1


# -- cone test ------------------------------------------------------------------


def test_cone_test_node_diagonal_passes():
    report = cone_necessary_test(NODE, [1, 1])
    assert report.passed
    assert report.witness is None


def test_cone_test_node_fails_with_witness():
    report = cone_necessary_test(NODE, [1, 2])
    assert not report.passed
    assert report.witness == (0, 0, 3)
    assert report.constraints.contains(report.witness)


def test_cone_test_scaling_invariance():
    assert cone_necessary_test(NODE, [2, 2]).passed
    rng = random.Random(21)
    for _ in range(20):
        vx = rng.randint(-3, 3)
        vy = rng.randint(-3, 3)
        if (vx, vy) == (0, 0):
            continue
        c = rng.choice([2, -1, Fraction(1, 2), 3])
        first = cone_necessary_test(NODE, [vx, vy]).passed
        second = cone_necessary_test(NODE, [c * vx, c * vy]).passed
        assert first == second


def test_cone_test_rejects_zero_vector():
    with pytest.raises(ValueError):
        cone_necessary_test(NODE, [0, 0])


# -- curve construction -----------------------------------------------------------


def test_contact_curve_parabola():
    result = contact_curve(PARABOLA, [1, 0])
    assert result.gamma == (0, 1)
    assert result.multiplicity.above_truncation
    assert result.curve.components[0] == Jet.from_taylor(8, [0, 1])
    assert result.curve.components[1] == Jet.from_taylor(8, [0, 0, 1])


def test_contact_curve_cusp():
    result = contact_curve(CUSP, [0, 1], trunc=6)
    assert result.gamma == (0, 0)
    assert result.multiplicity.order == 3


def test_contact_curve_node():
    result = contact_curve(NODE, [1, 1], trunc=6)
    assert result.gamma == (0, 0)
    assert result.multiplicity.order == 3


def test_contact_curve_failure_propagates_witness():
    with pytest.raises(ConeObstruction) as err:
        contact_curve(NODE, [1, 2])
    assert err.value.report.witness == (0, 0, 3)


def test_direction_report():
    ok = direction_report(CUSP, [0, 1], trunc=6)
    assert ok.contact_at_least_3
    ok2 = direction_report(PARABOLA, [1, 0])
    assert ok2.contact_at_least_3
    blocked = direction_report(NODE, [1, 2])
    assert not blocked.cone.passed
    assert blocked.curve is None


def test_gamma_zero_or_independent_of_v():
    rng = random.Random(33)
    checked = 0
    while checked < 40:
        n = rng.randint(2, 4)
        gens = []
        for _ in range(rng.randint(1, 3)):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                mono = [0] * n
                for _ in range(rng.randint(1, 3)):
                    mono[rng.randrange(n)] += 1
                terms[tuple(mono)] = Fraction(rng.randint(-3, 3))
            g = MultiPoly(n, terms)
            if not g.is_zero:
                gens.append(g)
        if not gens:
            continue
        X = IdealPresentation(n, gens)
        space = tangent_space(X)
        if space.dim == 0:
            continue
        v = space.vectors[rng.randrange(space.dim)]
        report = cone_necessary_test(X, v)
        if not report.passed:
            continue
        result = contact_curve(X, v)
        assert result.multiplicity.at_least(3)
        if any(c != 0 for c in result.gamma):
            assert not SubspaceBasis.from_spanning(n, [v]).contains(result.gamma)
        checked += 1


# -- reparameterization invariance --------------------------------------------


def test_reparameterization_invariance():
    rng = random.Random(41)
    checked = 0
    while checked < 30:
        n = rng.randint(2, 3)
        gens = []
        for _ in range(rng.randint(1, 2)):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                mono = [0] * n
                for _ in range(rng.randint(1, 3)):
                    mono[rng.randrange(n)] += 1
                terms[tuple(mono)] = Fraction(rng.randint(-3, 3))
            g = MultiPoly(n, terms)
            if not g.is_zero:
                gens.append(g)
        if not gens:
            continue
        X = IdealPresentation(n, gens)
        rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(3)]
        germ = CurveGerm.from_taylor([0] * n, rows, trunc=8)
        if not germ.is_smooth:
            continue
        unit_coeffs = [rng.randint(-2, 2) for _ in range(4)]
        unit_coeffs[0] = rng.choice([1, -1, 2])
        unit = Jet.from_taylor(8, unit_coeffs)
        before = intersection_multiplicity(X, germ)
        after = intersection_multiplicity(X, germ.reparameterize(unit))
        assert before == after
        checked += 1


# -- lowest form ----------------------------------------------------------------


def test_lowest_form_examples():
    assert lowest_form(poly("x1^2 - x2^3")) == poly("x1^2")
    assert lowest_form(poly("x2 - x1^2")) == poly("x2")
    assert lowest_form(poly("x2^2 - x1^2 - x1^3")) == poly("x2^2 - x1^2")


def test_lowest_form_errors():
    with pytest.raises(ValueError):
        lowest_form(MultiPoly.zero(2))
    with pytest.raises(ValueError):
        lowest_form(poly("x1 + 1", 2))


# -- cusp sharpness (symbolic) ---------------------------------------------------


def test_cusp_sharpness_symbolic():
    # Germ t*(0,b) + t^2*(g1,g2) + t^3*(d1,d2) with symbolic coefficients:
    # variables (t, b, g1, g2, d1, d2).  The composition with x1^2 - x2^3 has
    # zero coefficients through t^2 and exactly -b^3 at t^3, so for b != 0 the
    # contact order is exactly 3: no smooth curve does better at the cusp.
    nv = 6
    t, b, g1, g2, d1, d2 = (MultiPoly.variable(nv, i) for i in range(nv))
    x1 = t * t * g1 + t * t * t * d1
    x2 = t * b + t * t * g2 + t * t * t * d2
    f = poly("x1^2 - x2^3")
    composed = f.substitute([x1, x2])
    by_t_degree = {}
    for mono, coeff in composed.terms.items():
        by_t_degree.setdefault(mono[0], {})[mono] = coeff
    for k in range(3):
        assert k not in by_t_degree  # no terms at all below t^3
    t3 = MultiPoly(nv, by_t_degree.get(3, {}))
    minus_b_cubed = MultiPoly(nv, {(3, 3, 0, 0, 0, 0): Fraction(-1)})
    assert t3 == minus_b_cubed
