"""Intersection multiplicity and order-3 approximating curves.

An affine variety is presented by ideal generators with a distinguished base
point.  A smooth parameterized germ G meets the variety with multiplicity m
when m is the least order of vanishing at t = 0 among the compositions of
the generators with G.  (With non-radical generators the multiplicity is
relative to the presented ideal, not its radical; this is exactly the number
the generator compositions determine.)

For a tangent direction v at the base point, each generator g contributes a
constraint vector (linear part of g, quadratic part of g evaluated at v) in
(n+1)-space.  The span of these vectors decides everything at second order:

* if the span contains a vector supported on the last coordinate only, no
  curve in direction v can reach contact order 3 and v fails the necessary
  cone-membership test (the test is not sufficient for cone membership);
* otherwise a quadratic correction term gamma solving the inhomogeneous
  linear system exists, and G(t) = p + t v + t^2 gamma is a smooth curve
  with contact order at least 3.

The correction is canonical (free variables zero), and the solution space's
dimension is reported so callers can enumerate alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactla import Matrix, SubspaceBasis, rank_and_kernel, solve_affine
from .polyring import (
    DEFAULT_TRUNC,
    CurveGerm,
    MultiPoly,
    VanishingOrder,
    compose,
)

Vector = tuple[Fraction, ...]


def _fracs(values) -> Vector:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


class IdealPresentation:
    """Generators of an ideal plus the base point the analysis is local to."""

    __slots__ = ("nvars", "generators", "base_point")

    def __init__(self, nvars: int, generators, base_point=None):
        gens = tuple(generators)
        if not gens:
            raise ValueError("an ideal presentation needs at least one generator")
        for g in gens:
            if not isinstance(g, MultiPoly) or g.nvars != nvars:
                raise ValueError("generators must be polynomials in the ambient variables")
        if base_point is None:
            base_point = (Fraction(0),) * nvars
        point = _fracs(base_point)
        if len(point) != nvars:
            raise ValueError("base point length does not match the variable count")
        self.nvars = nvars
        self.generators = gens
        self.base_point = point

    def base_on_variety(self) -> bool:
        return all(g.evaluate(self.base_point) == 0 for g in self.generators)

    def require_base_on_variety(self) -> None:
        for g in self.generators:
            value = g.evaluate(self.base_point)
            if value != 0:
                raise ValueError(
                    f"base point is not on the variety: generator {g} evaluates to {value}"
                )

    def local_generators(self) -> tuple[MultiPoly, ...]:
        """Generators rewritten so the base point sits at the origin."""
        if all(v == 0 for v in self.base_point):
            return self.generators
        return tuple(g.translate(self.base_point) for g in self.generators)

    def __repr__(self) -> str:
        return f"IdealPresentation({self.nvars} vars, {len(self.generators)} generators)"


class ConeObstruction(Exception):
    """A direction failed the necessary cone-membership test."""

    def __init__(self, report: ConeTestReport):
        self.report = report
        super().__init__(
            "direction fails the necessary cone test; "
            f"witness constraint {report.witness}"
        )


@dataclass(frozen=True)
class ConeTestReport:
    """Outcome of the necessary cone-membership test for one direction.

    ``constraints`` is the span of the per-generator vectors
    (linear part, quadratic part at v) in (n+1)-space; a ``witness`` is an
    element of that span with zero first n coordinates and nonzero last
    coordinate, present exactly when the test fails.
    """

    passed: bool
    constraints: SubspaceBasis
    witness: Vector | None


@dataclass(frozen=True)
class ContactCurve:
    """Quadratic correction and resulting curve of contact order >= 3."""

    gamma: Vector
    curve: CurveGerm
    multiplicity: VanishingOrder
    #: dimension of the solution space for the correction term; alternatives
    #: are gamma + any kernel vector of the constraint system
    gamma_degrees_of_freedom: int


@dataclass(frozen=True)
class DirectionReport:
    """Bundled cone test plus curve construction for one direction."""

    cone: ConeTestReport
    curve: ContactCurve | None
    contact_at_least_3: bool


def intersection_multiplicity(ideal: IdealPresentation, germ: CurveGerm) -> VanishingOrder:
    """Least vanishing order of the generator compositions along the germ.

    Exact when some composition has visible order; above-truncation when all
    compositions vanish through the truncation (e.g. the germ lies on the
    variety to that order).
    """
    if germ.nvars != ideal.nvars:
        raise ValueError("curve and ideal live in different ambient spaces")
    if germ.base_point != ideal.base_point:
        raise ValueError(
            f"curve base point {germ.base_point} differs from ideal base point "
            f"{ideal.base_point}"
        )
    if not germ.is_smooth:
        raise ValueError("the parameterization is not smooth: zero tangent vector")
    best: int | None = None
    for g in ideal.generators:
        order = compose(g, germ).vanishing_order()
        if order.order is not None:
            best = order.order if best is None else min(best, order.order)
            if best == 0:
                break
    return VanishingOrder(best, germ.trunc)


def tangent_space(ideal: IdealPresentation) -> SubspaceBasis:
    """Common kernel of the linear parts of the generators at the base point."""
    ideal.require_base_on_variety()
    rows = []
    for g in ideal.local_generators():
        linear = g.homogeneous_part(1)
        rows.append([linear.coefficient(_unit(ideal.nvars, i)) for i in range(ideal.nvars)])
    _, kernel = rank_and_kernel(Matrix.from_rows(rows, ideal.nvars))
    return kernel


def _unit(nvars: int, index: int) -> tuple[int, ...]:
    mono = [0] * nvars
    mono[index] = 1
    return tuple(mono)


def _constraint_vectors(ideal: IdealPresentation, v: Vector) -> list[Vector]:
    """Per-generator vectors (linear part, quadratic part at v), unnormalized."""
    space = tangent_space(ideal)
    if not space.contains(v):
        raise ValueError("direction is not in the tangent space at the base point")
    n = ideal.nvars
    vectors = []
    for g in ideal.local_generators():
        linear = g.homogeneous_part(1)
        quadratic = g.homogeneous_part(2)
        row = [linear.coefficient(_unit(n, i)) for i in range(n)]
        row.append(quadratic.evaluate(v))
        vectors.append(tuple(row))
    return vectors


def second_order_constraints(ideal: IdealPresentation, direction) -> SubspaceBasis:
    """Span of (linear part, quadratic part at v) over the generators.

    Requires v in the tangent space: only then is the span independent of the
    choice of generators (for f = sum h_i g_i the combination collapses to
    sum h_i(0) times the generator vectors because every l_{g_i}(v) = 0).
    """
    v = _fracs(direction)
    return SubspaceBasis.from_spanning(ideal.nvars + 1, _constraint_vectors(ideal, v))


def cone_necessary_test(ideal: IdealPresentation, direction) -> ConeTestReport:
    """Necessary test for v to lie in the tangent cone at the base point.

    Fails exactly when the constraint span contains a vector with zero first
    n coordinates and nonzero last coordinate; such a vector certifies that a
    quadratic part does not vanish on v although the matching linear parts
    do, so no curve in direction v has contact order 3.  Passing is necessary
    but not sufficient for cone membership.
    """
    v = _fracs(direction)
    if all(x == 0 for x in v):
        raise ValueError("the zero vector is not an admissible direction")
    raw = _constraint_vectors(ideal, v)
    n = ideal.nvars
    constraints = SubspaceBasis.from_spanning(n + 1, raw)
    # Look for a generator combination whose first n coordinates cancel but
    # whose last coordinate survives: the kernel of the projection onto the
    # first n coordinates, evaluated on the last one.
    projection = Matrix.from_rows([[vec[i] for vec in raw] for i in range(n)], len(raw))
    _, mixing = rank_and_kernel(projection)
    for coeffs in mixing.vectors:
        witness = tuple(
            sum((c * vec[j] for c, vec in zip(coeffs, raw)), Fraction(0))
            for j in range(n + 1)
        )
        if witness[n] != 0:
            return ConeTestReport(False, constraints, witness)
    return ConeTestReport(True, constraints, None)


def contact_curve(
    ideal: IdealPresentation, direction, trunc: int = DEFAULT_TRUNC
) -> ContactCurve:
    """Construct G(t) = p + t v + t^2 gamma with contact order at least 3.

    The correction gamma solves the linear system demanding that every
    second-order Taylor coefficient of the generator compositions vanish; it
    is zero, or linearly independent of v, so the curve is smooth.  Raises
    ConeObstruction (with the witness) when the direction fails the
    necessary cone test.
    """
    v = _fracs(direction)
    report = cone_necessary_test(ideal, v)
    if not report.passed:
        raise ConeObstruction(report)
    n = ideal.nvars
    basis = report.constraints.vectors
    system = Matrix.from_rows([list(vec[:n]) for vec in basis], n)
    rhs = [-vec[n] for vec in basis]
    solution = solve_affine(system, rhs)
    # Solvability is exactly what the passing cone test certifies.
    assert solution is not None, "constraint system inconsistent after a passing cone test"
    gamma = solution.particular
    germ = CurveGerm.from_taylor(ideal.base_point, [v, gamma], trunc)
    multiplicity = intersection_multiplicity(ideal, germ)
    return ContactCurve(gamma, germ, multiplicity, solution.kernel.dim)


def lowest_form(f: MultiPoly) -> MultiPoly:
    """Homogeneous component of least total degree of a polynomial vanishing at 0.

    For a hypersurface through the origin this form cuts out the tangent cone.
    """
    if f.is_zero:
        raise ValueError("the zero polynomial has no lowest form")
    if f.coefficient((0,) * f.nvars) != 0:
        raise ValueError("nonvanishing constant term: the origin is not on the hypersurface")
    return f.homogeneous_part(f.min_degree())


def direction_report(
    ideal: IdealPresentation, direction, trunc: int = DEFAULT_TRUNC
) -> DirectionReport:
    """Run the cone test and, when it passes, the curve construction."""
    v = _fracs(direction)
    report = cone_necessary_test(ideal, v)
    if not report.passed:
        return DirectionReport(report, None, False)
    curve = contact_curve(ideal, v, trunc)
    return DirectionReport(report, curve, curve.multiplicity.at_least(3))
