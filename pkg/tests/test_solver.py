"""Formal solution of implicit equations, the two independent routes, and
linear-part normalization.

Frozen solutions were derived degree by degree by hand; the random
corpus is checked against the naive substitution oracle in helpers.py.
"""

import random
from fractions import Fraction

import pytest

from impsolve import (
    COMPONENTWISE,
    DomainError,
    EXACT,
    FLOAT,
    EquationSpec,
    ITERATIVE,
    NormProfile,
    PARTITION_ORACLE,
    PARTITION_ORACLE_MAX_DEGREE,
    Series,
    SeriesMap,
    formal_iterates,
    majorant,
    resolve_linear,
    residual,
    solve_formal,
    solve_partition_oracle,
)

from helpers import catalan, naive_solve, quadratic_equation, random_equation


def F(n, d=1):
    return Fraction(n, d)


def system_example(mode=EXACT, cap=4):
    """y1 = x + y2^2, y2 = 2x^2 + y1*y2 in variables (x, y1, y2)."""
    conv = (lambda v: F(v)) if mode == EXACT else float
    comp0 = Series(3, cap, {(1, 0, 0): conv(1), (0, 0, 2): conv(1)}, mode)
    comp1 = Series(3, cap, {(2, 0, 0): conv(2), (0, 1, 1): conv(1)}, mode)
    return EquationSpec(1, 2, SeriesMap((comp0, comp1)),
                        NormProfile(COMPONENTWISE, 1),
                        NormProfile(COMPONENTWISE, 2))


# ---------------------------------------------------------------------------
# the iterative route

def test_catalan_series():
    sol = solve_formal(quadratic_equation(mode=EXACT), 6)
    comp = sol.phi.components[0]
    assert dict(comp.terms) == {
        (n,): F(catalan(n - 1)) for n in range(1, 7)}
    assert sol.source == ITERATIVE
    assert sol.degree_cap == 6


def test_signed_quadratic_series():
    sol = solve_formal(quadratic_equation(mode=EXACT, sign=-1), 4)
    assert dict(sol.phi.components[0].terms) == {
        (1,): F(1), (2,): F(-1), (3,): F(2), (4,): F(-5)}


def test_system_example():
    sol = solve_formal(system_example(), 4)
    y1, y2 = sol.phi.components
    assert dict(y1.terms) == {(1,): F(1), (4,): F(4)}
    assert dict(y2.terms) == {(2,): F(2), (3,): F(2), (4,): F(2)}


def test_iterates_become_stationary_degree_by_degree():
    eq = quadratic_equation(mode=EXACT)
    iterates = list(formal_iterates(eq, 6))
    final = iterates[-1]
    for k, phi in enumerate(iterates, start=1):
        got = phi.components[0].with_cap(min(k, 6))
        want = final.components[0].with_cap(min(k, 6))
        assert dict(got.terms) == dict(want.terms)


def test_iterates_stop_early_when_stationary():
    # the equation y = x has the exact solution after one round
    eq = EquationSpec(1, 1,
                      SeriesMap((Series(2, 9, {(1, 0): F(1)}, EXACT),)),
                      NormProfile(COMPONENTWISE, 1),
                      NormProfile(COMPONENTWISE, 1))
    iterates = list(formal_iterates(eq, 9))
    assert len(iterates) < 9
    assert dict(iterates[-1].components[0].terms) == {(1,): F(1)}


def test_random_corpus_matches_naive_oracle():
    rng = random.Random(101)
    for _ in range(10):
        eq, raw = random_equation(rng, mode=EXACT)
        sol = solve_formal(eq, 5)
        oracle = naive_solve(raw, eq.dim_x, eq.dim_y, 5, F(1))
        for i, comp in enumerate(sol.phi.components):
            assert dict(comp.terms) == oracle[i]


def test_degree_must_be_positive():
    with pytest.raises(ValueError):
        solve_formal(quadratic_equation(mode=EXACT), 0)


# ---------------------------------------------------------------------------
# residual

def test_residual_vanishes_on_solutions():
    for mode in (EXACT, FLOAT):
        eq = quadratic_equation(mode=mode)
        sol = solve_formal(eq, 8)
        defect = residual(eq, sol)
        assert all(comp.is_zero() for comp in defect.components)


def test_residual_detects_perturbation():
    eq = quadratic_equation(mode=EXACT)
    sol = solve_formal(eq, 6)
    bumped = sol.phi + SeriesMap((Series.monomial(1, 6, EXACT, (3,),
                                                  F(1, 7)),))
    from impsolve import SolutionSeries
    fake = SolutionSeries(phi=bumped, degree_cap=6, source=ITERATIVE)
    defect = residual(eq, fake)
    assert not all(comp.is_zero() for comp in defect.components)


# ---------------------------------------------------------------------------
# the set-partition route

def test_partition_oracle_catalan():
    sol = solve_partition_oracle(quadratic_equation(mode=EXACT), 6)
    assert sol.source == PARTITION_ORACLE
    assert dict(sol.phi.components[0].terms) == {
        (n,): F(catalan(n - 1)) for n in range(1, 7)}


def test_partition_oracle_system_example():
    a = solve_partition_oracle(system_example(), 4)
    b = solve_formal(system_example(), 4)
    for x, y in zip(a.phi.components, b.phi.components):
        assert dict(x.terms) == dict(y.terms)


def test_routes_agree_on_random_corpus():
    rng = random.Random(202)
    for _ in range(10):
        eq, _ = random_equation(rng, mode=EXACT)
        a = solve_formal(eq, 5)
        b = solve_partition_oracle(eq, 5)
        for x, y in zip(a.phi.components, b.phi.components):
            assert dict(x.terms) == dict(y.terms)


def test_partition_oracle_degree_cap():
    with pytest.raises(ValueError, match=str(PARTITION_ORACLE_MAX_DEGREE)):
        solve_partition_oracle(quadratic_equation(mode=EXACT),
                               PARTITION_ORACLE_MAX_DEGREE + 1)


# ---------------------------------------------------------------------------
# majorization of the solution coefficients

def test_solution_majorized_by_comparison_solution():
    rng = random.Random(303)
    for _ in range(8):
        eq, _ = random_equation(rng, mode=EXACT)
        cmp_eq = majorant(eq)
        b = solve_formal(eq, 5).phi
        B = solve_formal(cmp_eq, 5).phi
        for bc, Bc in zip(b.components, B.components):
            for gamma, value in bc.terms.items():
                assert abs(value) <= Bc.coefficient(gamma)


def test_positive_type_solution_stays_nonnegative():
    rng = random.Random(404)
    for _ in range(6):
        eq, _ = random_equation(rng, mode=EXACT)
        B = solve_formal(majorant(eq), 5).phi
        for comp in B.components:
            assert all(v >= 0 for v in comp.terms.values())


def test_sign_flip_gives_degreewise_equality():
    plus = solve_formal(quadratic_equation(mode=EXACT, sign=1), 10)
    minus = solve_formal(quadratic_equation(mode=EXACT, sign=-1), 10)
    p = plus.phi.components[0]
    m = minus.phi.components[0]
    assert set(p.terms) == set(m.terms)
    for gamma, value in p.terms.items():
        assert abs(m.coefficient(gamma)) == value


# ---------------------------------------------------------------------------
# linear-part normalization

def test_resolve_linear_float():
    # y = x + 0.5 y + y^2 normalizes to y = 2x + 2y^2
    raw = SeriesMap((Series(2, 8, {(1, 0): 1.0, (0, 1): 0.5, (0, 2): 1.0},
                            FLOAT),))
    eq = resolve_linear(raw, 1, 1)
    terms = dict(eq.psi.components[0].terms)
    assert terms[(1, 0)] == pytest.approx(2.0)
    assert terms[(0, 2)] == pytest.approx(2.0)
    assert (0, 1) not in terms


def test_resolve_linear_exact():
    raw = SeriesMap((Series(2, 8, {(1, 0): F(1), (0, 1): F(1, 2),
                                   (0, 2): F(1)}, EXACT),))
    eq = resolve_linear(raw, 1, 1)
    assert dict(eq.psi.components[0].terms) == {(1, 0): F(2), (0, 2): F(2)}


def test_resolve_linear_coupled_system():
    # y1 = x + y2 + y1 y2, y2 = x + y1^2: solve the linear block by hand:
    # (I - L) = [[1, -1], [0, 1]], inverse [[1, 1], [0, 1]].
    raw = SeriesMap((
        Series(3, 8, {(1, 0, 0): F(1), (0, 0, 1): F(1), (0, 1, 1): F(1)},
               EXACT),
        Series(3, 8, {(1, 0, 0): F(1), (0, 2, 0): F(1)}, EXACT),
    ))
    eq = resolve_linear(raw, 1, 2)
    t0 = dict(eq.psi.components[0].terms)
    t1 = dict(eq.psi.components[1].terms)
    assert t0 == {(1, 0, 0): F(2), (0, 1, 1): F(1), (0, 2, 0): F(1)}
    assert t1 == {(1, 0, 0): F(1), (0, 2, 0): F(1)}
    # the rewritten equation has the same solution as the raw one
    sol = solve_formal(eq, 4)
    # substitute back into the raw map and compare
    coords = (Series.coordinate(1, 4, EXACT, 0),)
    from impsolve import series_compose
    inner = SeriesMap(coords + sol.phi.components)
    back = series_compose(raw.with_cap(4), inner)
    for got, want in zip(back.components, sol.phi.components):
        assert dict(got.terms) == dict(want.terms)


def test_resolve_linear_rejects_constant():
    raw = SeriesMap((Series(2, 8, {(0, 0): 1.0, (1, 0): 1.0}, FLOAT),))
    with pytest.raises(ValueError, match="constant"):
        resolve_linear(raw, 1, 1)


def test_resolve_linear_singular():
    raw = SeriesMap((Series(2, 8, {(1, 0): 1.0, (0, 1): 1.0, (0, 2): 1.0},
                            FLOAT),))
    with pytest.raises(DomainError, match="singular"):
        resolve_linear(raw, 1, 1)


def test_resolve_linear_without_linear_part_is_identity():
    eq = quadratic_equation(mode=EXACT)
    again = resolve_linear(eq.psi, 1, 1)
    assert dict(again.psi.components[0].terms) == \
        dict(eq.psi.components[0].terms)
