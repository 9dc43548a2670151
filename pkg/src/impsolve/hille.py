"""Convergence-region geometry of a scalar comparison equation.

On the graph of ``Y = Psi(X, Y)`` the principal branch rises from the
origin until the partial derivative of ``Psi`` in ``Y`` reaches one; at
that turning point the graph has a vertical tangent and the X coordinate
is the radius of convergence of the principal solution branch.  This
module locates that point numerically, traces the graph itself, probes
the convergence region along rays through the origin, and offers an
empirical coefficient-ratio estimate of the radius for comparison.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, NamedTuple

from .kantorovich import (DEFAULT_BUDGET, DEFAULT_TOL, INSIDE, OUTSIDE,
                          membership)
from .lattice import ComparisonEquation, LatticeVec
from .series import EXACT, Number, Series
from .solver import SolutionSeries

FOUND = "found"
UNBOUNDED = "unbounded"
FAILED = "failed"


@dataclass(frozen=True)
class HillePoint:
    """The turning point of the comparison graph, if one was found."""

    X_star: float | None
    Y_star: float | None
    residual_fixed: float | None
    residual_derivative: float | None
    status: str


class GraphPoint(NamedTuple):
    X: float
    Y: float
    dPsi_dY: float


@dataclass(frozen=True)
class RegionSample:
    points: tuple[GraphPoint, ...]
    turning_index: int | None
    omitted: tuple[float, ...]


@dataclass(frozen=True)
class RayRadius:
    """Certified bracket around the boundary crossing along a ray."""

    t_inside: float
    t_outside: float | None
    unbounded: bool

    @property
    def midpoint(self) -> float:
        if self.t_outside is None:
            return self.t_inside
        return 0.5 * (self.t_inside + self.t_outside)


def _scalar_series(cmp: ComparisonEquation) -> Series:
    if cmp.dim_X != 1 or cmp.dim_Y != 1:
        raise ValueError(
            f"a scalar comparison equation is required, got dimensions "
            f"({cmp.dim_X}, {cmp.dim_Y})")
    return cmp.Psi.as_float().components[0]


def _has_x_dependence(psi: Series) -> bool:
    return any(gamma[0] > 0 for gamma in psi.terms)


def _graph_x(psi: Series, Y: float) -> float | None:
    """Smallest X >= 0 with Psi(X, Y) = Y, or None when there is none.

    Psi is nondecreasing in X with all-positive coefficients, so the
    fixed-point equation in X is solved by doubling then bisection.
    """
    gap = psi.evaluate((0.0, Y)) - Y
    if gap > 0.0:
        return None
    if gap == 0.0:
        return 0.0
    hi = 1.0
    while psi.evaluate((hi, Y)) - Y < 0.0:
        hi *= 2.0
        if hi > 1e300:
            return None
    lo = 0.0
    while hi - lo > 1e-15 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if psi.evaluate((mid, Y)) - Y < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hille_point(cmp: ComparisonEquation, tol: float = 1e-12,
                y_cap: float = 1e6) -> HillePoint:
    """Locate the vertical-tangent point of the comparison graph.

    Walks up the graph with an adaptive Y step until the derivative
    condition brackets, then polishes the two-equation system with Newton
    steps until both residuals drop below ``tol``.  If the derivative
    stays below one all the way to ``y_cap`` the point is reported
    unbounded; a Newton stall is reported as failed with the last iterate
    rather than papered over.
    """
    psi = _scalar_series(cmp)
    if not _has_x_dependence(psi):
        raise ValueError(
            "the comparison equation does not depend on X; the graph "
            "solve is ill-posed")
    psi_y = psi.partial(1)

    Y, X = 0.0, 0.0
    step = 1.0 / 1024.0
    bracket = None
    while Y < y_cap:
        Y_next = Y + step
        X_next = _graph_x(psi, Y_next)
        if X_next is None:
            step *= 0.5
            if step < 1e-14 * max(1.0, Y):
                # the top of the graph was reached with the derivative
                # still below one; report the last point honestly
                d_last = psi_y.evaluate((X, Y))
                return HillePoint(X, Y, 0.0, 1.0 - d_last, FAILED)
            continue
        d_next = psi_y.evaluate((X_next, Y_next))
        if d_next >= 1.0:
            bracket = (Y, Y_next)
            break
        Y, X = Y_next, X_next
        step *= 2.0
    if bracket is None:
        return HillePoint(None, None, None, None, UNBOUNDED)

    lo, hi = bracket
    for _ in range(80):
        if hi - lo <= 1e-6 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        X_mid = _graph_x(psi, mid)
        if X_mid is None:
            hi = mid
            continue
        if psi_y.evaluate((X_mid, mid)) < 1.0:
            lo = mid
        else:
            hi = mid
    Y = 0.5 * (lo + hi)
    X = _graph_x(psi, Y)
    if X is None:
        X = _graph_x(psi, lo)
        Y = lo
    return _newton_polish(psi, X, Y, tol)


def _newton_polish(psi: Series, X: float, Y: float, tol: float) -> HillePoint:
    psi_x = psi.partial(0)
    psi_y = psi.partial(1)
    psi_xy = psi_x.partial(1)
    psi_yy = psi_y.partial(1)

    def residuals(X: float, Y: float) -> tuple[float, float]:
        return (Y - psi.evaluate((X, Y)), 1.0 - psi_y.evaluate((X, Y)))

    g1, g2 = residuals(X, Y)
    best = max(abs(g1), abs(g2))
    stall = 0
    for _ in range(60):
        if best <= tol:
            break
        j11 = -psi_x.evaluate((X, Y))
        j12 = 1.0 - psi_y.evaluate((X, Y))
        j21 = -psi_xy.evaluate((X, Y))
        j22 = -psi_yy.evaluate((X, Y))
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            break
        dX = (g1 * j22 - g2 * j12) / det
        dY = (j11 * g2 - j21 * g1) / det
        X, Y = X - dX, Y - dY
        g1, g2 = residuals(X, Y)
        res = max(abs(g1), abs(g2))
        if res < best:
            best = res
            stall = 0
        else:
            stall += 1
            if stall >= 5:
                break
    status = FOUND if best <= tol else FAILED
    return HillePoint(X, Y, abs(g1), abs(g2), status)


def trace_graph(cmp: ComparisonEquation, Y_max: float, steps: int) -> RegionSample:
    """Sample the graph X(Y) on an even Y grid.

    Grid points without a solution are left out and reported in the
    ``omitted`` list.  ``turning_index`` marks the maximal X among the
    kept points, or None when the maximum sits at the end of the range
    (no turning inside it).
    """
    psi = _scalar_series(cmp)
    if not _has_x_dependence(psi):
        raise ValueError(
            "the comparison equation does not depend on X; the graph "
            "solve is ill-posed")
    if steps < 1:
        raise ValueError("steps must be positive")
    if not Y_max > 0:
        raise ValueError("Y_max must be positive")
    psi_y = psi.partial(1)
    points: list[GraphPoint] = []
    omitted: list[float] = []
    for j in range(steps + 1):
        Y = Y_max * j / steps
        X = _graph_x(psi, Y)
        if X is None:
            omitted.append(Y)
            continue
        points.append(GraphPoint(X, Y, psi_y.evaluate((X, Y))))
    turning = None
    if points:
        turning = max(range(len(points)), key=lambda k: points[k].X)
        if turning == len(points) - 1:
            turning = None
    return RegionSample(points=tuple(points), turning_index=turning,
                        omitted=tuple(omitted))


def region_to_csv(sample: RegionSample, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["Y", "X", "dPsi_dY", "is_turning"])
    for k, pt in enumerate(sample.points):
        writer.writerow([repr(pt.Y), repr(pt.X), repr(pt.dPsi_dY),
                         "1" if k == sample.turning_index else "0"])


def radius_along_ray(cmp: ComparisonEquation, direction: LatticeVec,
                     tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET,
                     probe_cap: float = 1e12,
                     iteration_tol: float = DEFAULT_TOL) -> RayRadius:
    """Bracket the boundary of the convergence region along a ray.

    Returns scales ``t_inside <= t_outside`` with membership certified
    inside at the former and outside at the latter; the true boundary
    crossing lies in between.  Unresolved scales cannot be claimed for
    either side, so they simply stay inside the reported bracket.  The
    probing is a float computation; an exact comparison equation is
    converted first.
    """
    cmp = cmp.as_float()
    if not isinstance(direction, LatticeVec):
        direction = LatticeVec(tuple(direction))
    if direction.dimension != cmp.dim_X:
        raise ValueError(
            f"direction has dimension {direction.dimension}, expected {cmp.dim_X}")
    dir_entries = tuple(float(e) for e in direction.entries)
    if any(e < 0 for e in dir_entries) or all(e == 0 for e in dir_entries):
        raise ValueError("direction must be non-negative and nonzero")

    def verdict(t: float) -> str:
        X = LatticeVec(tuple(t * e for e in dir_entries))
        return membership(cmp, X, budget, iteration_tol).verdict

    t_in = 0.0
    t = 1.0
    for _ in range(200):
        if verdict(t) == INSIDE:
            t_in = t
            break
        t *= 0.5
        if t < 1e-300:
            break

    t_out = None
    t = max(1.0, 2.0 * t_in)
    while t <= probe_cap:
        v = verdict(t)
        if v == OUTSIDE:
            t_out = t
            break
        if v == INSIDE and t > t_in:
            t_in = t
        t *= 2.0
    if t_out is None:
        return RayRadius(t_inside=t_in, t_outside=None, unbounded=True)

    lo, hi = t_in, t_out
    for _ in range(500):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if verdict(mid) == INSIDE:
            lo = mid
        else:
            hi = mid
    t_in = lo

    lo, hi = t_in, t_out
    for _ in range(500):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if verdict(mid) == OUTSIDE:
            hi = mid
        else:
            lo = mid
    t_out = hi
    return RayRadius(t_inside=t_in, t_outside=t_out, unbounded=False)


class RadiusEstimate(NamedTuple):
    estimate: Number
    degree: int


def empirical_radius(sol: SolutionSeries) -> RadiusEstimate:
    """Coefficient-ratio estimate of the convergence radius.

    Uses the ratio of the last two nonzero coefficients of a scalar
    single-variable solution series; the run of consecutive nonzero
    coefficients ending there must be at least ten long for the estimate
    to mean anything.
    """
    if sol.phi.output_dim != 1 or sol.phi.num_vars != 1:
        raise ValueError("the ratio estimate needs a scalar single-variable solution")
    comp = sol.phi.components[0]
    coeffs = [comp.coefficient((n,)) for n in range(sol.degree_cap + 1)]
    zero = Fraction(0) if comp.mode == EXACT else 0.0
    top = None
    for n in range(sol.degree_cap, 0, -1):
        if coeffs[n] != zero and coeffs[n - 1] != zero:
            top = n
            break
    if top is None:
        raise ValueError("no consecutive nonzero coefficients found")
    run = 0
    for n in range(top, -1, -1):
        if coeffs[n] == zero:
            break
        run += 1
    if run < 10:
        raise ValueError(
            f"need at least 10 consecutive nonzero coefficients, found {run}")
    return RadiusEstimate(estimate=abs(coeffs[top - 1] / coeffs[top]), degree=top)
