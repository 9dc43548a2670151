"""Formal power-series solution of ``y = psi(x, y)``.

Two independent routes produce the coefficients of the solution branch
through the origin.  The production route re-substitutes the truncated
map into itself: after ``D`` rounds every coefficient of total degree at
most ``D`` is stationary, because the degree-``d`` output of one round
only reads solution coefficients of degree below ``d`` (the map has no
constant term and no term linear in the unknowns).  The second route,
kept deliberately slow and explicit, evaluates the symmetric multilinear
recursion over set partitions and exists so the two implementations can
be checked against each other; it is capped at low degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations
from typing import Iterator, Sequence

from .errors import DomainError
from .lattice import COMPONENTWISE, ComparisonEquation, EquationSpec, NormProfile
from .series import (EXACT, Number, Series, SeriesMap, multiindex_factorial,
                     series_compose, zero_value)

ITERATIVE = "iterative"
PARTITION_ORACLE = "partition_oracle"
PARTITION_ORACLE_MAX_DEGREE = 6


@dataclass(frozen=True)
class SolutionSeries:
    """Truncated series of the solution branch through the origin."""

    phi: SeriesMap
    degree_cap: int
    source: str

    def __post_init__(self) -> None:
        if self.phi.degree_cap != self.degree_cap:
            raise ValueError("solution cap does not match its series")
        if self.source not in (ITERATIVE, PARTITION_ORACLE):
            raise ValueError(f"unknown solution source {self.source!r}")


def _solvable_parts(eq) -> tuple[int, int, SeriesMap]:
    if isinstance(eq, EquationSpec):
        return eq.dim_x, eq.dim_y, eq.psi
    if isinstance(eq, ComparisonEquation):
        return eq.dim_X, eq.dim_Y, eq.Psi
    raise TypeError(
        f"expected an EquationSpec or ComparisonEquation, got {type(eq).__name__}")


def formal_iterates(eq, degree: int) -> Iterator[SeriesMap]:
    """Yield the successive substitution iterates, stopping once stationary."""
    if not isinstance(degree, int) or degree < 1:
        raise ValueError(f"degree must be a positive integer, got {degree!r}")
    p, q, psi = _solvable_parts(eq)
    psi = psi.with_cap(degree)
    mode = psi.mode
    coords = tuple(Series.coordinate(p, degree, mode, j) for j in range(p))
    phi = SeriesMap.zero(p, degree, mode, q)
    for _ in range(degree):
        nxt = series_compose(psi, SeriesMap(coords + phi.components))
        yield nxt
        if nxt == phi:
            return
        phi = nxt


def solve_formal(eq, degree: int) -> SolutionSeries:
    """Solution series to total degree ``degree`` by repeated substitution."""
    phi = None
    for phi in formal_iterates(eq, degree):
        pass
    return SolutionSeries(phi=phi, degree_cap=degree, source=ITERATIVE)


def residual(eq, sol: SolutionSeries) -> SeriesMap:
    """The defect ``phi - psi(x, phi)`` truncated at the solution cap."""
    p, q, psi = _solvable_parts(eq)
    if sol.phi.num_vars != p or sol.phi.output_dim != q:
        raise ValueError("solution shape does not match the equation")
    cap = sol.degree_cap
    psi = psi.with_cap(cap)
    coords = tuple(Series.coordinate(p, cap, sol.phi.mode, j) for j in range(p))
    inner = SeriesMap(coords + sol.phi.components)
    return sol.phi - series_compose(psi, inner)


# -- set-partition oracle ------------------------------------------------


def _set_partitions(seq: tuple) -> Iterator[tuple[tuple, ...]]:
    """All partitions of ``seq`` into unordered non-empty blocks, each once."""
    if not seq:
        yield ()
        return
    first, rest = seq[0], seq[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + ((first,) + part[i],) + part[i + 1:]
        yield ((first,),) + part


def _pattern(indices, width: int) -> tuple[int, ...]:
    counts = [0] * width
    for j in indices:
        counts[j] += 1
    return tuple(counts)


def _expand(beta: Sequence[int]) -> tuple[int, ...]:
    out = []
    for j, e in enumerate(beta):
        out.extend([j] * e)
    return tuple(out)


def solve_partition_oracle(eq, degree: int) -> SolutionSeries:
    """Solution coefficients from the explicit multilinear recursion.

    The degree-n coefficient form of the solution is assembled by summing,
    over all splittings of the n argument slots into one (possibly empty)
    slot set fed to the x-arguments of a coefficient of psi and an
    unordered partition of the remaining slots into blocks fed to its
    y-arguments, the corresponding products of lower-degree solution
    values.  Slot sets are enumerated directly, so every partition is
    visited exactly once; no substitution machinery from the series module
    is involved.  Cost grows like the Bell numbers, hence the hard degree
    cap.
    """
    if not isinstance(degree, int) or degree < 1:
        raise ValueError(f"degree must be a positive integer, got {degree!r}")
    if degree > PARTITION_ORACLE_MAX_DEGREE:
        raise ValueError(
            f"the partition oracle is capped at degree "
            f"{PARTITION_ORACLE_MAX_DEGREE}, got {degree}")
    p, q, psi = _solvable_parts(eq)
    psi = psi.with_cap(degree)
    mode = psi.mode
    zero = zero_value(mode)

    coeff: list[dict] = [{} for _ in range(q)]
    by_alpha_r: list[dict] = [{} for _ in range(q)]
    for i, comp in enumerate(psi.components):
        for gamma, value in comp.terms.items():
            alpha, beta = tuple(gamma[:p]), tuple(gamma[p:])
            coeff[i][(alpha, beta)] = value
            r = sum(beta)
            if r:
                by_alpha_r[i].setdefault((alpha, r), []).append((beta, value))

    beta_zero = (0,) * q
    bvals: dict[int, dict[tuple, list]] = {}
    for n in range(1, degree + 1):
        level: dict[tuple, list] = {}
        for xs in combinations_with_replacement(range(p), n):
            level[xs] = _slot_sum(xs, n, p, q, coeff, by_alpha_r, bvals,
                                  beta_zero, zero)
        bvals[n] = level

    term_dicts: list[dict[tuple, Number]] = [{} for _ in range(q)]
    for n, level in bvals.items():
        for xs, vec in level.items():
            alpha = _pattern(xs, p)
            fact = multiindex_factorial(alpha)
            for i in range(q):
                if vec[i] != zero:
                    term_dicts[i][alpha] = vec[i] / fact
    comps = tuple(Series(p, degree, d, mode) for d in term_dicts)
    return SolutionSeries(phi=SeriesMap(comps), degree_cap=degree,
                          source=PARTITION_ORACLE)


def _slot_sum(xs, n, p, q, coeff, by_alpha_r, bvals, beta_zero, zero):
    total = [zero] * q
    slots = tuple(range(n))
    for m in range(n + 1):
        for chosen in combinations(slots, m):
            chosen_set = set(chosen)
            rest = tuple(t for t in slots if t not in chosen_set)
            alpha = _pattern((xs[t] for t in chosen), p)
            fa = multiindex_factorial(alpha)
            if not rest:
                for i in range(q):
                    value = coeff[i].get((alpha, beta_zero))
                    if value is not None:
                        total[i] = total[i] + value * fa
                continue
            for blocks in _set_partitions(rest):
                r = len(blocks)
                if m == 0 and r == 1:
                    continue  # would need the (absent) term linear in the unknowns
                bvecs = [bvals[len(block)][tuple(sorted(xs[t] for t in block))]
                         for block in blocks]
                for i in range(q):
                    entries = by_alpha_r[i].get((alpha, r))
                    if not entries:
                        continue
                    for beta, value in entries:
                        base = value * fa * multiindex_factorial(beta)
                        for assign in sorted(set(permutations(_expand(beta)))):
                            prod = base
                            for t, jt in enumerate(assign):
                                factor = bvecs[t][jt]
                                if factor == zero:
                                    prod = None
                                    break
                                prod = prod * factor
                            if prod is not None:
                                total[i] = total[i] + prod
    return total


# -- linear resolvent ----------------------------------------------------


def resolve_linear(raw: SeriesMap, dim_x: int, dim_y: int,
                   profile_x: NormProfile | None = None,
                   profile_y: NormProfile | None = None) -> EquationSpec:
    """Normalize a map with a linear part in the unknowns.

    Given ``y = raw(x, y)`` where ``raw`` carries a linear block ``L`` in
    the y variables, rewrite it as ``y = (I - L)^{-1} (raw - L y)`` so the
    result satisfies the no-linear-y normal form.  Exact mode inverts
    ``I - L`` over the rationals; float mode uses Gaussian elimination
    with partial pivoting.  A singular ``I - L`` is an error.
    """
    p, q = dim_x, dim_y
    if raw.num_vars != p + q:
        raise ValueError(f"map has {raw.num_vars} variables, expected {p + q}")
    if raw.output_dim != q:
        raise ValueError(f"map has {raw.output_dim} outputs, expected {q}")
    mode = raw.mode
    zero = zero_value(mode)
    one = 1 if mode == EXACT else 1.0
    origin = (0,) * (p + q)
    for i, comp in enumerate(raw.components):
        if comp.coefficient(origin) != zero:
            raise ValueError(
                f"component {i} has a constant term; shifts of the origin "
                f"are not supported")

    def unit_gamma(j: int) -> tuple[int, ...]:
        return (0,) * p + tuple(1 if k == j else 0 for k in range(q))

    L = [[raw.components[i].coefficient(unit_gamma(j)) for j in range(q)]
         for i in range(q)]
    M = [[(one if i == j else zero) - L[i][j] for j in range(q)]
         for i in range(q)]
    Minv = _invert(M, mode)

    linear_gammas = {unit_gamma(j) for j in range(q)}
    gammas = set()
    for comp in raw.components:
        for gamma in comp.terms:
            g = tuple(gamma)
            if g not in linear_gammas:
                gammas.add(g)
    term_dicts: list[dict[tuple, Number]] = [{} for _ in range(q)]
    for gamma in gammas:
        col = [comp.coefficient(gamma) for comp in raw.components]
        for i in range(q):
            acc = zero
            for j in range(q):
                acc = acc + Minv[i][j] * col[j]
            if acc != zero:
                term_dicts[i][gamma] = acc
    comps = tuple(Series(p + q, raw.degree_cap, d, mode) for d in term_dicts)
    return EquationSpec(
        dim_x=p, dim_y=q, psi=SeriesMap(comps),
        profile_x=profile_x or NormProfile(COMPONENTWISE, p),
        profile_y=profile_y or NormProfile(COMPONENTWISE, q))


def _invert(M: list[list], mode: str):
    n = len(M)
    zero = zero_value(mode)
    one = 1 if mode == EXACT else 1.0
    work = [list(row) + [one if i == j else zero for j in range(n)]
            for i, row in enumerate(M)]
    for col in range(n):
        pivot_row = None
        if mode == EXACT:
            for r in range(col, n):
                if work[r][col] != zero:
                    pivot_row = r
                    break
        else:
            best = 0.0
            for r in range(col, n):
                mag = abs(work[r][col])
                if mag > best:
                    best, pivot_row = mag, r
            if best <= 1e-13:
                pivot_row = None
        if pivot_row is None:
            raise DomainError(
                "the linear part cannot be resolved: I - L is singular")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        work[col] = [v / pivot for v in work[col]]
        for r in range(n):
            if r == col:
                continue
            factor = work[r][col]
            if factor != zero:
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]
