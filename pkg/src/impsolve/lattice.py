"""Componentwise vector order, norm profiles, and comparison equations.

The solver certifies convergence by replacing an equation ``y = psi(x, y)``
with a scalar-or-vector comparison equation ``Y = Psi(X, Y)`` whose
coefficients dominate the moduli of the original ones.  This module owns
the small vector lattice used for that bookkeeping, the norm profiles that
say how primal vectors are measured, the equation containers, and the
construction of the dominating comparison equation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import SpecFormatError
from .series import (EXACT, FLOAT, Number, Series, SeriesMap, coerce_value,
                     format_value, parse_value, zero_value)

SCALAR = "scalar"
COMPONENTWISE = "componentwise"
AGGREGATE = "aggregate"
PROFILE_KINDS = (SCALAR, COMPONENTWISE, AGGREGATE)


@dataclass(frozen=True)
class LatticeVec:
    """A finite vector ordered entry by entry."""

    entries: tuple[Number, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @classmethod
    def zeros(cls, dimension: int, mode: str = FLOAT) -> LatticeVec:
        return cls((zero_value(mode),) * dimension)

    def _check_dim(self, other: LatticeVec) -> None:
        if len(self.entries) != len(other.entries):
            raise ValueError(
                f"dimension mismatch: {len(self.entries)} vs {len(other.entries)}")

    def __add__(self, other: LatticeVec) -> LatticeVec:
        self._check_dim(other)
        return LatticeVec(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: LatticeVec) -> LatticeVec:
        self._check_dim(other)
        return LatticeVec(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, factor: Number) -> LatticeVec:
        return LatticeVec(tuple(e * factor for e in self.entries))

    def max_entry(self) -> Number:
        return max(self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def lattice_abs(v: LatticeVec) -> LatticeVec:
    return LatticeVec(tuple(abs(e) for e in v.entries))


def lattice_sup(a: LatticeVec, b: LatticeVec) -> LatticeVec:
    a._check_dim(b)
    return LatticeVec(tuple(max(x, y) for x, y in zip(a.entries, b.entries)))


def lattice_inf(a: LatticeVec, b: LatticeVec) -> LatticeVec:
    a._check_dim(b)
    return LatticeVec(tuple(min(x, y) for x, y in zip(a.entries, b.entries)))


def lattice_leq(a: LatticeVec, b: LatticeVec) -> bool:
    """Entrywise partial order; incomparable pairs come out False both ways."""
    a._check_dim(b)
    return all(x <= y for x, y in zip(a.entries, b.entries))


@dataclass(frozen=True)
class NormProfile:
    """How vectors of a primal space are measured into the ordered space.

    ``scalar`` is plain absolute value of a one-dimensional vector,
    ``componentwise`` keeps every coordinate modulus, and ``aggregate``
    collapses to the max norm.
    """

    kind: str
    primal_dim: int

    def __post_init__(self) -> None:
        if self.kind not in PROFILE_KINDS:
            raise ValueError(
                f"unknown norm profile kind {self.kind!r}; expected one of {PROFILE_KINDS}")
        if not isinstance(self.primal_dim, int) or self.primal_dim < 1:
            raise ValueError(f"primal_dim must be a positive integer, got {self.primal_dim!r}")
        if self.kind == SCALAR and self.primal_dim != 1:
            raise ValueError("a scalar norm profile needs a one-dimensional primal space")

    @property
    def norming_dim(self) -> int:
        return self.primal_dim if self.kind == COMPONENTWISE else 1


def norm(profile: NormProfile, v: Sequence[Number]) -> LatticeVec:
    entries = tuple(v.entries) if isinstance(v, LatticeVec) else tuple(v)
    if len(entries) != profile.primal_dim:
        raise ValueError(
            f"vector has {len(entries)} entries, profile expects {profile.primal_dim}")
    if profile.kind == COMPONENTWISE:
        return LatticeVec(tuple(abs(e) for e in entries))
    if profile.kind == SCALAR:
        return LatticeVec((abs(entries[0]),))
    return LatticeVec((max(abs(e) for e in entries),))


def _validate_equation_terms(psi: SeriesMap, dim_x: int, dim_y: int) -> None:
    for i, comp in enumerate(psi.components):
        for gamma in comp.terms:
            if gamma.degree == 0:
                raise SpecFormatError(
                    f"component {i}: constant term is not allowed; the map must "
                    f"vanish at the origin")
            if sum(gamma[:dim_x]) == 0 and sum(gamma[dim_x:]) == 1:
                raise SpecFormatError(
                    f"component {i}: linear y term {tuple(gamma)} is not allowed; "
                    f"resolve the linear part first")


@dataclass(frozen=True)
class EquationSpec:
    """An implicit equation ``y = psi(x, y)`` in normalized form.

    ``psi`` is a truncated map in ``dim_x + dim_y`` variables (the x block
    first) with ``dim_y`` outputs, no constant term, and no term linear in
    y alone.
    """

    dim_x: int
    dim_y: int
    psi: SeriesMap
    profile_x: NormProfile
    profile_y: NormProfile

    def __post_init__(self) -> None:
        if self.dim_x < 1 or self.dim_y < 1:
            raise ValueError("dim_x and dim_y must be positive")
        if self.psi.num_vars != self.dim_x + self.dim_y:
            raise ValueError(
                f"psi has {self.psi.num_vars} variables, expected "
                f"{self.dim_x + self.dim_y}")
        if self.psi.output_dim != self.dim_y:
            raise ValueError(
                f"psi has {self.psi.output_dim} outputs, expected {self.dim_y}")
        if self.psi.degree_cap < 1:
            raise ValueError("the degree cap must be at least 1")
        if self.profile_x.primal_dim != self.dim_x:
            raise ValueError("profile_x does not match dim_x")
        if self.profile_y.primal_dim != self.dim_y:
            raise ValueError("profile_y does not match dim_y")
        _validate_equation_terms(self.psi, self.dim_x, self.dim_y)

    @property
    def mode(self) -> str:
        return self.psi.mode

    @property
    def degree_cap(self) -> int:
        return self.psi.degree_cap


@dataclass(frozen=True)
class ComparisonEquation:
    """A dominating equation ``Y = Psi(X, Y)`` of positive type.

    All coefficients are non-negative, there is no constant term, and no
    term linear in Y alone, so the fixed-point iterates started at zero
    increase monotonically.
    """

    dim_X: int
    dim_Y: int
    Psi: SeriesMap

    def __post_init__(self) -> None:
        if self.dim_X < 1 or self.dim_Y < 1:
            raise ValueError("dim_X and dim_Y must be positive")
        if self.Psi.num_vars != self.dim_X + self.dim_Y:
            raise ValueError(
                f"Psi has {self.Psi.num_vars} variables, expected "
                f"{self.dim_X + self.dim_Y}")
        if self.Psi.output_dim != self.dim_Y:
            raise ValueError(
                f"Psi has {self.Psi.output_dim} outputs, expected {self.dim_Y}")
        if self.Psi.degree_cap < 1:
            raise ValueError("the degree cap must be at least 1")
        zero = zero_value(self.Psi.mode)
        for i, comp in enumerate(self.Psi.components):
            for gamma, value in comp.terms.items():
                if value < zero:
                    raise ValueError(
                        f"component {i} has a negative coefficient at "
                        f"{tuple(gamma)}: not of positive type")
        _validate_equation_terms(self.Psi, self.dim_X, self.dim_Y)

    @property
    def mode(self) -> str:
        return self.Psi.mode

    @property
    def degree_cap(self) -> int:
        return self.Psi.degree_cap

    def as_float(self) -> ComparisonEquation:
        if self.mode == FLOAT:
            return self
        return ComparisonEquation(self.dim_X, self.dim_Y, self.Psi.as_float())


def series_abs(s: Series) -> Series:
    """Entrywise modulus of the coefficients."""
    return Series(s.num_vars, s.degree_cap,
                  {a: abs(v) for a, v in s.terms.items()}, s.mode)


def map_abs(m: SeriesMap) -> SeriesMap:
    return SeriesMap(tuple(series_abs(comp) for comp in m.components))


def majorant(eq: EquationSpec) -> ComparisonEquation:
    """Build the comparison equation dominating ``eq``.

    With componentwise (or scalar) profiles on both sides, the moduli of
    the coefficients are a majorant and the dimensions carry over.  As
    soon as an aggregate profile is involved, everything collapses to one
    norming variable per side and the coefficient at bidegree ``(m, n)``
    is the largest coefficient-modulus sum any output component carries at
    that bidegree; that sum bounds the max norm of the corresponding
    symmetric multilinear term, though it is coarser than the tight
    operator norm.
    """
    if eq.profile_x.kind != AGGREGATE and eq.profile_y.kind != AGGREGATE:
        return ComparisonEquation(eq.dim_x, eq.dim_y, map_abs(eq.psi))
    p = eq.dim_x
    cap = eq.degree_cap
    mode = eq.mode
    zero = zero_value(mode)
    sums: list[dict[tuple[int, int], Number]] = []
    for comp in eq.psi.components:
        acc: dict[tuple[int, int], Number] = {}
        for gamma, value in comp.terms.items():
            key = (sum(gamma[:p]), sum(gamma[p:]))
            acc[key] = acc.get(key, zero) + abs(value)
        sums.append(acc)
    terms: dict[tuple[int, int], Number] = {}
    for acc in sums:
        for key, value in acc.items():
            if key not in terms or value > terms[key]:
                terms[key] = value
    collapsed = Series(2, cap, {(m, n): v for (m, n), v in terms.items()}, mode)
    return ComparisonEquation(1, 1, SeriesMap((collapsed,)))


def comparison_from_spec(eq: EquationSpec) -> ComparisonEquation:
    """Reinterpret an equation with non-negative coefficients as a comparison.

    This is the identity on the coefficients; it fails loudly when any
    coefficient is negative.  Use :func:`majorant` to build a comparison
    equation from a general one.
    """
    try:
        return ComparisonEquation(eq.dim_x, eq.dim_y, eq.psi)
    except ValueError as exc:
        raise SpecFormatError(str(exc)) from None


# -- sampled domination check -------------------------------------------


@dataclass(frozen=True)
class MajorantViolation:
    kind: str
    component: int
    point: tuple[Number, ...]
    increment: tuple[Number, ...] | None
    lhs: Number
    rhs: Number


@dataclass(frozen=True)
class MajorantSampleReport:
    points_checked: int
    increments_checked: int
    violations: tuple[MajorantViolation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def _draw_point(rng: random.Random, lo: LatticeVec, hi: LatticeVec, mode: str):
    if mode == FLOAT:
        return tuple(a + (b - a) * rng.random()
                     for a, b in zip(lo.entries, hi.entries))
    denom = 1 << 16
    return tuple(a + (b - a) * Fraction(rng.randrange(denom + 1), denom)
                 for a, b in zip(lo.entries, hi.entries))


def _measure(eq: EquationSpec, cmp: ComparisonEquation,
             z: tuple[Number, ...]) -> tuple[LatticeVec, LatticeVec]:
    """Norms of the primal point and of psi at the point, as lattice vectors."""
    x, y = z[:eq.dim_x], z[eq.dim_x:]
    Xn = norm(eq.profile_x, x)
    Yn = norm(eq.profile_y, y)
    if Xn.dimension != cmp.dim_X or Yn.dimension != cmp.dim_Y:
        raise ValueError(
            "the norm profiles do not match the comparison equation dimensions")
    value = eq.psi.evaluate(z)
    return LatticeVec(Xn.entries + Yn.entries), norm(eq.profile_y, value)


def check_majorant_samples(eq: EquationSpec, cmp: ComparisonEquation,
                           n_samples: int, box: tuple[LatticeVec, LatticeVec],
                           check_increments: bool = False,
                           rng: random.Random | None = None,
                           slack: float = 1e-9) -> MajorantSampleReport:
    """Spot-check the domination of ``eq`` by ``cmp`` on random points.

    Draws ``n_samples`` points from the box (and, when asked, the same
    number of increment pairs) and verifies the value and increment
    inequalities that a majorant must satisfy.  In float mode a violation
    needs to clear a small relative slack before it is reported; exact
    mode tolerates nothing.
    """
    if eq.mode != cmp.mode:
        raise ValueError(f"mode mismatch: {eq.mode} vs {cmp.mode}")
    lo, hi = box
    lo._check_dim(hi)
    if lo.dimension != eq.dim_x + eq.dim_y:
        raise ValueError(
            f"box has dimension {lo.dimension}, expected {eq.dim_x + eq.dim_y}")
    for a, b in zip(lo.entries, hi.entries):
        coerce_value(a, eq.mode)
        coerce_value(b, eq.mode)
        if a > b:
            raise ValueError("box lower corner exceeds upper corner")
    if rng is None:
        rng = random.Random(0)
    exact = eq.mode == EXACT

    def exceeded(lhs: Number, rhs: Number) -> bool:
        if exact:
            return lhs > rhs
        return lhs > rhs + slack * max(1.0, abs(rhs))

    violations: list[MajorantViolation] = []
    points = [_draw_point(rng, lo, hi, eq.mode) for _ in range(n_samples)]
    for z in points:
        Z, lhs = _measure(eq, cmp, z)
        rhs = cmp.Psi.evaluate(Z.entries)
        for i, (a, b) in enumerate(zip(lhs.entries, rhs)):
            if exceeded(a, b):
                violations.append(MajorantViolation(
                    kind="value", component=i, point=z, increment=None,
                    lhs=a, rhs=b))
    increments = 0
    if check_increments:
        for _ in range(n_samples):
            z = _draw_point(rng, lo, hi, eq.mode)
            w = _draw_point(rng, lo, hi, eq.mode)
            increments += 1
            zw = tuple(a + b for a, b in zip(z, w))
            Z, _ = _measure(eq, cmp, z)
            W = LatticeVec(norm(eq.profile_x, w[:eq.dim_x]).entries
                           + norm(eq.profile_y, w[eq.dim_x:]).entries)
            move = [a - b for a, b in
                    zip(eq.psi.evaluate(zw), eq.psi.evaluate(z))]
            lhs = norm(eq.profile_y, move)
            base = cmp.Psi.evaluate(Z.entries)
            bumped = cmp.Psi.evaluate((Z + W).entries)
            for i, (a, lo_v, hi_v) in enumerate(zip(lhs.entries, base, bumped)):
                if exceeded(a, hi_v - lo_v):
                    violations.append(MajorantViolation(
                        kind="increment", component=i, point=z, increment=w,
                        lhs=a, rhs=hi_v - lo_v))
    return MajorantSampleReport(points_checked=len(points),
                                increments_checked=increments,
                                violations=tuple(violations))


# -- equation files ------------------------------------------------------


def equation_to_dict(eq: EquationSpec) -> dict:
    """Serialize an equation to the canonical JSON-ready dictionary."""
    terms = []
    for i, comp in enumerate(eq.psi.components):
        for gamma in sorted(comp.terms, key=lambda g: (g.degree, tuple(g))):
            terms.append({
                "output": i,
                "alpha": list(gamma[:eq.dim_x]),
                "beta": list(gamma[eq.dim_x:]),
                "value": format_value(comp.terms[gamma], eq.mode),
            })
    return {
        "dim_x": eq.dim_x,
        "dim_y": eq.dim_y,
        "mode": eq.mode,
        "profile_x": eq.profile_x.kind,
        "profile_y": eq.profile_y.kind,
        "degree_cap": eq.degree_cap,
        "terms": terms,
    }


def comparison_to_dict(cmp: ComparisonEquation) -> dict:
    eq = EquationSpec(cmp.dim_X, cmp.dim_Y, cmp.Psi,
                      NormProfile(COMPONENTWISE, cmp.dim_X),
                      NormProfile(COMPONENTWISE, cmp.dim_Y))
    return equation_to_dict(eq)


def _require(data: Mapping, key: str, kind: type):
    if key not in data:
        raise SpecFormatError(f"missing field {key!r}")
    value = data[key]
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SpecFormatError(f"field {key!r} must be an integer, got {value!r}")
    elif not isinstance(value, kind):
        raise SpecFormatError(
            f"field {key!r} must be a {kind.__name__}, got {type(value).__name__}")
    return value


def equation_from_dict(data: Mapping) -> EquationSpec:
    """Parse the canonical dictionary form, naming the offending field on error."""
    if not isinstance(data, Mapping):
        raise SpecFormatError("an equation document must be a JSON object")
    dim_x = _require(data, "dim_x", int)
    dim_y = _require(data, "dim_y", int)
    mode = _require(data, "mode", str)
    if mode not in (EXACT, FLOAT):
        raise SpecFormatError(f"field 'mode' must be 'exact' or 'float', got {mode!r}")
    profile_x = _require(data, "profile_x", str)
    profile_y = _require(data, "profile_y", str)
    degree_cap = _require(data, "degree_cap", int)
    raw_terms = _require(data, "terms", list)
    if dim_x < 1 or dim_y < 1:
        raise SpecFormatError("dim_x and dim_y must be positive")
    if degree_cap < 1:
        raise SpecFormatError("degree_cap must be at least 1")
    term_dicts: list[dict[tuple, Number]] = [{} for _ in range(dim_y)]
    for k, rec in enumerate(raw_terms):
        if not isinstance(rec, Mapping):
            raise SpecFormatError(f"terms[{k}] must be an object")
        try:
            output = rec["output"]
            alpha = rec["alpha"]
            beta = rec["beta"]
            value = rec["value"]
        except KeyError as exc:
            raise SpecFormatError(
                f"terms[{k}] is missing field {exc.args[0]!r}") from None
        if not isinstance(output, int) or isinstance(output, bool) \
                or not 0 <= output < dim_y:
            raise SpecFormatError(
                f"terms[{k}]: output {output!r} out of range for dim_y={dim_y}")
        if not isinstance(alpha, list) or len(alpha) != dim_x:
            raise SpecFormatError(
                f"terms[{k}]: alpha must be a list of {dim_x} exponents")
        if not isinstance(beta, list) or len(beta) != dim_y:
            raise SpecFormatError(
                f"terms[{k}]: beta must be a list of {dim_y} exponents")
        for e in list(alpha) + list(beta):
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise SpecFormatError(
                    f"terms[{k}]: exponents must be non-negative integers")
        if sum(alpha) + sum(beta) == 0:
            raise SpecFormatError(f"terms[{k}]: constant term is not allowed")
        if sum(alpha) == 0 and sum(beta) == 1:
            raise SpecFormatError(
                f"terms[{k}]: linear y term is not allowed; resolve the linear "
                f"part before writing the equation")
        if sum(alpha) + sum(beta) > degree_cap:
            raise SpecFormatError(
                f"terms[{k}]: total degree {sum(alpha) + sum(beta)} exceeds "
                f"degree_cap {degree_cap}")
        gamma = tuple(alpha) + tuple(beta)
        if gamma in term_dicts[output]:
            raise SpecFormatError(
                f"terms[{k}]: duplicate term for output {output} at {gamma}")
        try:
            term_dicts[output][gamma] = parse_value(value, mode)
        except ValueError as exc:
            raise SpecFormatError(f"terms[{k}]: {exc}") from None
    try:
        psi = SeriesMap(tuple(Series(dim_x + dim_y, degree_cap, d, mode)
                              for d in term_dicts))
        return EquationSpec(
            dim_x=dim_x, dim_y=dim_y, psi=psi,
            profile_x=NormProfile(profile_x, dim_x),
            profile_y=NormProfile(profile_y, dim_y))
    except ValueError as exc:
        raise SpecFormatError(str(exc)) from None
