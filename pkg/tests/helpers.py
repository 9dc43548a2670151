"""Shared oracles and generators for the test suite.

Everything here recomputes results with plain dict arithmetic and closed
forms so the library is never used to check itself.  The dict convention
matches the library's storage (exponent tuple -> coefficient) but none of
the arithmetic below goes through Series.
"""

import math
from fractions import Fraction

from impsolve import (
    COMPONENTWISE,
    EXACT,
    FLOAT,
    ComparisonEquation,
    EquationSpec,
    NormProfile,
    Series,
    SeriesMap,
)


# ---------------------------------------------------------------------------
# naive polynomial arithmetic (the oracle ring)

def naive_mul(a, b, cap):
    """Dict-of-tuples product, truncated above total degree ``cap``."""
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if sum(k) > cap:
                continue
            out[k] = out.get(k, 0 * va) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def naive_pow(a, n, num_vars, cap, one):
    out = {(0,) * num_vars: one}
    for _ in range(n):
        out = naive_mul(out, a, cap)
    return out


def naive_substitute(outer, args, num_vars, cap, one):
    """Evaluate ``outer`` (a dict over len(args) variables) at polynomial
    arguments ``args`` (dicts over ``num_vars`` variables)."""
    total = {}
    for expo, coeff in outer.items():
        term = {(0,) * num_vars: one}
        for i, e in enumerate(expo):
            if e:
                term = naive_mul(
                    term, naive_pow(args[i], e, num_vars, cap, one), cap)
        for k, v in term.items():
            total[k] = total.get(k, 0 * coeff) + coeff * v
    return {k: v for k, v in total.items() if v != 0}


def naive_solve(terms, dim_x, dim_y, degree, one):
    """Fixed-point substitution with the naive ring.

    ``terms`` maps ``(output, alpha, beta)`` to a coefficient.  Returns a
    list of ``dim_y`` dicts over the x variables, coefficients correct up
    to total degree ``degree``.
    """
    coords = []
    for j in range(dim_x):
        e = tuple(1 if t == j else 0 for t in range(dim_x))
        coords.append({e: one})
    outers = []
    for i in range(dim_y):
        outer = {}
        for (out_i, alpha, beta), v in terms.items():
            if out_i == i:
                key = tuple(alpha) + tuple(beta)
                outer[key] = outer.get(key, 0 * v) + v
        outers.append(outer)
    phi = [{} for _ in range(dim_y)]
    for _ in range(degree):
        args = coords + phi
        phi = [naive_substitute(outers[i], args, dim_x, degree, one)
               for i in range(dim_y)]
    return phi


# ---------------------------------------------------------------------------
# closed forms

def catalan(n):
    """Catalan numbers by the convolution recurrence."""
    c = [1]
    for m in range(n):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c[n]


def principal_quadratic(x):
    """Smaller root of Y = X + Y^2."""
    return (1.0 - math.sqrt(1.0 - 4.0 * x)) / 2.0


def signed_quadratic(x):
    """The series solution of y = x - y^2 evaluated in closed form."""
    return (-1.0 + math.sqrt(1.0 + 4.0 * x)) / 2.0


# ---------------------------------------------------------------------------
# equation builders

def quadratic_equation(mode=FLOAT, sign=1, cap=24):
    """y = x + sign * y^2 with componentwise profiles."""
    if mode == EXACT:
        one, s = Fraction(1), Fraction(sign)
    else:
        one, s = 1.0, float(sign)
    psi = SeriesMap((Series(2, cap, {(1, 0): one, (0, 2): s}, mode),))
    return EquationSpec(1, 1, psi,
                        NormProfile(COMPONENTWISE, 1),
                        NormProfile(COMPONENTWISE, 1))


def quadratic_comparison(mode=FLOAT, cap=24):
    """Y = X + Y^2 as a comparison equation."""
    one = Fraction(1) if mode == EXACT else 1.0
    psi = SeriesMap((Series(2, cap, {(1, 0): one, (0, 2): one}, mode),))
    return ComparisonEquation(1, 1, psi)


def scalar_comparison(terms, cap=24):
    """A one-in-one-out float comparison equation from a plain dict."""
    psi = SeriesMap((Series(2, cap, {k: float(v) for k, v in terms.items()},
                            FLOAT),))
    return ComparisonEquation(1, 1, psi)


def random_equation(rng, mode=EXACT, cap=8, max_terms=6):
    """A seeded small equation plus its raw term dict for the oracle.

    Shapes follow the regression corpus convention: p, q <= 2, total
    degrees <= 3, no constant term, no linear y term, coefficients small
    rationals (exact mode) or their float images.
    """
    p = rng.randint(1, 2)
    q = rng.randint(1, 2)
    n_terms = rng.randint(3, max_terms)
    terms = {}
    guard = 0
    while len(terms) < n_terms and guard < 400:
        guard += 1
        i = rng.randrange(q)
        total = rng.randint(1, 3)
        alpha = [0] * p
        beta = [0] * q
        for _ in range(total):
            if rng.random() < 0.5:
                alpha[rng.randrange(p)] += 1
            else:
                beta[rng.randrange(q)] += 1
        alpha, beta = tuple(alpha), tuple(beta)
        if sum(alpha) == 0 and sum(beta) <= 1:
            continue
        num = rng.choice([-2, -1, 1, 2])
        den = rng.choice([1, 2])
        value = Fraction(num, den) if mode == EXACT else num / den
        terms[(i, alpha, beta)] = value
    comps = []
    for i in range(q):
        body = {alpha + beta: v
                for (out_i, alpha, beta), v in terms.items() if out_i == i}
        comps.append(Series(p + q, cap, body, mode))
    psi = SeriesMap(tuple(comps))
    eq = EquationSpec(p, q, psi,
                      NormProfile(COMPONENTWISE, p),
                      NormProfile(COMPONENTWISE, q))
    return eq, terms


def random_comparison(rng, cap=8):
    """A seeded positive-type float comparison equation, dims <= 2."""
    P = rng.randint(1, 2)
    Q = rng.randint(1, 2)
    comps = []
    for _ in range(Q):
        body = {}
        wanted = rng.randint(2, 4)
        guard = 0
        while len(body) < wanted and guard < 200:
            guard += 1
            total = rng.randint(1, 3)
            gamma = [0] * (P + Q)
            for _ in range(total):
                gamma[rng.randrange(P + Q)] += 1
            gamma = tuple(gamma)
            if sum(gamma[:P]) == 0 and sum(gamma) <= 1:
                continue
            body[gamma] = rng.randint(1, 4) / 2.0
        comps.append(Series(P + Q, cap, body, FLOAT))
    return ComparisonEquation(P, Q, SeriesMap(tuple(comps)))
