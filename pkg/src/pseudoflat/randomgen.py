"""Seeded random instances for the randomized identity suites.

Coefficients are small rationals (numerators in [-3, 3], denominators 1 or 2)
so that symbolic expansion stays cheap.  All generators take an explicit
:class:`random.Random` so runs are reproducible from a seed.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .bundle import BundleForm, BundleHom
from .forms import ScalarForm, form_d, form_scale
from .polynomial import Polynomial, VectorField

FAMILIES = ("generic", "ordinary", "gauge_flat", "abelian_flat", "tensorial_planar",
            "tensorial_line", "zero")


def random_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2)))


def random_polynomial(rng: random.Random, n: int, max_degree: int = 2,
                      max_terms: int = 3) -> Polynomial:
    monos = [m for d in range(max_degree + 1)
             for m in combinations_with_replacement(range(n), d)]
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * n
        for i in rng.choice(monos):
            exps[i] += 1
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + random_coeff(rng)
    return Polynomial(n, terms)


def random_form(rng: random.Random, n: int, degree: int, max_degree: int = 2,
                max_terms: int = 2) -> ScalarForm:
    if degree > n:
        return ScalarForm.zero(degree, n)
    idxs = list(combinations(range(n), degree))
    terms = {}
    for idx in rng.sample(idxs, min(len(idxs), rng.randint(1, max_terms))):
        terms[idx] = random_polynomial(rng, n, max_degree)
    return ScalarForm(degree, n, terms)


def random_bundle_form(rng: random.Random, n: int, rank: int, degree: int,
                       max_degree: int = 2) -> BundleForm:
    return BundleForm([random_form(rng, n, degree, max_degree) for _ in range(rank)], degree, n)


def random_section(rng: random.Random, n: int, rank: int, max_degree: int = 2) -> BundleForm:
    return random_bundle_form(rng, n, rank, 0, max_degree)


def random_field(rng: random.Random, n: int, max_degree: int = 2) -> VectorField:
    return VectorField(random_polynomial(rng, n, max_degree) for _ in range(n))


def random_hom(rng: random.Random, rows: int, cols: int, n: int, max_degree: int = 2) -> BundleHom:
    return BundleHom([[random_polynomial(rng, n, max_degree) for _ in range(cols)]
                      for _ in range(rows)], n)


def _random_connection_matrix(rng, rows, cols, n, max_degree):
    return [[random_form(rng, n, 1, max_degree) for _ in range(cols)] for _ in range(rows)]


def _const_matrix(rng, r, n):
    return [[Polynomial.constant(n, random_coeff(rng)) for _ in range(r)] for _ in range(r)]


def random_operator(rng: random.Random, n: int, rank: int, max_degree: int = 2,
                    family: str = "generic", target_rank: int | None = None):
    """Random operator from one of :data:`FAMILIES`.

    ``generic`` draws P and A freely (and may be non-square when
    ``target_rank`` differs).  The other families produce pseudoconnections
    with known flatness:

    * ``ordinary``: P = identity, A random.
    * ``gauge_flat``: P = identity, A = g^-1 dg for a unipotent polynomial g;
      strongly flat.
    * ``abelian_flat``: P = identity, A = dh * identity; strongly flat.
    * ``tensorial_planar``: P = 0, A built from dx_0, dx_1 only; all 3-forms
      produced vanish, so weakly flat.
    * ``tensorial_line``: P = 0, A = w (x) M for one 1-form w; strongly flat.
    * ``zero``: P = 0, A = 0.
    """
    from .engine import ODerivOperator

    r2 = rank if target_rank is None else target_rank
    if family != "generic" and r2 != rank:
        raise ValueError(f"family {family!r} needs a square operator")
    ident = BundleHom.identity(rank, n)
    zeroP = BundleHom.zero(rank, rank, n)

    if family == "generic":
        P = random_hom(rng, r2, rank, n, max_degree)
        A = _random_connection_matrix(rng, r2, rank, n, max_degree)
    elif family == "ordinary":
        P = ident
        A = _random_connection_matrix(rng, rank, rank, n, max_degree)
    elif family == "gauge_flat":
        P = ident
        A = _gauge_flat_matrix(rng, rank, n, max_degree)
    elif family == "abelian_flat":
        P = ident
        dh = form_d(ScalarForm.function(random_polynomial(rng, n, max_degree + 1)))
        A = [[dh if i == j else ScalarForm.zero(1, n) for i in range(rank)] for j in range(rank)]
    elif family == "tensorial_planar":
        P = zeroP
        planar = min(n, 2)
        A = [[ScalarForm(1, n, {(k,): Polynomial.constant(n, random_coeff(rng))
                                for k in range(planar)})
              for _ in range(rank)] for _ in range(rank)]
    elif family == "tensorial_line":
        P = zeroP
        w = random_form(rng, n, 1, max_degree)
        M = _const_matrix(rng, rank, n)
        A = [[form_scale(M[j][i], w) for i in range(rank)] for j in range(rank)]
    elif family == "zero":
        P = zeroP
        A = [[ScalarForm.zero(1, n)] * rank for _ in range(rank)]
    else:
        raise ValueError(f"unknown family {family!r}")
    return ODerivOperator(P, A)


def _gauge_flat_matrix(rng, rank, n, max_degree):
    # g = I + N with N strictly upper triangular, so g^-1 = sum_k (-N)^k is polynomial
    zero = Polynomial.zero(n)
    one = Polynomial.constant(n, 1)
    N = [[random_polynomial(rng, n, max_degree, 2) if j < i else zero for i in range(rank)]
         for j in range(rank)]
    g = BundleHom([[N[j][i] + (one if i == j else zero) for i in range(rank)]
                   for j in range(rank)], n)
    negN = BundleHom([[-e for e in row] for row in N], n)
    ginv = BundleHom.identity(rank, n)
    power = BundleHom.identity(rank, n)
    for _ in range(rank - 1):
        power = power @ negN
        ginv = ginv + power
    # A[j][i] = sum_k ginv[j][k] dg[k][i]
    A = []
    for j in range(rank):
        row = []
        for i in range(rank):
            acc = ScalarForm.zero(1, n)
            for k in range(rank):
                if ginv[j, k]:
                    acc = acc + form_scale(ginv[j, k], form_d(ScalarForm.function(g[k, i])))
            row.append(acc)
        A.append(row)
    return A
