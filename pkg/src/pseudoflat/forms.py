"""Scalar differential forms with polynomial coefficients.

A k-form is stored as a map from strictly increasing index tuples
``(i1 < ... < ik)`` to nonzero coefficient polynomials.  Evaluation on vector
fields uses the determinant convention with no ``1/k!`` factor, so for
1-forms ``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterator, Mapping, Sequence, Tuple

from .polynomial import DimensionError, Polynomial, VectorField

Index = Tuple[int, ...]


def sort_with_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """Sort ``indices`` returning (sign of the permutation, sorted tuple).

    The sign is 0 when an index repeats.
    """
    idx = list(indices)
    sign = 1
    # insertion sort; k is at most the chart dimension
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


class ScalarForm:
    __slots__ = ("degree", "n", "_terms", "_hash")

    def __init__(self, degree: int, n: int, terms: Mapping[Sequence[int], Polynomial] | None = None):
        if degree < 0:
            raise ValueError("form degree must be non-negative")
        if n < 1:
            raise DimensionError("chart dimension must be positive")
        clean: Dict[Index, Polynomial] = {}
        if terms and degree <= n:
            for idx, coeff in terms.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise ValueError(f"index {idx} does not match degree {degree}")
                if any(not 0 <= i < n for i in idx):
                    raise DimensionError(f"index {idx} out of range for n={n}")
                if not isinstance(coeff, Polynomial):
                    coeff = Polynomial.constant(n, coeff)
                if coeff.n != n:
                    raise DimensionError("coefficient dimension mismatch")
                sign, key = sort_with_sign(idx)
                if not sign or not coeff:
                    continue
                v = clean.get(key, Polynomial.zero(n)) + (coeff if sign > 0 else -coeff)
                if v:
                    clean[key] = v
                else:
                    clean.pop(key, None)
        self.degree = degree
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, degree: int, n: int, terms: Dict[Index, Polynomial]) -> "ScalarForm":
        f = object.__new__(cls)
        f.degree = degree
        f.n = n
        f._terms = terms if degree <= n else {}
        f._hash = None
        return f

    @classmethod
    def zero(cls, degree: int, n: int) -> "ScalarForm":
        return cls._raw(degree, n, {})

    @classmethod
    def function(cls, p: Polynomial) -> "ScalarForm":
        """The 0-form with value ``p``."""
        return cls._raw(0, p.n, {(): p} if p else {})

    @classmethod
    def basis(cls, n: int, indices: Sequence[int]) -> "ScalarForm":
        """``dx_{i1} ^ ... ^ dx_{ik}`` (indices need not be sorted)."""
        return cls(len(indices), n, {tuple(indices): Polynomial.constant(n, 1)})

    @classmethod
    def dx(cls, n: int, i: int) -> "ScalarForm":
        return cls.basis(n, (i,))

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Index, Polynomial]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Index, Polynomial]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, indices: Sequence[int]) -> Polynomial:
        sign, key = sort_with_sign(indices)
        c = self._terms.get(key)
        if c is None or not sign:
            return Polynomial.zero(self.n)
        return c if sign > 0 else -c

    def as_polynomial(self) -> Polynomial:
        if self.degree != 0:
            raise ValueError(f"a {self.degree}-form is not a function")
        return self._terms.get((), Polynomial.zero(self.n))

    def max_coefficient_degree(self) -> int:
        return max((c.degree() for c in self._terms.values()), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarForm):
            return NotImplemented
        return (self.degree == other.degree and self.n == other.n
                and self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.degree, self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"ScalarForm({self.degree}, {self.n}, {self._terms!r})"

    # -- linear structure ----------------------------------------------

    def _check(self, other: "ScalarForm") -> None:
        if not isinstance(other, ScalarForm):
            raise TypeError(f"expected ScalarForm, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.degree != self.degree:
            raise ValueError(f"cannot add a {self.degree}-form and a {other.degree}-form")

    def __add__(self, other: "ScalarForm") -> "ScalarForm":
        self._check(other)
        if not other._terms:
            return self
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return ScalarForm._raw(self.degree, self.n, out)

    def __neg__(self) -> "ScalarForm":
        return ScalarForm._raw(self.degree, self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "ScalarForm") -> "ScalarForm":
        return self + (-other)

    def scale(self, f) -> "ScalarForm":
        return form_scale(f, self)

    def wedge(self, other: "ScalarForm") -> "ScalarForm":
        return form_wedge(self, other)

    def __xor__(self, other: "ScalarForm") -> "ScalarForm":
        return form_wedge(self, other)

    def d(self) -> "ScalarForm":
        return form_d(self)


def form_scale(f, a: ScalarForm) -> ScalarForm:
    """Multiply every coefficient of ``a`` by the function ``f``."""
    if not isinstance(f, Polynomial):
        f = Polynomial.constant(a.n, f)
    if f.n != a.n:
        raise DimensionError(f"dimension mismatch: {f.n} vs {a.n}")
    if not f:
        return ScalarForm.zero(a.degree, a.n)
    out = {}
    for k, c in a._terms.items():
        v = f * c
        if v:
            out[k] = v
    return ScalarForm._raw(a.degree, a.n, out)


def form_wedge(a: ScalarForm, b: ScalarForm) -> ScalarForm:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    degree = a.degree + b.degree
    n = a.n
    if degree > n or not a._terms or not b._terms:
        return ScalarForm.zero(degree, n)
    out: Dict[Index, Polynomial] = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            if set(ia) & set(ib):
                continue
            sign, key = sort_with_sign(ia + ib)
            c = ca * cb
            if sign < 0:
                c = -c
            v = out[key] + c if key in out else c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return ScalarForm._raw(degree, n, out)


def form_d(a: ScalarForm) -> ScalarForm:
    """Exterior derivative: ``d(f dx_I) = sum_i (df/dx_i) dx_i ^ dx_I``."""
    n = a.n
    degree = a.degree + 1
    if degree > n:
        return ScalarForm.zero(degree, n)
    out: Dict[Index, Polynomial] = {}
    for idx, c in a._terms.items():
        for i in range(n):
            if i in idx:
                continue
            dc = c.partial(i)
            if not dc:
                continue
            sign, key = sort_with_sign((i,) + idx)
            if sign < 0:
                dc = -dc
            v = out[key] + dc if key in out else dc
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return ScalarForm._raw(degree, n, out)


def _det(rows: Sequence[Sequence[Polynomial]], n: int) -> Polynomial:
    # Laplace expansion along the first row; k <= n <= small
    k = len(rows)
    if k == 0:
        return Polynomial.constant(n, 1)
    if k == 1:
        return rows[0][0]
    total = Polynomial.zero(n)
    for j in range(k):
        if not rows[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _det(minor, n)
        total = total + term if j % 2 == 0 else total - term
    return total


def form_ev(a: ScalarForm, *fields: VectorField) -> Polynomial:
    """Evaluate a k-form on k vector fields (determinant convention)."""
    if len(fields) != a.degree:
        raise ValueError(f"a {a.degree}-form needs {a.degree} vector fields, got {len(fields)}")
    for X in fields:
        if X.n != a.n:
            raise DimensionError(f"dimension mismatch: form n={a.n}, field n={X.n}")
    if a.degree == 0:
        return a.as_polynomial()
    total = Polynomial.zero(a.n)
    for idx, c in a._terms.items():
        rows = [[X[i] for X in fields] for i in idx]
        total = total + c * _det(rows, a.n)
    return total


def all_indices(n: int, k: int) -> Iterator[Index]:
    """Canonical basis index tuples of k-forms on an n-chart."""
    return combinations(range(n), k)

