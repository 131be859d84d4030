"""Exact multivariate polynomials over the rationals, and polynomial vector fields.

Polynomials model the coefficient ring of smooth functions on a coordinate
chart.  Every value is immutable and stored in canonical sparse form (no zero
coefficients), so ``==`` is semantic equality.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]


class DimensionError(ValueError):
    """Operands live on charts of different dimension, or shapes disagree."""


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Polynomial:
    """Sparse polynomial in ``n`` variables with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        if n < 1:
            raise DimensionError("chart dimension must be positive")
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != n or any(e < 0 for e in mono):
                    raise DimensionError(f"bad exponent vector {mono} for n={n}")
                c = _as_fraction(c)
                if c:
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "Polynomial":
        c = _as_fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        if not 0 <= i < n:
            raise DimensionError(f"variable index {i} out of range for n={n}")
        mono = tuple(1 if j == i else 0 for j in range(n))
        return cls._raw(n, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.n}

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * self.n, Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(m) for m in self._terms), default=-1)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {self._terms!r})"

    # -- ring operations -----------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Polynomial._raw(self.n, {})
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial._raw(self.n, {})
        return Polynomial._raw(self.n, {m: v * c for m, v in self._terms.items()})

    def partial(self, i: int) -> "Polynomial":
        """Exact partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.n:
            raise DimensionError(f"axis {i} out of range for n={self.n}")
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return Polynomial._raw(self.n, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise DimensionError("point has wrong dimension")
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul``; raises :class:`DimensionError` on mismatch."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_partial(p: Polynomial, i: int) -> Polynomial:
    return p.partial(i)


class VectorField:
    """Polynomial vector field ``sum_i X^i d/dx_i`` on an ``n``-dimensional chart."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise DimensionError("a vector field needs at least one component")
        n = len(comps)
        for c in comps:
            if not isinstance(c, Polynomial) or c.n != n:
                raise DimensionError("vector field needs n polynomial components of dimension n")
        self.components = comps

    @classmethod
    def coordinate(cls, n: int, i: int) -> "VectorField":
        return cls(Polynomial.constant(n, 1 if j == i else 0) for j in range(n))

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls(Polynomial.zero(n) for _ in range(n))

    @property
    def n(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorField) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"VectorField({list(self.components)!r})"

    def _check(self, other: "VectorField") -> None:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(a - b for a, b in zip(self.components, other.components))

    def __neg__(self) -> "VectorField":
        return VectorField(-a for a in self.components)

    def scale(self, f: Polynomial) -> "VectorField":
        if f.n != self.n:
            raise DimensionError("dimension mismatch")
        return VectorField(f * a for a in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __call__(self, f: Polynomial) -> Polynomial:
        return field_apply(self, f)


def field_apply(X: VectorField, f: Polynomial) -> Polynomial:
    """Directional derivative ``X(f) = sum_i X^i * df/dx_i``."""
    if X.n != f.n:
        raise DimensionError(f"dimension mismatch: field n={X.n}, polynomial n={f.n}")
    out = Polynomial.zero(f.n)
    for i, xi in enumerate(X.components):
        if xi:
            out = out + xi * f.partial(i)
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Component formula ``[X,Y]^j = X(Y^j) - Y(X^j)``."""
    X._check(Y)
    return VectorField(field_apply(X, yj) - field_apply(Y, xj)
                       for xj, yj in zip(X.components, Y.components))
