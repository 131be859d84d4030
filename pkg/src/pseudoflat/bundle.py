"""Bundle-valued forms in a fixed global frame, and bundle homomorphisms.

A ``BundleForm`` of degree k and rank r is the component vector
``(S_1, ..., S_r)`` representing ``sum_j S_j (x) e_j``.  A ``BundleHom`` is an
``r' x r`` matrix of polynomials acting on the frame by
``alpha(e_i) = sum_j alpha[j][i] e'_j``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .forms import ScalarForm, form_ev, form_scale, form_wedge
from .polynomial import DimensionError, Polynomial, VectorField


class ShapeError(ValueError):
    """Ranks or matrix shapes do not line up."""


class BundleForm:
    __slots__ = ("components", "degree", "n")

    def __init__(self, components: Iterable[ScalarForm], degree: int | None = None, n: int | None = None):
        comps = tuple(components)
        if not comps:
            raise ShapeError("a bundle form needs rank >= 1")
        degree = comps[0].degree if degree is None else degree
        n = comps[0].n if n is None else n
        for c in comps:
            if not isinstance(c, ScalarForm):
                raise TypeError(f"component must be a ScalarForm, got {type(c).__name__}")
            if c.degree != degree or c.n != n:
                raise ShapeError("components must share degree and chart dimension")
        self.components = comps
        self.degree = degree
        self.n = n

    @classmethod
    def zero(cls, degree: int, rank: int, n: int) -> "BundleForm":
        z = ScalarForm.zero(degree, n)
        return cls([z] * rank)

    @classmethod
    def section(cls, coeffs: Sequence[Polynomial]) -> "BundleForm":
        """Degree-0 form ``sum_i f_i e_i``."""
        return cls(ScalarForm.function(f) for f in coeffs)

    @classmethod
    def frame(cls, rank: int, n: int, i: int) -> "BundleForm":
        """The frame section ``e_i`` (0-based)."""
        if not 0 <= i < rank:
            raise ShapeError(f"frame index {i} out of range for rank {rank}")
        one = Polynomial.constant(n, 1)
        zero = Polynomial.zero(n)
        return cls.section([one if j == i else zero for j in range(rank)])

    @classmethod
    def generator(cls, omega: ScalarForm, s: "BundleForm") -> "BundleForm":
        """``omega (x) s`` for a section ``s``."""
        if s.degree != 0:
            raise ValueError("generator needs a degree-0 section")
        return scalar_wedge_bundle(omega, s)

    @property
    def rank(self) -> int:
        return len(self.components)

    def __getitem__(self, j: int) -> ScalarForm:
        return self.components[j]

    def __iter__(self):
        return iter(self.components)

    def coefficients(self) -> tuple:
        """Component functions of a degree-0 section."""
        if self.degree != 0:
            raise ValueError("only sections have function coefficients")
        return tuple(c.as_polynomial() for c in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BundleForm):
            return NotImplemented
        return (self.degree == other.degree and self.n == other.n
                and self.components == other.components)

    def __hash__(self) -> int:
        return hash((self.degree, self.components))

    def __repr__(self) -> str:
        return f"BundleForm(degree={self.degree}, {list(self.components)!r})"

    def _check(self, other: "BundleForm") -> None:
        if not isinstance(other, BundleForm):
            raise TypeError(f"expected BundleForm, got {type(other).__name__}")
        if other.rank != self.rank:
            raise ShapeError(f"rank mismatch: {self.rank} vs {other.rank}")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "BundleForm") -> "BundleForm":
        self._check(other)
        return BundleForm((a + b for a, b in zip(self.components, other.components)),
                          self.degree, self.n)

    def __sub__(self, other: "BundleForm") -> "BundleForm":
        self._check(other)
        return BundleForm((a - b for a, b in zip(self.components, other.components)),
                          self.degree, self.n)

    def __neg__(self) -> "BundleForm":
        return BundleForm((-a for a in self.components), self.degree, self.n)

    def scale(self, f) -> "BundleForm":
        return BundleForm((form_scale(f, c) for c in self.components), self.degree, self.n)


class BundleHom:
    __slots__ = ("entries", "n")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], n: int | None = None):
        rows = tuple(tuple(r) for r in entries)
        if not rows or not rows[0]:
            raise ShapeError("a bundle homomorphism needs at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged matrix")
        if n is None:
            n = next((e.n for r in rows for e in r if isinstance(e, Polynomial)), None)
            if n is None:
                raise DimensionError("cannot infer chart dimension")
        rows = tuple(tuple(e if isinstance(e, Polynomial) else Polynomial.constant(n, e) for e in r)
                     for r in rows)
        if any(e.n != n for r in rows for e in r):
            raise DimensionError("all entries must share the chart dimension")
        self.entries = rows
        self.n = n

    @classmethod
    def identity(cls, rank: int, n: int) -> "BundleHom":
        return cls([[1 if i == j else 0 for j in range(rank)] for i in range(rank)], n)

    @classmethod
    def zero(cls, rows: int, cols: int, n: int) -> "BundleHom":
        return cls([[0] * cols for _ in range(rows)], n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ji):
        j, i = ji
        return self.entries[j][i]

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            e == (1 if i == j else 0) for j, r in enumerate(self.entries) for i, e in enumerate(r))

    def __eq__(self, other) -> bool:
        return isinstance(other, BundleHom) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"BundleHom({[list(r) for r in self.entries]!r})"

    def _check(self, other: "BundleHom") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch")
        if self.n != other.n:
            raise DimensionError("dimension mismatch")

    def __add__(self, other: "BundleHom") -> "BundleHom":
        self._check(other)
        return BundleHom([[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)], self.n)

    def __sub__(self, other: "BundleHom") -> "BundleHom":
        self._check(other)
        return BundleHom([[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)], self.n)

    def __neg__(self) -> "BundleHom":
        return BundleHom([[-a for a in r] for r in self.entries], self.n)

    def __matmul__(self, other: "BundleHom") -> "BundleHom":
        """Composition ``self o other``."""
        if self.cols != other.rows:
            raise ShapeError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        if self.n != other.n:
            raise DimensionError("dimension mismatch")
        zero = Polynomial.zero(self.n)
        out = []
        for r in self.entries:
            row = []
            for i in range(other.cols):
                acc = zero
                for k, a in enumerate(r):
                    if a:
                        acc = acc + a * other.entries[k][i]
                row.append(acc)
            out.append(row)
        return BundleHom(out, self.n)

    def __call__(self, T: BundleForm) -> BundleForm:
        return hom_apply(self, T)


def hom_apply(alpha: BundleHom, T: BundleForm) -> BundleForm:
    """``alpha(T)_j = sum_i alpha[j][i] * T_i``."""
    if alpha.cols != T.rank:
        raise ShapeError(f"homomorphism expects rank {alpha.cols}, form has rank {T.rank}")
    if alpha.n != T.n:
        raise DimensionError(f"dimension mismatch: {alpha.n} vs {T.n}")
    out = []
    for row in alpha.entries:
        acc = ScalarForm.zero(T.degree, T.n)
        for a, Ti in zip(row, T.components):
            if a and Ti:
                acc = acc + form_scale(a, Ti)
        out.append(acc)
    return BundleForm(out, T.degree, T.n)


def scalar_wedge_bundle(omega: ScalarForm, T: BundleForm) -> BundleForm:
    """Plain module product ``omega ^ T``, componentwise."""
    if omega.n != T.n:
        raise DimensionError(f"dimension mismatch: {omega.n} vs {T.n}")
    return BundleForm((form_wedge(omega, c) for c in T.components), omega.degree + T.degree, T.n)


def wedge_alpha(beta: ScalarForm, alpha: BundleHom, T: BundleForm) -> BundleForm:
    """Twisted product: ``beta ^_alpha (w (x) s) = (beta ^ w) (x) alpha(s)``."""
    if alpha.cols != T.rank:
        raise ShapeError(f"homomorphism expects rank {alpha.cols}, form has rank {T.rank}")
    if not beta.n == alpha.n == T.n:
        raise DimensionError("dimension mismatch")
    wedged = [form_wedge(beta, Ti) for Ti in T.components]
    degree = beta.degree + T.degree
    out = []
    for row in alpha.entries:
        acc = ScalarForm.zero(degree, T.n)
        for a, w in zip(row, wedged):
            if a and w:
                acc = acc + form_scale(a, w)
        out.append(acc)
    return BundleForm(out, degree, T.n)


def bundle_ev(T: BundleForm, *fields: VectorField) -> BundleForm:
    """Evaluate every component on ``fields``; returns a section."""
    if len(fields) != T.degree:
        raise ValueError(f"a {T.degree}-form needs {T.degree} vector fields, got {len(fields)}")
    return BundleForm.section([form_ev(c, *fields) for c in T.components])
