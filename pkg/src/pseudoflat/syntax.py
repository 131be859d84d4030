"""Text syntax for polynomials, forms, sections, vector fields and scenes.

Expression grammar (``^`` binds tightest, then ``*`` and ``/``, then ``+``/``-``)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := atom ('^' atom)*
    atom    := NUMBER | NAME | 'd' '/' 'd'NAME | '(' expr ')' | '[' expr (',' expr)* ']'

``a ^ 3`` with an integer literal exponent is a power of a function; every
other ``^`` (and every ``*``) is the wedge product.  Names resolve to
declared variables, basis 1-forms ``d<var>``, frame sections ``e1..er`` and
any named sections or fields of the scene.

Scene files are line oriented with ``#`` comments; a statement may continue
across lines while brackets are open::

    vars x y z
    rank 2
    P = [[0, 0], [0, 0]]
    A = [[dx, dy], [dz, dx]]
    section s1 = [x, y^2]
    field X = x*d/dy + d/dz
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bundle import BundleForm, BundleHom, scalar_wedge_bundle
from .engine import ODerivOperator
from .forms import ScalarForm, form_scale, form_wedge
from .polynomial import Polynomial, VectorField


class SceneError(ValueError):
    """Parse or validation failure, located at ``line:col`` of the input."""

    def __init__(self, message: str, line: int = 1, col: int = 1, token: str = ""):
        self.message = message
        self.line = line
        self.col = col
        self.token = token
        where = f"{line}:{col}"
        tok = f" near {token!r}" if token else ""
        super().__init__(f"{where}: {message}{tok}")


# -- lexer ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()\[\],=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, nl, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    depth = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise SceneError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            if depth == 0:
                tokens.append(Token("nl", s, line, col))
            line += 1
            line_start = m.end()
        elif kind == "op":
            if s in "([":
                depth += 1
            elif s in ")]":
                depth = max(depth - 1, 0)
            tokens.append(Token("op", s, line, col))
        elif kind in ("num", "name"):
            tokens.append(Token(kind, s, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- values -----------------------------------------------------------------

class Matrix(tuple):
    """Rows produced by a nested bracket literal."""


_FRAME_RE = re.compile(r"e(\d+)$")


@dataclass
class Context:
    """Name environment for expression evaluation."""
    variables: Tuple[str, ...]
    rank: Optional[int] = None
    sections: Dict[str, BundleForm] = field(default_factory=dict)
    fields: Dict[str, VectorField] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> Optional[int]:
        try:
            return self.variables.index(name)
        except ValueError:
            return None


def _zero_like(v: ScalarForm, degree: int) -> ScalarForm:
    return ScalarForm.zero(degree, v.n)


class _Parser:
    def __init__(self, tokens: List[Token], ctx: Context):
        self.toks = tokens
        self.i = 0
        self.ctx = ctx

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> SceneError:
        tok = tok or self.tok
        return SceneError(msg, tok.line, tok.col, tok.text)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op", "name"):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    # grammar
    def expr(self):
        neg = False
        start = self.tok
        if self.at_op("+", "-"):
            neg = self.advance().text == "-"
        value = self.term()
        if neg:
            value = self.negate(value, start)
        while self.at_op("+", "-"):
            optok = self.advance()
            rhs = self.term()
            if optok.text == "-":
                rhs = self.negate(rhs, optok)
            value = self.add(value, rhs, optok)
        return value

    def term(self):
        value = self.factor()
        while self.at_op("*", "/"):
            optok = self.advance()
            rhs = self.factor()
            if optok.text == "*":
                value = self.mul(value, rhs, optok)
            else:
                value = self.div(value, rhs, optok)
        return value

    def factor(self):
        value = self.atom()
        while self.at_op("^"):
            optok = self.advance()
            if self.tok.kind == "num":
                exp_tok = self.advance()
                value = self.power(value, int(exp_tok.text), optok)
            else:
                rhs = self.atom()
                value = self.mul(value, rhs, optok)
        return value

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return ScalarForm.function(Polynomial.constant(self.ctx.n, int(t.text)))
        if t.kind == "op" and t.text == "(":
            self.advance()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "op" and t.text == "[":
            return self.bracket()
        if t.kind == "name":
            return self.name()
        if t.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error("unexpected token")

    def bracket(self):
        open_tok = self.advance()
        items = [self.expr()]
        while self.at_op(","):
            self.advance()
            items.append(self.expr())
        self.expect("]")
        if all(isinstance(v, BundleForm) for v in items):
            return Matrix(items)
        if all(isinstance(v, ScalarForm) for v in items):
            degrees = {v.degree for v in items if not v.is_zero()}
            if len(degrees) > 1:
                raise self.error("vector entries have mixed form degrees", open_tok)
            k = degrees.pop() if degrees else 0
            return BundleForm([v if v.degree == k else _zero_like(v, k) for v in items], k, self.ctx.n)
        raise self.error("bracket entries must all be forms or all be rows", open_tok)

    def name(self):
        t = self.advance()
        s = t.text
        ctx = self.ctx
        if s == "d" and self.at_op("/"):
            self.advance()
            nt = self.tok
            if nt.kind != "name" or not nt.text.startswith("d") or ctx.index(nt.text[1:]) is None:
                raise self.error("expected d/d<variable>", nt)
            self.advance()
            return VectorField.coordinate(ctx.n, ctx.index(nt.text[1:]))
        i = ctx.index(s)
        if i is not None:
            return ScalarForm.function(Polynomial.variable(ctx.n, i))
        if s in ctx.sections:
            return ctx.sections[s]
        if s in ctx.fields:
            return ctx.fields[s]
        if s.startswith("d") and ctx.index(s[1:]) is not None:
            return ScalarForm.dx(ctx.n, ctx.index(s[1:]))
        m = _FRAME_RE.match(s)
        if m and ctx.rank is not None:
            k = int(m.group(1))
            if not 1 <= k <= ctx.rank:
                raise self.error(f"frame section out of range 1..{ctx.rank}", t)
            return BundleForm.frame(ctx.rank, ctx.n, k - 1)
        raise self.error("undeclared name", t)

    # semantic actions
    def negate(self, v, tok):
        if isinstance(v, (ScalarForm, BundleForm, VectorField)):
            return -v
        raise self.error("cannot negate a matrix", tok)

    def add(self, a, b, tok):
        if isinstance(a, ScalarForm) and isinstance(b, ScalarForm):
            if a.degree != b.degree:
                if a.is_zero():
                    a = _zero_like(a, b.degree)
                elif b.is_zero():
                    b = _zero_like(b, a.degree)
                else:
                    raise self.error(f"cannot add a {a.degree}-form and a {b.degree}-form", tok)
            return a + b
        if isinstance(a, BundleForm) and isinstance(b, BundleForm):
            if a.degree != b.degree:
                if a.is_zero():
                    a = BundleForm.zero(b.degree, a.rank, a.n)
                elif b.is_zero():
                    b = BundleForm.zero(a.degree, b.rank, b.n)
                else:
                    raise self.error("cannot add bundle forms of different degree", tok)
            if a.rank != b.rank:
                raise self.error("cannot add bundle forms of different rank", tok)
            return a + b
        if isinstance(a, VectorField) and isinstance(b, VectorField):
            return a + b
        raise self.error(f"cannot add {_kind(a)} and {_kind(b)}", tok)

    def mul(self, a, b, tok):
        if isinstance(a, ScalarForm) and isinstance(b, ScalarForm):
            return form_wedge(a, b)
        if isinstance(a, ScalarForm) and isinstance(b, BundleForm):
            return scalar_wedge_bundle(a, b)
        if isinstance(a, BundleForm) and isinstance(b, ScalarForm):
            out = scalar_wedge_bundle(b, a)
            return -out if (a.degree * b.degree) % 2 else out
        if isinstance(a, ScalarForm) and isinstance(b, VectorField) and a.degree == 0:
            return b.scale(a.as_polynomial())
        if isinstance(a, VectorField) and isinstance(b, ScalarForm) and b.degree == 0:
            return a.scale(b.as_polynomial())
        raise self.error(f"cannot multiply {_kind(a)} by {_kind(b)}", tok)

    def div(self, a, b, tok):
        if not (isinstance(b, ScalarForm) and b.degree == 0 and b.as_polynomial().is_constant()):
            raise self.error("can only divide by a numeric constant", tok)
        c = b.as_polynomial().constant_value()
        if not c:
            raise self.error("division by zero", tok)
        inv = Polynomial.constant(self.ctx.n, 1 / c)
        if isinstance(a, ScalarForm):
            return form_scale(inv, a)
        if isinstance(a, BundleForm):
            return a.scale(inv)
        if isinstance(a, VectorField):
            return a.scale(inv)
        raise self.error(f"cannot divide {_kind(a)}", tok)

    def power(self, a, k, tok):
        if isinstance(a, ScalarForm) and a.degree == 0:
            return ScalarForm.function(a.as_polynomial() ** k)
        raise self.error("only functions can be raised to a power", tok)


def _kind(v) -> str:
    if isinstance(v, ScalarForm):
        return "a function" if v.degree == 0 else f"a {v.degree}-form"
    if isinstance(v, BundleForm):
        return f"a bundle-valued {v.degree}-form"
    if isinstance(v, VectorField):
        return "a vector field"
    return "a matrix"


def parse_expression(text: str, ctx: Context):
    """Parse one expression; returns ScalarForm, BundleForm, VectorField or Matrix."""
    toks = [t for t in tokenize(text) if t.kind != "nl"]
    p = _Parser(toks, ctx)
    value = p.expr()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return value


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    v = parse_expression(text, Context(tuple(variables)))
    if not isinstance(v, ScalarForm) or v.degree != 0:
        raise SceneError(f"expected a polynomial, got {_kind(v)}")
    return v.as_polynomial()


def _fix_degree(v, degree: Optional[int]):
    # a printed zero carries no degree; the caller supplies it
    if degree is None or v.degree == degree:
        return v
    if v.is_zero():
        return v.zero(degree, v.n) if isinstance(v, ScalarForm) else BundleForm.zero(degree, v.rank, v.n)
    raise SceneError(f"expected a {degree}-form, got a {v.degree}-form")


def parse_form(text: str, variables: Sequence[str], degree: Optional[int] = None) -> ScalarForm:
    v = parse_expression(text, Context(tuple(variables)))
    if not isinstance(v, ScalarForm):
        raise SceneError(f"expected a form, got {_kind(v)}")
    return _fix_degree(v, degree)


def parse_bundle_form(text: str, variables: Sequence[str], rank: int,
                      degree: Optional[int] = None) -> BundleForm:
    v = parse_expression(text, Context(tuple(variables), rank))
    if not isinstance(v, BundleForm) or v.rank != rank:
        raise SceneError(f"expected a rank-{rank} bundle form, got {_kind(v)}")
    return _fix_degree(v, degree)


# -- printing ---------------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(m: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _poly_terms(p: Polynomial, names: Sequence[str]) -> List[Tuple[bool, str]]:
    """(negative, body) pairs in display order."""
    out = []
    for m, c in sorted(p.items(), key=lambda mc: (-sum(mc[0]), [-e for e in mc[0]])):
        mono = _fmt_monomial(m, names)
        a = abs(c)
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        out.append((c < 0, body))
    return out


def _join(terms: List[Tuple[bool, str]]) -> str:
    if not terms:
        return "0"
    neg, body = terms[0]
    s = ("-" if neg else "") + body
    for neg, body in terms[1:]:
        s += (" - " if neg else " + ") + body
    return s


def format_polynomial(p: Polynomial, names: Sequence[str]) -> str:
    return _join(_poly_terms(p, names))


def format_form(w: ScalarForm, names: Sequence[str]) -> str:
    if w.degree == 0:
        return format_polynomial(w.as_polynomial(), names)
    terms = []
    for idx, c in w.items():
        basis = "^".join("d" + names[i] for i in idx)
        pt = _poly_terms(c, names)
        if len(pt) == 1:
            neg, body = pt[0]
            if body == "1":
                terms.append((neg, basis))
            else:
                terms.append((neg, f"{body}*{basis}"))
        else:
            terms.append((False, f"({_join(pt)})*{basis}"))
    return _join(terms)


def format_bundle_form(T: BundleForm, names: Sequence[str]) -> str:
    return "[" + ", ".join(format_form(c, names) for c in T.components) + "]"


def format_field(X: VectorField, names: Sequence[str]) -> str:
    terms = []
    for i, c in enumerate(X.components):
        pt = _poly_terms(c, names)
        basis = f"d/d{names[i]}"
        if len(pt) == 1:
            neg, body = pt[0]
            terms.append((neg, basis if body == "1" else f"{body}*{basis}"))
        elif pt:
            terms.append((False, f"({_join(pt)})*{basis}"))
    # a bare 0 would read back as a function
    return _join(terms) if terms else f"0*d/d{names[0]}"


def format_matrix(rows, names: Sequence[str]) -> str:
    def entry(e):
        if isinstance(e, Polynomial):
            return format_polynomial(e, names)
        return format_form(e, names)
    return "[" + ", ".join("[" + ", ".join(entry(e) for e in row) + "]" for row in rows) + "]"


# -- scenes -----------------------------------------------------------------

_RESERVED = {"d", "vars", "rank", "target_rank", "P", "A", "section", "field"}


@dataclass
class Scene:
    variables: Tuple[str, ...]
    rank: int
    P: BundleHom
    A: Tuple[Tuple[ScalarForm, ...], ...]
    target_rank: Optional[int] = None
    sections: Dict[str, BundleForm] = field(default_factory=dict)
    fields: Dict[str, VectorField] = field(default_factory=dict)
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def operator(self) -> ODerivOperator:
        return ODerivOperator(self.P, self.A)

    def context(self) -> Context:
        return Context(self.variables, self.rank, dict(self.sections), dict(self.fields))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scene):
            return NotImplemented
        return (self.variables == other.variables and self.rank == other.rank
                and (self.target_rank or self.rank) == (other.target_rank or other.rank)
                and self.P == other.P and self.A == other.A
                and self.sections == other.sections and self.fields == other.fields)


def _check_variables(names: List[str], tok: Token) -> None:
    seen = set()
    for v in names:
        if v in seen:
            raise SceneError(f"variable {v!r} declared twice", tok.line, tok.col, v)
        if v in _RESERVED or _FRAME_RE.match(v):
            raise SceneError(f"{v!r} is reserved", tok.line, tok.col, v)
        seen.add(v)
    for v in names:
        if v.startswith("d") and v[1:] in seen:
            raise SceneError(f"variable {v!r} collides with the 1-form d{v[1:]}", tok.line, tok.col, v)


def parse_scene(text, name: str = "") -> Scene:
    """Parse and validate a scene description (``str`` or UTF-8 ``bytes``)."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SceneError(f"input is not UTF-8: {exc}") from None
    toks = tokenize(text)
    stmts: List[List[Token]] = [[]]
    for t in toks:
        if t.kind in ("nl", "eof"):
            if stmts[-1]:
                stmts.append([])
        else:
            stmts[-1].append(t)
    stmts = [s for s in stmts if s]
    if not stmts:
        raise SceneError("empty scene: expected 'vars'", 1, 1)

    variables: Optional[Tuple[str, ...]] = None
    rank: Optional[int] = None
    target_rank: Optional[int] = None
    P_val = A_val = None
    sections: Dict[str, BundleForm] = {}
    fields: Dict[str, VectorField] = {}
    pending: List[Tuple[str, str, List[Token]]] = []

    for stmt in stmts:
        head = stmt[0]
        if head.kind != "name":
            raise SceneError("expected a statement keyword", head.line, head.col, head.text)
        kw = head.text
        if kw == "vars":
            if variables is not None:
                raise SceneError("'vars' given twice", head.line, head.col, kw)
            names = []
            for t in stmt[1:]:
                if t.kind != "name":
                    raise SceneError("expected a variable name", t.line, t.col, t.text)
                names.append(t.text)
            if not names:
                raise SceneError("'vars' needs at least one variable", head.line, head.col, kw)
            _check_variables(names, head)
            variables = tuple(names)
        elif kw in ("rank", "target_rank"):
            if len(stmt) != 2 or stmt[1].kind != "num" or int(stmt[1].text) < 1:
                raise SceneError(f"'{kw}' needs one positive integer", head.line, head.col, kw)
            if kw == "rank":
                rank = int(stmt[1].text)
            else:
                target_rank = int(stmt[1].text)
        elif kw in ("P", "A"):
            if len(stmt) < 3 or stmt[1].text != "=":
                raise SceneError(f"expected '{kw} = [[...]]'", head.line, head.col, kw)
            pending.append((kw, "", stmt[2:]))
        elif kw in ("section", "field"):
            if len(stmt) < 4 or stmt[1].kind != "name" or stmt[2].text != "=":
                raise SceneError(f"expected '{kw} <name> = <expr>'", head.line, head.col, kw)
            pending.append((kw, stmt[1].text, stmt[3:]))
        else:
            raise SceneError("unknown statement", head.line, head.col, kw)

    first = stmts[0][0]
    if variables is None:
        raise SceneError("missing 'vars' declaration", first.line, first.col, first.text)
    if rank is None:
        raise SceneError("missing 'rank' declaration", first.line, first.col, first.text)
    rows_expected = target_rank or rank
    ctx = Context(variables, rank)

    def evaluate(toks: List[Token]):
        last = toks[-1]
        p = _Parser(toks + [Token("eof", "", last.line, last.col + len(last.text))], ctx)
        v = p.expr()
        if p.tok.kind != "eof":
            raise p.error("unexpected trailing input")
        return v

    for kw, label, body in pending:
        start = body[0]
        if kw in ("P", "A"):
            m = evaluate(body)
            if isinstance(m, BundleForm) and rows_expected == 1:
                m = Matrix([m])
            if not isinstance(m, Matrix):
                raise SceneError(f"{kw} must be a matrix [[...], ...]", start.line, start.col, start.text)
            if len(m) != rows_expected or any(r.rank != rank for r in m):
                raise SceneError(f"{kw} must be {rows_expected}x{rank}", start.line, start.col, start.text)
            if kw == "P":
                if any(r.degree != 0 for r in m):
                    raise SceneError("P entries must be polynomials", start.line, start.col, start.text)
                P_val = BundleHom([r.coefficients() for r in m], len(variables))
            else:
                rows = []
                for r in m:
                    if r.degree != 1 and not r.is_zero():
                        raise SceneError(f"A entries must be 1-forms, found degree {r.degree}",
                                         start.line, start.col, start.text)
                    rows.append(tuple(c if c.degree == 1 else ScalarForm.zero(1, len(variables))
                                      for c in r.components))
                A_val = tuple(rows)
        elif kw == "section":
            v = evaluate(body)
            if not isinstance(v, BundleForm) or v.degree != 0 or v.rank != rank:
                raise SceneError(f"section must be a rank-{rank} section", start.line, start.col, start.text)
            sections[label] = v
            ctx.sections[label] = v
        else:
            v = evaluate(body)
            if not isinstance(v, VectorField):
                raise SceneError("field must be a vector field (p*d/dx + ...)", start.line, start.col, start.text)
            fields[label] = v
            ctx.fields[label] = v

    if P_val is None:
        raise SceneError("missing 'P = ...'", first.line, first.col, first.text)
    if A_val is None:
        raise SceneError("missing 'A = ...'", first.line, first.col, first.text)
    return Scene(variables, rank, P_val, A_val, target_rank, sections, fields, name)


def format_scene(scene: Scene) -> str:
    names = scene.variables
    lines = [f"vars {' '.join(names)}", f"rank {scene.rank}"]
    if scene.target_rank and scene.target_rank != scene.rank:
        lines.append(f"target_rank {scene.target_rank}")
    lines.append(f"P = {format_matrix(scene.P.entries, names)}")
    lines.append(f"A = {format_matrix(scene.A, names)}")
    for label, s in scene.sections.items():
        lines.append(f"section {label} = {format_bundle_form(s, names)}")
    for label, X in scene.fields.items():
        lines.append(f"field {label} = {format_field(X, names)}")
    return "\n".join(lines) + "\n"
