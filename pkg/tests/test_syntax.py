from fractions import Fraction

import pytest
from hypothesis import given, settings

from pseudoflat.bundle import BundleForm
from pseudoflat.cli import BUILTIN_SCENES, builtin_scene_text, load_builtin
from pseudoflat.engine import counterexample_operator
from pseudoflat.forms import ScalarForm, form_scale
from pseudoflat.polynomial import Polynomial, VectorField
from pseudoflat.randomgen import random_bundle_form, random_field, random_form, random_operator
from pseudoflat.syntax import (Context, Scene, SceneError, format_bundle_form, format_field,
                               format_form, format_polynomial, format_scene, parse_bundle_form,
                               parse_expression, parse_form, parse_polynomial, parse_scene)

from conftest import polynomials

V = ("x", "y", "z")
x, y, z = (Polynomial.variable(3, i) for i in range(3))


def test_polynomial_syntax():
    p = parse_polynomial("3/2*x^2*y - z + 1", V)
    assert p == (x ** 2 * y).scale(Fraction(3, 2)) - z + 1
    assert format_polynomial(p, V) == "3/2*x^2*y - z + 1"
    assert parse_polynomial("-(x + y)^2", V) == -(x + y) ** 2
    assert parse_polynomial("x/4", V) == x.scale(Fraction(1, 4))
    assert format_polynomial(Polynomial.zero(3), V) == "0"


def test_form_syntax():
    with pytest.raises(SceneError):
        parse_form("dx^dy + dz", V)
    w = parse_form("x^2*dx^dy + dy^dz", V)
    assert w == form_scale(x ** 2, ScalarForm.basis(3, (0, 1))) + ScalarForm.basis(3, (1, 2))
    assert parse_form("dy^dx", V) == -ScalarForm.basis(3, (0, 1))
    assert parse_form("dx^dx", V).is_zero()
    assert parse_form("dx*dy", V) == ScalarForm.basis(3, (0, 1))
    assert format_form(parse_form("(x + 1)*dx - 3*y*dz", V), V) == "(x + 1)*dx - 3*y*dz"


def test_zero_form_prints_as_zero():
    assert format_form(ScalarForm.zero(2, 3), V) == "0"
    assert parse_form("0", V, 2) == ScalarForm.zero(2, 3)
    assert parse_bundle_form("[0, 0]", V, 2, 3) == BundleForm.zero(3, 2, 3)
    with pytest.raises(SceneError):
        parse_form("dx", V, 2)


def test_bundle_form_printing():
    T = BundleForm([ScalarForm.basis(3, (0, 1)), ScalarForm.zero(2, 3)])
    assert format_bundle_form(T, V) == "[dx^dy, 0]"
    assert parse_bundle_form("[dx^dy, 0]", V, 2) == T
    ctx = Context(V, 2)
    assert parse_expression("x*e1 + e2", ctx) == BundleForm.section([x, Polynomial.constant(3, 1)])
    assert parse_expression("dx*e2", ctx) == BundleForm([ScalarForm.zero(1, 3), ScalarForm.dx(3, 0)])


def test_field_syntax():
    ctx = Context(V)
    X = parse_expression("x*d/dy + d/dz", ctx)
    assert X == VectorField([Polynomial.zero(3), x, Polynomial.constant(3, 1)])
    assert parse_expression(format_field(X, V), ctx) == X


def test_expression_errors():
    ctx = Context(V, 2)
    for bad, col in [("x + ", 5), ("q*x", 1), ("dx^2", 3), ("x/y", 2), ("e3", 1), ("(x", 3), ("x )", 3)]:
        with pytest.raises(SceneError) as info:
            parse_expression(bad, ctx)
        assert info.value.col == col, bad
    with pytest.raises(SceneError):
        parse_expression("x + dx", ctx)


@settings(max_examples=100, deadline=None)
@given(polynomials(3, max_degree=3))
def test_polynomial_round_trip(p):
    assert parse_polynomial(format_polynomial(p, V), V) == p


def test_form_round_trip(rng):
    for _ in range(100):
        w = random_form(rng, 3, rng.randint(0, 3), max_terms=3)
        assert parse_form(format_form(w, V), V, w.degree) == w
        T = random_bundle_form(rng, 3, 2, rng.randint(0, 3))
        assert parse_bundle_form(format_bundle_form(T, V), V, 2, T.degree) == T
        X = random_field(rng, 3)
        assert parse_expression(format_field(X, V), Context(V)) == X


def test_counterexample_scene_matches_factory():
    scene = load_builtin("prop5_counterexample")
    assert scene.n == 3 and scene.rank == 2 and scene.P.is_zero()
    assert scene.operator == counterexample_operator()


def test_builtin_scenes_parse():
    for name in BUILTIN_SCENES:
        scene = parse_scene(builtin_scene_text(name))
        assert parse_scene(format_scene(scene)) == scene


def test_scene_round_trip(rng):
    for _ in range(20):
        n = rng.randint(1, 3)
        r = rng.randint(1, 3)
        op = random_operator(rng, n, r)
        names = ("x", "y", "z")[:n]
        s = random_bundle_form(rng, n, r, 0)
        X = random_field(rng, n)
        scene = Scene(names, r, op.P, op.A, sections={"s1": s}, fields={"X": X})
        assert parse_scene(format_scene(scene)) == scene


def test_minimal_scene():
    scene = parse_scene("vars x y\nrank 1\nP = [[1]]\nA = [[dx + x*dy]]\n")
    assert scene.A[0][0] == ScalarForm.dx(2, 0) + form_scale(Polynomial.variable(2, 0), ScalarForm.dx(2, 1))


def test_scene_bytes_and_multiline():
    text = b"# header\nvars x y z  # chart\nrank 2\nP = [[1, 0],\n     [0, 1]]\nA = [[0, dx],\n  [0, 0]]\nsection s = [x, 1]\nfield X = d/dx + s1*0*d/dy\n"
    with pytest.raises(SceneError) as info:
        parse_scene(text)
    assert info.value.line == 9
    scene = parse_scene(text.replace(b" + s1*0*d/dy", b""))
    assert scene.sections["s"] == BundleForm.section([x, Polynomial.constant(3, 1)])


def test_general_operator_scene():
    scene = parse_scene("vars x\nrank 1\ntarget_rank 2\nP = [[1], [x]]\nA = [[dx], [0]]\n")
    assert scene.operator.target_rank == 2 and not scene.operator.is_pseudoconnection


@pytest.mark.parametrize("text, line, col", [
    ("", 1, 1),
    ("   \n# only a comment\n", 1, 1),
    ("vars x x\nrank 1\nP = [[1]]\nA = [[dx]]", 1, 1),
    ("vars x\nrank 1\nP = [[1]]\nA = [[dy]]", 4, 7),
    ("vars x y\nrank 1\nP = [[1]]\nA = [[dx^dy]]", 4, 5),
    ("vars x\nrank 2\nP = [[1]]\nA = [[dx]]", 3, 5),
    ("vars x\nrank 1\nP = [[dx]]\nA = [[dx]]", 3, 5),
    ("vars x\nrank 1\nA = [[dx]]", 1, 1),
    ("vars x\nrank 1\nP = [[1]]\nA = [[dx]]\nbogus 3", 5, 1),
    ("vars x dx\nrank 1\nP = [[1]]\nA = [[dx]]", 1, 1),
    ("vars x\nrank 1\nP = [[1]]\nA = [[dx]] $", 4, 12),
])
def test_scene_errors(text, line, col):
    with pytest.raises(SceneError) as info:
        parse_scene(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert str(info.value).startswith(f"{line}:{col}:")


def test_non_utf8_rejected():
    with pytest.raises(SceneError):
        parse_scene(b"vars \xff\n")
