"""Exact symbolic calculus for pseudoconnections on trivial vector bundles."""
from .bundle import (BundleForm, BundleHom, ShapeError, bundle_ev, hom_apply,
                     scalar_wedge_bundle, wedge_alpha)
from .engine import (ChainCheckResult, FlatnessCrossCheck, FlatnessReport, ODerivOperator,
                     chain_check_direct, classical_curvature_XY, classify_flatness,
                     counterexample_operator, curvature_XY_direct, curvature_XY_formula,
                     d2_identity_check, d3_identity_check, d_nabla, flatness_cross_check,
                     make_operator, map_E, map_F, map_G, map_L, nabla, nabla_X)
from .forms import ScalarForm, form_d, form_ev, form_scale, form_wedge
from .polynomial import (DimensionError, Polynomial, VectorField, field_apply, lie_bracket,
                         poly_arith, poly_partial)
from .syntax import Scene, SceneError, parse_expression, parse_scene

__version__ = "0.1.0"

__all__ = [
    "BundleForm", "BundleHom", "ShapeError", "bundle_ev", "hom_apply", "scalar_wedge_bundle",
    "wedge_alpha",
    "ChainCheckResult", "FlatnessCrossCheck", "FlatnessReport", "ODerivOperator",
    "chain_check_direct", "classical_curvature_XY", "classify_flatness",
    "counterexample_operator", "curvature_XY_direct", "curvature_XY_formula",
    "d2_identity_check", "d3_identity_check", "d_nabla", "flatness_cross_check",
    "make_operator", "map_E", "map_F", "map_G", "map_L", "nabla", "nabla_X",
    "ScalarForm", "form_d", "form_ev", "form_scale", "form_wedge",
    "DimensionError", "Polynomial", "VectorField", "field_apply", "lie_bracket",
    "poly_arith", "poly_partial",
    "Scene", "SceneError", "parse_expression", "parse_scene",
]
