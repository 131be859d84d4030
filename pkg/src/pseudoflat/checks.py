"""Randomized identity suites run against a single operator.

Each suite draws its inputs from its own ``random.Random`` derived from the
run seed and the suite name, so results do not depend on suite order.
"""
from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .bundle import hom_apply, scalar_wedge_bundle, wedge_alpha
from .engine import (ODerivOperator, curvature_XY_direct, curvature_XY_formula,
                     d2_identity_check, d3_identity_check, d_nabla, flatness_cross_check,
                     frame_sections, map_E, map_F, map_G, map_L, nabla)
from .forms import ScalarForm, form_d
from .randomgen import random_field, random_form, random_polynomial, random_section, random_bundle_form


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    trials: int = 0
    detail: str = ""
    witness: Optional[Dict[str, object]] = None
    data: object = None

    @property
    def failed(self) -> bool:
        return self.status == "fail"


@dataclass
class SuiteConfig:
    trials: int = 100
    seed: int = 0
    max_degree: int = 2

    def rng(self, name: str) -> random.Random:
        return random.Random(self.seed * 1_000_003 + zlib.crc32(name.encode()))


def _fn(rng, op, cfg):
    return random_polynomial(rng, op.n, cfg.max_degree)


def _run_trials(name: str, op: ODerivOperator, cfg: SuiteConfig,
                trial: Callable[[random.Random], Optional[dict]]) -> CheckResult:
    rng = cfg.rng(name)
    for t in range(cfg.trials):
        bad = trial(rng)
        if bad is not None:
            return CheckResult(name, "fail", t + 1, "identity violated", bad)
    return CheckResult(name, "pass", cfg.trials)


def check_leibniz(op, cfg):
    def trial(rng):
        f = _fn(rng, op, cfg)
        s = random_section(rng, op.n, op.source_rank, cfg.max_degree)
        df = form_d(ScalarForm.function(f))
        lhs = nabla(op, s.scale(f))
        rhs = wedge_alpha(df, op.P, s) + nabla(op, s).scale(f)
        if lhs != rhs:
            return {"f": f, "s": s, "lhs": lhs, "rhs": rhs}
    return _run_trials("leibniz_rule", op, cfg, trial)


def check_graded_leibniz(op, cfg):
    def trial(rng):
        k = rng.randint(0, min(2, op.n))
        l = rng.randint(0, min(2, op.n))
        w = random_form(rng, op.n, k, cfg.max_degree)
        S = random_bundle_form(rng, op.n, op.source_rank, l, cfg.max_degree)
        lhs = d_nabla(op, scalar_wedge_bundle(w, S))
        rhs = wedge_alpha(form_d(w), op.P, S) + scalar_wedge_bundle(w, d_nabla(op, S)).scale(-1 if k % 2 else 1)
        if lhs != rhs:
            return {"omega": w, "S": S, "lhs": lhs, "rhs": rhs}
    return _run_trials("graded_leibniz", op, cfg, trial)


def check_curvature_relations(op, cfg):
    frame = frame_sections(op)

    def trial(rng):
        s = frame[rng.randrange(len(frame))] if rng.random() < 0.5 else \
            random_section(rng, op.n, op.source_rank, cfg.max_degree)
        E, L = map_E(op, s), map_L(op, s)
        F, G = map_F(op, s), map_G(op, s)
        if F != hom_apply(op.P, E) - d_nabla(op, L):
            return {"s": s, "F": F, "P(E) - d(L)": hom_apply(op.P, E) - d_nabla(op, L)}
        if G != d_nabla(op, E):
            return {"s": s, "G": G, "d(E)": d_nabla(op, E)}
    return _run_trials("curvature_relations", op, cfg, trial)


def check_tensoriality(op, cfg):
    def trial(rng):
        f = _fn(rng, op, cfg)
        s = random_section(rng, op.n, op.source_rank, cfg.max_degree)
        fs = s.scale(f)
        df = form_d(ScalarForm.function(f))
        Ls, Fs = map_L(op, s), map_F(op, s)
        pairs = {
            "L(fs) = f L(s)": (map_L(op, fs), Ls.scale(f)),
            "F(fs) = f F(s)": (map_F(op, fs), Fs.scale(f)),
            "E(fs) = df^L(s) + f E(s)": (map_E(op, fs), scalar_wedge_bundle(df, Ls) + map_E(op, s).scale(f)),
            "G(fs) = df^F(s) + f G(s)": (map_G(op, fs), scalar_wedge_bundle(df, Fs) + map_G(op, s).scale(f)),
        }
        for label, (lhs, rhs) in pairs.items():
            if lhs != rhs:
                return {"identity": label, "f": f, "s": s, "lhs": lhs, "rhs": rhs}
    return _run_trials("tensoriality", op, cfg, trial)


def check_iterated_expansions(op, cfg):
    def trial(rng):
        k = rng.randint(0, min(2, op.n))
        w = random_form(rng, op.n, k, cfg.max_degree)
        s = random_section(rng, op.n, op.source_rank, cfg.max_degree)
        if not d2_identity_check(op, w, s):
            return {"identity": "d o d", "omega": w, "s": s}
        if not d3_identity_check(op, w, s):
            return {"identity": "d o d o d", "omega": w, "s": s}
    return _run_trials("iterated_derivative_expansions", op, cfg, trial)


def check_flatness_agreement(op, cfg):
    cc = flatness_cross_check(op, cfg.max_degree, cfg.trials, cfg.seed)
    rep, ch = cc.report, cc.chains
    detail = (f"frame: strongly_flat={rep.strongly_flat} weakly_flat={rep.weakly_flat}; "
              f"direct: d2_zero={ch.d2_zero} d3_zero={ch.d3_zero} over {ch.inputs_checked} inputs")
    notes = []
    if not cc.strong_applicable:
        notes.append("d o d lands in forms that vanish for n < 2")
    if not cc.weak_applicable:
        notes.append("d o d o d lands in forms that vanish for n < 3")
    if notes:
        detail += "; comparison restricted: " + ", ".join(notes)
    result = CheckResult("flatness_vs_chain_complex", "pass" if cc.ok else "fail",
                         ch.inputs_checked, detail)
    if not cc.ok:
        result.witness = {"d2_witness": ch.d2_witness, "d3_witness": ch.d3_witness}
    result.data = cc
    return result


def check_curvature_evaluation(op, cfg):
    def trial(rng):
        X = random_field(rng, op.n, cfg.max_degree)
        Y = random_field(rng, op.n, cfg.max_degree)
        s = random_section(rng, op.n, op.source_rank, cfg.max_degree)
        direct = curvature_XY_direct(op, X, Y, s)
        formula = curvature_XY_formula(op, X, Y, s)
        if direct != formula:
            return {"X": X, "Y": Y, "s": s, "direct": direct, "formula": formula}
    return _run_trials("curvature_evaluation_formula", op, cfg, trial)


SQUARE_ONLY = {"curvature_relations", "tensoriality", "iterated_derivative_expansions",
               "flatness_vs_chain_complex", "curvature_evaluation_formula"}

SUITES = [
    ("leibniz_rule", check_leibniz),
    ("graded_leibniz", check_graded_leibniz),
    ("curvature_relations", check_curvature_relations),
    ("tensoriality", check_tensoriality),
    ("iterated_derivative_expansions", check_iterated_expansions),
    ("flatness_vs_chain_complex", check_flatness_agreement),
    ("curvature_evaluation_formula", check_curvature_evaluation),
]


def run_all(op: ODerivOperator, cfg: SuiteConfig) -> List[CheckResult]:
    out = []
    for name, fn in SUITES:
        if name in SQUARE_ONLY and not op.is_pseudoconnection:
            out.append(CheckResult(name, "skipped", 0, "needs a pseudoconnection (equal ranks)"))
            continue
        out.append(fn(op, cfg))
    return out

