"""Assemble check/curvature reports and render them as text or JSON."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional

from .bundle import BundleForm
from .checks import CheckResult, SuiteConfig, run_all
from .engine import (ChainCheckResult, FlatnessReport, curvature_XY_direct,
                     curvature_XY_formula)
from .forms import ScalarForm
from .polynomial import Polynomial, VectorField
from .syntax import (Scene, format_bundle_form, format_field, format_form,
                     format_polynomial)

SCHEMA_VERSION = 1


def render_value(v, names) -> str:
    if isinstance(v, BundleForm):
        return format_bundle_form(v, names)
    if isinstance(v, ScalarForm):
        return format_form(v, names)
    if isinstance(v, Polynomial):
        return format_polynomial(v, names)
    if isinstance(v, VectorField):
        return format_field(v, names)
    if v is None:
        return "none"
    return str(v)


@dataclass
class Report:
    scene_name: str
    variables: tuple
    rank: int
    target_rank: int
    seed: int
    trials: int
    max_degree: int
    checks: List[CheckResult]
    flatness: Optional[FlatnessReport] = None
    chains: Optional[ChainCheckResult] = None

    @property
    def ok(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def frame_maps(self) -> Dict[str, List[str]]:
        if self.flatness is None:
            return {}
        names = self.variables
        fl = self.flatness
        return {
            "E": [format_bundle_form(t, names) for t in fl.E_on_frame],
            "L": [format_bundle_form(t, names) for t in fl.L_on_frame],
            "F": [format_bundle_form(t, names) for t in fl.F_on_frame],
            "G": [format_bundle_form(t, names) for t in fl.G_on_frame],
        }

    def witnesses(self) -> Dict[str, object]:
        names = self.variables
        out: Dict[str, object] = {}
        if self.chains is not None:
            for key in ("d2", "d3"):
                w = getattr(self.chains, f"{key}_witness")
                out[key] = None if w is None else {
                    "input": render_value(w, names),
                    "image": render_value(self.chains.witness_images[key], names),
                }
        for c in self.checks:
            if c.witness:
                out[c.name] = {k: render_value(v, names) for k, v in c.witness.items()}
        return out

    def to_dict(self) -> dict:
        fl = self.flatness
        flatness = None
        if fl is not None:
            flatness = {
                "curvature_zero": fl.curvature_zero,
                "weakly_flat": fl.weakly_flat,
                "strongly_flat": fl.strongly_flat,
                "chain_complex": None if self.chains is None else self.chains.d2_zero,
                "chain_2_complex": None if self.chains is None else self.chains.d3_zero,
            }
        d = {
            "schema": SCHEMA_VERSION,
            "scene": {"name": self.scene_name, "variables": list(self.variables),
                      "rank": self.rank, "target_rank": self.target_rank},
            "seed": self.seed,
            "trials": self.trials,
            "max_degree": self.max_degree,
            "flatness": flatness,
            "frame_maps": self.frame_maps(),
            "checks": [{"name": c.name, "status": c.status, "trials": c.trials, "detail": c.detail}
                       for c in self.checks],
            "witnesses": self.witnesses(),
            "ok": self.ok,
        }
        return d


def cmd_check(scene: Scene, trials: int = 100, seed: int = 0, max_degree: int = 2) -> Report:
    op = scene.operator
    cfg = SuiteConfig(trials=trials, seed=seed, max_degree=max_degree)
    checks = run_all(op, cfg)
    flatness = chains = None
    for c in checks:
        if c.name == "flatness_vs_chain_complex" and c.data is not None:
            flatness, chains = c.data.report, c.data.chains
    return Report(scene.name, scene.variables, scene.rank, scene.target_rank or scene.rank,
                  seed, trials, max_degree, checks, flatness, chains)


def cmd_curvature(scene: Scene, X: VectorField, Y: VectorField, s: BundleForm) -> dict:
    """Both evaluation paths for the curvature on (X, Y) applied to ``s``."""
    op = scene.operator
    names = scene.variables
    direct = curvature_XY_direct(op, X, Y, s)
    formula = curvature_XY_formula(op, X, Y, s)
    return {
        "X": format_field(X, names),
        "Y": format_field(Y, names),
        "section": format_bundle_form(s, names),
        "direct": format_bundle_form(direct, names),
        "formula": format_bundle_form(formula, names),
        "match": direct == formula,
    }


def _yes(b) -> str:
    return "yes" if b else "NO"


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    names = report.variables
    lines = []
    title = report.scene_name or "<scene>"
    shape = f"rank {report.rank}" if report.rank == report.target_rank else \
        f"rank {report.rank} -> {report.target_rank}"
    lines.append(f"scene: {title}  (vars {' '.join(names)}; {shape})")
    lines.append(f"seed {report.seed}, {report.trials} trials, max degree {report.max_degree}")
    fl = report.flatness
    if fl is not None:
        lines.append("")
        lines.append("F = 0" if fl.curvature_zero else "F != 0")
        lines.append(f"weakly flat: {_yes(fl.weakly_flat)}")
        lines.append(f"strongly flat: {_yes(fl.strongly_flat)}")
        ch = report.chains
        if ch is not None:
            for key, label in (("d2", "d∘d"), ("d3", "d∘d∘d")):
                w = getattr(ch, f"{key}_witness")
                if w is None:
                    lines.append(f"{label} = 0 on all {ch.inputs_checked} inputs")
                else:
                    lines.append(f"{label} ≠ 0 (witness {render_value(w, names)} -> "
                                 f"{render_value(ch.witness_images[key], names)})")
        lines.append("")
        lines.append("frame maps:")
        for key, vals in report.frame_maps().items():
            for i, v in enumerate(vals, 1):
                lines.append(f"  {key}(e{i}) = {v}")
    lines.append("")
    lines.append("checks:")
    for c in report.checks:
        lines.append(f"  {c.status.upper():7s} {c.name} ({c.trials})" + (f": {c.detail}" if c.detail else ""))
        if c.witness:
            for k, v in c.witness.items():
                lines.append(f"          {k} = {render_value(v, names)}")
    lines.append("")
    lines.append("all checks passed" if report.ok else "CHECK FAILURES")
    return "\n".join(lines) + "\n"


def emit_curvature(result: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA_VERSION, "curvature": result}, indent=2, sort_keys=True) + "\n"
    width = max(len("direct"), len(result["direct"]))
    lines = [
        f"F(X, Y) s with X = {result['X']}, Y = {result['Y']}, s = {result['section']}",
        f"  {'direct':<{width}}  | formula",
        f"  {result['direct']:<{width}}  | {result['formula']}",
        "  match" if result["match"] else "  MISMATCH",
    ]
    return "\n".join(lines) + "\n"
