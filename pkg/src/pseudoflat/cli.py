"""``pseudoflat`` command line: check scenes and evaluate curvature."""
from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from .bundle import BundleForm
from .polynomial import VectorField
from .report import cmd_check, cmd_curvature, emit_curvature, emit_report
from .syntax import Scene, SceneError, parse_expression, parse_scene

BUILTIN_SCENES = ("ordinary_flat", "ordinary_xdy", "prop5_counterexample")

log = logging.getLogger("pseudoflat")


def builtin_scene_text(name: str) -> str:
    if name not in BUILTIN_SCENES:
        raise KeyError(name)
    return resources.files("pseudoflat").joinpath("scenes", f"{name}.scene").read_text("utf-8")


def load_builtin(name: str) -> Scene:
    return parse_scene(builtin_scene_text(name), name=name)


def load_scene(ref: str) -> Scene:
    """Read a scene file, falling back to a built-in scene of that name."""
    path = Path(ref)
    if path.is_file():
        return parse_scene(path.read_bytes(), name=path.stem)
    if ref in BUILTIN_SCENES:
        return load_builtin(ref)
    raise FileNotFoundError(f"no scene file or built-in scene named {ref!r}")


def _expr(scene: Scene, text: str, want: type, what: str):
    try:
        v = parse_expression(text, scene.context())
    except SceneError as exc:
        raise SceneError(f"in {what} expression: {exc.message}", exc.line, exc.col, exc.token) from None
    if not isinstance(v, want) or (want is BundleForm and v.degree != 0):
        raise SceneError(f"{what} expression does not denote a "
                         f"{'section' if want is BundleForm else 'vector field'}")
    return v


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudoflat",
        description="Curvature and flatness of pseudoconnections on trivial bundles.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="classify flatness and run every identity check")
    check.add_argument("scene", help="scene file or built-in scene name")
    check.add_argument("--trials", type=int, default=100)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--max-degree", type=int, default=2)
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("-o", "--output", help="write the report here instead of stdout")

    curv = sub.add_parser("curvature", help="evaluate F(X, Y) s by both formulas")
    curv.add_argument("scene")
    curv.add_argument("--X", required=True, help="vector field, e.g. 'x*d/dy + d/dz'")
    curv.add_argument("--Y", required=True)
    curv.add_argument("--section", required=True, help="section, e.g. 'e1' or '[x, 1]'")
    curv.add_argument("--format", choices=("text", "json"), default="text")
    curv.add_argument("-o", "--output")

    sub.add_parser("examples", help="list the built-in scenes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "examples":
        for name in BUILTIN_SCENES:
            first = builtin_scene_text(name).splitlines()[0].lstrip("# ")
            print(f"{name:22s} {first}")
        return 0

    try:
        scene = load_scene(args.scene)
        if args.command == "check":
            if args.trials < 0 or args.max_degree < 0:
                raise SceneError("--trials and --max-degree must be non-negative")
            report = cmd_check(scene, args.trials, args.seed, args.max_degree)
            _write(emit_report(report, args.format), args.output)
            return report.exit_code
        X = _expr(scene, args.X, VectorField, "--X")
        Y = _expr(scene, args.Y, VectorField, "--Y")
        s = _expr(scene, args.section, BundleForm, "--section")
        result = cmd_curvature(scene, X, Y, s)
        _write(emit_curvature(result, args.format), args.output)
        return 0 if result["match"] else 1
    except SceneError as exc:
        print(f"pseudoflat: {args.scene}:{exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"pseudoflat: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
