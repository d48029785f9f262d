"""Command-line front end: ``matdiv dims|reduce|flag|lax-dim|verify-quot|verify-all``.

Exit codes: 0 success, 1 a checked property failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import random
import sys
from importlib import resources

from . import __version__
from .divisor import (
    DivisorGerm,
    flag_from_h,
    flag_from_system,
    germ_from_h,
    multiply_back_residual,
    random_germ,
    random_unit_series,
    smith_reduce,
)
from .errors import ConfigurationError, DomainError, InsufficientPrecisionError, MatdivError
from .exactnum.scalar import format_scalar
from .flag import Flag
from .grading import MODES, bracket_violations, compute_grading, moduli_breakdown
from .lax import build_L_space, build_section_space, lax_dimension_oracle, quotient_report, section_dimension_oracle
from .liecore import dual_lattice_check
from .scene import Scene, SceneError, load_germ, load_scene, parse_scene

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

BUILTIN_SCENES = ("gl2-basic",)


class PropertyFailure(Exception):
    pass


# -- helpers


def _resolve_scene(path: str) -> Scene:
    if path in BUILTIN_SCENES:
        text = resources.files("matdiv.scenes").joinpath(path + ".json").read_text(encoding="utf-8")
        return parse_scene(text, source=path)
    return load_scene(path)


def _seed(args, scene: Scene | None = None) -> int:
    env = os.environ.get("MATDIV_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SceneError(f"MATDIV_SEED must be an integer, got {env!r}") from None
    if args.seed is not None:
        return args.seed
    if scene is not None and scene.seed is not None:
        return scene.seed
    return 0


def _flag_json(flag: Flag) -> dict:
    return {
        "lo": flag.lo,
        "hi": flag.hi,
        "dims": {str(i): d for i, d in flag.dims()},
        "bases": {str(i): [[format_scalar(x) for x in v] for v in flag.at(i).basis] for i in flag.indices()},
    }


def _matrix_json(m) -> list:
    return [[format_scalar(x) for x in row] for row in m]


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(args, report: dict, text: str) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


# -- dims


def closed_formula(scene: Scene) -> dict | None:
    """Closed form of the modulo-``Ad G`` count when every ``h`` is ``diag(1,0,...,0)``
    and ``|Gamma| = n g``."""
    n = scene.rank
    unit = tuple([1] + [0] * (scene.realization.root_system.eps_dim - 1))
    if scene.family not in ("gl", "C", "D") or not scene.gammas:
        return None
    if any(tuple(g.h.coords) != unit for g in scene.gammas) or len(scene.gammas) != n * scene.genus:
        return None
    g = scene.genus
    if scene.family == "gl":
        return {"name": "n^2(g-1)+1", "value": n * n * (g - 1) + 1}
    if scene.family == "D":
        return {"name": "(2n-1)n(g-1)", "value": (2 * n - 1) * n * (g - 1)}
    return {"name": "(2n+1)n(g-1)", "value": (2 * n + 1) * n * (g - 1)}


def cmd_dims(scene: Scene) -> dict:
    real = scene.realization
    br = moduli_breakdown(real, scene.hs)
    report = {
        "algebra": real.name,
        "gamma_count": len(scene.gammas),
        "genus_for_formulas": scene.genus,
        "mode": scene.mode,
        "per_point": br["per_point"],
        "total": br["total"],
        "value": br["total"][scene.mode],
        "formula": closed_formula(scene),
    }
    return report


def _dims_text(r: dict) -> str:
    rows = [[i, "(" + ", ".join(p["h"]) + ")", p["depth"], p["fixed_gamma"], p["fixed_gamma"] + 1]
            for i, p in enumerate(r["per_point"])]
    out = [f"{r['algebra']}: |Gamma| = {r['gamma_count']}, genus for formulas {r['genus_for_formulas']}"]
    if rows:
        out.append(_table(rows, ["#", "h", "depth", "fixed", "moving"]))
    t = r["total"]
    out.append(_table([[m, t[m]] for m in MODES], ["mode", "dimension"]))
    if r["formula"]:
        out.append(f"formula {r['formula']['name']} = {r['formula']['value']}")
    return "\n".join(out)


# -- reduce / flag


def cmd_reduce(germ: DivisorGerm, guard: int = 4, head: int = 3) -> dict:
    rf = smith_reduce(germ, guard)
    resid = multiply_back_residual(germ, rf)
    k = rf.residual
    return {
        "algebra": germ.realization.name,
        "d": list(rf.d),
        "k_head": {str(t): _matrix_json(k.coefficient(t))
                   for t in range(k.valuation, k.valuation + head)
                   if k.order is None or t < k.order},
        "k_order": k.order,
        "residual_zero": resid.is_zero(),
        "residual_window": [resid.low, resid.order],
    }


def _reduce_text(r: dict) -> str:
    lines = [f"{r['algebra']}: d = ({', '.join(str(x) for x in r['d'])})"]
    for t, m in r["k_head"].items():
        lines.append(f"  k_{t} = {m}")
    lines.append(f"multiply-back residual zero in window: {r['residual_zero']}")
    return "\n".join(lines)


def _flag_text(label: str, f: dict) -> str:
    rows = [[i, f["dims"][i], "; ".join("(" + ", ".join(v) + ")" for v in f["bases"][i])] for i in f["dims"]]
    return f"{label}\n" + _table(rows, ["i", "dim F_i", "RREF basis"])


# -- lax


def cmd_lax_dim(scene: Scene) -> dict:
    cfg = scene.surface_config()
    L = build_L_space(cfg)
    rep = quotient_report(cfg)
    sec = build_section_space(cfg)
    return {
        "algebra": cfg.realization.name,
        "deg_D": cfg.deg_D,
        "gamma_count": len(cfg.gammas),
        "ambient_dim": L.ambient_dim,
        "dim_L": rep["dim_L"],
        "dim_M": rep["dim_M"],
        "dim_L_oracle": lax_dimension_oracle(cfg, "L"),
        "dim_M_oracle": lax_dimension_oracle(cfg, "M"),
        "dim_sections": sec.dim,
        "dim_sections_oracle": section_dimension_oracle(cfg),
    }


def _kv_text(r: dict) -> str:
    w = max(len(k) for k in r)
    return "\n".join(f"{k.ljust(w)}  {v}" for k, v in r.items())


def cmd_verify_quot(scene: Scene) -> dict:
    return quotient_report(scene.surface_config())


def _quot_failures(r: dict) -> list[str]:
    bad = []
    if r["injective"] is False:
        bad.append("localization-injectivity")
    if not r["L_in_M"]:
        bad.append("L-in-M")
    if not r["quotient_at_least_tangent"]:
        bad.append("quotient-bound")
    return bad


# -- verify-all


def cmd_verify_all(scene: Scene, seed: int, random_instances: int = 6) -> dict:
    real = scene.realization
    rng = random.Random(seed)
    checks: list[dict] = []

    def record(name, status, detail=""):
        checks.append({"property": name, "status": status, "detail": detail})

    # flag nesting on random germs
    bad = 0
    for _ in range(random_instances):
        if not flag_from_system(random_germ(real, rng)).is_nested():
            bad += 1
    record("flag-nesting", "pass" if bad == 0 else "fail", f"{random_instances} random germs, {bad} failures")

    # flag from z^h equals the flag from h
    # points whose h is outside the module lattice have no germ z^h
    lattice = [i for i, g in enumerate(scene.gammas) if dual_lattice_check(g.h, real)]
    bad = [i for i in lattice
           if flag_from_system(germ_from_h(real, scene.gammas[i].h)) != flag_from_h(real, scene.gammas[i].h)]
    if lattice:
        outside = len(scene.gammas) - len(lattice)
        record("flag-equality", "pass" if not bad else "fail",
               f"{len(lattice)} points" + (f", {outside} outside the module lattice" if outside else "")
               + (f", mismatch at {bad}" if bad else ""))
    else:
        record("flag-equality", "skipped", "no point has h in the dual of the module weight lattice")

    # grading closure
    bad = []
    for i, g in enumerate(scene.gammas):
        if real.is_dominant_integral(g.h) and bracket_violations(compute_grading(real, g.h)):
            bad.append(i)
    record("grading-closure", "pass" if not bad else "fail",
           f"{len(scene.gammas)} points" + (f", violations at {bad}" if bad else ""))

    # Smith exponent invariance
    if real.family in ("gl", "A"):
        germ = random_germ(real, rng, precision=10)
        d0 = smith_reduce(germ, scene.guard).d
        bad = 0
        n = real.module_dim
        for _ in range(random_instances):
            k1, k2 = random_unit_series(n, rng, 3), random_unit_series(n, rng, 3)
            g2 = DivisorGerm(real, k1 @ germ.psi @ k2)
            if sorted(smith_reduce(g2, scene.guard).d) != sorted(d0):
                bad += 1
        record("smith-invariance", "pass" if bad == 0 else "fail", f"d = {list(d0)}, {bad} mismatches")
    else:
        record("smith-invariance", "skipped", f"reduction is implemented for gl/sl only, not {real.name}")

    if scene.has_points():
        cfg = scene.surface_config()
        rep = quotient_report(cfg)
        if rep["injectivity_applicable"]:
            record("localization-injectivity", "pass" if rep["injective"] else "fail",
                   f"kernel dimension {rep['localization_kernel_dim']}")
        else:
            record("localization-injectivity", "skipped",
                   f"deg D = {cfg.deg_D} >= |Gamma| = {len(cfg.gammas)}")
        if len(lattice) == len(scene.gammas):
            sec = build_section_space(cfg)
            oracle = section_dimension_oracle(cfg)
            record("section-dimension", "pass" if sec.dim == oracle else "fail",
                   f"computed {sec.dim}, componentwise count {oracle}")
        else:
            record("section-dimension", "skipped", "some h is outside the dual of the module weight lattice")
        ok = rep["L_in_M"] and rep["quotient_at_least_tangent"]
        record("quotient-report", "pass" if ok else "fail",
               f"dim M/L = {rep['dim_quotient']}, tangent count {rep['tangent_formula']}, "
               f"excess {rep['excess']}")
        quotient = rep
    else:
        for name in ("localization-injectivity", "section-dimension", "quotient-report"):
            record(name, "skipped", "scene has no point coordinates")
        quotient = None

    failed = [c["property"] for c in checks if c["status"] == "fail"]
    return {
        "algebra": real.name,
        "seed": seed,
        "checks": checks,
        "quotient": quotient,
        "passed": not failed,
        "first_failure": failed[0] if failed else None,
    }


def _verify_text(r: dict) -> str:
    rows = [[c["property"], c["status"], c["detail"]] for c in r["checks"]]
    out = [f"{r['algebra']} (seed {r['seed']})", _table(rows, ["property", "status", "detail"])]
    if r["quotient"] is not None:
        out.append(f"quotient excess (data): {r['quotient']['excess']}")
    out.append("PASS" if r["passed"] else f"FAIL: {r['first_failure']}")
    return "\n".join(out)


# -- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", help="scene JSON file (or a builtin name such as gl2-basic)")
    common.add_argument("--germ", help="germ JSON file")
    common.add_argument("--precision", type=int, help="truncate the germ to N terms")
    common.add_argument("--guard", type=int, help="Smith reduction guard margin")
    common.add_argument("--seed", type=int, help="seed for randomized checks (MATDIV_SEED overrides)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p = argparse.ArgumentParser(prog="matdiv", description="Exact computations with matrix divisors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in (
        ("dims", "moduli dimension counts for a scene"),
        ("reduce", "reduced form of a germ"),
        ("flag", "flag of a germ, or flags of the points of a scene"),
        ("lax-dim", "dimensions of L, M and section spaces"),
        ("verify-quot", "quotient report for M/L"),
        ("verify-all", "run every property check on a scene"),
    ):
        sub.add_parser(name, parents=[common], help=hlp)
    return p


def _need(args, attr: str, parser) -> str:
    val = getattr(args, attr)
    if not val:
        parser.error(f"{args.command} requires --{attr}")
    return val


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args, parser)
    except SystemExit as exc:
        # argparse reports usage errors and --help/--version this way
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except PropertyFailure as exc:
        print(f"property failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SceneError, ConfigurationError, DomainError, InsufficientPrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MatdivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _dispatch(args, parser) -> int:
    cmd = args.command
    if cmd == "dims":
        scene = _resolve_scene(_need(args, "scene", parser))
        r = cmd_dims(scene)
        _emit(args, r, _dims_text(r))
        return EXIT_OK
    if cmd == "reduce":
        gf = load_germ(_need(args, "germ", parser), args.precision)
        guard = args.guard if args.guard is not None else 4
        r = cmd_reduce(gf.germ(), guard)
        _emit(args, r, _reduce_text(r))
        return EXIT_OK if r["residual_zero"] else EXIT_FAIL
    if cmd == "flag":
        if args.germ:
            gf = load_germ(args.germ, args.precision)
            germ = gf.germ()
            f = _flag_json(flag_from_system(germ))
            r = {"algebra": germ.realization.name, "pole_order": germ.pole_order, "flag": f}
            _emit(args, r, _flag_text(f"{r['algebra']} germ, pole order {germ.pole_order}", f))
            return EXIT_OK if flag_from_system(germ).is_nested() else EXIT_FAIL
        scene = _resolve_scene(_need(args, "scene", parser))
        real = scene.realization
        flags = [_flag_json(flag_from_h(real, g.h)) for g in scene.gammas]
        r = {"algebra": real.name, "flags": flags}
        text = "\n".join(_flag_text(f"point {i}: h = {g.h}", f)
                         for i, (g, f) in enumerate(zip(scene.gammas, flags)))
        _emit(args, r, text)
        return EXIT_OK
    scene = _resolve_scene(_need(args, "scene", parser))
    if args.guard is not None:
        scene = dataclasses.replace(scene, guard=args.guard)
    if cmd == "lax-dim":
        r = cmd_lax_dim(scene)
        _emit(args, r, _kv_text(r))
        return EXIT_OK
    if cmd == "verify-quot":
        r = cmd_verify_quot(scene)
        bad = _quot_failures(r)
        _emit(args, r, _kv_text(r))
        if bad:
            raise PropertyFailure(bad[0])
        return EXIT_OK
    if cmd == "verify-all":
        r = cmd_verify_all(scene, _seed(args, scene))
        _emit(args, r, _verify_text(r))
        if not r["passed"]:
            raise PropertyFailure(r["first_failure"])
        return EXIT_OK
    parser.error(f"unknown command {cmd}")
    return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
