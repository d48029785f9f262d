"""Scene and germ files: JSON parsing with line-accurate diagnostics, and
canonical emission.

Two scene layouts are accepted.  The flat one::

    {"family": "gl", "rank": 2, "module": "defining",
     "gammas": [{"point": "1", "h": [1, 0]}], "pis": [{"point": "5", "mult": 1}],
     "genus": 2, "mode": "moving_gamma_mod_adG"}

and the nested one with ``algebra``, ``genus_for_formulas`` and ``options``
(``precision``, ``guard``, ``seed``).  ``h`` lists epsilon-coordinates (the
diagonal of ``h`` on the defining module); ``h_simple`` gives simple-root
values instead.  ``points`` is an alias of ``gammas``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .divisor import DivisorGerm
from .errors import ConfigurationError, DomainError
from .exactnum.scalar import Scalar, as_scalar, format_scalar
from .exactnum.series import TruncatedMatrixSeries
from .grading import MODES
from .lax import SurfaceConfig
from .liecore import CoweightH, RootSystemRealization, build_realization

__all__ = ["SceneError", "Scene", "GermFile", "parse_scene", "load_scene", "emit_scene",
           "parse_germ", "load_germ"]


class SceneError(ConfigurationError):
    """Invalid scene or germ file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where = source + (f":{line}" if line else "") + ": "
        elif line:
            where = f"line {line}: "
        super().__init__(where + message)
        self.line = line


@dataclass(frozen=True)
class GammaEntry:
    point: Scalar | None
    h: CoweightH
    line: int | None = None


@dataclass(frozen=True)
class PiEntry:
    point: Scalar
    mult: int
    line: int | None = None


@dataclass(frozen=True, eq=False)
class Scene:
    family: str
    rank: int
    module: str
    gammas: tuple
    pis: tuple = ()
    genus: int = 0
    mode: str = "moving_gamma_mod_adG"
    precision: int | None = None
    guard: int = 4
    seed: int | None = None
    source: str | None = field(default=None, compare=False)

    @property
    def realization(self) -> RootSystemRealization:
        return build_realization(self.family, self.rank, self.module)

    @property
    def hs(self) -> list:
        return [g.h for g in self.gammas]

    def has_points(self) -> bool:
        return all(g.point is not None for g in self.gammas)

    def surface_config(self) -> SurfaceConfig:
        if not self.has_points():
            raise SceneError("every gamma needs a 'point' for genus-0 computations", source=self.source)
        return SurfaceConfig(self.realization,
                             tuple((g.point, g.h) for g in self.gammas),
                             tuple((p.point, p.mult) for p in self.pis))


# -- position bookkeeping


def _line_at(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _array_item_lines(text: str, key: str) -> list[int]:
    """Line of each element of the first array stored under ``key``."""
    m = re.search(r'"%s"\s*:\s*\[' % re.escape(key), text)
    if m is None:
        return []
    dec = json.JSONDecoder()
    pos = m.end()
    lines = []
    while pos < len(text):
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= len(text) or text[pos] == "]":
            break
        lines.append(_line_at(text, pos))
        try:
            _, pos = dec.raw_decode(text, pos)
        except json.JSONDecodeError:
            break
    return lines


def _key_line(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return _line_at(text, m.start()) if m else None


# -- parsing helpers


def _scalar(value, what: str, line, source) -> Scalar:
    if isinstance(value, bool):
        raise SceneError(f"{what}: expected a scalar, got {value!r}", line, source)
    if isinstance(value, float):
        raise SceneError(f"{what}: floats are not accepted, write {value!r} as text like \"1/2\"",
                         line, source)
    try:
        return as_scalar(value)
    except (TypeError, ValueError) as exc:
        raise SceneError(f"{what}: {exc}", line, source) from None


def _int(value, what: str, line, source) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SceneError(f"{what}: expected an integer, got {value!r}", line, source)
    return value


def _rational(value, what: str, line, source) -> Fraction:
    s = _scalar(value, what, line, source)
    if s.im:
        raise SceneError(f"{what}: coordinates of h must be real", line, source)
    return s.re


def _realization(family, rank, module, line, source) -> RootSystemRealization:
    try:
        return build_realization(family, rank, module)
    except (ConfigurationError, DomainError, ValueError) as exc:
        raise SceneError(str(exc), line, source) from None


_MODULE_ALIASES = {"defining": "defining", "d": "defining", "adjoint": "adjoint", "adj": "adjoint"}


def parse_scene(text: str, source: str | None = None) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno, source) from None
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object", 1, source)

    alg = data.get("algebra", data)
    if not isinstance(alg, dict):
        raise SceneError("'algebra' must be an object", _key_line(text, "algebra"), source)
    fam_line = _key_line(text, "family")
    family = alg.get("family")
    if family not in ("gl", "A", "B", "C", "D"):
        raise SceneError(f"unknown family {family!r}; expected gl, A, B, C or D", fam_line, source)
    rank = _int(alg.get("rank"), "rank", _key_line(text, "rank"), source)
    module = _MODULE_ALIASES.get(alg.get("module", "defining"))
    if module is None:
        raise SceneError(f"unknown module {alg.get('module')!r}", _key_line(text, "module"), source)
    real = _realization(family, rank, module, fam_line, source)

    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise SceneError("'options' must be an object", _key_line(text, "options"), source)

    def opt(key, default):
        if key in opts:
            return opts[key]
        return data.get(key, default)

    genus = data.get("genus_for_formulas", data.get("genus", 0))
    genus = _int(genus, "genus", _key_line(text, "genus_for_formulas") or _key_line(text, "genus"), source)
    mode = data.get("mode", "moving_gamma_mod_adG")
    if mode not in MODES:
        raise SceneError(f"mode must be one of {', '.join(MODES)}", _key_line(text, "mode"), source)
    precision = opt("precision", None)
    guard = opt("guard", 4)
    seed = opt("seed", None)
    for name, v in (("precision", precision), ("seed", seed)):
        if v is not None:
            _int(v, name, _key_line(text, name), source)
    _int(guard, "guard", _key_line(text, "guard"), source)

    gkey = "gammas" if "gammas" in data else "points"
    graw = data.get(gkey, [])
    if not isinstance(graw, list):
        raise SceneError(f"'{gkey}' must be a list", _key_line(text, gkey), source)
    glines = _array_item_lines(text, gkey)
    gammas = []
    seen: dict = {}
    for idx, entry in enumerate(graw):
        line = glines[idx] if idx < len(glines) else None
        if not isinstance(entry, dict):
            raise SceneError(f"{gkey}[{idx}] must be an object", line, source)
        point = None
        if "point" in entry:
            point = _scalar(entry["point"], f"{gkey}[{idx}].point", line, source)
            if point in seen:
                raise SceneError(
                    f"{gkey}[{idx}].point {format_scalar(point)} coincides with the point on line {seen[point]}",
                    line, source)
            seen[point] = line
        if "h" in entry:
            hv = entry["h"]
            if not isinstance(hv, list):
                raise SceneError(f"{gkey}[{idx}].h must be a list", line, source)
            h = CoweightH([_rational(c, f"{gkey}[{idx}].h", line, source) for c in hv])
        elif "h_simple" in entry:
            hv = entry["h_simple"]
            if not isinstance(hv, list):
                raise SceneError(f"{gkey}[{idx}].h_simple must be a list", line, source)
            try:
                h = CoweightH.from_simple_values(real.root_system, [_int(c, "h_simple", line, source) for c in hv])
            except DomainError as exc:
                raise SceneError(f"{gkey}[{idx}]: {exc}", line, source) from None
        else:
            raise SceneError(f"{gkey}[{idx}] needs 'h' or 'h_simple'", line, source)
        try:
            real.check_h(h)
        except DomainError as exc:
            raise SceneError(f"{gkey}[{idx}]: {exc}", line, source) from None
        gammas.append(GammaEntry(point, h, line))

    praw = data.get("pis", [])
    if not isinstance(praw, list):
        raise SceneError("'pis' must be a list", _key_line(text, "pis"), source)
    plines = _array_item_lines(text, "pis")
    pis = []
    for idx, entry in enumerate(praw):
        line = plines[idx] if idx < len(plines) else None
        if not isinstance(entry, dict) or "point" not in entry:
            raise SceneError(f"pis[{idx}] must be an object with a 'point'", line, source)
        point = _scalar(entry["point"], f"pis[{idx}].point", line, source)
        mult = _int(entry.get("mult", 1), f"pis[{idx}].mult", line, source)
        if mult < 0:
            raise SceneError(f"pis[{idx}].mult must be nonnegative", line, source)
        if point in seen:
            raise SceneError(
                f"pis[{idx}].point {format_scalar(point)} coincides with the marked point on line {seen[point]}",
                line, source)
        seen[point] = line
        pis.append(PiEntry(point, mult, line))

    return Scene(family, rank, module, tuple(gammas), tuple(pis), genus, mode,
                 precision, guard, seed, source)


def load_scene(path: str) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SceneError(f"cannot read scene: {exc.strerror}", source=path) from None
    return parse_scene(text, source=path)


def _fmt_h(h: CoweightH) -> list:
    return [int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}" for c in h.coords]


def scene_to_dict(scene: Scene) -> dict:
    gammas = []
    for g in scene.gammas:
        e = {"h": _fmt_h(g.h)}
        if g.point is not None:
            e["point"] = format_scalar(g.point)
        gammas.append(e)
    opts = {"guard": scene.guard}
    if scene.precision is not None:
        opts["precision"] = scene.precision
    if scene.seed is not None:
        opts["seed"] = scene.seed
    return {
        "algebra": {"family": scene.family, "rank": scene.rank, "module": scene.module},
        "gammas": gammas,
        "pis": [{"point": format_scalar(p.point), "mult": p.mult} for p in scene.pis],
        "genus_for_formulas": scene.genus,
        "mode": scene.mode,
        "options": opts,
    }


def emit_scene(scene: Scene) -> str:
    """Canonical text: nested layout, sorted keys, canonical scalars."""
    return json.dumps(scene_to_dict(scene), indent=2, sort_keys=True) + "\n"


# -- germ files


@dataclass(frozen=True, eq=False)
class GermFile:
    family: str
    rank: int
    module: str
    point: Scalar
    psi: TruncatedMatrixSeries
    source: str | None = None

    @property
    def realization(self) -> RootSystemRealization:
        return build_realization(self.family, self.rank, self.module)

    def germ(self) -> DivisorGerm:
        return DivisorGerm(self.realization, self.psi, self.point)


def parse_germ(text: str, source: str | None = None, precision: int | None = None) -> GermFile:
    """``{family, rank, module, point, valuation, precision, coeffs}``; ``coeffs``
    lists the matrices ``Psi_valuation, Psi_valuation+1, ...``.  Without
    ``precision`` the listed terms are taken as exact."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno, source) from None
    if not isinstance(data, dict):
        raise SceneError("germ file must be a JSON object", 1, source)
    family = data.get("family")
    if family not in ("gl", "A", "B", "C", "D"):
        raise SceneError(f"unknown family {family!r}", _key_line(text, "family"), source)
    rank = _int(data.get("rank"), "rank", _key_line(text, "rank"), source)
    module = _MODULE_ALIASES.get(data.get("module", "defining"))
    if module is None:
        raise SceneError(f"unknown module {data.get('module')!r}", _key_line(text, "module"), source)
    real = _realization(family, rank, module, _key_line(text, "family"), source)
    n = real.module_dim
    point = _scalar(data.get("point", "0"), "point", _key_line(text, "point"), source)
    val = _int(data.get("valuation", 0), "valuation", _key_line(text, "valuation"), source)
    coeffs = data.get("coeffs")
    clines = _array_item_lines(text, "coeffs")
    if not isinstance(coeffs, list) or not coeffs:
        raise SceneError("'coeffs' must be a nonempty list of matrices", _key_line(text, "coeffs"), source)
    mats = []
    for idx, m in enumerate(coeffs):
        line = clines[idx] if idx < len(clines) else None
        if (not isinstance(m, list) or len(m) != n
                or any(not isinstance(r, list) or len(r) != n for r in m)):
            raise SceneError(f"coeffs[{idx}] must be a {n}x{n} matrix for {real.name}", line, source)
        mats.append(tuple(tuple(_scalar(x, f"coeffs[{idx}]", line, source) for x in r) for r in m))
    prec = data.get("precision")
    if precision is not None:
        prec = precision
    if prec is not None:
        _int(prec, "precision", _key_line(text, "precision"), source)
        if prec < 1:
            raise SceneError("precision must be positive", _key_line(text, "precision"), source)
    order = None if prec is None else val + prec
    psi = TruncatedMatrixSeries.build(mats, val, order, (n, n))
    if psi.is_zero():
        raise SceneError("germ is zero within its precision", _key_line(text, "coeffs"), source)
    return GermFile(family, rank, module, point, psi, source)


def load_germ(path: str, precision: int | None = None) -> GermFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SceneError(f"cannot read germ file: {exc.strerror}", source=path) from None
    return parse_germ(text, source=path, precision=precision)
