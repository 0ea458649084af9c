"""Command-line front end: ``verify``, ``inspect`` and ``compare``.

Configuration is a JSON document (see README).  Exit status is 0 when every check
passes, 1 when a check fails and 2 on configuration or domain errors.
"""

from __future__ import annotations

import argparse
import copy
import json
import platform
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import jsonschema
import numpy as np
import scipy

from . import __version__
from .connection import (VARIANTS, christoffel_frame, levi_civita, spin_connection_general,
                         spin_connection_special, torsion_defect)
from .covariant import METRICITY_FIELDS, metricity_report
from .curvature import (OUTER_STEP_FACTOR, frame_inverse_metric, riemann_frame, spinor_curvature,
                        spinor_curvature_from_riemann)
from .errors import ConfigError, InconsistentAlgebra, SpinConnError
from .frames import (FrameField, coordinate_frame, custom_frame, frame_derivative,
                     frame_metric_components, orthonormal_tetrad, structure_constants)
from .geometry import DerivativeScheme, SpacetimeModel, make_builtin_spacetime, stencil_reach
from .polynomial import box_grid
from .spinor_algebra import (SpinorFrameData, canonical_constants, check_gamma_identity,
                             chirality_derivative, commutation_residuals, gamma_identity_sides, random_gauge,
                             spinor_frame_data)

DEFAULT_TOLERANCES = {
    "algebra.gamma_identity": 1e-12,
    "algebra.projectors": 1e-12,
    "torsion": 1e-6,
    **{f"metricity.{name}": 1e-6 for name in METRICITY_FIELDS},
    "reality.tau": 1e-8,
    "reality.connection": 0.0,
    "equivalence": 1e-6,
    "chirality_derivative": 1e-6,
    "curvature.relation": 1e-5,
    "curvature.conjugate": 1e-10,
}

DEFAULT_CONFIG = {
    "spacetime": {"name": "schwarzschild", "params": {"r_s": 1.0}},
    "frame": "tetrad",
    "gauge": None,
    "points": {"count": 20, "seed": 42},
    "scheme": {"step": 1e-5, "order": 4, "richardson": True},
    "tolerances": {},
    "defects": [],
    "output": {"json": None, "pretty": True},
}

_BOX = {"type": "array", "minItems": 4, "maxItems": 4,
        "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}}}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "spacetime": {
            "type": "object", "required": ["name"], "additionalProperties": False,
            "properties": {"name": {"type": "string"}, "params": {"type": "object"}},
        },
        "frame": {"oneOf": [
            {"enum": ["tetrad", "coordinate"]},
            {"type": "object", "required": ["custom"], "additionalProperties": False,
             "properties": {"custom": {"type": "array", "minItems": 4, "maxItems": 4,
                                       "items": {"type": "array", "minItems": 4, "maxItems": 4}}}},
        ]},
        "gauge": {"oneOf": [
            {"type": "null"},
            {"enum": ["none"]},
            {"type": "object", "required": ["random"], "additionalProperties": False,
             "properties": {"random": {
                 "type": "object", "additionalProperties": False,
                 "properties": {"seed": {"type": "integer"},
                                "degree": {"type": "integer", "minimum": 0},
                                "amplitude": {"type": "number", "minimum": 0}}}}},
        ]},
        "points": {
            "type": "object", "additionalProperties": False,
            "properties": {"count": {"type": "integer", "minimum": 1},
                           "seed": {"type": "integer"}, "box": _BOX},
        },
        "scheme": {
            "type": "object", "additionalProperties": False,
            "properties": {"step": {"type": "number", "exclusiveMinimum": 0},
                           "order": {"enum": [2, 4]}, "richardson": {"type": "boolean"}},
        },
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
        "defects": {"type": "array", "items": {
            "type": "object", "required": ["index", "delta"], "additionalProperties": False,
            "properties": {"field": {"enum": ["gamma"]},
                           "index": {"type": "array", "minItems": 3, "maxItems": 3,
                                     "items": {"type": "integer", "minimum": 0, "maximum": 3}},
                           "delta": {"type": "number"}}}},
        "output": {
            "type": "object", "additionalProperties": False,
            "properties": {"json": {"type": ["string", "null"]}, "pretty": {"type": "boolean"}},
        },
    },
}


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass
class RunConfig:
    raw: dict

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        try:
            jsonschema.validate(doc, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"invalid config at {path}: {exc.message}") from None
        raw = _merge(DEFAULT_CONFIG, doc)
        if "spacetime" in doc:
            # parameters belong to one model; never inherit the default model's
            raw["spacetime"] = {"name": doc["spacetime"]["name"], "params": doc["spacetime"].get("params") or {}}
        if any(v <= 0 for v in raw["tolerances"].values()):
            raise ConfigError("tolerances must be positive")
        unknown = set(raw["tolerances"]) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown check names in tolerances: {sorted(unknown)}")
        return cls(raw)

    @property
    def scheme(self) -> DerivativeScheme:
        return DerivativeScheme(**self.raw["scheme"])

    def tolerance(self, check: str) -> float:
        return float(self.raw["tolerances"].get(check, DEFAULT_TOLERANCES[check]))


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


# ---------------------------------------------------------------------------
# setup
# ---------------------------------------------------------------------------


@dataclass
class Setup:
    config: RunConfig
    model: SpacetimeModel
    frame: FrameField
    data: SpinorFrameData
    gauge: object = None
    points: np.ndarray = field(default=None, repr=False)


def build_setup(config: RunConfig, sample: bool = True) -> Setup:
    raw = config.raw
    model = make_builtin_spacetime(raw["spacetime"]["name"], raw["spacetime"].get("params") or {})
    tetrad = orthonormal_tetrad(model)
    spec = raw["frame"]
    if spec == "tetrad":
        frame = tetrad
    elif spec == "coordinate":
        frame = coordinate_frame(model)
    else:
        frame = custom_frame(spec["custom"])
    consts = canonical_constants()
    for defect in raw["defects"]:
        consts = consts.perturbed(*defect["index"], defect["delta"])
    gauge = None
    if isinstance(raw["gauge"], dict):
        opts = raw["gauge"]["random"]
        gauge = random_gauge(opts.get("seed", 0), opts.get("degree", 2), opts.get("amplitude", 0.3),
                             box=model.box)
    data = spinor_frame_data(consts, model=model, frame=frame if frame is not tetrad else None,
                             tetrad=tetrad, gauge=gauge)
    setup = Setup(config, model, frame, data, gauge)
    if sample:
        setup.points = sample_points(model, config)
    return setup


def stencil_margin(scheme: DerivativeScheme) -> float:
    """Relative coordinate reach of a nested (curvature) stencil."""
    return stencil_reach(scheme) * (1.0 + OUTER_STEP_FACTOR) * 2.0


def _admissible(model: SpacetimeModel, x, margin: float):
    x = np.atleast_2d(x)
    ok = np.asarray(model.domain_guard(x), dtype=bool)
    scale = margin * np.maximum(1.0, np.abs(x))
    for signs in np.ndindex(2, 2, 2, 2):
        shift = (2 * np.array(signs) - 1) * scale
        ok &= np.asarray(model.domain_guard(x + shift), dtype=bool)
    return ok


def sample_points(model: SpacetimeModel, config: RunConfig) -> np.ndarray:
    """Seeded uniform points in the box, skipping those whose stencils leave the chart."""
    opts = config.raw["points"]
    margin = stencil_margin(config.scheme)
    if opts.get("box") is not None:
        box = np.asarray(opts["box"], dtype=float)
    else:
        # model boxes may touch the chart boundary; pull them in by the stencil reach
        box = np.asarray(model.box, dtype=float).copy()
        box[:, 0] += margin * np.maximum(1.0, np.abs(box[:, 0]))
        box[:, 1] -= margin * np.maximum(1.0, np.abs(box[:, 1]))
    if np.any(box[:, 1] < box[:, 0]):
        raise ConfigError("sampling box has lo > hi")
    if not _admissible(model, box_grid(box, n=3), margin).all():
        raise ConfigError("sampling box is not inside the chart domain with stencil margin")
    rng = np.random.default_rng(opts.get("seed", 0))
    count = int(opts.get("count", 1))
    accepted = []
    for _ in range(100):
        cand = box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random((count, 4))
        accepted.extend(cand[_admissible(model, cand, margin)])
        if len(accepted) >= count:
            return np.array(accepted[:count])
    raise ConfigError("could not sample enough admissible points")


def is_special(setup: Setup, x) -> bool:
    """True when d, H and gamma have constant components along every frame vector at ``x``."""
    if setup.data.special:
        return True

    def parts(y):
        c = setup.data(y)
        return c.d_lo, c.H, c.gamma

    derivs = frame_derivative(parts, setup.frame, setup.model, x, setup.config.scheme)
    return max(float(np.abs(d).max()) for d in derivs) < 1e-12


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _per_point(arr) -> np.ndarray:
    arr = np.abs(np.asarray(arr))
    return arr.reshape(arr.shape[0], -1).max(axis=1)


def _check_algebra(s: Setup, x, scheme):
    g = frame_metric_components(s.model, s.frame, x)
    lhs, rhs = gamma_identity_sides(s.data(x), g)
    proj = np.array([max(commutation_residuals(s.data(p[None])).values()) for p in x])
    return {"algebra.gamma_identity": _per_point(lhs - rhs), "algebra.projectors": proj}


def _check_connection(s: Setup, x, scheme):
    conn = levi_civita(s.model, s.frame, s.data, x, scheme)
    c = structure_constants(s.frame, s.model, x, scheme)
    tors = np.array([torsion_defect(conn.Gamma[k], c[k]) for k in range(len(x))])
    variants = []
    for v in VARIANTS:
        try:
            variants.append(spin_connection_general(s.model, s.frame, s.data, x, scheme, v, Gamma=conn.Gamma))
        except InconsistentAlgebra:
            # decorated tensors undefined; algebra.projectors reports the cause
            continue
    if is_special(s, x):
        gh = frame_inverse_metric(s.model, s.frame, x)
        variants.append(spin_connection_special(conn.Gamma, s.data(x), gh))
    dev = np.zeros(len(x))
    for a in range(len(variants)):
        for b in range(a + 1, len(variants)):
            dev = np.maximum(dev, _per_point(variants[a] - variants[b]))
    conj = _per_point(conn.A_bar - np.conj(conn.A))
    return {"torsion": tors, "equivalence": dev, "reality.connection": conj}


def _check_chirality(s: Setup, x, scheme):
    formula = chirality_derivative(s.frame, s.data, s.model, x, scheme)
    direct = frame_derivative(s.data.field("H"), s.frame, s.model, x, scheme)
    return {"chirality_derivative": _per_point(formula - direct)}


def _check_curvature(s: Setup, x, scheme):
    R = riemann_frame(s.model, s.frame, x, scheme)
    fr = spinor_curvature(s.model, s.frame, s.data, x, scheme)
    fr_bar = spinor_curvature(s.model, s.frame, s.data, x, scheme, conjugate=True)
    gh = frame_inverse_metric(s.model, s.frame, x)
    rel = fr - spinor_curvature_from_riemann(R, s.data(x), gh)
    return {"curvature.relation": _per_point(rel), "curvature.conjugate": _per_point(fr_bar - np.conj(fr))}


CHECK_GROUPS: list[Callable] = [_check_algebra, _check_connection, _check_chirality, _check_curvature]


@dataclass(frozen=True)
class CheckRecord:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    worst_point: list

    def as_dict(self) -> dict:
        return {"name": self.name, "max_residual": self.max_residual, "tolerance": self.tolerance,
                "pass": self.passed, "worst_point": self.worst_point}


def _record(name, per_point, points, tol) -> CheckRecord:
    per_point = np.asarray(per_point, dtype=float)
    k = int(np.argmax(per_point))
    worst = float(per_point[k])
    return CheckRecord(name, worst, tol, bool(worst <= tol), [float(v) for v in points[k]])


def run_checks(setup: Setup) -> list[CheckRecord]:
    cfg, x, scheme = setup.config, setup.points, setup.config.scheme
    records = []
    for group in CHECK_GROUPS:
        for name, per in group(setup, x, scheme).items():
            records.append(_record(name, per, x, cfg.tolerance(name)))
    rep = metricity_report(setup.model, setup.frame, setup.data, x, scheme)
    for name in METRICITY_FIELDS:
        check = f"metricity.{name}"
        tol = cfg.tolerance(check)
        val = rep.residuals[name]
        records.append(CheckRecord(check, val, tol, bool(val <= tol), rep.worst_points[name]))
    tol = cfg.tolerance("reality.tau")
    records.append(CheckRecord("reality.tau", rep.reality_defect, tol, bool(rep.reality_defect <= tol), []))
    order = list(DEFAULT_TOLERANCES)
    return sorted(records, key=lambda r: order.index(r.name))


def _metadata(config: RunConfig, command: str) -> dict:
    return {
        "command": command,
        "config": config.raw,
        "versions": {"spinconn": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
    }


def run_verify(config: RunConfig) -> dict:
    setup = build_setup(config)
    records = run_checks(setup)
    return {**_metadata(config, "verify"),
            "checks": [r.as_dict() for r in records],
            "all_pass": all(r.passed for r in records)}


def run_compare(config: RunConfig) -> dict:
    setup = build_setup(config)
    x, scheme = setup.points, config.scheme
    Gamma = christoffel_frame(setup.model, setup.frame, x, scheme)
    labels = ["special", *VARIANTS]
    values = {v: spin_connection_general(setup.model, setup.frame, setup.data, x, scheme, v, Gamma=Gamma)
              for v in VARIANTS}
    special = is_special(setup, x)
    if special:
        values["special"] = spin_connection_special(Gamma, setup.data(x), frame_inverse_metric(setup.model, setup.frame, x))
    tol = config.tolerance("equivalence")
    table = []
    for a in labels:
        row = []
        for b in labels:
            if a not in values or b not in values:
                row.append(None)
            else:
                row.append(float(np.abs(values[a] - values[b]).max()))
        table.append(row)
    worst = max(v for row in table for v in row if v is not None)
    return {**_metadata(config, "compare"), "labels": labels, "special_frame": special,
            "table": table, "tolerance": tol, "all_pass": bool(worst <= tol)}


def _nonzero_entries(arr, tol=1e-12) -> list:
    arr = np.asarray(arr)
    out = []
    for idx in zip(*np.nonzero(np.abs(arr) > tol)):
        v = complex(arr[idx])
        out.append([[int(i) for i in idx], v.real, v.imag])
    return out


def run_inspect(config: RunConfig, point, what: str) -> dict:
    setup = build_setup(config, sample=False)
    x = np.asarray(point, dtype=float)
    setup.model.check(x)
    scheme = config.scheme
    report = {**_metadata(config, "inspect"), "what": what, "point": [float(v) for v in x]}
    if what == "algebra":
        c = canonical_constants()
        report["matrices"] = {
            "d_lo": _matrix(c.d_lo), "H": _matrix(c.H), "D": _matrix(c.D),
            **{f"gamma_{k}": _matrix(c.gamma[k]) for k in range(4)},
        }
        cx = setup.data(x[None])
        g = frame_metric_components(setup.model, setup.frame, x[None])
        report["residuals"] = {"gamma_identity": check_gamma_identity(cx, g),
                               **commutation_residuals(cx)}
    elif what == "connection":
        Gamma = christoffel_frame(setup.model, setup.frame, x, scheme)
        report["Gamma"] = _nonzero_entries(Gamma)
        report["A"] = {v: _nonzero_entries(spin_connection_general(setup.model, setup.frame, setup.data,
                                                                   x, scheme, v, Gamma=Gamma))
                       for v in VARIANTS}
    elif what == "curvature":
        R = riemann_frame(setup.model, setup.frame, x, scheme)
        fr = spinor_curvature(setup.model, setup.frame, setup.data, x, scheme)
        gh = frame_inverse_metric(setup.model, setup.frame, x)
        res = float(np.abs(fr - spinor_curvature_from_riemann(R, setup.data(x), gh)).max())
        tol = config.tolerance("curvature.relation")
        report["R"] = _nonzero_entries(R, 1e-9)
        report["spinor_curvature"] = _nonzero_entries(fr, 1e-9)
        report["relation"] = {"max_residual": res, "tolerance": tol, "pass": res <= tol}
    else:
        raise ConfigError(f"unknown inspect target {what!r}")
    return report


def _matrix(m) -> list:
    m = np.asarray(m)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def dumps(report: dict) -> str:
    # floats use the shortest repr that round-trips, so identical runs give identical bytes
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _fmt_complex(re, im) -> str:
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"{re:g}{im:+g}i"


def format_pretty(report: dict) -> str:
    lines = []
    cmd = report["command"]
    st = report["config"]["spacetime"]
    lines.append(f"{cmd}: {st['name']} {st.get('params') or {}} frame={report['config']['frame']!s:.40}")
    if cmd == "verify":
        width = max(len(c["name"]) for c in report["checks"])
        for c in report["checks"]:
            flag = "PASS" if c["pass"] else "FAIL"
            lines.append(f"  {c['name']:<{width}}  {c['max_residual']:.3e}  (tol {c['tolerance']:g})  {flag}")
        lines.append("all checks pass" if report["all_pass"] else "some checks FAIL")
    elif cmd == "compare":
        labels = report["labels"]
        lines.append("  " + " " * 10 + "".join(f"{lab:>24}" for lab in labels))
        for lab, row in zip(labels, report["table"]):
            cells = ["N/A (non-special frame)" if v is None else f"{v:.3e}" for v in row]
            lines.append(f"  {lab:<10}" + "".join(f"{c:>24}" for c in cells))
        lines.append(("PASS" if report["all_pass"] else "FAIL") + f" (tol {report['tolerance']:g})")
    else:
        lines.append(f"  point {report['point']}")
        what = report["what"]
        if what == "algebra":
            for name, m in report["matrices"].items():
                lines.append(f"  {name}:")
                for row in m:
                    lines.append("    [" + " ".join(f"{_fmt_complex(*v):>5}" for v in row) + "]")
            for name, v in report["residuals"].items():
                lines.append(f"  {name}: {v:.3e}")
        elif what == "connection":
            lines.append(f"  Gamma ({len(report['Gamma'])} nonzero)")
            for idx, re, _ in report["Gamma"]:
                lines.append(f"    Gamma{idx} = {re:.10g}")
            for v, entries in report["A"].items():
                lines.append(f"  A[{v}] ({len(entries)} nonzero)")
                for idx, re, im in entries:
                    lines.append(f"    A{idx} = {re:.10g} {im:+.10g}i")
        else:
            lines.append(f"  R: {len(report['R'])} nonzero components")
            lines.append(f"  spinor curvature: {len(report['spinor_curvature'])} nonzero components")
            rel = report["relation"]
            flag = "PASS" if rel["pass"] else "FAIL"
            lines.append(f"  curvature_relation: {rel['max_residual']:.3e} (tol {rel['tolerance']:g}) {flag}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _tol_pair(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected <check>=<value>, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value in {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--spacetime", help="builtin spacetime name")
    common.add_argument("--rs", type=float, help="Schwarzschild radius")
    common.add_argument("--frame", choices=["tetrad", "coordinate"])
    common.add_argument("--gauge-seed", type=int, help="apply a random smooth spinor gauge")
    common.add_argument("--points", type=int, help="number of sample points")
    common.add_argument("--seed", type=int, help="sampling seed")
    common.add_argument("--step", type=float, help="relative finite-difference step")
    common.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="CHECK=VALUE")
    common.add_argument("--format", choices=["json", "pretty"], default=None)
    common.add_argument("--output", help="also write the JSON report here")

    parser = argparse.ArgumentParser(prog="spinconn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every consistency check")
    sub.add_parser("compare", parents=[common], help="tabulate deviations between connection formulas")
    insp = sub.add_parser("inspect", parents=[common], help="print tensors at one point")
    insp.add_argument("what", choices=["connection", "curvature", "algebra"])
    insp.add_argument("--at", type=float, nargs=4, metavar=("X0", "X1", "X2", "X3"),
                      help="point (default: centre of the model box)")
    return parser


def config_from_args(args) -> RunConfig:
    doc = load_config(args.config)
    if args.spacetime:
        doc.setdefault("spacetime", {})
        if doc["spacetime"].get("name") != args.spacetime:
            doc["spacetime"] = {"name": args.spacetime}
    if args.rs is not None:
        doc.setdefault("spacetime", copy.deepcopy(DEFAULT_CONFIG["spacetime"]))
        doc["spacetime"].setdefault("params", {})["r_s"] = args.rs
    if args.frame:
        doc["frame"] = args.frame
    if args.gauge_seed is not None:
        doc["gauge"] = {"random": {"seed": args.gauge_seed}}
    if args.points is not None:
        doc.setdefault("points", {})["count"] = args.points
    if args.seed is not None:
        doc.setdefault("points", {})["seed"] = args.seed
    if args.step is not None:
        doc.setdefault("scheme", {})["step"] = args.step
    for name, value in args.tol:
        doc.setdefault("tolerances", {})[name] = value
    if args.format:
        doc.setdefault("output", {})["pretty"] = args.format == "pretty"
    if args.output:
        doc.setdefault("output", {})["json"] = args.output
    return RunConfig.from_dict(doc)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        config = config_from_args(args)
        if args.command == "verify":
            report = run_verify(config)
        elif args.command == "compare":
            report = run_compare(config)
        else:
            model = make_builtin_spacetime(config.raw["spacetime"]["name"],
                                           config.raw["spacetime"].get("params") or {})
            point = args.at if args.at is not None else np.asarray(model.box).mean(axis=1)
            report = run_inspect(config, point, args.what)
    except (SpinConnError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = config.raw["output"]
    if out.get("json"):
        with open(out["json"], "w") as fh:
            fh.write(dumps(report))
    if out.get("pretty", True):
        sys.stdout.write(format_pretty(report))
        print(f"wall time {time.perf_counter() - started:.2f} s")
    else:
        sys.stdout.write(dumps(report))
    ok = report.get("all_pass", report.get("relation", {}).get("pass", True))
    return 0 if ok else 1
