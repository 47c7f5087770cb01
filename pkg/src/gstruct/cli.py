"""Command-line interface: reports, t-sweeps, fuzzing and model files.

Exit codes: 0 when every check passes, 1 on a failed check or fuzz
property, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .curvature import s_alt_gperp, scalar_report
from .homogeneous import HomogeneousModel, ModelFormatError, model_from_dict, nomizu_curvature
from .models import (
    HOMOGENEOUS_BUILDERS,
    POINTWISE_BUILDERS,
    ModelParameterError,
    PointwiseModel,
)
from .structures import ContactStructure, HermitianStructure, SpecialHermitianStructure
from .torsion import (
    contact_d_split,
    contact_invariants,
    geometric_characteristic_vector,
    gh_decompose,
    hermitian_invariants,
    recognize_patterns,
    torsion_norms,
)
from .verify import DEFAULT_TOL, SPACES, all_checks, check_divergence, evaluate, fuzz_campaign

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MODEL_NAMES = tuple(HOMOGENEOUS_BUILDERS) + tuple(POINTWISE_BUILDERS)

CONVENTIONS = {
    "curvature": "R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]; R(X,Y,Z,W) = <R(X,Y)Z, W>",
    "torsion": "alpha[i,j,k] = g(xi_{E_i} E_j, E_k)",
    "elementary_matrix": "e_jk has +1 at (j,k) and -1 at (k,j)",
    "s_gperp": "sum_{i,j} <P(R(E_i,E_j)) E_j, E_i>",
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    model_name: str | None = None
    t: float | None = None
    n: int | None = None
    tol: float = DEFAULT_TOL
    seed: int = 0
    iters: int = 1000
    output_path: str | None = None
    format: str = "pretty"

    def __post_init__(self):
        if self.t is not None and not self.t > 0:
            raise UsageError(f"--t must be positive, got {self.t}")
        if self.iters < 1:
            raise UsageError(f"--iters must be >= 1, got {self.iters}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise UsageError(f"tolerance must be positive, got {self.tol}")


def _default_tol() -> float:
    raw = os.environ.get("GSTRUCT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"GSTRUCT_TOL is not a number: {raw!r}") from None


def _plain(obj):
    """Convert numpy scalars and arrays to JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip float repr."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


# -- model construction ----------------------------------------------------------------


def build_model(name: str, t: float | None = None, n: int | None = None):
    if name in HOMOGENEOUS_BUILDERS:
        builder, param = HOMOGENEOUS_BUILDERS[name]
        value = t if param == "t" else n
        if value is None:
            value = 1.0 if param == "t" else 1
        return builder(value)
    if name in POINTWISE_BUILDERS:
        return POINTWISE_BUILDERS[name](2 if n is None else n)
    raise UsageError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")


def load_model_file(path: str) -> HomogeneousModel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return model_from_dict(data)
    except ModelFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


# -- reports -------------------------------------------------------------------------------


def _torsion_section(xi, structure) -> dict:
    out = dict(torsion_norms(xi))
    out["sign"] = xi.sign
    out["chi"] = geometric_characteristic_vector(xi)
    if isinstance(structure, HermitianStructure) and not isinstance(structure, SpecialHermitianStructure):
        out["invariants"] = hermitian_invariants(xi, structure).to_dict()
    elif isinstance(structure, ContactStructure):
        out["invariants"] = contact_invariants(xi, structure).to_dict()
    out["patterns"] = [{"label": p.label, "scale": p.scale, "residual": p.residual} for p in recognize_patterns(xi, structure)]
    return out


def _classes_section(xi, structure, tol) -> dict:
    if isinstance(structure, HermitianStructure) and not isinstance(structure, SpecialHermitianStructure):
        if structure.dim < 4:
            return {}
        decomp = gh_decompose(xi, structure)
    elif isinstance(structure, ContactStructure):
        decomp = contact_d_split(xi, structure)
    else:
        return {}
    return {"labels": decomp.labels(tol), "norms2": decomp.norms2()}


def build_report(obj, tol: float) -> dict:
    checks = all_checks(obj, tol)
    ledger = [c.to_dict(full=True) for c in checks if c.informational]
    binding = [c.to_dict() for c in checks if not c.informational]
    if isinstance(obj, PointwiseModel):
        s, xi = obj.structure, obj.xi
        implied = obj.implied_scalars or {}
        scalars = {"s_alt_gperp": s_alt_gperp(xi, s), **{f"implied_{k}": v for k, v in implied.items()}}
        params = dict(obj.params, alpha=obj.alpha)
    else:
        ev = evaluate(obj)
        s, xi = ev.structure, ev.xi
        scalars = scalar_report(nomizu_curvature(obj), xi, s).to_dict()
        scalars["div_chi"] = ev.div_chi
        params = dict(obj.params)
    conventions = dict(CONVENTIONS, structure=s.kind, tolerance=tol, ledger=ledger)
    return {
        "model": obj.name,
        "params": params,
        "conventions": conventions,
        "scalars": scalars,
        "torsion": _torsion_section(xi, s),
        "classes": _classes_section(xi, s, tol),
        "checks": binding,
    }


def _report_exit(report: dict) -> int:
    return EXIT_OK if all(c["pass"] for c in report["checks"]) else EXIT_FAIL


def format_pretty(report: dict) -> str:
    lines = [f"model {report['model']}  params {report['params']}"]
    for key, value in sorted(report["scalars"].items()):
        lines.append(f"  {key:<26} {value: .12g}")
    t = report["torsion"]
    for key in ("xi_norm2", "alt_norm2", "sym_norm2", "chi_norm2"):
        lines.append(f"  {key:<26} {t[key]: .12g}")
    for p in t["patterns"]:
        scale = p["scale"] if isinstance(p["scale"], float) else tuple(p["scale"])
        lines.append(f"  pattern {p['label']} scale {scale}")
    if report["classes"]:
        lines.append(f"  classes {' + '.join(report['classes']['labels']) or '0'}")
    for c in report["checks"]:
        tag = "PASS" if c["pass"] else "FAIL"
        lines.append(f"  [{tag}] {c['name']:<36} residual {c['residual']:.3e}")
    for c in report["conventions"]["ledger"]:
        lines.append(f"  [info] {c['name']:<36} computed {c['lhs']:.12g} quoted {c['rhs']:.12g}")
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_report(obj, fmt: str, output: str | None, tol: float) -> int:
    report = build_report(obj, tol)
    _emit(dumps(report) if fmt == "json" else format_pretty(report), output)
    return _report_exit(report)


SWEEP_COLUMNS = ("t", "s", "s_star", "s_gperp", "s_alt_gperp", "chi2", "alt2", "sym2", "div_residual")


def cmd_sweep(name: str, t_from: float, t_to: float, steps: int, output: str | None, tol: float) -> int:
    if name not in HOMOGENEOUS_BUILDERS or HOMOGENEOUS_BUILDERS[name][1] != "t":
        raise UsageError(f"sweep needs a t-parametrized model (flag, stiefel), got {name!r}")
    if not (0 < t_from < t_to) or steps < 2:
        raise UsageError("sweep needs 0 < t_from < t_to and steps >= 2")
    builder = HOMOGENEOUS_BUILDERS[name][0]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    worst = 0.0
    for t in np.linspace(t_from, t_to, steps):
        model = builder(float(t))
        ev = evaluate(model)
        div_res = max(c.residual for c in check_divergence(model, tol=tol))
        worst = max(worst, div_res)
        row = (
            float(t), ev.scalars["s"], ev.scalars["s_star"], ev.scalars["s_gperp"], ev.scalars["s_alt_gperp"],
            ev.norms["chi_norm2"], ev.norms["alt_norm2"], ev.norms["sym_norm2"], div_res,
        )  # fmt: skip
        writer.writerow([repr(float(x)) for x in row])
    _emit(buf.getvalue(), output)
    return EXIT_OK if worst <= tol else EXIT_FAIL


def cmd_fuzz(space: str, dim: int, iters: int, seed: int, m: int | None, fmt: str, output: str | None, tol: float) -> int:
    try:
        summary = fuzz_campaign(space, dim, iters, seed, tol=tol, m=m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if fmt == "json":
        text = dumps(summary.to_dict())
    else:
        lines = [f"fuzz {space} dim {dim} iters {iters} seed {seed}: {summary.failures} failures"]
        lines += [f"  {k:<30} max residual {v:.3e}" for k, v in sorted(summary.max_residuals.items())]
        if summary.first_failure:
            ff = summary.first_failure
            lines.append(f"  first failure: {ff['property']} at SeedSequence({ff['seed']})")
        text = "\n".join(lines) + "\n"
    _emit(text, output)
    return EXIT_OK if summary.passed else EXIT_FAIL


def cmd_dump_model(obj, output: str | None) -> int:
    if not isinstance(obj, HomogeneousModel):
        raise UsageError(f"model {obj.name!r} is pointwise and has no homogeneous model file")
    _emit(dumps(obj.to_dict()), output)
    return EXIT_OK


def cmd_load_model(path: str, fmt: str, output: str | None, tol: float) -> int:
    return cmd_report(load_model_file(path), fmt, output, tol)


# -- argument parsing -------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gstruct", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=float, default=None, help="identity tolerance (default 1e-9 or $GSTRUCT_TOL)")
    sub = parser.add_subparsers(dest="command", required=True)
    # --tol is also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    def model_args(p, with_format=True):
        p.add_argument("model", choices=MODEL_NAMES)
        p.add_argument("--t", type=float, default=None, help="metric parameter for flag/stiefel (default 1)")
        p.add_argument("--n", type=_positive_int, default=None, help="half dimension for contact models")
        p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
        if with_format:
            p.add_argument("--format", choices=("pretty", "json"), default="pretty")

    model_args(sub.add_parser("report", parents=[common], help="scalars, torsion, classes and all checks for a model"))

    sweep = sub.add_parser("sweep", parents=[common], help="sample a t-family and write CSV")
    sweep.add_argument("model", choices=[k for k, (_, p) in HOMOGENEOUS_BUILDERS.items() if p == "t"])
    sweep.add_argument("--t-from", type=float, required=True)
    sweep.add_argument("--t-to", type=float, required=True)
    sweep.add_argument("--steps", type=int, default=16)
    sweep.add_argument("--csv", "-o", "--output", dest="output", default=None)

    fuzz = sub.add_parser("fuzz", parents=[common], help="random property campaign")
    fuzz.add_argument("--space", choices=SPACES, required=True)
    fuzz.add_argument("--dim", type=int, required=True)
    fuzz.add_argument("--iters", type=_positive_int, default=1000)
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--m", type=int, default=None, help="rank of D for the product space")
    fuzz.add_argument("--format", choices=("pretty", "json"), default="pretty")
    fuzz.add_argument("-o", "--output", default=None)

    model_args(sub.add_parser("dump-model", parents=[common], help="write a homogeneous model as JSON"), with_format=False)

    load = sub.add_parser("load-model", parents=[common], help="validate a model file and report on it")
    load.add_argument("path")
    load.add_argument("--format", choices=("pretty", "json"), default="pretty")
    load.add_argument("-o", "--output", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else _default_tol()
        if args.command in ("report", "dump-model"):
            config = CliConfig(args.command, args.model, args.t, args.n, tol, output_path=args.output)
            obj = build_model(config.model_name, config.t, config.n)
            if args.command == "dump-model":
                return cmd_dump_model(obj, config.output_path)
            return cmd_report(obj, args.format, config.output_path, config.tol)
        if args.command == "sweep":
            config = CliConfig(args.command, args.model, tol=tol, output_path=args.output, format="csv")
            return cmd_sweep(args.model, args.t_from, args.t_to, args.steps, config.output_path, config.tol)
        if args.command == "fuzz":
            config = CliConfig(args.command, tol=tol, seed=args.seed, iters=args.iters, output_path=args.output)
            return cmd_fuzz(args.space, args.dim, config.iters, config.seed, args.m, args.format, args.output, config.tol)
        config = CliConfig(args.command, tol=tol, output_path=args.output, format=args.format)
        return cmd_load_model(args.path, args.format, args.output, config.tol)
    except (UsageError, ModelParameterError) as exc:
        print(f"gstruct: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
