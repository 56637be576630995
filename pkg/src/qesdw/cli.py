"""Command-line interface.

    qesdw spectrum --model oned1 -B 1 -C 1 -j 1
    qesdw polynomials --model oned2 -B 2 -C 1 -j 1 --format table
    qesdw wavefunction --model oned1 -B 1 -C 1 -j 0
    qesdw 2d --model twod1 -A 1 -B -1 -C 1 -j 1 --kmax 0
    qesdw oracle --harmonic -C 2
    qesdw verify --skip oracle

Exit status: 0 success, 1 a verification check failed, 2 usage or domain
error (one diagnostic line on stderr).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .discrepancies import collect_discrepancies
from .errors import DomainError, QesError
from .models import Family, PotentialModel, _PARAMS
from .oracle import GridSpec, harmonic_check, qes_contrast_report
from .output import to_csv, to_json, to_table
from .recurrence import RecurrenceSpec, generate_polynomials
from .separable2d import eval_psi_2d, solve_2d_model1, solve_2d_model2
from .spectra import DEFAULT_ROOT_TOL, full_spectrum
from .tabulated import TABLE_MAX_J, table_check, tabulated_in_eps
from .verify import CHECK_GROUPS, VerifyConfig, run_checks
from .wavefunction import (
    eval_psi,
    gauge_for,
    normalizability_report,
    solutions_from_spectrum,
    solve_levels,
)

__all__ = ["main"]

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_FORCED_1D = ("A",)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:   # one line, exit 2
        raise UsageError(message)


@dataclass
class Result:
    doc: Any
    rows: list[dict] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)
    default_format: str = "json"
    status: int = EXIT_OK


def _schema(kind: str) -> str:
    return f"qesdw/{kind}/v{SCHEMA_VERSION}"


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _model_from(args: argparse.Namespace) -> PotentialModel:
    fam = Family(args.model)
    params = {}
    for name in _PARAMS[fam]:
        v = getattr(args, name, None)
        if v is None:
            continue
        if fam.dimension == 1 and name in _FORCED_1D:
            raise DomainError(f"{name} is fixed by the QES constraint; do not pass it for {fam.value}")
        params[name] = v
    for name in ("A", "B", "C", "V0", "A1", "A2", "B1", "B2"):
        if getattr(args, name, None) is not None and name not in _PARAMS[fam]:
            raise DomainError(f"parameter {name} is not defined for family {fam.value}")
    if fam is Family.TWOD_I:
        params.setdefault("C", 1.0)   # the x-block never sees C
    return PotentialModel.create(fam, **params)


def _samples(args: argparse.Namespace, lo: str, hi: str, n: str) -> np.ndarray:
    a, b, k = getattr(args, lo), getattr(args, hi), getattr(args, n)
    if not a < b or k < 2:
        raise DomainError(f"sampling needs {lo} < {hi} and at least 2 samples")
    return np.linspace(a, b, k)


def _grid(args: argparse.Namespace) -> GridSpec:
    return GridSpec(args.lo, args.hi, args.n)


def _need_1d(model: PotentialModel, cmd: str) -> None:
    if model.family.dimension != 1:
        raise DomainError(f"{cmd} needs a 1D family (oned1, oned2); use the 2d subcommand")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _spectrum_doc(model: PotentialModel, j: int, xs: np.ndarray, tol: float) -> tuple[dict, list[dict]]:
    spec = full_spectrum(model, j, tol)
    sols = solutions_from_spectrum(spec, xs)
    cm = spec.model
    tail = normalizability_report(gauge_for(cm, j))
    doc = {
        "schema": _schema("spectrum"),
        "family": cm.family.value,
        "params": cm.params,
        "j": j,
        "constraint": spec.constraint,
        "eps_roots": [s.eps for s in sols],
        "energies": [s.energy for s in sols],
        "multiplicity": list(spec.multiplicity),
        "complex_root_count": spec.complex_root_count,
        "residual_max": [s.max_residual for s in sols],
        "self_test_residual": [s.self_test_residual for s in sols],
        "node_counts": [s.node_count for s in sols],
        "normalizability": {"status": tail.status.value, "minus_tail": tail.minus_tail,
                            "plus_tail": tail.plus_tail, "leading": tail.leading},
    }
    rows = [{"j": j, "level": s.index, "eps": s.eps, "energy": s.energy,
             "residual_max": s.max_residual, "self_test": s.self_test_residual,
             "nodes": s.node_count, "normalizability": tail.status.value} for s in sols]
    return doc, rows


def _spectrum_task(payload: tuple) -> tuple[dict, list[dict]]:
    fam, items, j, xs, tol = payload
    return _spectrum_doc(PotentialModel(Family(fam), items), j, np.asarray(xs), tol)


def cmd_spectrum(args: argparse.Namespace) -> Result:
    model = _model_from(args)
    _need_1d(model, "spectrum")
    xs = _samples(args, "xmin", "xmax", "samples")
    js = args.j
    payloads = [(model.family.value, model.items, j, xs.tolist(), args.root_tol) for j in js]
    if args.parallel and len(js) > 1:
        with ProcessPoolExecutor() as ex:
            parts = list(ex.map(_spectrum_task, payloads))
    else:
        parts = [_spectrum_task(p) for p in payloads]
    docs = [d for d, _ in parts]
    rows = [r for _, rs in parts for r in rs]
    cols = ["j", "level", "eps", "energy", "residual_max", "self_test", "nodes", "normalizability"]
    return Result(docs[0] if len(docs) == 1 else docs, rows, cols)


def cmd_polynomials(args: argparse.Namespace) -> Result:
    model = _model_from(args)
    j = args.j[0] if len(args.j) == 1 else None
    if j is None:
        raise DomainError("polynomials takes a single -j")
    if model.family is Family.TWOD_II:
        cm = model.constrained(j, j)
    else:
        cm = model.constrained(j)
    axis = args.axis
    if model.family is not Family.TWOD_II and axis != "x":
        raise DomainError("--axis y is only defined for twod2")
    fam = generate_polynomials(RecurrenceSpec(cm, j, axis))
    doc: dict[str, Any] = {
        "schema": _schema("polynomials"),
        "family": cm.family.value,
        "params": cm.params,
        "j": j,
        "axis": axis,
        "variable": "eps" if cm.family.dimension == 1 else "E - E0 - c1" if axis == "x" else "c1",
        "polynomials": [p.coef for p in fam.polys],
        "critical": fam.critical.coef,
        "tabulated": None,
    }
    rows = [{"name": f"P{m}", "power": k, "coefficient": c}
            for m, p in enumerate(fam.polys) for k, c in enumerate(p.coef)]
    rows += [{"name": "critical", "power": k, "coefficient": c} for k, c in enumerate(fam.critical.coef)]
    if j <= TABLE_MAX_J and model.family is not Family.TWOD_II:
        chk = table_check(model, j)
        tab = tabulated_in_eps(cm, j)
        doc["tabulated"] = {"coefficients": tab.coef, "scale": chk.scale,
                            "defect": chk.defect, "proportional": chk.ok}
        rows += [{"name": "tabulated", "power": k, "coefficient": c} for k, c in enumerate(tab.coef)]
    return Result(doc, rows, ["name", "power", "coefficient"])


def cmd_wavefunction(args: argparse.Namespace) -> Result:
    model = _model_from(args)
    j = args.j[0]
    xs = _samples(args, "xmin", "xmax", "samples")
    if model.family.dimension == 1:
        levels = solve_levels(model, j)
        if not levels:
            raise DomainError(f"no real algebraic level at j={j}")
        if not 0 <= args.level < len(levels):
            raise DomainError(f"--level must lie in [0, {len(levels) - 1}]")
        s = levels[args.level]
        v = eval_psi(s, xs)
        rows = [{"x": x, "R": r, "exponent": e, "psi": p, "saturated": bool(f)}
                for x, r, e, p, f in zip(xs, s.R(xs), v.exponent, v.psi, v.saturated)]
        doc = {"schema": _schema("wavefunction"), "family": s.model.family.value,
               "params": s.model.params, "j": j, "level": s.index, "eps": s.eps,
               "energy": s.energy, "R": s.R.coeffs,
               "gauge": {"g3": s.gauge.g3, "g2": s.gauge.g2, "g1": s.gauge.g1},
               "samples": rows}
        return Result(doc, rows, ["x", "R", "exponent", "psi", "saturated"], "csv")
    spec = _solve2d(model, args)
    if not 0 <= args.level < len(spec.levels):
        raise DomainError(f"--level must lie in [0, {len(spec.levels) - 1}]")
    L = spec.levels[args.level]
    ys = _samples(args, "ymin", "ymax", "ysamples")
    psi, sat = eval_psi_2d(L, xs, ys)
    rows = [{"x": x, "y": y, "psi": psi[i, k], "saturated": bool(sat[i, k])}
            for i, x in enumerate(xs) for k, y in enumerate(ys)]
    doc = {"schema": _schema("wavefunction2d"), "family": spec.model.family.value,
           "params": spec.model.params, "level": args.level, "E_total": L.E_total,
           "samples": rows}
    return Result(doc, rows, ["x", "y", "psi", "saturated"], "csv")


def _solve2d(model: PotentialModel, args: argparse.Namespace):
    if model.family is Family.TWOD_I:
        return solve_2d_model1(model, args.j[0], args.kmax, tol=args.root_tol)
    if model.family is Family.TWOD_II:
        return solve_2d_model2(model, args.jx, args.jy, tol=args.root_tol)
    raise DomainError("2d needs family twod1 or twod2")


def cmd_2d(args: argparse.Namespace) -> Result:
    model = _model_from(args)
    spec = _solve2d(model, args)
    levels = []
    for L in spec.levels:
        levels.append({
            "k": L.k, "r": L.r, "c1": L.c1, "eps_x": L.eps_x, "E_total": L.E_total,
            "x_energy": L.x_energy, "y_energy": L.y_energy,
            "x_residual": L.x_residual, "y_residual": L.y_residual,
            "R": L.R.coeffs, "Q": L.Q.coeffs, "q": L.q_description,
        })
    blocks = {"x": {"j": spec.x_block.j, "critical": spec.x_block.critical.coef,
                    "real_roots": list(spec.x_block.roots),
                    "complex_root_count": spec.x_block.complex_root_count}}
    if spec.y_block is not None:
        blocks["y"] = {"j": spec.y_block.j, "critical": spec.y_block.critical.coef,
                       "real_roots": list(spec.y_block.roots),
                       "complex_root_count": spec.y_block.complex_root_count}
    doc = {"schema": _schema("twod"), "family": spec.model.family.value,
           "params": spec.model.params, "E0": spec.E0, "k_values": list(spec.k_values),
           "complex_root_count": spec.complex_root_count, "blocks": blocks, "levels": levels}
    cols = ["k", "r", "c1", "eps_x", "E_total", "x_residual", "y_residual"]
    return Result(doc, levels, cols)


def cmd_oracle(args: argparse.Namespace) -> Result:
    grid = _grid(args)
    if args.harmonic:
        if args.C is None:
            raise DomainError("--harmonic needs -C")
        rows = [{"n": r.n, "exact": r.exact, "raw": r.raw, "extrapolated": r.extrapolated,
                 "error": r.error} for r in harmonic_check(args.C, 3 if args.count is None else args.count, grid)]
        doc = {"schema": _schema("oracle"), "mode": "harmonic", "C": args.C,
               "grid": {"lo": grid.lo, "hi": grid.hi, "n": grid.n}, "rows": rows}
        return Result(doc, rows, ["n", "exact", "raw", "extrapolated", "error"])
    model = _model_from(args)
    _need_1d(model, "oracle")
    j = args.j[0]
    rep = qes_contrast_report(model, j, grid, args.count)
    rows = [{"level": r.level, "qes_energy": r.qes_energy, "nearest_index": r.nearest_index,
             "nearest_eigenvalue": r.nearest_eigenvalue, "gap": r.gap,
             "normalizability": r.normalizability, "minus_tail": r.minus_tail,
             "plus_tail": r.plus_tail} for r in rep]
    doc = {"schema": _schema("oracle"), "mode": "contrast", "family": model.family.value,
           "params": model.constrained(j).params, "j": j,
           "grid": {"lo": grid.lo, "hi": grid.hi, "n": grid.n}, "rows": rows}
    return Result(doc, rows, ["level", "qes_energy", "nearest_index", "nearest_eigenvalue",
                              "gap", "normalizability"])


def cmd_verify(args: argparse.Namespace) -> Result:
    skip = [s for item in (args.skip or []) for s in item.split(",") if s]
    cfg = VerifyConfig(residual_tol=args.tol, grid=_grid(args))
    checks = run_checks(cfg, skip)
    rows = [{"status": "ok" if c.passed else "FAIL", "group": c.group, "check": c.name,
             "value": c.value, "tol": c.tol, "note": c.note} for c in checks]
    passed = all(c.passed for c in checks)
    doc = {"schema": _schema("verify"), "passed": passed, "skipped": sorted(set(skip)), "checks": rows}
    return Result(doc, rows, ["status", "group", "check", "value", "tol", "note"], "table",
                  EXIT_OK if passed else EXIT_FAIL)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv", "table"), default=None)
    g.add_argument("--output", "-o", type=Path, default=None, help="write here instead of stdout")
    g.add_argument("--config", type=Path, default=None, help="flat key=value file; flags override it")
    g.add_argument("--discrepancy-log", type=Path, default=None,
                   help="write the printed-vs-derived log as JSON")
    g.add_argument("--parallel", action="store_true", help="run parameter sweeps in worker processes")


def _model_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=[f.value for f in Family], required=required)
    for name in ("A", "B", "C"):
        g.add_argument(f"-{name}", type=float, default=None, dest=name)
    for name in ("V0", "A1", "A2", "B1", "B2"):
        g.add_argument(f"--{name}", type=float, default=None, dest=name)
    g.add_argument("-j", type=int, nargs="+", default=[0], help="representation index (several for a sweep)")
    g.add_argument("--jx", type=int, default=0)
    g.add_argument("--jy", type=int, default=0)
    g.add_argument("--kmax", type=int, default=5)
    g.add_argument("--root-tol", type=float, default=DEFAULT_ROOT_TOL)


def _grid_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("grid")
    g.add_argument("--lo", type=float, default=-12.0)
    g.add_argument("--hi", type=float, default=12.0)
    g.add_argument("--n", type=int, default=4000)


def _sample_args(p: argparse.ArgumentParser, count: int) -> None:
    g = p.add_argument_group("sampling")
    g.add_argument("--xmin", type=float, default=-3.0)
    g.add_argument("--xmax", type=float, default=3.0)
    g.add_argument("--samples", type=int, default=count)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qesdw", description="Quasi-exactly-solvable double-well spectra.")
    p.add_argument("--version", action="version", version=f"qesdw {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="algebraic levels of a 1D family")
    _model_args(s)
    _sample_args(s, 50)
    _common(s)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("polynomials", help="P_0 .. P_j and the critical polynomial")
    _model_args(s)
    s.add_argument("--axis", choices=("x", "y"), default="x")
    _common(s)
    s.set_defaults(func=cmd_polynomials)

    s = sub.add_parser("wavefunction", help="sampled eigenfunction of one level")
    _model_args(s)
    _sample_args(s, 201)
    s.add_argument("--level", type=int, default=0)
    s.add_argument("--ymin", type=float, default=-3.0)
    s.add_argument("--ymax", type=float, default=3.0)
    s.add_argument("--ysamples", type=int, default=61)
    _common(s)
    s.set_defaults(func=cmd_wavefunction)

    s = sub.add_parser("2d", help="separable 2D levels")
    _model_args(s)
    _common(s)
    s.set_defaults(func=cmd_2d)

    s = sub.add_parser("oracle", help="finite-difference eigenvalues and QES contrast")
    _model_args(s, required=False)
    s.add_argument("--harmonic", action="store_true", help="check -d2/dy2 + C^2 y^2 against (2n+1)C")
    s.add_argument("--count", type=int, default=None)
    _grid_args(s)
    _common(s)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("verify", help="run the invariant suite")
    s.add_argument("--skip", action="append", default=None,
                   help=f"comma-separated groups to skip: {', '.join(CHECK_GROUPS)}")
    s.add_argument("--tol", type=float, default=1e-8, help="Schrodinger residual tolerance")
    _grid_args(s)
    _common(s)
    s.set_defaults(func=cmd_verify)
    return p


def read_config(path: Path) -> list[str]:
    """Turn a key=value file into flag tokens (single letters get one dash)."""
    tokens: list[str] = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        flag = f"-{key}" if len(key) == 1 else f"--{key.replace('_', '-')}"
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                tokens.append(flag)
            continue
        tokens.append(flag)
        tokens.extend(value.split())
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a path")
    path = Path(argv[i + 1])
    rest = argv[:i] + argv[i + 2:]
    # config tokens go right after the subcommand so explicit flags win
    head, tail = rest[:1], rest[1:]
    return head + read_config(path) + tail


def _emit(res: Result, args: argparse.Namespace) -> str:
    fmt = args.format or res.default_format
    if fmt == "json":
        return to_json(res.doc)
    if fmt == "csv":
        return to_csv(res.rows, res.columns)
    return to_table(res.rows, res.columns)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_expand_config(argv))
        if getattr(args, "discrepancy_log", None) is not None:
            log = [d.as_dict() for d in collect_discrepancies()]
            args.discrepancy_log.write_text(
                to_json({"schema": _schema("discrepancies"), "entries": log}), encoding="utf-8")
        res = args.func(args)
        text = _emit(res, args)
        if args.output is not None:
            args.output.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return res.status
    except UsageError as exc:
        print(f"qesdw: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QesError, ValueError) as exc:
        print(f"qesdw: error: {exc}".replace("\n", " "), file=sys.stderr)
        return EXIT_USAGE
