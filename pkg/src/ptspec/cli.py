"""``ptspec`` command-line interface.

Exit codes: 0 success, 1 computational failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .eigensolve import DEFAULT_TOL, converged_spectrum, default_dims, reality_report
from .errors import InputError, PTSpecError
from .exact import as_surd
from .hamiltonians import OscillatorSpec
from .indefinite_metric import eigen_norms, eta_orthogonality_defect
from .ladder_algebra import LadderPolynomial, commutator, interaction, interaction_picture, multiply, render
from .perturbation import MAX_LEVEL, adiabatic_diagonal_order2, gml_norm_check, rs_series

COMMANDS = ("spectrum", "verify", "sweep", "norms", "algebra", "perturb")
EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
DEFAULT_G_GRID = (0.1, 0.5, 1.0, 2.0)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    omega: float = 1.0
    g: float = 0.5
    k: int = 3
    levels: int = 6
    tol: float = DEFAULT_TOL
    dims: tuple[int, ...] = field(default_factory=default_dims)
    g_grid: tuple[float, ...] | None = None
    k_grid: tuple[int, ...] | None = None
    order: int = 4
    format: str = "json"
    out: str | None = None
    jobs: int = 1

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise UsageError("--omega must be positive")
        if not math.isfinite(self.g):
            raise UsageError("--g must be finite")
        if self.k < 1 or any(k < 1 for k in self.k_grid or ()):
            raise UsageError("--k must be at least 1")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.levels < 1:
            raise UsageError("--levels must be at least 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if not self.dims or any(d < 1 for d in self.dims):
            raise UsageError("--dims must list positive integers")
        if not 0 <= self.order <= 6:
            raise UsageError("--order must lie in [0, 6]")
        if self.format == "csv" and self.command != "sweep":
            raise UsageError("--format csv is only available for sweep")
        if (self.g_grid is not None or self.k_grid is not None) and self.command != "sweep":
            raise UsageError("--g-grid/--k-grid only apply to sweep")
        if any(not math.isfinite(g) for g in self.g_grid or ()):
            raise UsageError("--g-grid values must be finite")
        return self

    def spec(self, g: float | None = None, k: int | None = None) -> OscillatorSpec:
        return OscillatorSpec(self.omega, self.g if g is None else g, self.k if k is None else k)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptspec", description="PT-invariant oscillator spectra and indefinite-metric checks.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--omega", type=float, default=1.0)
    parser.add_argument("--g", type=float, default=0.5)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--levels", type=int, default=6)
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL)
    parser.add_argument("--dims", type=_ints, default=None, help="dimension ladder, e.g. 32,64,128")
    parser.add_argument("--g-grid", type=_floats, default=None)
    parser.add_argument("--k-grid", type=_ints, default=None)
    parser.add_argument("--order", type=int, default=4)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None)
    parser.add_argument("--jobs", type=int, default=1)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    try:
        dims = ns.dims if ns.dims is not None else default_dims()
    except InputError as exc:
        raise UsageError(str(exc)) from exc
    cfg = RunConfig(
        command=ns.command,
        omega=ns.omega,
        g=ns.g,
        k=ns.k,
        levels=ns.levels,
        tol=ns.tol,
        dims=tuple(dims),
        g_grid=ns.g_grid,
        k_grid=ns.k_grid,
        order=ns.order,
        format=ns.format,
        out=ns.out,
        jobs=ns.jobs,
    )
    return cfg.validate()


# -- serialization -------------------------------------------------------


def _num(x):
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _num(x.real), "im": _num(x.imag)}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


# -- commands ------------------------------------------------------------


def _check(name, passed, measured, threshold, detail=""):
    return {"name": name, "status": "pass" if passed else "fail", "measured": measured, "threshold": threshold,
            "detail": detail}


def _spectrum_payload(spec, cfg):
    s = converged_spectrum(spec, cfg.levels, cfg.tol, cfg.dims, jobs=cfg.jobs)
    levels = [
        {"index": lvl.index, "value": lvl.value, "converged": lvl.converged, "dims_used": lvl.dims_used,
         "deltas": lvl.deltas}
        for lvl in s.levels
    ]
    max_imag = reality_report(s).max_imag if any(s.converged) else None
    return s, {"levels": levels, "values": [lvl.value for lvl in s.levels], "max_imag": max_imag}


def run_spectrum(cfg):
    s, payload = _spectrum_payload(cfg.spec(), cfg)
    checks = [_check("converged", s.all_converged, sum(s.converged), cfg.levels)]
    if payload["max_imag"] is not None:
        checks.append(_check("reality", payload["max_imag"] < 1e-8, payload["max_imag"], 1e-8))
    return payload, checks, []


def run_verify(cfg):
    from .verification import run_all

    results = run_all()
    return {"n_checks": len(results)}, [c.as_dict() for c in results], []


def _sweep_point(cfg, k, g):
    spec = cfg.spec(g=g, k=k)
    s, payload = _spectrum_payload(spec, cfg)
    N = max(lvl.dims_used[-1] for lvl in s.levels)
    row = {"k": k, "g": g, "N": N, "converged": s.all_converged, "max_imag": payload["max_imag"]}
    if k % 2 == 1:
        pairs = eigen_norms(spec, cfg.levels, N)
        row["min_abs_eta_norm"] = min(abs(p.eta_norm) for p in pairs)
    else:
        row["min_abs_eta_norm"] = None
    for lvl in s.levels:
        row[f"E{lvl.index}"] = lvl.value.real
        row[f"ImE{lvl.index}"] = lvl.value.imag
    return row


def run_sweep(cfg):
    grid = [(k, g) for k in (cfg.k_grid or (cfg.k,)) for g in (cfg.g_grid or DEFAULT_G_GRID)]

    def work(point):
        try:
            return _sweep_point(cfg, *point), None
        except PTSpecError as exc:
            return None, {"k": point[0], "g": point[1], "error": type(exc).__name__, "message": str(exc)}

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(work, grid))
    else:
        outcomes = [work(p) for p in grid]
    rows = [r for r, _ in outcomes if r is not None]
    failures = [f for _, f in outcomes if f is not None]
    checks = [_check("all_points_converged", all(r["converged"] for r in rows) and not failures,
                     sum(r["converged"] for r in rows), len(grid))]
    return {"rows": rows}, checks, failures


def run_norms(cfg):
    spec = cfg.spec()
    N = max(cfg.dims)
    pairs = eigen_norms(spec, cfg.levels, N)
    ortho = eta_orthogonality_defect(pairs, N)
    rows = [
        {"index": p.unperturbed_index, "value": p.value, "eta_norm": p.eta_norm, "sign": p.sign,
         "near_zero": p.near_zero, "sign_consistent": p.sign_consistent}
        for p in pairs
    ]
    min_abs = min(abs(p.eta_norm) for p in pairs)
    checks = [
        _check("nonzero_norms", min_abs >= 1e-6, min_abs, 1e-6),
        _check("sign_pattern", all(p.sign_consistent for p in pairs), sum(p.sign_consistent for p in pairs), len(pairs)),
        _check("eta_orthogonality", ortho.defect < 1e-8, ortho.defect, 1e-8),
    ]
    return {"N": N, "rows": rows, "orthogonality_defect": ortho.defect, "skipped_pairs": ortho.skipped}, checks, []


def _exact_omega(omega: float):
    if float(omega).is_integer():
        return as_surd(int(omega))
    return 1


def run_algebra(cfg):
    w = _exact_omega(cfg.omega)
    sector = "tilde"
    x = LadderPolynomial.position(sector)
    xk = x ** cfg.k
    h_int = interaction(cfg.k, w, sector)
    decomp = interaction_picture(h_int)
    b, bbar = LadderPolynomial.annihilation(sector), LadderPolynomial.creation(sector)
    a, adag = LadderPolynomial.annihilation(), LadderPolynomial.creation()
    components = [{"net_degree": c.net_degree, "frequency_in_level_spacings": c.net_degree, "poly": render(c.poly)}
                  for c in decomp.components]
    pole_products = []
    for d in sorted({abs(d) for d in decomp.degrees() if d > 0}):
        if -d in decomp.degrees():
            prod = multiply(decomp.component(d), decomp.component(-d))
            entry = {"d": d, "product": render(prod), "number_polynomial": prod.is_number_polynomial()}
            if prod.is_number_polynomial():
                entry["in_powers_of_N"] = [str(c) for c in prod.number_operator_coefficients()]
            pole_products.append(entry)
    comm_std = commutator(a, adag)
    comm_tilde = commutator(b, bbar)
    results = {
        "legend": "c = creation (a† or b̄ = -ã†), a = annihilation (a or b = ã)",
        "omega_exact": str(w),
        "x_tilde_power": render(xk),
        "interaction": render(h_int),
        "interaction_adjoint_equals_self": h_int.adjoint() == h_int,
        "frequency_decomposition": components,
        "pole_products": pole_products,
        "commutator_standard": render(comm_std),
        "commutator_tilde": render(comm_tilde),
    }
    checks = [
        _check("commutator_standard", comm_std == 1, 1, 1),
        _check("commutator_tilde", comm_tilde == 1, 1, 1),
        _check("pole_products_number_polynomials", all(p["number_polynomial"] for p in pole_products),
               len(pole_products), len(pole_products)),
    ]
    return results, checks, []


def run_perturb(cfg):
    spec = cfg.spec()
    rows = []
    checks = []
    for n in range(min(cfg.levels, MAX_LEVEL + 1)):
        series = rs_series(spec, n, cfg.order)
        row = {
            "level": n,
            "energy_coeffs": series.energy_coeffs,
            "energy_coeffs_exact_over_omega": [str(e) for e in series.exact_energy],
            "energy_at_g": series.energy(),
        }
        if spec.k % 2 == 1 and cfg.order >= 2:
            poles = []
            for eps in (1e-2, 1e-3):
                amp = adiabatic_diagonal_order2(spec, n, eps)
                poles.append({"epsilon": eps, "amplitude": amp.amplitude, "pole_coeff": amp.pole_coeff,
                              "finite_part": amp.finite_part, "remainder": amp.remainder()})
            link = abs(poles[0]["pole_coeff"] + 0.5j * series.energy_coeffs[2] * spec.g**2)
            checks.append(_check(f"pole_energy_link_n{n}", link < 1e-12, link, 1e-12))
            norm = gml_norm_check(spec, n, min(cfg.order, 6))
            row["adiabatic"] = poles
            row["eta_norm_series"] = [str(c) for c in norm.coeffs]
            row["eta_norm_sign_prediction"] = norm.sign_prediction
            checks.append(_check(f"norm_constant_term_n{n}", norm.constant_term_ok, float(norm.coeffs[0]),
                                 norm.sign_prediction))
        rows.append(row)
    return {"rows": rows}, checks, []


RUNNERS = {
    "spectrum": run_spectrum,
    "verify": run_verify,
    "sweep": run_sweep,
    "norms": run_norms,
    "algebra": run_algebra,
    "perturb": run_perturb,
}


def execute(cfg: RunConfig, timestamp: str | None = None) -> tuple[dict, int]:
    """Run a command; returns (report, exit code)."""
    try:
        results, checks, failures = RUNNERS[cfg.command](cfg)
        failed = failures or any(c["status"] != "pass" for c in checks)
        code = EXIT_FAILURE if failed else EXIT_OK
    except PTSpecError as exc:
        results, checks = {}, []
        failures = [{"error": type(exc).__name__, "message": str(exc), "trace": getattr(exc, "trace", None)}]
        code = EXIT_FAILURE
    config = asdict(cfg)
    report = {
        "config": config,
        "results": results,
        "checks": checks,
        "failures": failures,
        "provenance": {
            "version": __version__,
            "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
    }
    return _clean(report), code


def dumps(report: dict) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sweep_csv(report: dict) -> str:
    rows = report["results"].get("rows", [])
    buf = io.StringIO()
    if rows:
        keys = list(rows[0].keys())
        for r in rows[1:]:
            keys += [key for key in r if key not in keys]
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({key: repr(v) if isinstance(v, float) else v for key, v in r.items()})
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(f"ptspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report, code = execute(cfg)
    text = sweep_csv(report) if cfg.format == "csv" else dumps(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "verify":
        for c in report["checks"]:
            print(f"[{c['status'].upper()}] {c['name']}: measured={c['measured']} threshold={c['threshold']}",
                  file=sys.stderr)
    return code


def run():
    sys.exit(main())
