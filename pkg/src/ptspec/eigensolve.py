"""Dense non-Hermitian diagonalization and truncation-convergence sweeps."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import EmptyReportError, InputError, NonConvergenceError, SolverError
from .hamiltonians import OscillatorSpec, build_pt_hamiltonian

DEFAULT_DIMS = (32, 48, 64, 96, 128, 192, 256)
DEFAULT_TOL = 1e-9
RESIDUAL_BOUND = 1e-10
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Eigenpair:
    value: complex
    vector: np.ndarray
    residual: float
    matrix_norm: float = 1.0
    defective: bool = False

    @property
    def accepted(self) -> bool:
        """Residual within RESIDUAL_BOUND relative to the matrix norm."""
        return self.residual <= RESIDUAL_BOUND * max(self.matrix_norm, 1.0)


def eigen_decompose(M) -> list[Eigenpair]:
    """All eigenpairs of a general complex matrix, sorted by (Re λ, Im λ).

    Vectors are returned with unit 2-norm.  Pairs whose eigenvalues agree within
    1e-8 *and* whose eigenvectors are numerically parallel are flagged as
    defective (the matrix is not diagonalizable there).
    """
    m = np.asarray(getattr(M, "entries", M), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InputError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix contains non-finite entries")
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed to converge for a {m.shape[0]}x{m.shape[0]} matrix") from exc
    order = np.lexsort((values.imag, values.real))
    values, vectors = values[order], vectors[:, order]
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    residuals = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    norm = float(np.linalg.norm(m, 2))

    defective = np.zeros(len(values), dtype=bool)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[j].real - values[i].real) > DEGENERACY_TOL:
                break
            if abs(values[j] - values[i]) < DEGENERACY_TOL:
                overlap = abs(np.vdot(vectors[:, i], vectors[:, j]))
                if overlap > 1 - 1e-6:
                    defective[i] = defective[j] = True
    return [
        Eigenpair(complex(values[i]), vectors[:, i].copy(), float(residuals[i]), norm, bool(defective[i]))
        for i in range(len(values))
    ]


@dataclass
class ConvergedLevel:
    index: int
    value: complex
    dims_used: list[int] = field(default_factory=list)
    deltas: list[float] = field(default_factory=list)
    converged: bool = False


@dataclass
class Spectrum:
    spec: OscillatorSpec
    levels: list[ConvergedLevel]
    tol: float

    @property
    def values(self) -> np.ndarray:
        return np.array([lvl.value for lvl in self.levels])

    @property
    def converged(self) -> list[bool]:
        return [lvl.converged for lvl in self.levels]

    @property
    def all_converged(self) -> bool:
        return all(self.converged)


def default_dims() -> tuple[int, ...]:
    """Dimension ladder, overridable via PTSPEC_DIMS=32,64,..."""
    env = os.environ.get("PTSPEC_DIMS")
    if not env:
        return DEFAULT_DIMS
    try:
        dims = tuple(int(tok) for tok in env.split(",") if tok.strip())
    except ValueError:
        dims = ()
    if not dims or any(d < 1 for d in dims):
        raise InputError(f"PTSPEC_DIMS must list positive integers, got {env!r}")
    return dims


def _eigenvalues(spec: OscillatorSpec, N: int) -> np.ndarray:
    m = build_pt_hamiltonian(spec, N).entries
    try:
        vals = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed to converge for a {N}x{N} matrix") from exc
    vals = vals[np.lexsort((vals.imag, vals.real))]
    # only the lowest third of a truncated spectrum is trusted
    return vals[: N // 3]


def _match(previous: np.ndarray, current: np.ndarray) -> np.ndarray:
    """One-to-one nearest assignment of previous levels onto current eigenvalues."""
    cost = np.abs(previous[:, None] - current[None, :])
    rows, cols = linear_sum_assignment(cost)
    out = np.empty(len(previous), dtype=int)
    out[rows] = cols
    return out


def converged_spectrum(
    spec: OscillatorSpec,
    n_levels: int,
    tol: float = DEFAULT_TOL,
    dims=None,
    jobs: int = 1,
) -> Spectrum:
    """Track the lowest ``n_levels`` eigenvalues of the PT matrix up a dimension ladder.

    A level is converged once two successive dimensions move it by less than
    ``tol``.  The ladder stops early when every tracked level has converged;
    running out of dimensions yields levels flagged ``converged=False``.
    """
    if n_levels < 1:
        raise InputError("n_levels must be at least 1")
    if not tol > 0:
        raise InputError("tol must be positive")
    dims = tuple(dims) if dims is not None else default_dims()
    usable = [N for N in dims if N // 3 >= n_levels]
    if not usable:
        raise NonConvergenceError(
            f"no dimension in {list(dims)} supports {n_levels} levels (need N >= {3 * n_levels})",
            trace=[],
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda N: _eigenvalues(spec, N), usable))
        source = iter(results)
        fetch = lambda N: next(source)  # noqa: E731
    else:
        fetch = lambda N: _eigenvalues(spec, N)  # noqa: E731

    levels = None
    for N in usable:
        vals = fetch(N)
        if levels is None:
            levels = [ConvergedLevel(i, complex(vals[i]), [N]) for i in range(n_levels)]
            continue
        prev = np.array([lvl.value for lvl in levels])
        idx = _match(prev, vals)
        for lvl, j in zip(levels, idx):
            new = complex(vals[j])
            lvl.deltas.append(abs(new - lvl.value))
            lvl.dims_used.append(N)
            lvl.value = new
            lvl.converged = lvl.deltas[-1] < tol
        if all(lvl.converged for lvl in levels):
            break
    levels.sort(key=lambda lvl: (lvl.value.real, lvl.value.imag))
    for i, lvl in enumerate(levels):
        lvl.index = i
    return Spectrum(spec, levels, tol)


@dataclass
class RealityReport:
    max_imag: float
    per_level: list[dict]


def reality_report(s: Spectrum) -> RealityReport:
    """Largest |Im E| over converged levels, with a per-level breakdown."""
    rows = [
        {"index": lvl.index, "value": lvl.value, "imag": abs(lvl.value.imag), "converged": lvl.converged}
        for lvl in s.levels
    ]
    done = [row for row in rows if row["converged"]]
    if not done:
        raise EmptyReportError("spectrum has no converged levels")
    return RealityReport(max(row["imag"] for row in done), rows)


def compare_spectra(M1, M2) -> float:
    """Level-by-level max |λ1 - λ2| between two matrices' sorted spectra."""
    a = np.array([p.value for p in eigen_decompose(M1)])
    b = np.array([p.value for p in eigen_decompose(M2)])
    if a.shape != b.shape:
        raise InputError("matrices have different dimensions")
    return float(np.max(np.abs(a - b)))
