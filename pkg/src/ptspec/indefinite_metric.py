"""Indefinite inner product <u|η|v> and the norms of PT eigenstates under it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .eigensolve import Eigenpair, eigen_decompose
from .errors import DimensionMismatchError, InputError, UndefinedSignError
from .hamiltonians import OscillatorSpec, build_pt_hamiltonian

NEAR_ZERO_NORM = 1e-6
SIGN_THRESHOLD = 1e-10
SEPARATION = 1e-6
DEFAULT_STEPS = 8


def _signs(n: int) -> np.ndarray:
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def eta_inner(u, v, N: int | None = None) -> complex:
    """Σ_n (-1)^n conj(u_n) v_n."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 1 or (N is not None and len(u) != N):
        raise DimensionMismatchError(f"vectors of shapes {u.shape} and {v.shape} (N={N}) cannot be paired")
    return complex(np.sum(_signs(len(u)) * u.conj() * v))


@dataclass(frozen=True, eq=False)
class EigenpairWithNorm:
    pair: Eigenpair
    eta_norm: float
    unperturbed_index: int

    @property
    def sign(self) -> int | None:
        if abs(self.eta_norm) <= SIGN_THRESHOLD:
            return None
        return 1 if self.eta_norm > 0 else -1

    @property
    def near_zero(self) -> bool:
        return abs(self.eta_norm) < NEAR_ZERO_NORM

    @property
    def sign_consistent(self) -> bool:
        return self.sign == (-1) ** self.unperturbed_index

    @property
    def value(self) -> complex:
        return self.pair.value

    @property
    def vector(self) -> np.ndarray:
        return self.pair.vector


def _with_norm(pair: Eigenpair, index: int) -> EigenpairWithNorm:
    v = pair.vector / np.linalg.norm(pair.vector)
    # η-norm of any vector is real; the imaginary part of the sum is identically zero
    return EigenpairWithNorm(pair, eta_inner(v, v).real, index)


def eigen_norms(
    spec: OscillatorSpec,
    n_levels: int,
    N: int = 256,
    steps: int = DEFAULT_STEPS,
) -> list[EigenpairWithNorm]:
    """Eigenpairs of the PT matrix with their indefinite norms, labelled by parent level.

    Levels are continued from g = 0 (where level n is the basis state |n>) to
    the target coupling in ``steps`` equal increments, matching by nearest
    eigenvalue at each step.  Near-zero norms are flagged via ``near_zero``
    rather than dropped.
    """
    if n_levels < 1:
        raise InputError("n_levels must be at least 1")
    if 3 * n_levels > N:
        raise InputError(f"N={N} too small to resolve {n_levels} levels")
    pool = N // 3
    tracked = np.array([spec.omega * (2 * n + 1) for n in range(n_levels)], dtype=complex)
    couplings = [spec.g] if spec.g == 0 else [spec.g * j / steps for j in range(1, steps + 1)]
    pairs = None
    for g in couplings:
        pairs = eigen_decompose(build_pt_hamiltonian(spec.with_g(g), N))[:pool]
        values = np.array([p.value for p in pairs])
        rows, cols = linear_sum_assignment(np.abs(tracked[:, None] - values[None, :]))
        assign = np.empty(n_levels, dtype=int)
        assign[rows] = cols
        tracked = values[assign]
    return [_with_norm(pairs[j], n) for n, j in enumerate(assign)]


@dataclass
class OrthogonalityReport:
    defect: float
    skipped: list[tuple[int, int]] = field(default_factory=list)

    def __float__(self):
        return self.defect


def eta_orthogonality_defect(pairs: list[EigenpairWithNorm], N: int | None = None) -> OrthogonalityReport:
    """max over m != n of |<v_m|η|v_n>| for unit-norm eigenvectors.

    Pairs whose eigenvalues sit within 1e-6 of each other are not expected to
    be η-orthogonal and are listed in ``skipped`` instead.
    """
    vecs = [p.vector / np.linalg.norm(p.vector) for p in pairs]
    worst = 0.0
    skipped = []
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if abs(pairs[i].value - pairs[j].value) <= SEPARATION:
                skipped.append((pairs[i].unperturbed_index, pairs[j].unperturbed_index))
                continue
            worst = max(worst, abs(eta_inner(vecs[i], vecs[j], N)))
    return OrthogonalityReport(worst, skipped)


@dataclass(frozen=True, eq=False)
class PhysicalSubspace:
    vectors: np.ndarray
    values: np.ndarray
    indices: tuple[int, ...]
    gram: np.ndarray

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]


def physical_projector(pairs: list[EigenpairWithNorm], hamiltonian=None) -> PhysicalSubspace:
    """Positive-norm (even parent index) eigenvectors spanning the physical subspace.

    Closure under the Hamiltonian is checked through the eigen-residual: against
    ``hamiltonian`` when given, otherwise the residual stored with each pair.
    """
    for p in pairs:
        if p.sign is None:
            raise UndefinedSignError(f"level {p.unperturbed_index} has an undefined norm sign", p.unperturbed_index)
    chosen = [p for p in pairs if p.sign == 1]
    if not chosen:
        n = len(pairs[0].vector) if pairs else 0
        return PhysicalSubspace(np.zeros((n, 0), complex), np.zeros(0, complex), (), np.zeros((0, 0)))
    vecs = np.column_stack([p.vector / np.linalg.norm(p.vector) for p in chosen])
    values = np.array([p.value for p in chosen])
    if hamiltonian is not None:
        h = np.asarray(getattr(hamiltonian, "entries", hamiltonian))
        residuals = np.linalg.norm(h @ vecs - vecs * values, axis=0)
        scale = max(float(np.linalg.norm(h, 2)), 1.0)
    else:
        residuals = np.array([p.pair.residual for p in chosen])
        scale = max(max(p.pair.matrix_norm for p in chosen), 1.0)
    bad = [c.unperturbed_index for c, r in zip(chosen, residuals) if r > 1e-10 * scale]
    if bad:
        raise InputError(f"physical vectors for levels {bad} are not eigenvectors to residual 1e-10")
    gram = (vecs.conj().T * _signs(vecs.shape[0])) @ vecs
    return PhysicalSubspace(vecs, values, tuple(c.unperturbed_index for c in chosen), gram)
