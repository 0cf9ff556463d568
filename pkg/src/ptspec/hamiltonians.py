"""PT-invariant oscillators and their wrong-sign Hermitian partners as Fock-basis matrices.

``build_pt_hamiltonian`` realizes  ω(p² + x² - g (i x)^k)  directly.
``build_wrong_sign_hamiltonian`` starts instead from  -ω(p² + x² + g x^k)  and
rewrites x, p through the anti-Hermitian tilde operators x̃ = -i x, p̃ = i p,
which in turn are built from the tilde ladder generators.  The two routes must
land on the same matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidDimensionError, InvalidSpecError, PTSpecError
from .fock_space import exact_power, metric_matrix

SECTORS = ("pt", "wrong_sign_tilde")
CORRESPONDENCE_TOL = 1e-14


@dataclass(frozen=True)
class OscillatorSpec:
    omega: float = 1.0
    g: float = 0.0
    k: int = 3
    sector: str = "pt"

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise InvalidSpecError(f"k must be a positive integer, got {self.k!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidSpecError(f"omega must be positive and finite, got {self.omega!r}")
        if not math.isfinite(self.g):
            raise InvalidSpecError(f"g must be finite, got {self.g!r}")
        if self.sector not in SECTORS:
            raise InvalidSpecError(f"unknown sector {self.sector!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "g", float(self.g))

    def with_g(self, g: float) -> "OscillatorSpec":
        return OscillatorSpec(self.omega, g, self.k, self.sector)


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    spec: OscillatorSpec
    entries: np.ndarray
    pseudo_hermitian_defect: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def i_power(k: int) -> complex:
    """i**k by case analysis on k mod 4 (no floating-point exponentiation)."""
    return (1, 1j, -1, -1j)[k % 4]


def _check(spec, N):
    if not isinstance(spec, OscillatorSpec):
        raise InvalidSpecError(f"expected OscillatorSpec, got {type(spec).__name__}")
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {N!r}")


def _finish(spec: OscillatorSpec, m: np.ndarray) -> HamiltonianMatrix:
    m.setflags(write=False)
    return HamiltonianMatrix(spec, m, _defect(m))


def build_pt_hamiltonian(spec: OscillatorSpec, N: int) -> HamiltonianMatrix:
    """ω(p² + x² - g·i^k·x^k) at truncation N."""
    _check(spec, N)
    p2 = exact_power("momentum", 2, N).entries
    x2 = exact_power("position", 2, N).entries
    xk = exact_power("position", spec.k, N).entries
    m = spec.omega * (p2 + x2 - (spec.g * i_power(spec.k)) * xk)
    return _finish(OscillatorSpec(spec.omega, spec.g, spec.k, "pt"), m)


def build_wrong_sign_hamiltonian(spec: OscillatorSpec, N: int, check: bool = True) -> HamiltonianMatrix:
    """-ω(p² + x² + g·x^k) quantized with indefinite metric.

    The Hermitian operators are eliminated in favour of x̃ = (b + b̄)/√2 and
    p̃ = -i(b - b̄)/√2 via x = i·x̃, p = -i·p̃.  With ``check`` the result is
    compared entrywise against :func:`build_pt_hamiltonian`.
    """
    _check(spec, N)
    k = spec.k
    xt_k = exact_power("position", k, N, "tilde").entries
    xt_2 = exact_power("position", 2, N, "tilde").entries
    pt_2 = exact_power("momentum", 2, N, "tilde").entries
    # x^k = (i x̃)^k, x² = -x̃², p² = (-i)² p̃² = -p̃²
    p2 = i_power(2) * pt_2
    x2 = i_power(2) * xt_2
    xk = i_power(k) * xt_k
    m = -spec.omega * (p2 + x2 + spec.g * xk)
    ham = _finish(OscillatorSpec(spec.omega, spec.g, spec.k, "wrong_sign_tilde"), m)
    if check:
        ref = build_pt_hamiltonian(spec, N).entries
        diff = float(np.max(np.abs(ref - m)))
        if diff > CORRESPONDENCE_TOL:
            raise PTSpecError(f"wrong-sign and PT matrices differ by {diff:.3e} at N={N}")
    return ham


def _defect(m: np.ndarray) -> float:
    eta = np.diag(metric_matrix(m.shape[0]).entries).real
    return float(np.max(np.abs(m.conj().T - eta[:, None] * m * eta[None, :])))


def pseudo_hermiticity_defect(M, eta=None) -> float:
    """max |M† - η M η| with η = diag((-1)^n)."""
    m = M.entries if isinstance(M, HamiltonianMatrix) else np.asarray(M)
    if eta is not None:
        e = np.asarray(getattr(eta, "entries", eta))
        if e.shape != m.shape:
            raise DimensionMismatchError(f"metric shape {e.shape} does not match matrix shape {m.shape}")
        return float(np.max(np.abs(m.conj().T - e @ m @ e)))
    return _defect(m)


def hermiticity_defect(M) -> float:
    """max |M† - M| (ordinary positive-metric Hermiticity)."""
    m = M.entries if isinstance(M, HamiltonianMatrix) else np.asarray(M)
    return float(np.max(np.abs(m.conj().T - m)))
