"""Truncated harmonic-oscillator (Fock) basis realizations of x, p, a, a†, η and N.

All matrices use the orthonormal basis ``|n> = (a†)^n |0> / sqrt(n!)``.  The
tilde sector (generators b = ã, b̄ = -ã†) is realized by the *same* matrices;
only the adjoint map differs, which is handled in :mod:`ptspec.ladder_algebra`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

import numpy as np

from .errors import InputError, InvalidDimensionError, UnsupportedKindError
from .exact import round_sqrt_times

KINDS = ("annihilation", "creation", "position", "momentum", "metric", "number", "composite")
SECTORS = ("standard", "tilde")


@dataclass(frozen=True)
class BasisConvention:
    normalization: str = "orthonormal"
    note: str = (
        "States are (a†)^n|0>/sqrt(n!). The unnormalized convention (a†)^n|0>/n! "
        "rescales indefinite norms by positive factors only; signs and nonvanishing are unchanged."
    )


BASIS = BasisConvention()


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense N x N complex matrix together with what it represents."""

    entries: np.ndarray
    kind: str = "composite"
    sector: str = "standard"
    convention: BasisConvention = field(default=BASIS, repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InputError(f"operator entries must be a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("operator entries contain non-finite values")
        if self.kind not in KINDS:
            raise UnsupportedKindError(f"unknown operator kind {self.kind!r}")
        if self.sector not in SECTORS:
            raise UnsupportedKindError(f"unknown sector {self.sector!r}")
        _check_structure(m, self.kind)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def adjoint_matrix(self) -> np.ndarray:
        """Conjugate transpose of the matrix (the positive-metric adjoint)."""
        return self.entries.conj().T

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _check_structure(m: np.ndarray, kind: str) -> None:
    n = m.shape[0]
    if kind == "metric":
        expected = np.diag(np.where(np.arange(n) % 2 == 0, 1.0, -1.0))
        if not np.array_equal(m, expected):
            raise InputError("metric operator must be diag((-1)^n)")
    elif kind in ("annihilation", "creation"):
        offset = 1 if kind == "annihilation" else -1
        expected = np.diag(np.sqrt(np.arange(1, n, dtype=float)), offset)
        if not np.array_equal(m, expected):
            raise InputError(f"{kind} operator must carry sqrt(n) on a single off-diagonal")


def _check_dim(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def _check_sector(sector: str) -> str:
    if sector not in SECTORS:
        raise UnsupportedKindError(f"unknown sector {sector!r}")
    return sector


def ladder_matrices(N: int, sector: str = "standard") -> tuple[TruncatedOperator, TruncatedOperator]:
    """Return ``(a, a†)`` truncated to N states.

    In the tilde sector the pair is ``(b, b̄) = (ã, -ã†)``, which obeys the same
    commutator and therefore has the same matrices.
    """
    N = _check_dim(N)
    _check_sector(sector)
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)
    return (
        TruncatedOperator(a, "annihilation", sector),
        TruncatedOperator(a.T.copy(), "creation", sector),
    )


def canonical_matrices(N: int, sector: str = "standard") -> tuple[TruncatedOperator, TruncatedOperator]:
    """Return ``(x, p)`` with x = (a + a†)/√2 and p = -i(a - a†)/√2."""
    N = _check_dim(N)
    _check_sector(sector)
    return exact_power("position", 1, N, sector), exact_power("momentum", 1, N, sector)


def metric_matrix(N: int) -> TruncatedOperator:
    """The indefinite metric η = diag((-1)^n)."""
    N = _check_dim(N)
    signs = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    return TruncatedOperator(np.diag(signs).astype(complex), "metric", "tilde")


def number_matrix(N: int, sector: str = "standard") -> TruncatedOperator:
    """a†a in the standard sector, Ñ = -ã†ã = b̄b in the tilde sector; both diag(0..N-1)."""
    N = _check_dim(N)
    _check_sector(sector)
    return TruncatedOperator(np.diag(np.arange(N, dtype=float)).astype(complex), "number", sector)


def _apply_ladder_sum(column: int, k: int, sign: int) -> dict[int, int]:
    """Integer coefficients of (a + sign*a†)^k |column) in the unnormalized basis.

    Unnormalized states |m) = (a†)^m |0> satisfy a†|m) = |m+1) and a|m) = m|m-1),
    so repeated application never leaves the integers.
    """
    state = {column: 1}
    for _ in range(k):
        nxt: dict[int, int] = {}
        for m, c in state.items():
            nxt[m + 1] = nxt.get(m + 1, 0) + sign * c
            if m:
                nxt[m - 1] = nxt.get(m - 1, 0) + m * c
        state = {m: c for m, c in nxt.items() if c}
    return state


@lru_cache(maxsize=256)
def _power_entries(base: str, k: int, N: int) -> np.ndarray:
    sign = 1 if base == "position" else -1
    # (-i)^k phase of p^k = (-i)^k (a - a†)^k / 2^(k/2)
    phase = 1 if base == "position" else (1, -1j, -1, 1j)[k % 4]
    out = np.zeros((N, N), dtype=complex)
    scale = Fraction(1, 2**k)
    for m in range(N):
        for n, w in _apply_ladder_sum(m, k, sign).items():
            if n >= N:
                continue
            # <n|O|m> = w * sqrt(n!/m!) * 2^(-k/2); evaluated as sign(w) * sqrt(w^2 n!/m! / 2^k)
            if n >= m:
                ratio = Fraction(prod(range(m + 1, n + 1)))
            else:
                ratio = Fraction(1, prod(range(n + 1, m + 1)))
            val = round_sqrt_times(w * w * ratio * scale, 1 if w > 0 else -1)
            out[n, m] = val * phase
    out.setflags(write=False)
    return out


def exact_power(base: str, k: int, N: int, sector: str = "standard") -> TruncatedOperator:
    """Top-left N x N block of the *infinite* matrix of x^k or p^k.

    Equivalent to forming the k-fold product at dimension N + k and cropping,
    but evaluated in integer arithmetic so every entry is the correctly rounded
    double of the exact band element.  Entries vanish unless |n - m| <= k and
    n - m ≡ k (mod 2).
    """
    if base not in ("position", "momentum"):
        raise UnsupportedKindError(f"exact_power supports position or momentum, got {base!r}")
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidDimensionError(f"power must be a positive integer, got {k!r}")
    N = _check_dim(N)
    _check_sector(sector)
    kind = base if k == 1 else "composite"
    return TruncatedOperator(_power_entries(base, int(k), N), kind, sector)
