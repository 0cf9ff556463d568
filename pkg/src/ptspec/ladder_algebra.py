"""Exact normal-ordered polynomials in one pair of bosonic ladder generators.

A monomial key ``(c, a)`` stands for ``(creation)^c (annihilation)^a``.  In the
standard sector the generators are a† and a; in the tilde sector they are
b̄ = -ã† and b = ã.  Both pairs satisfy [annihilation, creation] = 1, so
multiplication and normal ordering are shared; only :meth:`LadderPolynomial.adjoint`
distinguishes the sectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidDimensionError, SectorMismatchError
from .exact import ONE, SQRT2, ZERO, GaussianSurd, I, as_surd, round_sqrt_times

SECTORS = ("standard", "tilde")
_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


@lru_cache(maxsize=None)
def _reorder(s: int, t: int) -> tuple[tuple[tuple[int, int], int], ...]:
    """Normal-ordered form of a^s (a†)^t as ((c, a), weight) pairs.

    Uses a (a†)^t = (a†)^t a + t (a†)^(t-1) repeatedly, peeling one
    annihilator off the left each step.
    """
    if s == 0 or t == 0:
        return (((t, s), 1),)
    acc: dict[tuple[int, int], int] = {}
    for (c, a), w in _reorder(s - 1, t):
        acc[(c, a + 1)] = acc.get((c, a + 1), 0) + w
    for (c, a), w in _reorder(s - 1, t - 1):
        acc[(c, a)] = acc.get((c, a), 0) + t * w
    return tuple(sorted(acc.items()))


class LadderPolynomial:
    """Immutable normal-ordered polynomial with exact coefficients."""

    __slots__ = ("_terms", "sector", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None, sector: str = "standard"):
        if sector not in SECTORS:
            raise ValueError(f"unknown sector {sector!r}")
        clean: dict[tuple[int, int], GaussianSurd] = {}
        for (c, a), coeff in (terms or {}).items():
            if c < 0 or a < 0:
                raise ValueError(f"negative power in monomial {(c, a)}")
            coeff = as_surd(coeff)
            if coeff:
                clean[(int(c), int(a))] = clean.get((int(c), int(a)), ZERO) + coeff
        self._terms = {key: clean[key] for key in sorted(clean) if clean[key]}
        self.sector = sector
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def constant(cls, value=1, sector: str = "standard") -> "LadderPolynomial":
        return cls({(0, 0): value}, sector)

    @classmethod
    def monomial(cls, c: int, a: int, coeff=1, sector: str = "standard") -> "LadderPolynomial":
        return cls({(c, a): coeff}, sector)

    @classmethod
    def creation(cls, sector: str = "standard") -> "LadderPolynomial":
        """a† (standard) or b̄ = -ã† (tilde)."""
        return cls.monomial(1, 0, 1, sector)

    @classmethod
    def annihilation(cls, sector: str = "standard") -> "LadderPolynomial":
        """a (standard) or b = ã (tilde)."""
        return cls.monomial(0, 1, 1, sector)

    @classmethod
    def position(cls, sector: str = "standard") -> "LadderPolynomial":
        """(annihilation + creation)/√2: x in the standard sector, x̃ in the tilde sector."""
        half = SQRT2 / 2
        return cls({(1, 0): half, (0, 1): half}, sector)

    @classmethod
    def momentum(cls, sector: str = "standard") -> "LadderPolynomial":
        """-i(annihilation - creation)/√2: p or p̃."""
        half = I * SQRT2 / 2
        return cls({(1, 0): half, (0, 1): -half}, sector)

    @classmethod
    def number(cls, sector: str = "standard") -> "LadderPolynomial":
        """a†a, or Ñ = -ã†ã = b̄b in the tilde sector."""
        return cls.monomial(1, 1, 1, sector)

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], GaussianSurd]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((c + a for c, a in self._terms), default=0)

    def net_degrees(self) -> set[int]:
        return {c - a for c, a in self._terms}

    def coefficient(self, c: int, a: int) -> GaussianSurd:
        return self._terms.get((c, a), ZERO)

    def is_number_polynomial(self) -> bool:
        """True when every monomial has equally many creators and annihilators."""
        return all(c == a for c, a in self._terms)

    def number_operator_coefficients(self) -> list[GaussianSurd]:
        """Coefficients of N^0, N^1, ... when the polynomial is a function of N alone.

        Uses (creation)^n (annihilation)^n = N(N-1)...(N-n+1).
        """
        if not self.is_number_polynomial():
            raise ValueError("polynomial contains terms with unequal creation/annihilation powers")
        top = max((c for c, _ in self._terms), default=0)
        out = [ZERO] * (top + 1)
        for (n, _), coeff in self._terms.items():
            for j, s in enumerate(_falling_factorial_coeffs(n)):
                if s:
                    out[j] = out[j] + coeff * s
        while len(out) > 1 and not out[-1]:
            out.pop()
        return out

    # -- algebra ---------------------------------------------------------
    def _same_sector(self, other: "LadderPolynomial"):
        if other.sector != self.sector:
            raise SectorMismatchError(f"cannot combine {self.sector} and {other.sector} polynomials")

    def _coerce(self, other):
        if isinstance(other, LadderPolynomial):
            self._same_sector(other)
            return other
        try:
            return LadderPolynomial.constant(as_surd(other), self.sector)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, ZERO) + coeff
        return LadderPolynomial(terms, self.sector)

    __radd__ = __add__

    def __neg__(self):
        return LadderPolynomial({k: -v for k, v in self._terms.items()}, self.sector)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, factor) -> "LadderPolynomial":
        factor = as_surd(factor)
        return LadderPolynomial({k: v * factor for k, v in self._terms.items()}, self.sector)

    def __mul__(self, other):
        if isinstance(other, LadderPolynomial):
            return multiply(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        return self.scale(ONE / as_surd(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = LadderPolynomial.constant(1, self.sector)
        for _ in range(n):
            result = multiply(result, self)
        return result

    def adjoint(self) -> "LadderPolynomial":
        return adjoint(self)

    def __eq__(self, other):
        if isinstance(other, LadderPolynomial):
            return self.sector == other.sector and self._terms == other._terms
        try:
            return self == LadderPolynomial.constant(as_surd(other), self.sector)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.sector, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"LadderPolynomial({render(self)!r}, sector={self.sector!r})"

    def __str__(self):
        return render(self)

    # -- state action ----------------------------------------------------
    def act_unnormalized(self, state: Mapping[int, object]) -> dict[int, GaussianSurd]:
        """Apply to a vector over unnormalized states |m) = (creation)^m |0>.

        (creation)^c (annihilation)^a |m) = m!/(m-a)! |m - a + c), all exact.
        """
        out: dict[int, GaussianSurd] = {}
        for m, amp in state.items():
            amp = as_surd(amp)
            if not amp:
                continue
            for (c, a), coeff in self._terms.items():
                if a > m:
                    continue
                w = prod(range(m - a + 1, m + 1))
                n = m - a + c
                out[n] = out.get(n, ZERO) + coeff * amp * w
        return {n: v for n, v in sorted(out.items()) if v}


def _falling_factorial_coeffs(n: int) -> list[int]:
    """Coefficients of N^0..N^n in N(N-1)...(N-n+1) (signed Stirling numbers)."""
    coeffs = [1]
    for j in range(n):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= j * c
        coeffs = nxt
    return coeffs


def multiply(P: LadderPolynomial, Q: LadderPolynomial) -> LadderPolynomial:
    """Normal-ordered product P·Q."""
    if P.sector != Q.sector:
        raise SectorMismatchError(f"cannot multiply {P.sector} and {Q.sector} polynomials")
    acc: dict[tuple[int, int], GaussianSurd] = {}
    for (c1, a1), x in P.items():
        for (c2, a2), y in Q.items():
            xy = x * y
            for (c, a), w in _reorder(a1, c2):
                key = (c1 + c, a + a2)
                acc[key] = acc.get(key, ZERO) + xy * w
    return LadderPolynomial(acc, P.sector)


def commutator(P: LadderPolynomial, Q: LadderPolynomial) -> LadderPolynomial:
    return multiply(P, Q) - multiply(Q, P)


def adjoint(P: LadderPolynomial) -> LadderPolynomial:
    """Adjoint in the sector's own inner product.

    Standard: a ↔ a†.  Tilde: b ↦ -b̄ and b̄ ↦ -b, because b̄ = -ã†.
    The adjoint of a normal-ordered monomial is again normal ordered after
    reversal, so no re-ordering step is needed.
    """
    terms = {}
    for (c, a), coeff in P.items():
        sign = (-1) ** (c + a) if P.sector == "tilde" else 1
        terms[(a, c)] = coeff.conjugate() * sign
    return LadderPolynomial(terms, P.sector)


def interaction(k: int, omega=1, sector: str = "tilde") -> LadderPolynomial:
    """g-coefficient of the Hamiltonian, -ω i^k x^k (i·ω·x̃³ for the cubic case)."""
    ik = (ONE, I, -ONE, -I)[k % 4]
    return (LadderPolynomial.position(sector) ** k).scale(-ik * as_surd(omega))


def free_hamiltonian(omega=1, sector: str = "tilde") -> LadderPolynomial:
    """ω(p² + x²) = ω(2N + 1)."""
    x = LadderPolynomial.position(sector)
    p = LadderPolynomial.momentum(sector)
    return (p * p + x * x).scale(as_surd(omega))


@dataclass(frozen=True)
class FrequencyComponent:
    net_degree: int
    poly: LadderPolynomial

    def frequency(self, quantum: float = 1.0) -> float:
        """Angular frequency of e^{i d quantum t}; quantum is the level spacing of H0."""
        return self.net_degree * quantum


@dataclass(frozen=True)
class FrequencyDecomposition:
    components: tuple[FrequencyComponent, ...]

    def degrees(self) -> list[int]:
        return [comp.net_degree for comp in self.components]

    def component(self, d: int) -> LadderPolynomial:
        for comp in self.components:
            if comp.net_degree == d:
                return comp.poly
        raise KeyError(d)

    def evaluate(self, t: float, quantum: float, N: int) -> np.ndarray:
        """Matrix of the interaction-picture operator at time t."""
        out = np.zeros((N, N), dtype=complex)
        for comp in self.components:
            out += np.exp(1j * comp.frequency(quantum) * t) * to_matrix(comp.poly, N)
        return out


def interaction_picture(P: LadderPolynomial) -> FrequencyDecomposition:
    """Split P into pieces of fixed net degree d = c - a, ordered by descending d.

    Under free evolution the creation generator picks up e^{i quantum t}, so the
    piece with net degree d oscillates as e^{i d quantum t}.
    """
    groups: dict[int, dict] = {}
    for (c, a), coeff in P.items():
        groups.setdefault(c - a, {})[(c, a)] = coeff
    return FrequencyDecomposition(
        tuple(FrequencyComponent(d, LadderPolynomial(groups[d], P.sector)) for d in sorted(groups, reverse=True))
    )


def to_matrix(P: LadderPolynomial, N: int) -> np.ndarray:
    """N x N matrix of P in the orthonormal Fock basis.

    Elements are those of the untruncated operator (the same result as building
    the ladder matrices at dimension N + degree, multiplying and cropping), with
    each element rounded once from its exact value:
    <n| c^i a^j |m> = sqrt(n!/m!) * m!/(m-j)!  for n = m - j + i.
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {N!r}")
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        column = P.act_unnormalized({m: ONE})
        for n, s in column.items():
            if n >= N:
                continue
            if n >= m:
                ratio = Fraction(prod(range(m + 1, n + 1)))
            else:
                ratio = Fraction(1, prod(range(n + 1, m + 1)))
            # act_unnormalized gives the coefficient on |n) = sqrt(n!)|n>; the column is |m) / sqrt(m!)
            out[n, m] = complex(round_sqrt_times(ratio, s.p, s.q), round_sqrt_times(ratio, s.r, s.s))
    return out


def _render_coeff(coeff: GaussianSurd) -> tuple[str, str]:
    """Sign and body of a coefficient; body is '' for unit magnitude."""
    if coeff == 1:
        return "+", ""
    if coeff == -1:
        return "-", ""
    text = str(coeff)
    n_parts = sum(bool(x) for x in (coeff.p, coeff.q, coeff.r, coeff.s))
    if n_parts == 1:
        if text.startswith("-"):
            return "-", text[1:]
        return "+", text
    return "+", f"({text})"


def _power(symbol: str, n: int) -> str:
    if n == 0:
        return ""
    return symbol if n == 1 else symbol + str(n).translate(_SUPERSCRIPT)


def render(P: LadderPolynomial, creation: str = "c", annihilation: str = "a") -> str:
    """Deterministic text form, e.g. ``3·c²a + 3·c``; highest total degree first."""
    if P.is_zero():
        return "0"
    keys = sorted(P.terms, key=lambda ca: (-(ca[0] + ca[1]), -ca[0]))
    pieces = []
    for c, a in keys:
        sign, body = _render_coeff(P.coefficient(c, a))
        op = _power(creation, c) + _power(annihilation, a)
        if not op:
            term = body or "1"
        elif body:
            term = f"{body}·{op}"
        else:
            term = op
        pieces.append((sign, term))
    first_sign, first = pieces[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, term in pieces[1:]:
        text += f" {sign} {term}"
    return text


def from_terms(pairs: Iterable[tuple[tuple[int, int], object]], sector: str = "standard") -> LadderPolynomial:
    acc: dict[tuple[int, int], GaussianSurd] = {}
    for key, coeff in pairs:
        acc[key] = acc.get(key, ZERO) + as_surd(coeff)
    return LadderPolynomial(acc, sector)
