"""Perturbation series for the PT oscillators in exact arithmetic.

Energies and states come from the Rayleigh–Schrödinger recursion in intermediate
normalization, which reproduces the adiabatically switched (Gell-Mann–Low) states
order by order.  The second-order adiabatic amplitude is evaluated from its
closed-form time integrals to expose the 1/ε phase pole.

All exact work happens in units of ω with the unnormalized basis
|m) = (a†)^m |0>, where the interaction has coefficients in Q(√2, i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np

from .errors import DegenerateLevelError, InvalidSpecError, UnsupportedOrderError
from .exact import ONE, ZERO, GaussianSurd, round_sqrt_times
from .hamiltonians import OscillatorSpec
from .ladder_algebra import LadderPolynomial, interaction

MAX_ORDER = 6
MAX_LEVEL = 10


def _level(m: int) -> int:
    """Unperturbed energy of |m> in units of ω (H0 = ω(p² + x²))."""
    return 2 * m + 1


def _factorial_ratio(m: int, n: int) -> Fraction:
    """m!/n!"""
    if m >= n:
        return Fraction(prod(range(n + 1, m + 1)))
    return Fraction(1, prod(range(m + 1, n + 1)))


@dataclass
class PerturbationSeries:
    spec: OscillatorSpec
    level: int
    order: int
    energy_coeffs: list[float]
    exact_energy: list[GaussianSurd]
    exact_states: list[dict[int, GaussianSurd]] = field(repr=False)

    @property
    def state_coeffs(self) -> list[dict[int, complex]]:
        """Per-order coefficients on orthonormal |m>, with the |n> component fixed by intermediate normalization."""
        out = []
        for state in self.exact_states:
            row = {}
            for m, d in state.items():
                ratio = _factorial_ratio(m, self.level)
                row[m] = complex(round_sqrt_times(ratio, d.p, d.q), round_sqrt_times(ratio, d.r, d.s))
            out.append(row)
        return out

    def energy(self, g: float | None = None) -> float:
        g = self.spec.g if g is None else g
        return sum(c * g**j for j, c in enumerate(self.energy_coeffs))

    def state_vector(self, N: int, g: float | None = None) -> np.ndarray:
        g = self.spec.g if g is None else g
        v = np.zeros(N, dtype=complex)
        for j, row in enumerate(self.state_coeffs):
            for m, c in row.items():
                if m < N:
                    v[m] += c * g**j
        return v


def rs_series(spec: OscillatorSpec, n: int, p: int) -> PerturbationSeries:
    """Rayleigh–Schrödinger series of level n through order p in g.

    E^(j) = [V ψ^(j-1)]_n and
    ψ^(j) = Σ_{m≠n} |m) [V ψ^(j-1) - Σ_{i=1..j} E^(i) ψ^(j-i)]_m / (E_n - E_m),
    with V = -i^k x^k the coupling coefficient of the Hamiltonian in units of ω.
    """
    if not 0 <= p <= MAX_ORDER:
        raise UnsupportedOrderError(f"order must lie in [0, {MAX_ORDER}], got {p}")
    if not 0 <= n <= MAX_LEVEL:
        raise UnsupportedOrderError(f"level must lie in [0, {MAX_LEVEL}], got {n}")
    V = interaction(spec.k, 1, "standard")
    e_n = _level(n)
    energies = [GaussianSurd(e_n)]
    states: list[dict[int, GaussianSurd]] = [{n: ONE}]
    for j in range(1, p + 1):
        rhs = V.act_unnormalized(states[j - 1])
        e_j = rhs.get(n, ZERO)
        energies.append(e_j)
        for i in range(1, j + 1):
            if not energies[i]:
                continue
            for m, c in states[j - i].items():
                rhs[m] = rhs.get(m, ZERO) - energies[i] * c
        nxt = {}
        for m, c in sorted(rhs.items()):
            if m == n or not c:
                continue
            gap = e_n - _level(m)
            if gap == 0:
                raise DegenerateLevelError(f"level {n} is degenerate with level {m}")
            nxt[m] = c / gap
        states.append(nxt)
    floats = []
    for e in energies:
        if not e.is_real():
            raise ArithmeticError(f"non-real energy coefficient {e}")
        floats.append(spec.omega * float(e))
    return PerturbationSeries(spec, n, p, floats, energies, states)


@dataclass
class NormSeries:
    level: int
    order: int
    coeffs: list[Fraction]
    sign_prediction: int
    reference_couplings: tuple[float, ...]
    reference_values: list[float]

    def value(self, g: float) -> float:
        return float(sum(float(c) * g**j for j, c in enumerate(self.coeffs)))

    @property
    def constant_term_ok(self) -> bool:
        return self.coeffs[0] == self.sign_prediction

    @property
    def nonvanishing_ok(self) -> bool:
        return all(abs(v) > 1e-2 for v in self.reference_values)

    @property
    def sign_ok(self) -> bool:
        return all(np.sign(v) == self.sign_prediction for v in self.reference_values)


def gml_norm_check(
    spec: OscillatorSpec,
    n: int,
    p: int,
    reference_couplings: tuple[float, ...] = (0.02, 0.05, 0.1),
) -> NormSeries:
    """Indefinite norm <φ_n|η|φ_n> of the perturbative state as a series in g.

    The state is in intermediate normalization (unit component on |n>), which
    is what the Gell-Mann–Low denominator enforces.  Coefficient of g^j:
        Σ_{a+b=j} Σ_m (-1)^m conj(d_m^(a)) d_m^(b) m!/n!
    where d are coefficients on the unnormalized basis.
    """
    series = rs_series(spec, n, p)
    states = series.exact_states
    coeffs = []
    for j in range(p + 1):
        total = ZERO
        for a in range(j + 1):
            b = j - a
            for m, d_a in states[a].items():
                d_b = states[b].get(m)
                if d_b is None:
                    continue
                sign = 1 if m % 2 == 0 else -1
                total = total + d_a.conjugate() * d_b * (sign * _factorial_ratio(m, n))
        if not total.is_rational():
            raise ArithmeticError(f"norm coefficient {total} is not rational")
        coeffs.append(total.as_fraction())
    sign = (-1) ** n
    values = [float(sum(float(c) * g**j for j, c in enumerate(coeffs))) for g in reference_couplings]
    return NormSeries(n, p, coeffs, sign, tuple(reference_couplings), values)


@dataclass
class AdiabaticAmplitude2:
    spec: OscillatorSpec
    level: int
    epsilon: float
    amplitude: complex
    pole_coeff: complex
    finite_part: complex
    energy2: float

    def remainder(self) -> complex:
        """T2(ε) - pole/ε - finite part; O(ε)."""
        return self.amplitude - self.pole_coeff / self.epsilon - self.finite_part


def second_order_pairs(spec: OscillatorSpec, n: int) -> list[tuple[int, GaussianSurd]]:
    """(m, V_nm V_mn) in units of ω², exact; invariant under basis rescaling."""
    V = interaction(spec.k, 1, "standard")
    column = V.act_unnormalized({n: ONE})
    out = []
    for m, v_mn in column.items():
        v_nm = V.act_unnormalized({m: ONE}).get(n, ZERO)
        out.append((m, v_nm * v_mn))
    return out


def adiabatic_diagonal_order2(spec: OscillatorSpec, n: int, epsilon: float) -> AdiabaticAmplitude2:
    """Order-g² diagonal amplitude <n|U_ε|n> from the double time integral.

    ∫_{-∞}^0 dt1 ∫_{-∞}^{t1} dt2 e^{ε(t1+t2)} V_nm V_mn e^{iΔ_nm t1} e^{-iΔ_nm t2}
    = V_nm V_mn / (2ε (ε - iΔ_nm)),  Δ_nm = E_n - E_m = 2ω(n - m),
    and the prefactor (-ig)² gives T2(ε) = -g² Σ_m V_nm V_mn / (2ε(ε - iΔ_nm)).
    Expanding in ε: pole coefficient -(i g²/2) Σ V V/Δ, finite part -g² Σ V V/(2Δ²).
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if spec.k % 2 == 0:
        raise InvalidSpecError("the adiabatic amplitude is implemented for odd k only")
    if not 0 <= n <= MAX_LEVEL:
        raise UnsupportedOrderError(f"level must lie in [0, {MAX_LEVEL}], got {n}")
    w, g = spec.omega, spec.g
    e2 = ZERO
    finite = ZERO
    amp = 0j
    for m, vv in second_order_pairs(spec, n):
        gap = _level(n) - _level(m)
        if gap == 0:
            raise DegenerateLevelError(f"diagonal coupling at level {n}")
        e2 = e2 + vv / gap
        finite = finite + vv / (gap * gap)
        delta = w * gap
        amp += -(g**2) * (w * w * float(vv)) / (2 * epsilon * (epsilon - 1j * delta))
    # V carries a factor ω and Δ a factor ω: Σ VV/Δ = ω e2, Σ VV/Δ² = e2-like pure number
    energy2 = w * float(e2)
    pole = -0.5j * g**2 * energy2
    finite_part = complex(-(g**2) * float(finite) / 2)
    return AdiabaticAmplitude2(spec, n, epsilon, amp, pole, finite_part, energy2)
