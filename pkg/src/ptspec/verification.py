"""Cross-module identity checks run by ``ptspec verify``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigensolve import converged_spectrum, eigen_decompose, reality_report
from .exact import ONE
from .fock_space import exact_power, metric_matrix
from .hamiltonians import (
    OscillatorSpec,
    build_pt_hamiltonian,
    build_wrong_sign_hamiltonian,
    pseudo_hermiticity_defect,
)
from .indefinite_metric import eigen_norms, eta_inner, eta_orthogonality_defect
from .ladder_algebra import LadderPolynomial, commutator, interaction, interaction_picture, multiply, to_matrix
from .perturbation import adiabatic_diagonal_order2, gml_norm_check, rs_series

SEED = 2009


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "measured": self.measured,
            "threshold": self.threshold,
            "detail": self.detail,
        }


def random_specs(count: int = 20, seed: int = SEED) -> list[tuple[OscillatorSpec, int]]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        spec = OscillatorSpec(
            omega=float(rng.uniform(0.05, 3.0)),
            g=float(rng.uniform(-2.0, 2.0)),
            k=int(rng.integers(1, 6)),
        )
        out.append((spec, int(rng.integers(1, 129))))
    return out


def check_harmonic_limit() -> Check:
    spec = OscillatorSpec(1.0, 0.0, 3)
    s = converged_spectrum(spec, 8, dims=(48, 64))
    expected = 2 * np.arange(8) + 1
    err = float(np.max(np.abs(s.values - expected)))
    direct = np.array([p.value for p in eigen_decompose(build_pt_hamiltonian(spec, 64))][:8])
    err = max(err, float(np.max(np.abs(direct - expected))))
    return Check("harmonic_limit", err < 1e-12 and s.all_converged, err, 1e-12, "k=3, g=0, 8 levels, N=64")


def check_matrix_correspondence(specs=None) -> Check:
    specs = specs or random_specs()
    worst = 0.0
    for spec, N in specs:
        a = build_pt_hamiltonian(spec, N).entries
        b = build_wrong_sign_hamiltonian(spec, N, check=False).entries
        worst = max(worst, float(np.max(np.abs(a - b))))
    return Check("matrix_correspondence", worst < 1e-14, worst, 1e-14, f"{len(specs)} random specs")


def check_pseudo_hermiticity(specs=None) -> Check:
    specs = specs or random_specs()
    worst = 0.0
    for spec, N in specs:
        m = build_pt_hamiltonian(spec, N)
        worst = max(worst, pseudo_hermiticity_defect(m, metric_matrix(N)))
    return Check("pseudo_hermiticity", worst < 1e-12, worst, 1e-12, f"{len(specs)} random specs")


def check_cubic_reality(couplings=(0.1, 0.5, 1.0, 2.0)) -> Check:
    worst_imag = 0.0
    min_real = np.inf
    ok = True
    notes = []
    for g in couplings:
        s = converged_spectrum(OscillatorSpec(1.0, g, 3), 6, tol=1e-9)
        rep = reality_report(s)
        worst_imag = max(worst_imag, rep.max_imag)
        min_real = min(min_real, float(np.min(s.values.real)))
        last_dim = max(lvl.dims_used[-1] for lvl in s.levels)
        ok &= s.all_converged and last_dim <= 256
        notes.append(f"g={g}: N={last_dim}")
    ok &= worst_imag < 1e-8 and min_real > 0
    return Check("cubic_reality", bool(ok), worst_imag, 1e-8, "; ".join(notes) + f"; min Re E={min_real:.6g}")


def check_linear_exact(couplings=(0.2, 1.0)) -> Check:
    worst = 0.0
    ok = True
    for g in couplings:
        s = converged_spectrum(OscillatorSpec(1.0, g, 1), 6, tol=1e-9)
        ok &= s.all_converged
        exact = 2 * np.arange(6) + 1 + g * g / 4
        worst = max(worst, float(np.max(np.abs(s.values - exact))))
    return Check("linear_exact", bool(ok) and worst < 1e-9, worst, 1e-9, "k=1 vs ω(2n+1+g²/4)")


def fourth_order_ratios(n: int, couplings=(0.02, 0.05, 0.1), N: int = 96) -> list[float]:
    spec = OscillatorSpec(1.0, 0.0, 3)
    c2 = float(rs_series(spec, n, 2).exact_energy[2])
    out = []
    for g in couplings:
        vals = [p.value for p in eigen_decompose(build_pt_hamiltonian(spec.with_g(g), N))]
        e = vals[n].real
        out.append((e - (2 * n + 1) - c2 * g * g) / g**4)
    return out


def check_perturbative() -> Check:
    spec = OscillatorSpec(1.0, 0.0, 3)
    coeff_ok = (
        rs_series(spec, 0, 2).exact_energy[2] == Fraction(11, 16)
        and rs_series(spec, 1, 2).exact_energy[2] == Fraction(71, 16)
    )
    spread = 0.0
    ok = coeff_ok
    for n in (0, 1):
        r = np.array(fourth_order_ratios(n))
        same_sign = bool(np.all(np.sign(r) == np.sign(r[0])))
        s = float(np.max(np.abs(r)) / np.min(np.abs(r)))
        spread = max(spread, s)
        ok &= same_sign and s <= 3.0
    return Check("perturbative_cross_check", bool(ok), spread, 3.0, "E2 = 11/16, 71/16; (E - E0 - E2 g²)/g⁴ spread")


def check_norms(couplings=(0.1, 0.5, 1.0), N: int = 256) -> Check:
    min_abs = np.inf
    ok = True
    for g in couplings:
        pairs = eigen_norms(OscillatorSpec(1.0, g, 3), 6, N)
        min_abs = min(min_abs, min(abs(p.eta_norm) for p in pairs))
        ok &= all(p.sign == (-1) ** p.unperturbed_index for p in pairs)
        ok &= [p.unperturbed_index for p in pairs] == list(range(6))
    series = gml_norm_check(OscillatorSpec(1.0, 0.1, 3), 0, 4)
    ok &= series.coeffs[:3] == [1, 0, Fraction(-29, 96)]
    v = eigen_norms(OscillatorSpec(1.0, 0.1, 3), 1, N)[0].vector
    v = v / v[0]
    diff = abs(eta_inner(v, v).real - series.value(0.1))
    ok &= min_abs > 1e-3 and diff < 1e-4
    return Check(
        "norm_nonvanishing_and_sign",
        bool(ok),
        float(min_abs),
        1e-3,
        f"series vs diagonalized norm at g=0.1: {diff:.3e} (< 1e-4)",
    )


def check_eta_orthogonality(N: int = 192) -> Check:
    worst = 0.0
    for k in (1, 3):
        for g in (0.5, 1.0):
            pairs = eigen_norms(OscillatorSpec(1.0, g, k), 6, N)
            worst = max(worst, eta_orthogonality_defect(pairs, N).defect)
    return Check("eta_orthogonality", worst < 1e-8, worst, 1e-8, "k in {1,3}, g in {0.5,1}")


def check_adiabatic_pole(couplings=(0.5, 1.0)) -> Check:
    worst = 0.0
    for g in couplings:
        spec = OscillatorSpec(1.0, g, 3)
        for n in range(4):
            amp = adiabatic_diagonal_order2(spec, n, 1e-3)
            e2 = rs_series(spec, n, 2).energy_coeffs[2] * g * g
            worst = max(worst, abs(amp.pole_coeff.real), abs(amp.pole_coeff - (-0.5j * e2)))
    return Check("adiabatic_pole", worst < 1e-12, worst, 1e-12, "pole = -i E2/2, n <= 3")


def check_symbolic() -> Check:
    ok = True
    for sector in ("standard", "tilde"):
        a = LadderPolynomial.annihilation(sector)
        c = LadderPolynomial.creation(sector)
        ok &= commutator(a, c) == LadderPolynomial.constant(ONE, sector)
    x3 = LadderPolynomial.position() ** 3
    worst = max(float(np.max(np.abs(to_matrix(x3, N) - exact_power("position", 3, N).entries))) for N in range(1, 33))
    decomp = interaction_picture(interaction(3, 1, "tilde"))
    ok &= sorted(decomp.degrees()) == [-3, -1, 1, 3]
    for d in (1, 3):
        prod = multiply(decomp.component(d), decomp.component(-d))
        ok &= prod.is_number_polynomial()
    ok &= worst <= 1e-14
    return Check("symbolic_engine", bool(ok), worst, 1e-14, "commutators, x³ bridge, frequency structure")


ALL_CHECKS = (
    check_harmonic_limit,
    check_matrix_correspondence,
    check_pseudo_hermiticity,
    check_cubic_reality,
    check_linear_exact,
    check_perturbative,
    check_norms,
    check_eta_orthogonality,
    check_adiabatic_pole,
    check_symbolic,
)


def run_all() -> list[Check]:
    results = []
    for fn in ALL_CHECKS:
        try:
            results.append(fn())
        except Exception as exc:  # a crashing check is a failed check
            results.append(Check(fn.__name__.removeprefix("check_"), False, float("nan"), float("nan"), repr(exc)))
    return results
