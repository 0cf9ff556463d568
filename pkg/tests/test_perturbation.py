from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from ptspec.errors import InvalidSpecError, UnsupportedOrderError
from ptspec.fock_space import exact_power
from ptspec.hamiltonians import OscillatorSpec, build_pt_hamiltonian
from ptspec.eigensolve import eigen_decompose
from ptspec.indefinite_metric import eigen_norms, eta_inner
from ptspec.perturbation import adiabatic_diagonal_order2, gml_norm_check, rs_series, second_order_pairs

CUBIC = OscillatorSpec(1.0, 0.0, 3)


def float_rs(k, n, p, N=80):
    """Independent floating-point RS recursion on the Fock matrices."""
    V = -(1j**k) * exact_power("position", k, N).entries
    e = 2 * np.arange(N) + 1.0
    R = np.where(np.arange(N) == n, 0.0, 1.0 / np.where(np.arange(N) == n, 1.0, e[n] - e))
    psi = [np.eye(N)[n].astype(complex)]
    E = [e[n]]
    for j in range(1, p + 1):
        rhs = V @ psi[j - 1]
        E.append(rhs[n])
        for i in range(1, j + 1):
            rhs = rhs - E[i] * psi[j - i]
        psi.append(R * rhs)
    return np.array(E), psi


def test_hand_sums_second_order():
    # E2(n=0) = Σ |<m|x³|0>|²/(2m) over m = 1, 3: (9/8)/2 + (3/4)/6
    assert Fraction(9, 8) / 2 + Fraction(3, 4) / 6 == Fraction(11, 16)
    # E2(n=1) over m = 0, 2, 4 with elements 3/(2√2), 3, √3
    assert -Fraction(9, 8) / 2 + Fraction(9) / 2 + Fraction(3) / 6 == Fraction(71, 16)
    assert rs_series(CUBIC, 0, 2).exact_energy[2] == Fraction(11, 16)
    assert rs_series(CUBIC, 1, 2).exact_energy[2] == Fraction(71, 16)


@pytest.mark.parametrize("k", [1, 3, 5])
@pytest.mark.parametrize("n", [0, 2])
def test_first_order_vanishes(k, n):
    assert rs_series(OscillatorSpec(1.0, 0.3, k), n, 1).exact_energy[1] == 0


@pytest.mark.parametrize("k,n", [(3, 0), (3, 1), (3, 4), (5, 0), (1, 2)])
def test_exact_series_matches_float_recursion(k, n):
    s = rs_series(OscillatorSpec(1.0, 0.0, k), n, 6)
    E, psi = float_rs(k, n, 6)
    assert np.allclose(s.energy_coeffs, E.real, rtol=1e-12, atol=1e-12)
    assert np.max(np.abs(E.imag)) < 1e-9
    for j, row in enumerate(s.state_coeffs):
        v = np.zeros(80, complex)
        for m, c in row.items():
            v[m] = c
        assert np.max(np.abs(v - psi[j])) < 1e-10 * max(1.0, np.max(np.abs(psi[j])))


def test_energy_coefficients_are_real_and_scale_with_omega():
    s = rs_series(OscillatorSpec(2.5, 0.1, 3), 2, 4)
    assert all(e.is_real() for e in s.exact_energy)
    assert s.energy_coeffs[0] == 2.5 * 5
    assert s.energy_coeffs[2] == pytest.approx(2.5 * 191 / 16)


def test_linear_case_series_is_exact():
    # k = 1: E = 2n + 1 + g²/4 exactly, so only orders 0 and 2 survive
    s = rs_series(OscillatorSpec(1.0, 0.0, 1), 3, 6)
    assert s.exact_energy[2] == Fraction(1, 4)
    assert all(e == 0 for e in s.exact_energy[3:])


def test_first_order_state_coefficients():
    c = rs_series(CUBIC, 0, 1).state_coeffs[1]
    assert c[1] == pytest.approx(-3j / (4 * np.sqrt(2)), abs=1e-15)
    assert c[3] == pytest.approx(-1j * np.sqrt(3) / 12, abs=1e-15)
    assert set(c) == {1, 3}


def test_order_limits():
    with pytest.raises(UnsupportedOrderError):
        rs_series(CUBIC, 0, 7)
    with pytest.raises(UnsupportedOrderError):
        rs_series(CUBIC, 11, 2)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_series_vs_diagonalization(n):
    c2 = float(rs_series(CUBIC, n, 2).exact_energy[2])
    ratios = []
    for g in (0.02, 0.05, 0.1):
        e = eigen_decompose(build_pt_hamiltonian(CUBIC.with_g(g), 96))[n].value.real
        ratios.append((e - (2 * n + 1) - c2 * g * g) / g**4)
    ratios = np.array(ratios)
    assert np.all(np.sign(ratios) == np.sign(ratios[0]))
    assert np.max(np.abs(ratios)) / np.min(np.abs(ratios)) < 3
    # and the limit is the exact fourth-order coefficient
    c4 = float(rs_series(CUBIC, n, 4).exact_energy[4])
    assert ratios[0] == pytest.approx(c4, rel=0.05)


def test_norm_series_ground_state():
    ns = gml_norm_check(CUBIC.with_g(0.1), 0, 2)
    assert ns.coeffs == [1, 0, Fraction(-29, 96)]
    assert Fraction(9, 32) + Fraction(1, 48) == Fraction(29, 96)
    assert ns.constant_term_ok and ns.nonvanishing_ok and ns.sign_ok


@pytest.mark.parametrize("n", range(4))
def test_norm_series_constant_term_and_sign(n):
    ns = gml_norm_check(CUBIC, n, 4)
    assert ns.coeffs[0] == (-1) ** n
    assert ns.coeffs[1] == ns.coeffs[3] == 0
    assert ns.sign_ok and ns.nonvanishing_ok


def _intermediate_norm(g, n, N=256):
    v = eigen_norms(CUBIC.with_g(g), n + 1, N)[n].vector
    v = v / v[n]
    return eta_inner(v, v).real


def test_norm_series_against_diagonalization():
    g = 0.3
    diag = _intermediate_norm(g, 0)
    assert abs(diag - gml_norm_check(CUBIC, 0, 2).value(g)) < 2 * g**4
    assert abs(diag - gml_norm_check(CUBIC, 0, 4).value(g)) < 2 * g**6 * 10
    g = 0.1
    assert abs(_intermediate_norm(g, 0) - gml_norm_check(CUBIC, 0, 4).value(g)) < 1e-4


def test_adiabatic_zero_coupling():
    amp = adiabatic_diagonal_order2(CUBIC, 0, 1e-2)
    assert amp.amplitude == 0 and amp.pole_coeff == 0


def test_adiabatic_pole_ground_state():
    g = 0.7
    amp = adiabatic_diagonal_order2(CUBIC.with_g(g), 0, 1e-3)
    assert amp.pole_coeff == pytest.approx(-1j * 11 * g * g / 32, abs=1e-15)


@pytest.mark.parametrize("n", range(4))
def test_pole_energy_link(n):
    spec = OscillatorSpec(1.0, 0.8, 3)
    amp = adiabatic_diagonal_order2(spec, n, 1e-3)
    e2 = rs_series(spec, n, 2).energy_coeffs[2] * spec.g**2
    assert abs(amp.pole_coeff.real) < 1e-12
    assert abs(amp.pole_coeff + 0.5j * e2) < 1e-12


def test_remainder_is_order_epsilon():
    spec = OscillatorSpec(1.0, 1.0, 3)
    r1 = abs(adiabatic_diagonal_order2(spec, 0, 1e-2).remainder())
    r2 = abs(adiabatic_diagonal_order2(spec, 0, 1e-3).remainder())
    assert 5 < r1 / r2 < 20


def test_pole_is_limit_of_epsilon_times_amplitude():
    spec = OscillatorSpec(1.0, 1.0, 3)
    amp = adiabatic_diagonal_order2(spec, 1, 1e-6)
    assert abs(amp.epsilon * amp.amplitude - amp.pole_coeff) < 1e-5


@pytest.mark.parametrize("eps", [0.6, 1.5])
def test_closed_form_against_quadrature(eps):
    # direct numerical evaluation of (-ig)² ∫_{-∞}^0 dt1 ∫_{-∞}^{t1} dt2 e^{ε(t1+t2)} <n|V(t1) V(t2)|n>
    spec, n = OscillatorSpec(1.3, 0.9, 3), 1
    w, g = spec.omega, spec.g
    lower = -40.0 / eps
    total = 0j
    for m, vv in second_order_pairs(spec, n):
        delta = w * 2 * (n - m)
        vv = w * w * float(vv)
        for part in (np.real, np.imag):
            f = lambda t2, t1: part(np.exp(eps * (t1 + t2) + 1j * delta * (t1 - t2)))  # noqa: E731
            val, _ = integrate.dblquad(f, lower, 0, lambda t1: lower, lambda t1: t1, epsabs=1e-11, epsrel=1e-11)
            total += (-(g**2)) * vv * (val if part is np.real else 1j * val)
    amp = adiabatic_diagonal_order2(spec, n, eps).amplitude
    assert abs(total - amp) < 1e-7 * max(1.0, abs(amp))


def test_adiabatic_rejects_bad_input():
    with pytest.raises(ValueError):
        adiabatic_diagonal_order2(CUBIC, 0, 0.0)
    with pytest.raises(InvalidSpecError):
        adiabatic_diagonal_order2(OscillatorSpec(1.0, 0.1, 4), 0, 0.1)
