"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test prints a single PASS/FAIL line (visible with ``pytest -s``); the
terminal summary repeats them.
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from ptspec import cli
from ptspec.eigensolve import converged_spectrum, reality_report
from ptspec.exact import ONE
from ptspec.fock_space import exact_power, metric_matrix
from ptspec.hamiltonians import (
    OscillatorSpec,
    build_pt_hamiltonian,
    build_wrong_sign_hamiltonian,
    pseudo_hermiticity_defect,
)
from ptspec.indefinite_metric import eigen_norms, eta_inner, eta_orthogonality_defect
from ptspec.ladder_algebra import LadderPolynomial, commutator, interaction, interaction_picture, multiply, to_matrix
from ptspec.perturbation import adiabatic_diagonal_order2, gml_norm_check, rs_series
from ptspec.verification import random_specs


def report(number, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def specs():
    drawn = random_specs(20)
    assert all(s.k <= 5 and abs(s.g) <= 2 and s.omega <= 3 and N <= 128 for s, N in drawn)
    return drawn


def test_criterion_1_harmonic_limit(capsys):
    code = cli.main(["spectrum", "--k", "3", "--g", "0", "--levels", "8", "--dims", "48,64"])
    out = json.loads(capsys.readouterr().out)
    values = np.array([v["re"] + 1j * v["im"] for v in out["results"]["values"]])
    err = float(np.max(np.abs(values - (2 * np.arange(8) + 1))))
    dims = out["results"]["levels"][0]["dims_used"]
    report(1, code == 0 and err < 1e-12 and dims[-1] == 64, f"max |E - (2n+1)| = {err:.2e} at N=64")


def test_criterion_2_matrix_correspondence(specs):
    worst = max(
        float(np.max(np.abs(build_pt_hamiltonian(s, N).entries - build_wrong_sign_hamiltonian(s, N, check=False).entries)))
        for s, N in specs
    )
    report(2, worst < 1e-14, f"max entrywise difference {worst:.2e} over 20 specs")


def test_criterion_3_pseudo_hermiticity(specs):
    worst = 0.0
    for s, N in specs:
        m = build_pt_hamiltonian(s, N).entries
        eta = metric_matrix(N).entries
        worst = max(worst, float(np.max(np.abs(m.conj().T - eta @ m @ eta))), pseudo_hermiticity_defect(m))
    report(3, worst < 1e-12, f"max |M† - ηMη| = {worst:.2e}")


def test_criterion_4_cubic_reality():
    worst, min_re, ok = 0.0, np.inf, True
    for g in (0.1, 0.5, 1.0, 2.0):
        s = converged_spectrum(OscillatorSpec(1.0, g, 3), 6, tol=1e-9)
        ok &= s.all_converged and max(lvl.dims_used[-1] for lvl in s.levels) <= 256
        worst = max(worst, reality_report(s).max_imag)
        min_re = min(min_re, float(np.min(s.values.real)))
    report(4, bool(ok) and worst < 1e-8 and min_re > 0, f"max |Im E| = {worst:.2e}, min Re E = {min_re:.4f}")


def test_criterion_5_linear_exact():
    worst, ok = 0.0, True
    for g in (0.2, 1.0):
        s = converged_spectrum(OscillatorSpec(1.0, g, 1), 6, tol=1e-9)
        ok &= s.all_converged
        worst = max(worst, float(np.max(np.abs(s.values - (2 * np.arange(6) + 1 + g * g / 4)))))
    report(5, bool(ok) and worst < 1e-9, f"max |E - (2n+1+g²/4)| = {worst:.2e}")


def test_criterion_6_perturbative():
    spec = OscillatorSpec(1.0, 0.0, 3)
    ok = True
    spreads = []
    for n, c2 in ((0, Fraction(11, 16)), (1, Fraction(71, 16))):
        ok &= rs_series(spec, n, 2).exact_energy[2] == c2
        ratios = []
        for g in (0.02, 0.05, 0.1):
            e = converged_spectrum(spec.with_g(g), n + 1, tol=1e-11, dims=(64, 96, 128)).values[n].real
            ratios.append((e - (2 * n + 1) - float(c2) * g * g) / g**4)
        ratios = np.array(ratios)
        spread = float(np.max(np.abs(ratios)) / np.min(np.abs(ratios)))
        spreads.append(spread)
        ok &= bool(np.all(np.sign(ratios) == np.sign(ratios[0]))) and spread <= 3
    report(6, bool(ok), f"E2 = 11/16, 71/16; g⁴ ratio spreads {spreads[0]:.3f}, {spreads[1]:.3f}")


def test_criterion_7_norms():
    min_abs, ok = np.inf, True
    for g in (0.1, 0.5, 1.0):
        pairs = eigen_norms(OscillatorSpec(1.0, g, 3), 6, 256)
        ok &= [p.unperturbed_index for p in pairs] == list(range(6))
        ok &= all(p.sign == (-1) ** p.unperturbed_index for p in pairs)
        min_abs = min(min_abs, min(abs(p.eta_norm) for p in pairs))
    series = gml_norm_check(OscillatorSpec(1.0, 0.1, 3), 0, 4)
    ok &= series.coeffs[:3] == [1, 0, Fraction(-29, 96)]
    v = eigen_norms(OscillatorSpec(1.0, 0.1, 3), 1, 256)[0].vector
    v = v / v[0]
    diff = abs(eta_inner(v, v).real - series.value(0.1))
    report(7, bool(ok) and min_abs > 1e-3 and diff < 1e-4,
           f"min |eta_norm| = {min_abs:.2e}, series vs diagonalized at g=0.1: {diff:.2e}")


def test_criterion_8_eta_orthogonality():
    worst = 0.0
    for k in (1, 3):
        for g in (0.5, 1.0):
            rep = eta_orthogonality_defect(eigen_norms(OscillatorSpec(1.0, g, k), 6, 192), 192)
            assert not rep.skipped
            worst = max(worst, rep.defect)
    report(8, worst < 1e-8, f"max off-diagonal |<v_m|η|v_n>| = {worst:.2e}")


def test_criterion_9_adiabatic_pole():
    imag_dev, link = 0.0, 0.0
    for g in (0.5, 1.0):
        spec = OscillatorSpec(1.0, g, 3)
        for n in range(4):
            amp = adiabatic_diagonal_order2(spec, n, 1e-3)
            e2 = rs_series(spec, n, 2).energy_coeffs[2] * g * g
            imag_dev = max(imag_dev, abs(amp.pole_coeff.real))
            link = max(link, abs(amp.pole_coeff + 0.5j * e2))
    report(9, imag_dev < 1e-12 and link < 1e-12, f"|Re pole| = {imag_dev:.1e}, |pole + iE2/2| = {link:.1e}")


def test_criterion_10_symbolic():
    ok = True
    for sector in ("standard", "tilde"):
        c = commutator(LadderPolynomial.annihilation(sector), LadderPolynomial.creation(sector))
        ok &= c == LadderPolynomial.constant(ONE, sector)
    x3 = LadderPolynomial.position() ** 3
    worst = max(float(np.max(np.abs(to_matrix(x3, N) - exact_power("position", 3, N).entries))) for N in range(1, 33))
    decomp = interaction_picture(interaction(3, 1, "tilde"))
    ok &= sorted(decomp.degrees()) == [-3, -1, 1, 3]
    for d in (1, 3):
        ok &= multiply(decomp.component(d), decomp.component(-d)).is_number_polynomial()
    report(10, bool(ok) and worst <= 1e-14, f"commutators exact, x³ bridge max error {worst:.1e}")


def test_criterion_11_one_command_gate(capsys):
    code = cli.main(["verify"])
    out = json.loads(capsys.readouterr().out)
    statuses = [c["status"] for c in out["checks"]]
    report(11, code == 0 and len(statuses) == 10 and set(statuses) == {"pass"}, f"ptspec verify exit code {code}")
