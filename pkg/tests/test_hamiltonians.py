import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptspec.errors import DimensionMismatchError, InvalidDimensionError, InvalidSpecError
from ptspec.fock_space import exact_power, metric_matrix
from ptspec.hamiltonians import (
    OscillatorSpec,
    build_pt_hamiltonian,
    build_wrong_sign_hamiltonian,
    hermiticity_defect,
    i_power,
    pseudo_hermiticity_defect,
)


def test_spec_validation():
    for bad in (dict(k=0), dict(omega=0.0), dict(omega=-1.0), dict(g=math.inf), dict(sector="x")):
        with pytest.raises(InvalidSpecError):
            OscillatorSpec(**bad)
    with pytest.raises(InvalidDimensionError):
        build_pt_hamiltonian(OscillatorSpec(), 0)


def test_i_power_cycle():
    assert [i_power(k) for k in range(8)] == [1, 1j, -1, -1j] * 2


def test_harmonic_diagonal():
    m = build_pt_hamiltonian(OscillatorSpec(1.0, 0.0, 3), 3).entries
    assert np.array_equal(m, np.diag([1.0, 3.0, 5.0]))


def test_linear_coupling_entries():
    m = build_pt_hamiltonian(OscillatorSpec(1.0, 1.0, 1), 2).entries
    assert m[0, 1] == pytest.approx(-1j / math.sqrt(2), abs=1e-15)
    assert m[1, 0] == pytest.approx(-1j / math.sqrt(2), abs=1e-15)


def test_cubic_corner_entry():
    # -g i^3 x^3 = +i g x^3, and <3|x^3|0> = sqrt(3)/2
    m = build_pt_hamiltonian(OscillatorSpec(1.0, 1.0, 3), 4).entries
    assert m[3, 0] == pytest.approx(1j * math.sqrt(3) / 2, abs=1e-15)


@pytest.mark.parametrize(
    "spec,N",
    [
        (OscillatorSpec(1.0, 0.5, 3), 16),
        (OscillatorSpec(2.0, 0.1, 4), 8),
        (OscillatorSpec(1.7, -1.3, 5), 64),
        (OscillatorSpec(0.3, 2.0, 1), 1),
    ],
)
def test_wrong_sign_equals_pt(spec, N):
    a = build_pt_hamiltonian(spec, N).entries
    b = build_wrong_sign_hamiltonian(spec, N).entries
    assert np.max(np.abs(a - b)) < 1e-14
    assert build_wrong_sign_hamiltonian(spec, N).spec.sector == "wrong_sign_tilde"


@pytest.mark.parametrize("omega", [0.5, 1.0, 3.0])
def test_wrong_sign_harmonic(omega):
    m = build_wrong_sign_hamiltonian(OscillatorSpec(omega, 0.0, 1), 3).entries
    assert np.allclose(m, np.diag([omega, 3 * omega, 5 * omega]), atol=1e-15)


def test_wrong_sign_independent_route():
    # rebuild the wrong-sign -ω(p² + x² + g x^k) from x = i x̃, p = -i p̃ by explicit float products
    spec, N = OscillatorSpec(1.3, 0.7, 3), 10
    M = N + spec.k
    xt = exact_power("position", 1, M, "tilde").entries
    pt = exact_power("momentum", 1, M, "tilde").entries
    x, p = 1j * xt, -1j * pt
    h = -spec.omega * (p @ p + x @ x + spec.g * np.linalg.matrix_power(x, spec.k))
    assert np.max(np.abs(h[:N, :N] - build_wrong_sign_hamiltonian(spec, N).entries)) < 1e-12


def test_defect_examples():
    big = build_pt_hamiltonian(OscillatorSpec(1.0, 1.0, 3), 32)
    assert pseudo_hermiticity_defect(big) < 1e-12
    assert pseudo_hermiticity_defect(big, metric_matrix(32)) < 1e-12
    assert pseudo_hermiticity_defect(build_pt_hamiltonian(OscillatorSpec(1.0, 0.0, 3), 20)) == 0
    even = build_pt_hamiltonian(OscillatorSpec(1.0, 0.3, 2), 16)
    assert pseudo_hermiticity_defect(even) < 1e-12
    assert hermiticity_defect(even) < 1e-12


def test_defect_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        pseudo_hermiticity_defect(build_pt_hamiltonian(OscillatorSpec(), 4), metric_matrix(5))


def test_odd_k_not_hermitian():
    g, omega = 0.4, 1.0
    m = build_pt_hamiltonian(OscillatorSpec(omega, g, 3), 12)
    x3 = exact_power("position", 3, 12).entries
    smallest = np.min(np.abs(x3[np.nonzero(x3)]))
    assert hermiticity_defect(m) >= 2 * abs(g) * omega * smallest - 1e-15


specs = st.builds(
    OscillatorSpec,
    omega=st.floats(0.05, 3.0),
    g=st.floats(-2.0, 2.0),
    k=st.integers(1, 8),
)


@settings(max_examples=40, deadline=None)
@given(specs, st.integers(1, 96))
def test_correspondence_and_pseudo_hermiticity(spec, N):
    pt = build_pt_hamiltonian(spec, N)
    ws = build_wrong_sign_hamiltonian(spec, N, check=False)
    assert np.max(np.abs(pt.entries - ws.entries)) < 1e-14
    assert pt.pseudo_hermitian_defect < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.integers(1, 5), st.integers(1, 40))
def test_linear_in_g(g1, g2, k, N):
    base = OscillatorSpec(1.0, 0.0, k)
    m = lambda g: build_pt_hamiltonian(base.with_g(g), N).entries  # noqa: E731
    assert np.max(np.abs(m(g1) + m(g2) - m(0.0) - m(g1 + g2))) < 1e-13 * max(1.0, N ** (k / 2))
