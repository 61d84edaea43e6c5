import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bhtrimer import InvalidParameterError, UnsupportedCaseError, enumerate_basis
from bhtrimer.analytic import (
    IdealizedState,
    MatrixElementResult,
    ideal_element_B,
    ideal_element_C,
    ideal_element_D,
    ideal_element_E1,
    ladder_modulus,
    oscillator_eigenfunction,
    oscillator_width,
    predicted_amplitude,
)

mOmega = st.floats(0.2, 5.0)


def _quad(f, m, w, span=12.0, n=40001):
    x = np.linspace(-span / math.sqrt(m * w), span / math.sqrt(m * w), n)
    return np.trapezoid(f(x), x)


@given(st.integers(0, 8), mOmega, mOmega)
def test_oscillator_normalization_and_width(tau, m, w):
    chi2 = lambda x: oscillator_eigenfunction(tau, m, w, x) ** 2
    assert _quad(chi2, m, w) == pytest.approx(1.0, abs=1e-8)
    x2 = _quad(lambda x: x**2 * chi2(x), m, w)
    assert x2 == pytest.approx((2 * tau + 1) / (2 * m * w), abs=1e-8)


@given(st.integers(0, 8), mOmega, mOmega)
def test_ladder_identity(tau, m, w):
    # |<tau+1| -i d/dx |tau>| by finite differences on a fine grid
    x = np.linspace(-14 / math.sqrt(m * w), 14 / math.sqrt(m * w), 80001)
    lo = oscillator_eigenfunction(tau, m, w, x)
    hi = oscillator_eigenfunction(tau + 1, m, w, x)
    h = x[1] - x[0]
    d = np.zeros_like(lo)
    d[2:-2] = (lo[:-4] - 8 * lo[1:-3] + 8 * lo[3:-1] - lo[4:]) / (12 * h)
    val = abs(np.trapezoid(hi * d, x))
    assert val == pytest.approx(ladder_modulus(m, w, tau + 1), abs=1e-8)


def test_E1_elements():
    r = ideal_element_E1(1, 0, 0, 0, 1, 0.7, 1.8, 30)
    assert r.modulus == pytest.approx(math.sqrt(0.63), abs=1e-12)
    assert r.modulus == pytest.approx(0.794, abs=1e-3)
    mid = ideal_element_E1(1, 0, 0, 0, 2, 0.7, 1.8, 30)
    assert mid.modulus == pytest.approx(2 * r.modulus)
    # wells 1, 3 in phase, well 2 opposite
    assert ideal_element_E1(1, 0, 0, 0, 3, 0.7, 1.8, 30).phase == r.phase
    assert mid.value == pytest.approx(-2 * r.value)
    for k in (1, 2, 3):
        assert ideal_element_E1(0, 0, 0, 0, k, 0.7, 1.8, 30).value == pytest.approx(10.0)
        assert ideal_element_E1(2, 0, 0, 0, k, 0.7, 1.8, 30).phase == "zero"
    with pytest.raises(UnsupportedCaseError):
        ideal_element_E1(0, 1, 0, 0, 1, 0.7, 1.8, 30)


def test_C_elements():
    a = (15, 15)
    assert ideal_element_C(24, 3, 24, 3, 3, (3, 3), 1.8, 0.3).value == 24
    r = ideal_element_C(0, 3, 0, 4, 1, a, 2.1, 1.8)
    assert r.modulus == pytest.approx(math.sqrt(2.1 * 1.8 * 4 / 2))
    assert r.modulus == pytest.approx(2.75, abs=0.01)
    assert ideal_element_C(24, 4, 24, 5, 1, (3, 3), 1.8, 0.3).modulus == pytest.approx(1.16, abs=0.01)
    # wells 1 and 2 in anti-phase, well 3 silent
    assert ideal_element_C(0, 3, 0, 4, 2, a, 2.1, 1.8).value == pytest.approx(-r.value)
    assert ideal_element_C(0, 3, 0, 4, 3, a, 2.1, 1.8).phase == "zero"
    assert ideal_element_C(1, 3, 0, 4, 1, a, 2.1, 1.8).phase == "zero"
    assert ideal_element_C(0, 2, 0, 4, 1, a, 2.1, 1.8).phase == "zero"
    # B mirrors C under 1 <-> 3
    assert ideal_element_B(0, 3, 0, 4, 3, a, 2.1, 1.8) == r
    assert ideal_element_B(0, 3, 0, 4, 1, a, 2.1, 1.8).phase == "zero"


def test_D_elements():
    assert ideal_element_D(4, 1, 4, 1, 2, 0.7, 0.6, 30).value == 26
    assert ideal_element_D(4, 1, 4, 1, 1, 0.7, 0.6, 30).value == 2
    r = ideal_element_D(4, 0, 4, 1, 1, 0.7, 0.6, 30)
    assert r.modulus == pytest.approx(math.sqrt(0.21))
    assert r.modulus == pytest.approx(0.458, abs=1e-3)
    assert ideal_element_D(30, 2, 30, 3, 1, 2.8, 0.5, 30).modulus == pytest.approx(1.449, abs=1e-3)
    assert ideal_element_D(4, 0, 4, 1, 3, 0.7, 0.6, 30).value == pytest.approx(-r.value)
    assert ideal_element_D(4, 0, 4, 1, 2, 0.7, 0.6, 30).phase == "zero"
    assert ideal_element_D(5, 0, 4, 1, 1, 0.7, 0.6, 30).phase == "zero"
    with pytest.raises(InvalidParameterError):
        ideal_element_D(40, 0, 40, 1, 1, 0.7, 0.6, 30)


def test_hermiticity_of_ideal_elements():
    for tp, t in ((0, 1), (3, 4), (5, 4)):
        for k in (1, 2, 3):
            z1 = ideal_element_D(6, tp, 6, t, k, 0.9, 0.4, 30).value
            z2 = ideal_element_D(6, t, 6, tp, k, 0.9, 0.4, 30).value
            assert z1 == pytest.approx(np.conj(z2))
            z1 = ideal_element_E1(tp, 0, t, 0, k, 0.9, 0.4, 30).value
            z2 = ideal_element_E1(t, 0, tp, 0, k, 0.9, 0.4, 30).value
            assert z1 == pytest.approx(np.conj(z2))


def test_predicted_amplitude():
    r = ideal_element_C(0, 3, 0, 4, 1, (15, 15), 2.1, 1.8)
    s = 1 / math.sqrt(2)
    assert predicted_amplitude(r, s, s) == pytest.approx(2.75, abs=0.01)
    with pytest.raises(InvalidParameterError):
        predicted_amplitude(r, 0.5, 0.5)


def test_result_type():
    assert MatrixElementResult.from_value(-2j) == MatrixElementResult(2.0, "-i")
    assert MatrixElementResult.from_value(0).phase == "zero"
    assert MatrixElementResult(0.0, "+i").phase == "zero"
    assert MatrixElementResult(1.0, "-1").xi == pytest.approx(math.pi)
    with pytest.raises(InvalidParameterError):
        MatrixElementResult.from_value(1 + 1j)
    with pytest.raises(InvalidParameterError):
        MatrixElementResult(1.0, "sideways")


def test_argument_validation():
    with pytest.raises(InvalidParameterError):
        ideal_element_C(0, -1, 0, 0, 1, (15, 15), 1, 1)
    with pytest.raises(InvalidParameterError):
        ideal_element_C(0, 0, 0, 1, 4, (15, 15), 1, 1)
    with pytest.raises(InvalidParameterError):
        ideal_element_D(4, 0, 4, 1, 1, -1.0, 0.6, 30)


def _synth_element(state_a, state_b, k, basis):
    va, vb = state_a.to_fock(basis), state_b.to_fock(basis)
    return np.vdot(va, basis.occupations[:, k - 1] * vb)


@pytest.mark.parametrize(
    "label,qa,qb,kw,closed",
    [
        ("E1", (0, 0), (1, 0), dict(m_eff=0.7, omega=1.8, m_eff_a=2.4, omega_a=1.0),
         lambda k: ideal_element_E1(0, 0, 1, 0, k, 0.7, 1.8, 30)),
        ("D", (30, 2), (30, 3), dict(m_eff=2.8, omega=0.5),
         lambda k: ideal_element_D(30, 2, 30, 3, k, 2.8, 0.5, 30)),
        ("C", (0, 3), (0, 4), dict(m_eff=2.1, omega=1.8, alpha=(15, 15)),
         lambda k: ideal_element_C(0, 3, 0, 4, k, (15, 15), 2.1, 1.8)),
    ],
)
@pytest.mark.filterwarnings("ignore:oscillator width")
def test_idealized_forms_reproduce_closed_forms(label, qa, qb, kw, closed):
    # moduli and relative phases between wells; the overall phase of chi_tau is a convention
    basis = enumerate_basis(30)
    a = IdealizedState(label, qa, 30, **kw)
    b = IdealizedState(label, qb, 30, **kw)
    z = {k: _synth_element(a, b, k, basis) for k in (1, 2, 3)}
    c = {k: closed(k).value for k in (1, 2, 3)}
    for k in (1, 2, 3):
        assert abs(z[k]) == pytest.approx(abs(c[k]), rel=5e-3, abs=1e-9)
    assert z[2] * np.conj(z[1]) / abs(z[1]) ** 2 == pytest.approx(c[2] * np.conj(c[1]) / abs(c[1]) ** 2, abs=1e-2)


def test_idealized_state_validation_and_warning():
    basis = enumerate_basis(30)
    with pytest.raises(InvalidParameterError):
        IdealizedState("C", (0, 0), 30, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        IdealizedState("C", (0, 0), 30, 1.0, 1.0, alpha=(1, 1))
    with pytest.raises(InvalidParameterError):
        IdealizedState("A", (0, 0), 30, 1.0, 1.0)
    v = IdealizedState("D", (30, 0), 30, 2.8, 0.5).to_fock(basis)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    with pytest.warns(UserWarning):
        IdealizedState("D", (4, 0), 30, 0.1, 0.1).to_fock(basis)
    assert oscillator_width(0, 1.0, 1.0) == 1.0
