import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bhtrimer import (
    ConvergenceError,
    EigenSolution,
    InvalidParameterError,
    ModelParams,
    build_hamiltonian,
    diagonalize,
    enumerate_basis,
    hamiltonian_element,
    number_matrix_element,
    number_operator_matrices,
    solve,
)

params_st = st.builds(
    ModelParams,
    N=st.integers(1, 8),
    epsilon_bar=st.floats(-1, 1),
    delta=st.floats(-0.5, 0.5),
    kappa12=st.floats(0, 1),
    kappa23=st.floats(0, 1),
    zeta=st.floats(-0.3, 0.3),
)


def test_basis_size_and_order():
    b = enumerate_basis(30)
    assert len(b) == 496
    assert b[0] == (30, 0, 0) and b[1] == (29, 1, 0) and b[-1] == (0, 0, 30)
    assert all(s.total == 30 for s in b)
    assert b.index((0, 0, 30)) == 495


@given(st.integers(1, 40))
def test_basis_size_formula(N):
    b = enumerate_basis(N)
    assert len(b) == (N + 1) * (N + 2) // 2
    assert len(set(b.states)) == len(b)
    keys = [(s.n1, s.n2) for s in b]
    assert keys == sorted(keys, reverse=True)


@pytest.mark.parametrize("N", [0, -1, 2.5, True])
def test_basis_rejects_bad_N(N):
    with pytest.raises(InvalidParameterError):
        enumerate_basis(N)


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        ModelParams(N=0)
    with pytest.raises(InvalidParameterError):
        ModelParams(delta=float("nan"))
    with pytest.raises(InvalidParameterError):
        ModelParams(zeta=float("inf"))
    p = ModelParams()
    assert (p.eps(1), p.eps(2), p.eps(3)) == (-0.1, 0.0, 0.1)
    assert p.period == pytest.approx(2 * math.pi / 0.1)


def test_diagonal_element_N2():
    p = ModelParams(N=2)
    assert hamiltonian_element((2, 0, 0), (2, 0, 0), p) == pytest.approx(0.475, abs=1e-14)


def test_hopping_element():
    p = ModelParams(N=2)
    assert hamiltonian_element((1, 1, 0), (2, 0, 0), p) == pytest.approx(-0.25 * math.sqrt(2), abs=1e-14)
    assert hamiltonian_element((1, 1, 0), (2, 0, 0), p) == pytest.approx(-0.353553, abs=1e-6)
    # no direct 1 <-> 3 hopping
    assert hamiltonian_element((1, 0, 1), (2, 0, 0), p) == 0.0


def test_element_rejects_mismatched_totals():
    with pytest.raises(InvalidParameterError):
        hamiltonian_element((1, 0, 0), (1, 1, 0), ModelParams(N=1))


def test_N1_matrix():
    p = ModelParams(N=1)
    H = build_hamiltonian(enumerate_basis(1), p)
    # basis order (1,0,0), (0,1,0), (0,0,1)
    expected = np.array([[0.175, -0.25, 0.0], [-0.25, 0.275, -0.25], [0.0, -0.25, 0.375]])
    np.testing.assert_allclose(H, expected, atol=1e-14)
    assert np.trace(H) == pytest.approx(0.825, abs=1e-14)
    eig = solve(p)
    assert eig.energies.sum() == pytest.approx(0.825, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(params_st)
def test_hamiltonian_matches_elementwise(p):
    b = enumerate_basis(p.N)
    H = build_hamiltonian(b, p)
    assert np.array_equal(H, H.T)
    for i, m in enumerate(b):
        for j, n in enumerate(b):
            assert H[i, j] == hamiltonian_element(m, n, p)


def _sympy_spectrum(p: ModelParams):
    # exact rational Hamiltonian -> characteristic polynomial -> high-precision roots
    R = sympy.Rational
    b = enumerate_basis(p.N)
    eps = {k: R(str(p.eps(k))) for k in (1, 2, 3)}
    z, k12, k23 = R(str(p.zeta)), R(str(p.kappa12)), R(str(p.kappa23))
    H = sympy.zeros(len(b), len(b))
    for i, m in enumerate(b):
        H[i, i] = sum(eps[k] * (nk + R(1, 2)) + z * (nk + R(1, 2)) ** 2 for k, nk in zip((1, 2, 3), m))
        for j, n in enumerate(b):
            d = (m[0] - n[0], m[1] - n[1], m[2] - n[2])
            if d in ((1, -1, 0), (-1, 1, 0)):
                H[i, j] = -k12 * sympy.sqrt(max(m[0], n[0]) * max(m[1], n[1]))
            elif d in ((0, 1, -1), (0, -1, 1)):
                H[i, j] = -k23 * sympy.sqrt(max(m[1], n[1]) * max(m[2], n[2]))
    x = sympy.Symbol("x")
    poly = sympy.Poly(H.charpoly(x).as_expr(), x)
    roots = sorted(float(sympy.re(r)) for r in poly.nroots(n=30))
    return np.array(roots)


@pytest.mark.parametrize(
    "p",
    [ModelParams(N=2), ModelParams(N=2, delta=0.3, kappa12=0.1, kappa23=0.7, zeta=-0.2, epsilon_bar=0.5)],
)
def test_N2_spectrum_against_exact_oracle(p):
    eig = solve(p)
    np.testing.assert_allclose(eig.energies, _sympy_spectrum(p), rtol=0, atol=1e-10)


def test_N30_residuals(eig30):
    assert len(eig30.energies) == 496
    assert eig30.max_residual <= 1e-10
    H = build_hamiltonian(eig30.basis, eig30.params)
    r = np.linalg.norm(H @ eig30.vectors - eig30.vectors * eig30.energies, axis=0)
    assert r.max() <= 1e-10
    assert np.all(np.diff(eig30.energies) >= 0)
    np.testing.assert_allclose(eig30.vectors.T @ eig30.vectors, np.eye(496), atol=1e-12)


def test_sign_convention(eig30):
    V = eig30.vectors
    piv = np.argmax(np.abs(V), axis=0)
    assert np.all(V[piv, np.arange(V.shape[1])] > 0)


def test_diagonalize_rejects_asymmetric():
    with pytest.raises(InvalidParameterError):
        diagonalize(np.array([[0.0, 1.0], [1.0 + 1e-15, 0.0]]))
    with pytest.raises(InvalidParameterError):
        diagonalize(np.zeros((2, 3)))


def test_diagonalize_reports_unmet_tolerance():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(60, 60)) * 1e6
    H = A + A.T
    with pytest.raises(ConvergenceError) as info:
        diagonalize(H, tol=1e-30)
    assert info.value.worst_residual > 1e-30


def test_number_elements(eig30):
    b = eig30.basis
    v0 = eig30.vector(0)
    total = sum(number_matrix_element(v0, v0, k, b) for k in (1, 2, 3))
    assert total == pytest.approx(30, abs=1e-10)
    M = number_operator_matrices(eig30, [0, 2])
    assert M[0, 0, 1] == pytest.approx(number_matrix_element(v0, eig30.vector(2), 1, b), abs=1e-13)
    # n1 + n2 + n3 = N: off-diagonal parts cancel
    assert abs(M[:, 0, 1].sum()) < 1e-12
    with pytest.raises(InvalidParameterError):
        number_matrix_element(v0, v0, 4, b)
    with pytest.raises(InvalidParameterError):
        number_matrix_element(v0[:10], v0[:10], 1, b)


def test_fig5_element_modulus(eig30):
    # the D(30; 2,3) pair: exact |<a|n1|b>| sits between the quoted 1.3 and 1.4
    M = number_operator_matrices(eig30, [277, 282])
    assert abs(M[0, 0, 1]) == pytest.approx(1.25, abs=0.05)
