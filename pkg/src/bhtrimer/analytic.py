"""Idealized torus wave functions and their closed-form number-operator elements.

Each regular eigenstate class is modelled as plane waves in the decoupled
angles times a harmonic-oscillator eigenfunction chi_tau of one transversal
coordinate (two for E1):

    B:  exp(i lam phi1) exp(i(a1 phi2 + a2 phi3)) chi_tau(phi3 - phi2)
    C:  exp(i(a1 phi1 + a2 phi2)) exp(i lam phi3) chi_tau(phi1 - phi2)
    D:  exp(i lam (phi1 + phi3)/2) exp(i(N - lam) phi2) chi_tau(phi1 - phi3)
    E1: exp(i N (phi1 + phi2 + phi3)/3) chi_td(phi1 - 2 phi2 + phi3) chi_ta(phi1 - phi3)

Because n_k = -i d/dphi_k, every element reduces to the ladder-operator
action of -i d/dx on chi_tau, which couples tau only to tau +- 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from bhtrimer.errors import InvalidParameterError, UnsupportedCaseError
from bhtrimer.model_core import FockBasis

ETA = (2.0 * math.pi) ** -0.5

# symbolic phase tags; exact eigenvectors are real, so only these occur
PHASES = {"zero": 0j, "+1": 1 + 0j, "-1": -1 + 0j, "+i": 1j, "-i": -1j}


@dataclass(frozen=True)
class MatrixElementResult:
    modulus: float
    phase: str

    def __post_init__(self):
        if self.phase not in PHASES:
            raise InvalidParameterError(f"unknown phase tag {self.phase!r}")
        if self.modulus < 0:
            raise InvalidParameterError("modulus must be non-negative")
        if self.modulus == 0 and self.phase != "zero":
            object.__setattr__(self, "phase", "zero")

    @property
    def value(self) -> complex:
        return self.modulus * PHASES[self.phase]

    @property
    def xi(self) -> float:
        """Phase angle in radians (0 for a vanishing element)."""
        return float(np.angle(self.value)) if self.modulus else 0.0

    @classmethod
    def from_value(cls, z: complex) -> "MatrixElementResult":
        if z == 0:
            return cls(0.0, "zero")
        for tag, unit in PHASES.items():
            if tag == "zero":
                continue
            proj = z * unit.conjugate()
            if proj.real > 0 and abs(proj.imag) <= 1e-12 * abs(z):
                return cls(abs(z), tag)
        raise InvalidParameterError(f"{z!r} is neither purely real nor purely imaginary")


_ZERO = MatrixElementResult(0.0, "zero")


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _check_qn(*values):
    for v in values:
        if isinstance(v, bool) or int(v) != v or v < 0:
            raise InvalidParameterError(f"quantum numbers must be non-negative integers, got {v!r}")


def _check_osc(m_eff, omega):
    if not (m_eff > 0 and omega > 0):
        raise InvalidParameterError(f"need m_eff > 0 and omega > 0, got {m_eff}, {omega}")


def _check_site(k):
    if k not in (1, 2, 3):
        raise InvalidParameterError(f"site index must be 1, 2 or 3, got {k!r}")


def ladder_modulus(m_eff: float, omega: float, tau_bar: int) -> float:
    """|<tau'| -i d/dx |tau>| for |tau' - tau| = 1, tau_bar = max(tau, tau')."""
    return math.sqrt(m_eff * omega * tau_bar / 2.0)


def ideal_element_E1(td_p, ta_p, td, ta, k, m_eff, omega_d, N) -> MatrixElementResult:
    """<td', ta'| n_k |td, ta> for the fully entangled class, diagonal ladder only."""
    _check_qn(td_p, ta_p, td, ta)
    _check_site(k)
    _check_osc(m_eff, omega_d)
    if ta_p != ta:
        raise UnsupportedCaseError("E1 elements are only available for equal antidiagonal numbers")
    step = td_p - td
    if step == 0:
        return MatrixElementResult(N / 3.0, "+1" if N else "zero")
    if abs(step) > 1:
        return _ZERO
    amp = ladder_modulus(m_eff, omega_d, max(td, td_p))
    s = _sgn(step)
    if k == 2:
        return MatrixElementResult(2.0 * amp, "-i" if s > 0 else "+i")
    return MatrixElementResult(amp, "+i" if s > 0 else "-i")


def ideal_element_C(lam_p, tau_p, lam, tau, k, alpha, m_eff, omega) -> MatrixElementResult:
    """<lam', tau'| n_k |lam, tau> with well 3 decoupled; wells 1 and 2 move in anti-phase."""
    _check_qn(lam_p, tau_p, lam, tau)
    _check_site(k)
    _check_osc(m_eff, omega)
    a1, a2 = alpha
    _check_qn(a1, a2)
    if lam_p != lam or abs(tau - tau_p) > 1:
        return _ZERO
    if tau_p == tau:
        diag = (a1, a2, lam)[k - 1]
        return MatrixElementResult(float(diag), "+1" if diag else "zero")
    if k == 3:
        return _ZERO
    sign = (-1) ** k * _sgn(tau - tau_p)
    return MatrixElementResult(ladder_modulus(m_eff, omega, max(tau, tau_p)), "+1" if sign > 0 else "-1")


_MIRROR = {1: 3, 2: 2, 3: 1}


def ideal_element_B(lam_p, tau_p, lam, tau, k, alpha, m_eff, omega) -> MatrixElementResult:
    """Well 1 decoupled; obtained from the C rules under the relabelling 1 <-> 3.

    ``alpha = (a1, a2)`` are the plane-wave numbers on wells 2 and 3.
    """
    _check_site(k)
    a1, a2 = alpha
    return ideal_element_C(lam_p, tau_p, lam, tau, _MIRROR[k], (a2, a1), m_eff, omega)


def ideal_element_D(lam_p, tau_p, lam, tau, k, m_eff, omega, N) -> MatrixElementResult:
    """Well 2 decoupled with N - lam particles; wells 1 and 3 exchange in anti-phase."""
    _check_qn(lam_p, tau_p, lam, tau)
    _check_site(k)
    _check_osc(m_eff, omega)
    if lam > N:
        raise InvalidParameterError(f"lam={lam} exceeds N={N}")
    if lam_p != lam or abs(tau_p - tau) > 1:
        return _ZERO
    if tau_p == tau:
        diag = (lam / 2.0, N - lam, lam / 2.0)[k - 1]
        return MatrixElementResult(float(diag), "+1" if diag else "zero")
    if k == 2:
        return _ZERO
    s = (2 - k) * _sgn(tau_p - tau)
    return MatrixElementResult(ladder_modulus(m_eff, omega, max(tau, tau_p)), "+i" if s > 0 else "-i")


def predicted_amplitude(elem: MatrixElementResult, mag_a: float, mag_b: float) -> float:
    """Half peak-to-peak oscillation of <n_k>(t) for a two-state superposition."""
    if not math.isclose(mag_a**2 + mag_b**2, 1.0, rel_tol=0, abs_tol=1e-9):
        raise InvalidParameterError(f"|c_a|^2 + |c_b|^2 = {mag_a**2 + mag_b**2}, expected 1")
    return 2.0 * abs(mag_a) * abs(mag_b) * elem.modulus


def oscillator_eigenfunction(tau: int, m_eff: float, omega: float, x):
    """Normalized Hermite function with length scale (m_eff * omega) ** -0.5."""
    _check_qn(tau)
    _check_osc(m_eff, omega)
    x = np.asarray(x, dtype=float)
    s = math.sqrt(m_eff * omega)
    xi = s * x
    prev = np.zeros_like(xi)
    cur = (s * s / math.pi) ** 0.25 * np.exp(-0.5 * xi**2)
    for n in range(tau):
        prev, cur = cur, math.sqrt(2.0 / (n + 1)) * xi * cur - math.sqrt(n / (n + 1)) * prev
    return cur if cur.ndim else float(cur)


def oscillator_width(tau: int, m_eff: float, omega: float) -> float:
    """Classical turning-point scale sqrt((2 tau + 1) / (m_eff omega))."""
    return math.sqrt((2 * tau + 1) / (m_eff * omega))


def _momentum_amplitude(tau, m_eff, omega, p):
    # Fourier transform of chi_tau extended to the real line: (-i)^tau times the
    # Hermite function with m*omega -> 1/(m*omega)
    return (-1j) ** tau * oscillator_eigenfunction(tau, 1.0 / (m_eff * omega), 1.0, p)


@dataclass(frozen=True)
class IdealizedState:
    """Idealized form of a regular eigenstate, synthesizable in the Fock basis.

    ``quantum_numbers`` is (lam, tau) for B/C/D and (tau_d, tau_a) for E1.
    ``alpha`` is needed for B and C only. E1 uses ``omega``/``m_eff`` for the
    diagonal mode and ``omega_a``/``m_eff_a`` for the antidiagonal one.
    """

    label: str
    quantum_numbers: Tuple[int, int]
    N: int
    m_eff: float
    omega: float
    alpha: Optional[Tuple[int, int]] = None
    m_eff_a: Optional[float] = None
    omega_a: Optional[float] = None

    def __post_init__(self):
        if self.label not in ("B", "C", "D", "E1"):
            raise InvalidParameterError(f"no idealized form for label {self.label!r}")
        _check_qn(*self.quantum_numbers)
        _check_osc(self.m_eff, self.omega)
        if self.label in ("B", "C"):
            if self.alpha is None:
                raise InvalidParameterError(f"{self.label} states need alpha")
            lam = self.quantum_numbers[0]
            if sum(self.alpha) != self.N - lam:
                raise InvalidParameterError(f"alpha must sum to N - lam = {self.N - lam}")
        if self.label == "E1":
            if self.m_eff_a is None or self.omega_a is None:
                raise InvalidParameterError("E1 states need m_eff_a and omega_a")
            _check_osc(self.m_eff_a, self.omega_a)
        if self.label in ("B", "C", "D") and self.quantum_numbers[0] > self.N:
            raise InvalidParameterError("lam exceeds N")

    def width(self) -> float:
        if self.label == "E1":
            td, ta = self.quantum_numbers
            return max(oscillator_width(td, self.m_eff, self.omega),
                       oscillator_width(ta, self.m_eff_a, self.omega_a))
        return oscillator_width(self.quantum_numbers[1], self.m_eff, self.omega)

    def to_fock(self, basis: FockBasis) -> np.ndarray:
        """Normalized complex coefficient vector of the idealized form.

        The oscillator factor is taken on the real line (tails beyond +-pi are
        neglected), which is accurate while the width stays well below pi.
        """
        if basis.N != self.N:
            raise InvalidParameterError("basis and state disagree on N")
        if self.width() > math.pi / 2:
            warnings.warn(
                f"oscillator width {self.width():.2f} is not small compared to pi; "
                "the idealized form is distorted by the torus boundary",
                stacklevel=2,
            )
        occ = basis.occupations.astype(float)
        n1, n2, n3 = occ.T
        c = np.zeros(len(basis), dtype=complex)
        a, b = self.quantum_numbers
        if self.label == "C":
            a1, _ = self.alpha
            mask = n3 == a
            c[mask] = _momentum_amplitude(b, self.m_eff, self.omega, n1[mask] - a1)
        elif self.label == "B":
            _, a2 = self.alpha
            mask = n1 == a
            c[mask] = _momentum_amplitude(b, self.m_eff, self.omega, n3[mask] - a2)
        elif self.label == "D":
            mask = n2 == self.N - a
            c[mask] = _momentum_amplitude(b, self.m_eff, self.omega, n1[mask] - a / 2.0)
        else:
            p_d = (n1 + n3) / 2.0 - self.N / 3.0
            p_a = (n1 - n3) / 2.0
            c = _momentum_amplitude(a, self.m_eff, self.omega, p_d) * _momentum_amplitude(
                b, self.m_eff_a, self.omega_a, p_a
            )
        norm = np.linalg.norm(c)
        if norm == 0:
            raise InvalidParameterError("idealized state has no weight in this basis")
        return c / norm
