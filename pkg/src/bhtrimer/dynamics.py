"""Two-eigenstate superpositions and their well occupations in time.

With |Psi(0)> = c_a |a> + c_b |b>, c = |c| exp(-i gamma), and real eigenvectors,

    n_k(t) = |c_a|^2 M_aa + |c_b|^2 M_bb + 2 |c_a| |c_b| |M_ab| cos(W t + dgamma + xi_k)

where W = E_a - E_b, dgamma = gamma_a - gamma_b and xi_k in {0, pi} is the sign
of M_ab.  Times passed to the public functions are in units of T = 2 pi / delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from bhtrimer.errors import InsufficientDataError, InvalidParameterError
from bhtrimer.model_core import EigenSolution, number_operator_matrices

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SuperpositionSpec:
    a: int
    b: int
    mag_a: float = INV_SQRT2
    mag_b: float = INV_SQRT2
    gamma_a: float = 0.0
    gamma_b: float = 0.0

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise InvalidParameterError(f"{name} must be a non-negative integer, got {v!r}")
        for name in ("mag_a", "mag_b", "gamma_a", "gamma_b"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.mag_a < 0 or self.mag_b < 0:
            raise InvalidParameterError("magnitudes must be non-negative")
        if not math.isclose(self.mag_a**2 + self.mag_b**2, 1.0, rel_tol=0, abs_tol=1e-9):
            raise InvalidParameterError(
                f"mag_a^2 + mag_b^2 = {self.mag_a**2 + self.mag_b**2:.12g}, expected 1"
            )
        if self.a == self.b and self.mag_b != 0:
            raise InvalidParameterError("a and b must differ unless mag_b = 0")

    @classmethod
    def single(cls, a: int) -> "SuperpositionSpec":
        return cls(a, a, 1.0, 0.0)

    @property
    def delta_gamma(self) -> float:
        return self.gamma_a - self.gamma_b


@dataclass
class Trajectory:
    times: np.ndarray  # units of T
    n: np.ndarray  # shape (3, len(times))
    beat_frequency: float  # E_a - E_b, energy units
    period: float  # T in model time units

    @property
    def n1(self):
        return self.n[0]

    @property
    def n2(self):
        return self.n[1]

    @property
    def n3(self):
        return self.n[2]

    def fit(self, k: int) -> Tuple[float, float, float]:
        """(offset, amplitude, phase) of site k at the known beat frequency."""
        if k not in (1, 2, 3):
            raise InvalidParameterError(f"site index must be 1, 2 or 3, got {k!r}")
        return fit_cosine(self.n[k - 1], self.times * self.period, self.beat_frequency)


def default_times(n_periods: float = 4.0, samples: int = 2000) -> np.ndarray:
    """Sample grid in units of T."""
    if samples < 2 or not n_periods > 0:
        raise InvalidParameterError("need samples >= 2 and a positive time span")
    return np.linspace(0.0, n_periods, samples)


def _check_indices(spec: SuperpositionSpec, eig: EigenSolution):
    L = len(eig.energies)
    for i in (spec.a, spec.b):
        if not 0 <= i < L:
            raise InvalidParameterError(f"eigenstate index {i} out of range [0, {L})")


def _period(eig: EigenSolution) -> float:
    if eig.params is None:
        raise InvalidParameterError("eigensolution carries no model parameters; cannot define T")
    return eig.params.period


def closed_form_trajectory(spec: SuperpositionSpec, eig: EigenSolution, t_grid=None) -> Trajectory:
    """Occupations from the two-level expectation formula; ``t_grid`` in units of T."""
    _check_indices(spec, eig)
    times = default_times() if t_grid is None else np.asarray(t_grid, dtype=float)
    T = _period(eig)
    M = number_operator_matrices(eig, [spec.a, spec.b])
    W = float(eig.energies[spec.a] - eig.energies[spec.b])
    arg = W * times * T + spec.delta_gamma
    n = np.empty((3, len(times)))
    for k in range(3):
        base = spec.mag_a**2 * M[k, 0, 0] + spec.mag_b**2 * M[k, 1, 1]
        m = M[k, 0, 1]
        xi = 0.0 if m >= 0 else math.pi
        n[k] = base + 2.0 * spec.mag_a * spec.mag_b * abs(m) * np.cos(arg + xi)
    return Trajectory(times=times, n=n, beat_frequency=W, period=T)


def build_superposition_state(spec: SuperpositionSpec, eig: EigenSolution) -> np.ndarray:
    _check_indices(spec, eig)
    ca = spec.mag_a * np.exp(-1j * spec.gamma_a)
    cb = spec.mag_b * np.exp(-1j * spec.gamma_b)
    return ca * eig.vector(spec.a) + cb * eig.vector(spec.b)


def spectral_propagate(initial, eig: EigenSolution, t: float) -> np.ndarray:
    """exp(-i H t) applied through the eigendecomposition; ``t`` in model time units."""
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (eig.vectors.shape[0],):
        raise InvalidParameterError(f"state has shape {psi.shape}, expected ({eig.vectors.shape[0]},)")
    V = eig.vectors
    return V @ (np.exp(-1j * eig.energies * t) * (V.T @ psi))


def propagated_occupations(initial, eig: EigenSolution, t_grid) -> np.ndarray:
    """<n_k> along a time grid (units of T) by explicit propagation; shape (3, len)."""
    T = _period(eig)
    V = eig.vectors
    coeff = V.T @ np.asarray(initial, dtype=complex)
    occ = eig.basis.occupations.astype(float)
    times = np.asarray(t_grid, dtype=float)
    out = np.empty((3, len(times)))
    for j, t in enumerate(times):
        psi = V @ (np.exp(-1j * eig.energies * t * T) * coeff)
        out[:, j] = (np.abs(psi) ** 2) @ occ
    return out


def fit_cosine(series, times, omega: float) -> Tuple[float, float, float]:
    """Least-squares A cos(omega t + phi) + B at fixed omega; returns (B, A >= 0, phi).

    ``times`` must be in the same units as 1/omega.
    """
    y = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    if y.shape != t.shape:
        raise InvalidParameterError("series and times differ in length")
    if len(t) < 8:
        raise InsufficientDataError(f"need at least 8 samples, got {len(t)}")
    span = float(t.max() - t.min())
    if span == 0:
        raise InsufficientDataError("all sample times are equal")
    if abs(omega) * span < 2.0 * math.pi * (1 - 1e-9):
        raise InsufficientDataError("samples span less than one beat period")
    X = np.column_stack([np.cos(omega * t), np.sin(omega * t), np.ones_like(t)])
    (c, s, B), *_ = np.linalg.lstsq(X, y, rcond=None)
    # c cos + s sin = A cos(wt + phi) with A cos phi = c, A sin phi = -s
    A = math.hypot(c, s)
    phi = math.atan2(-s, c) if A > 0 else 0.0
    return float(B), float(A), float(phi)


def trajectory_csv(traj: Trajectory) -> str:
    """Trajectory as CSV text, 12 significant digits."""
    lines = ["t_over_T,n1,n2,n3"]
    for j in range(len(traj.times)):
        lines.append(",".join(_fmt(x) for x in (traj.times[j], *traj.n[:, j])))
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".12g")
