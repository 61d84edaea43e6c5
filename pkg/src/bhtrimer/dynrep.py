"""Dynamical (torus) representation, eigenstate classification and ladder fits.

An eigenvector c over the Fock basis is the Fourier series

    Phi(phi1, phi2, phi3) = sum_n c_n exp(i n . phi).

Since n1 + n2 + n3 = N, Phi = exp(i N phi3) F(u, v) with u = phi1 - phi3,
v = phi2 - phi3, so everything is evaluated on the 2D chart (u, v).

Classification works on number fluctuations. Fluctuations of n_k carried by
transitions to eigenstates far away in energy are virtual (second-order
hopping) and do not show up as slow oscillation; only the part within an
energy window of the state ("slow variance") decides whether a well is
decoupled.  A well is decoupled when its slow variance is below ``v_thresh``
or below ``rel_thresh`` times the largest slow variance of the state.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from bhtrimer.errors import InsufficientDataError, InvalidParameterError
from bhtrimer.model_core import EigenSolution, FockBasis, number_operator_matrices

LABELS = ("A", "B", "C", "D", "E1", "E2")

# transversal coordinate of each ladder kind
# (the marginal is built in transversal_marginal)
COORDINATES = {
    "C": "phi1-phi2",
    "B": "phi3-phi2",
    "D": "phi1-phi3",
    "E1d": "phi1-2phi2+phi3",
    "E1a": "phi1-phi3",
}

# unit transition patterns (n1, n2, n3) of one ladder step
_PATTERNS = {
    "C": np.array([1.0, -1.0, 0.0]) / math.sqrt(2),
    "B": np.array([0.0, 1.0, -1.0]) / math.sqrt(2),
    "D": np.array([1.0, 0.0, -1.0]) / math.sqrt(2),
    "E1d": np.array([1.0, -2.0, 1.0]) / math.sqrt(6),
    "E1a": np.array([1.0, 0.0, -1.0]) / math.sqrt(2),
}


@dataclass(frozen=True)
class TorusGrid:
    resolution: int = 256

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 32:
            raise InvalidParameterError(f"resolution must be an integer >= 32, got {self.resolution}")

    @property
    def angles(self) -> np.ndarray:
        """Grid points of one coordinate, spanning [-pi, pi)."""
        R = self.resolution
        return -math.pi + 2.0 * math.pi * np.arange(R) / R

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.resolution

    def check(self, N: int):
        if self.resolution <= 2 * N:
            raise InvalidParameterError(
                f"resolution {self.resolution} too small for N={N}; need > 2N for exact quadrature"
            )


@dataclass
class DynRepField:
    """F(u, v) on the chart; the full field is exp(i * phase_integer * phi3) * F."""

    values: np.ndarray
    phase_integer: int
    grid: TorusGrid

    @property
    def density(self) -> np.ndarray:
        """|Phi|^2 normalized to a probability density in (u, v)."""
        return np.abs(self.values) ** 2 / (2.0 * math.pi) ** 2

    def norm(self) -> float:
        return float(self.density.sum() * self.grid.spacing**2)

    def participation_fraction(self) -> float:
        """Effective area (sum rho)^2 / sum rho^2 as a fraction of the chart area."""
        rho = self.density
        return float(rho.sum() ** 2 / (rho**2).sum() / rho.size)


@dataclass(frozen=True)
class SiteStatistics:
    mean: np.ndarray
    var: np.ndarray
    cov: np.ndarray


@dataclass
class EigenstateClass:
    index: int
    energy: float
    label: str
    quantum_numbers: Optional[Tuple[int, int]]
    confidence: float
    # ladder bookkeeping: lam for B/C/D, (l1, l2) for A
    lam: Optional[int] = None


@dataclass
class LadderFamily:
    family_id: int
    label: str
    kind: str  # key of COORDINATES
    key: int  # lam for B/C/D, fixed tau_a (E1d) or tau_d (E1a)
    members: List[int]
    taus: List[int]
    energies: List[float]
    complete: bool = True
    alpha: Optional[Tuple[int, int]] = None
    omega_fit: Optional[float] = None
    m_eff_fit: Optional[float] = None

    def member(self, tau: int) -> int:
        try:
            return self.members[self.taus.index(tau)]
        except ValueError:
            raise InsufficientDataError(f"family {self.name} has no member with tau={tau}") from None

    @property
    def name(self) -> str:
        if self.label == "E1":
            fixed = "tau_a" if self.kind == "E1d" else "tau_d"
            return f"E1[{fixed}={self.key}]"
        return f"{self.label}[lam={self.key}]"


@dataclass(frozen=True)
class ClassifyThresholds:
    """Decision thresholds; energies in model units, variances in particles^2."""

    v_thresh: float = 0.1
    rel_thresh: float = 0.25
    slow_window: float = 2.5
    loc_thresh: float = 0.3
    link_min: float = 0.5

    def __post_init__(self):
        for name in ("v_thresh", "rel_thresh", "slow_window", "loc_thresh", "link_min"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameterError(f"{name} must be positive and finite, got {v}")


# --------------------------------------------------------------------------
# field evaluation


def _coefficient_grid(v, basis: FockBasis, R: int) -> np.ndarray:
    A = np.zeros((R, R), dtype=complex)
    occ = basis.occupations
    A[occ[:, 0], occ[:, 1]] = v
    return A


def evaluate_dynrep(v, basis: FockBasis, grid: TorusGrid = TorusGrid()) -> DynRepField:
    """Evaluate F(u, v) = sum_n c_n exp(i (n1 u + n2 v)) on the chart grid."""
    v = np.asarray(v)
    if v.shape != (len(basis),):
        raise InvalidParameterError(f"vector length {v.shape} does not match basis size {len(basis)}")
    grid.check(basis.N)
    R = grid.resolution
    A = _coefficient_grid(v, basis, R)
    # grid starts at -pi: exp(i n (2 pi j / R - pi)) = (-1)^n exp(2 pi i n j / R)
    n = np.arange(R)
    A = A * ((-1.0) ** n)[:, None] * ((-1.0) ** n)[None, :]
    F = np.fft.ifft2(A) * R * R
    return DynRepField(values=F, phase_integer=basis.N, grid=grid)


def chart_value(v, basis: FockBasis, u, w) -> np.ndarray:
    """Direct (non-FFT) evaluation of F at arbitrary chart points."""
    occ = basis.occupations
    u = np.atleast_1d(np.asarray(u, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    phase = np.exp(1j * (np.outer(u, occ[:, 0]) + np.outer(w, occ[:, 1])))
    return phase @ np.asarray(v)


def momentum_field(fld: DynRepField, k: int) -> np.ndarray:
    """-i d/dphi_k of the full field, divided by exp(i N phi3), by spectral differentiation."""
    F = fld.values
    R = F.shape[0]
    freq = np.fft.fftfreq(R, d=1.0 / R)
    G = np.fft.fft2(F)
    du = np.fft.ifft2(G * freq[:, None])  # -i d/du
    dv = np.fft.ifft2(G * freq[None, :])  # -i d/dv
    if k == 1:
        return du
    if k == 2:
        return dv
    if k == 3:
        return fld.phase_integer * F - du - dv
    raise InvalidParameterError(f"site index must be 1, 2 or 3, got {k!r}")


# --------------------------------------------------------------------------
# statistics


def site_statistics(v, basis: FockBasis) -> SiteStatistics:
    """Exact number moments of a normalized state in the Fock basis."""
    p = np.abs(np.asarray(v)) ** 2
    occ = basis.occupations.astype(float)
    mean = p @ occ
    second = occ.T @ (p[:, None] * occ)
    cov = second - np.outer(mean, mean)
    return SiteStatistics(mean=mean, var=np.diag(cov).copy(), cov=cov)


def slow_covariance(M: np.ndarray, energies: np.ndarray, window: float) -> np.ndarray:
    """Per-state number covariance restricted to transitions with |E_b - E_a| < window.

    ``M`` holds <a|n_k|b> in the eigenbasis, shape (3, L, L). Returns (L, 3, 3).
    Summed over all b != a this would be the ordinary covariance.
    """
    E = np.asarray(energies)
    W = (np.abs(E[:, None] - E[None, :]) < window).astype(float)
    np.fill_diagonal(W, 0.0)
    return np.einsum("kab,lab,ab->akl", M, M, W)


def _round_to_total(values, total: int) -> Tuple[int, ...]:
    """Largest-remainder rounding of non-negative reals to integers summing to ``total``."""
    values = np.clip(np.asarray(values, dtype=float), 0, None)
    s = values.sum()
    values = values * (total / s) if s > 0 else np.full(len(values), total / len(values))
    base = np.floor(values).astype(int)
    short = total - int(base.sum())
    order = np.argsort(-(values - base), kind="stable")
    if short > 0:
        for i in order[:short]:
            base[i] += 1
    while short < 0:
        # take from the entry rounded up the most
        over = np.where(base > 0, base - values, -np.inf)
        base[int(np.argmax(over))] -= 1
        short += 1
    return tuple(int(b) for b in base)


def _clip01(x: float) -> float:
    return float(min(1.0, max(0.0, x)))


# --------------------------------------------------------------------------
# classification


@dataclass
class _Prepared:
    M: np.ndarray
    means: np.ndarray
    svar: np.ndarray


def _prepare(eig: EigenSolution, th: ClassifyThresholds) -> _Prepared:
    M = number_operator_matrices(eig)
    means = np.stack([np.diag(M[k]) for k in range(3)], axis=1)
    scov = slow_covariance(M, eig.energies, th.slow_window)
    svar = np.stack([scov[:, k, k] for k in range(3)], axis=1)
    return _Prepared(M=M, means=means, svar=svar)


def _pattern_strength(M: np.ndarray, a: int, b: int, kind: str) -> float:
    return float(abs(_PATTERNS[kind] @ M[:, a, b]))


def classify_eigenstates(
    eig: EigenSolution,
    thresholds: ClassifyThresholds = ClassifyThresholds(),
    grid: TorusGrid = TorusGrid(),
) -> List[EigenstateClass]:
    """Label every eigenstate A, B, C, D, E1 or E2 and attach quantum numbers.

    B/C/D get (lam, tau) with tau counted by energy within the (label, lam)
    group; E1 gets (tau_d, tau_a) by walking diagonal and antidiagonal
    ladder transitions upward from the lowest E1 state.
    """
    th = thresholds
    N = eig.basis.N
    prep = _prepare(eig, th)
    svar, means = prep.svar, prep.means
    E = eig.energies
    out: List[EigenstateClass] = []
    e_candidates = []

    for a in range(len(E)):
        s = svar[a]
        thr = max(th.v_thresh, th.rel_thresh * float(s.max()))
        dec = s < thr
        nd = int(dec.sum())
        if nd >= 2:
            second = float(np.sort(s)[1])
            conf = _clip01(1.0 - second / thr)
            n1, _, n3 = _round_to_total(means[a], N)
            out.append(EigenstateClass(a, float(E[a]), "A", (n1, n3), conf))
        elif nd == 1:
            k = int(np.argmax(dec))
            others = np.delete(s, k)
            conf = min(_clip01(1.0 - s[k] / thr), _clip01(float(others.min()) / thr - 1.0))
            if k == 0:
                label, lam = "B", int(round(means[a, 0]))
            elif k == 2:
                label, lam = "C", int(round(means[a, 2]))
            else:
                label, lam = "D", int(round(means[a, 0] + means[a, 2]))
            out.append(EigenstateClass(a, float(E[a]), label, None, conf, lam=lam))
        else:
            fld = evaluate_dynrep(eig.vector(a), eig.basis, grid)
            pr = fld.participation_fraction()
            ratio = float(s.min() / s.max()) if s.max() > 0 else 0.0
            if pr < th.loc_thresh:
                conf = min(_clip01(1.0 - pr / th.loc_thresh), _clip01(ratio / th.rel_thresh - 1.0))
                cls = EigenstateClass(a, float(E[a]), "E1", None, conf)
                e_candidates.append(cls)
            else:
                cls = EigenstateClass(a, float(E[a]), "E2", None, _clip01(pr / th.loc_thresh - 1.0))
            out.append(cls)

    # tau within (label, lam) groups, by energy (states are already energy-ordered)
    counters = defaultdict(int)
    for c in out:
        if c.label in ("B", "C", "D"):
            key = (c.label, c.lam)
            c.quantum_numbers = (c.lam, counters[key])
            counters[key] += 1

    _assign_e1(e_candidates, prep.M, th)
    return out


def _assign_e1(candidates: List[EigenstateClass], M: np.ndarray, th: ClassifyThresholds):
    if not candidates:
        return
    assigned = {}
    taken = set()
    first = candidates[0]
    first.quantum_numbers = (0, 0)
    assigned[first.index] = (0, 0)
    taken.add((0, 0))
    for c in candidates[1:]:
        best = None
        for a, (td, ta) in assigned.items():
            d = _pattern_strength(M, a, c.index, "E1d")
            x = _pattern_strength(M, a, c.index, "E1a")
            strong, weak = max(d, x), min(d, x)
            if strong < th.link_min or strong < 2.0 * weak:
                continue
            qn = (td + 1, ta) if d > x else (td, ta + 1)
            if qn in taken:
                continue
            if best is None or strong > best[0]:
                best = (strong, qn)
        if best is None:
            # not reachable from the regular island
            c.label = "E2"
            c.confidence = 0.2
            continue
        c.quantum_numbers = best[1]
        assigned[c.index] = best[1]
        taken.add(best[1])


# --------------------------------------------------------------------------
# ladders


def build_ladders(
    classes: List[EigenstateClass],
    eig: EigenSolution,
    link_min: float = 0.5,
) -> List[LadderFamily]:
    """Group classified states into ladder families.

    B/C/D: one family per (label, lam), members in energy order with
    tau = 0, 1, ...  E1: one diagonal ladder per tau_a and one antidiagonal
    ladder per tau_d.  A family is flagged incomplete when a tau is missing,
    energies are not increasing, or neighbouring members are not connected by
    a ladder transition of at least ``link_min``.
    """
    M = number_operator_matrices(eig)
    N = eig.basis.N
    groups = defaultdict(list)
    for c in classes:
        if c.label in ("B", "C", "D"):
            lam, tau = c.quantum_numbers
            groups[(c.label, c.label, lam)].append((tau, c))
        elif c.label == "E1":
            td, ta = c.quantum_numbers
            groups[("E1", "E1d", ta)].append((td, c))
            groups[("E1", "E1a", td)].append((ta, c))

    families = []
    for (label, kind, key), items in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        items.sort(key=lambda t: t[0])
        taus = [t for t, _ in items]
        members = [c.index for _, c in items]
        energies = [c.energy for _, c in items]
        complete = taus == list(range(len(taus)))
        complete &= all(e2 > e1 for e1, e2 in zip(energies, energies[1:]))
        for a, b in zip(members, members[1:]):
            if _pattern_strength(M, a, b, kind) < link_min:
                complete = False
        if label == "E1" and len(members) < 2:
            continue
        fam = LadderFamily(
            family_id=len(families),
            label=label,
            kind=kind,
            key=key,
            members=members,
            taus=taus,
            energies=energies,
            complete=complete,
        )
        if label in ("B", "C"):
            fam.alpha = _alpha(fam, M, N)
        families.append(fam)
    return families


def _alpha(fam: LadderFamily, M: np.ndarray, N: int) -> Tuple[int, int]:
    a = fam.members[0]
    mean = np.array([M[k, a, a] for k in range(3)])
    if fam.label == "C":
        return _round_to_total(mean[[0, 1]], N - fam.key)
    return _round_to_total(mean[[1, 2]], N - fam.key)


def find_family(families, label: str, key: int, kind: Optional[str] = None) -> LadderFamily:
    kind = kind or ("E1d" if label == "E1" else label)
    for f in families:
        if f.label == label and f.kind == kind and f.key == key:
            return f
    raise InsufficientDataError(f"no {label} family with key {key}")


# --------------------------------------------------------------------------
# oscillator fit


def transversal_marginal(v, basis: FockBasis, kind: str, grid: TorusGrid = TorusGrid()) -> np.ndarray:
    """Marginal density of the transversal coordinate of ladder ``kind`` on ``grid.angles``.

    Integrating |Phi|^2 over the complementary directions leaves an incoherent
    sum over the conserved combination of occupations.
    """
    if kind not in COORDINATES:
        raise InvalidParameterError(f"unknown ladder kind {kind!r}")
    grid.check(basis.N)
    occ = basis.occupations
    n1, n2, n3 = occ.T
    if kind == "C":
        group, freq = n3, n1
    elif kind == "B":
        group, freq = n1, n3
    elif kind in ("D", "E1a"):
        group, freq = n2, n1
    else:  # E1d: (x_d, v) with u = x_d + 2 v is unimodular on the chart
        group, freq = 2 * n1 + n2, n1
    R = grid.resolution
    x = grid.angles
    keys, inv = np.unique(group, return_inverse=True)
    A = np.zeros((len(keys), R), dtype=complex)
    A[inv, freq] = np.asarray(v)
    n = np.arange(R)
    A = A * ((-1.0) ** n)[None, :]
    F = np.fft.ifft(A, axis=1) * R
    rho = (np.abs(F) ** 2).sum(axis=0) / (2.0 * math.pi)
    return rho


def centered_second_moment(rho: np.ndarray, grid: TorusGrid = TorusGrid()) -> float:
    """Variance of a periodic density around its circular mean, with wrap-around."""
    x = grid.angles
    dx = grid.spacing
    mass = rho.sum() * dx
    x0 = np.angle(np.sum(rho * np.exp(1j * x)))
    d = np.mod(x - x0 + math.pi, 2.0 * math.pi) - math.pi
    m1 = np.sum(rho * d) * dx / mass
    return float(np.sum(rho * d**2) * dx / mass - m1**2)


def oscillator_from_density(rho: np.ndarray, energy_lo: float, energy_hi: float, tau: int = 0,
                            grid: TorusGrid = TorusGrid()) -> Tuple[float, float]:
    """(m_eff, Omega) from the transversal density of the tau member and the energies of tau, tau + 1."""
    omega = float(energy_hi - energy_lo)
    if omega <= 0:
        raise InsufficientDataError(f"non-increasing energies at tau={tau}")
    x2 = centered_second_moment(np.asarray(rho, dtype=float), grid)
    return (2 * tau + 1) / (2.0 * omega * x2), omega


def fit_oscillator(
    family: LadderFamily,
    eig: EigenSolution,
    grid: TorusGrid = TorusGrid(),
    tau: Optional[int] = None,
) -> Tuple[float, float]:
    """Effective (m_eff, Omega) of a ladder.

    Omega is the level spacing E(tau + 1) - E(tau); m_eff follows from the
    transversal width of the tau member via <x^2> = (2 tau + 1) / (2 m_eff Omega).
    ``tau=None`` uses the lowest pair.
    """
    if len(family.members) < 2:
        raise InsufficientDataError(f"family {family.name} has a single member")
    t = 0 if tau is None else int(tau)
    lo, hi = family.member(t), family.member(t + 1)
    rho = transversal_marginal(eig.vector(lo), eig.basis, family.kind, grid)
    try:
        m_eff, omega = oscillator_from_density(rho, eig.energies[lo], eig.energies[hi], t, grid)
    except InsufficientDataError as exc:
        raise InsufficientDataError(f"family {family.name}: {exc}") from None
    if tau is None:
        family.omega_fit, family.m_eff_fit = omega, m_eff
    return m_eff, omega


def classify_and_fit(eig, thresholds=ClassifyThresholds(), grid=TorusGrid()):
    """Classification, ladders and default fits in one call."""
    classes = classify_eigenstates(eig, thresholds, grid)
    families = build_ladders(classes, eig, thresholds.link_min)
    for fam in families:
        if len(fam.members) >= 2:
            try:
                fit_oscillator(fam, eig, grid)
            except InsufficientDataError:
                pass
    return classes, families
