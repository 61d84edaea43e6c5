"""Fock basis, Hamiltonian and exact diagonalization for the three-well Bose-Hubbard model.

Sites are labelled 1, 2, 3 in the public API (well 2 is the middle well).
The on-site terms are kept in the symmetric form

    H = sum_k eps_k (n_k + 1/2) + zeta (n_k + 1/2)^2
        - kappa12 (a1^+ a2 + a2^+ a1) - kappa23 (a2^+ a3 + a3^+ a2),

with eps_k = epsilon_bar + (k - 2) delta.  Compared with the usual
U/2 n(n-1) convention this only shifts energies by an N-dependent constant
and relabels the tilt, so beat frequencies are unaffected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from bhtrimer.errors import ConvergenceError, InvalidParameterError

SITES = (1, 2, 3)


@dataclass(frozen=True)
class ModelParams:
    """Physical constants. Defaults are the N=30 trimer with a weak linear tilt."""

    N: int = 30
    epsilon_bar: float = 0.0
    delta: float = 0.1
    kappa12: float = 0.25
    kappa23: float = 0.25
    zeta: float = 0.1

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise InvalidParameterError(f"N must be an integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if self.N < 1:
            raise InvalidParameterError(f"N must be >= 1, got {self.N}")
        for name in ("epsilon_bar", "delta", "kappa12", "kappa23", "zeta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def eps(self, k: int) -> float:
        """On-site energy of site k (1-based)."""
        return self.epsilon_bar + (k - 2) * self.delta

    @property
    def period(self) -> float:
        """Time unit T = 2 pi / delta used on plot axes."""
        return 2.0 * math.pi / self.delta

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "epsilon_bar": self.epsilon_bar,
            "delta": self.delta,
            "kappa12": self.kappa12,
            "kappa23": self.kappa23,
            "zeta": self.zeta,
        }


class FockState(NamedTuple):
    n1: int
    n2: int
    n3: int

    @property
    def total(self) -> int:
        return self.n1 + self.n2 + self.n3


@dataclass(frozen=True)
class FockBasis:
    """All (n1, n2, n3) with fixed total, ordered lexicographically descending in (n1, n2)."""

    N: int
    states: tuple
    index_of: dict = field(repr=False)
    occupations: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    def index(self, state) -> int:
        return self.index_of[FockState(*state)]


@dataclass
class EigenSolution:
    """Ascending energies and real eigenvectors; ``vectors[:, k]`` belongs to ``energies[k]``.

    ``residual_tol`` is the residual contract the solve was checked against and
    ``max_residual`` what was actually achieved.
    """

    energies: np.ndarray
    vectors: np.ndarray
    residual_tol: float
    max_residual: float = 0.0
    basis: Optional[FockBasis] = None
    params: Optional[ModelParams] = None

    def __len__(self):
        return len(self.energies)

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[:, k]

    @property
    def N(self) -> int:
        return self.basis.N


def enumerate_basis(N: int) -> FockBasis:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidParameterError(f"N must be an integer >= 1, got {N!r}")
    N = int(N)
    states = tuple(
        FockState(n1, n2, N - n1 - n2)
        for n1 in range(N, -1, -1)
        for n2 in range(N - n1, -1, -1)
    )
    index_of = {s: i for i, s in enumerate(states)}
    occ = np.array(states, dtype=np.int64)
    occ.setflags(write=False)
    return FockBasis(N=N, states=states, index_of=index_of, occupations=occ)


def _diagonal(n: FockState, p: ModelParams) -> float:
    return sum(p.eps(k) * (nk + 0.5) + p.zeta * (nk + 0.5) ** 2 for k, nk in zip(SITES, n))


def hamiltonian_element(m, n, p: ModelParams) -> float:
    """<m|H|n> for two Fock states of the same total particle number."""
    m = FockState(*m)
    n = FockState(*n)
    if m.total != n.total:
        raise InvalidParameterError(f"states {tuple(m)} and {tuple(n)} differ in particle number")
    if min(m) < 0 or min(n) < 0:
        raise InvalidParameterError("occupations must be non-negative")
    if m == n:
        return _diagonal(n, p)
    d = (m.n1 - n.n1, m.n2 - n.n2, m.n3 - n.n3)
    # symmetric in (m, n): the sqrt argument is (larger n1)*(larger n2) either way
    if d == (1, -1, 0) or d == (-1, 1, 0):
        return -p.kappa12 * math.sqrt(max(m.n1, n.n1) * max(m.n2, n.n2))
    if d == (0, 1, -1) or d == (0, -1, 1):
        return -p.kappa23 * math.sqrt(max(m.n2, n.n2) * max(m.n3, n.n3))
    return 0.0


def build_hamiltonian(basis: FockBasis, p: ModelParams) -> np.ndarray:
    if basis.N != p.N:
        raise InvalidParameterError(f"basis has N={basis.N} but params have N={p.N}")
    L = len(basis)
    H = np.zeros((L, L))
    for i, s in enumerate(basis.states):
        H[i, i] = _diagonal(s, p)
        n1, n2, n3 = s
        if n2 == 0:
            continue
        # hops out of the middle well; the mirror entry gets the identical float
        j = basis.index_of[FockState(n1 + 1, n2 - 1, n3)]
        H[i, j] = H[j, i] = -p.kappa12 * math.sqrt((n1 + 1) * n2)
        j = basis.index_of[FockState(n1, n2 - 1, n3 + 1)]
        H[i, j] = H[j, i] = -p.kappa23 * math.sqrt(n2 * (n3 + 1))
    return H


def _fix_signs(V: np.ndarray) -> np.ndarray:
    # largest-magnitude component positive; argmax picks the first on ties
    pivot = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivot, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def diagonalize(H: np.ndarray, tol: float = 1e-10) -> EigenSolution:
    """Full spectrum of a real symmetric matrix with a residual guarantee.

    Backed by LAPACK's symmetric solver; every eigenpair is checked against
    ``max_k ||H v_k - E_k v_k|| <= tol`` and a :class:`ConvergenceError`
    carrying the worst residual is raised otherwise.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidParameterError(f"H must be square, got shape {H.shape}")
    if not tol > 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if not np.array_equal(H, H.T):
        raise InvalidParameterError("H is not exactly symmetric")
    try:
        E, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    V = _fix_signs(V)
    residuals = np.linalg.norm(H @ V - V * E, axis=0)
    worst = float(residuals.max()) if len(residuals) else 0.0
    if not worst <= tol:
        raise ConvergenceError(
            f"worst eigenpair residual {worst:.3e} exceeds tol {tol:.1e}", worst_residual=worst
        )
    return EigenSolution(energies=E, vectors=V, residual_tol=tol, max_residual=worst)


def solve(p: ModelParams, tol: float = 1e-10) -> EigenSolution:
    """Basis + Hamiltonian + diagonalization in one call."""
    basis = enumerate_basis(p.N)
    eig = diagonalize(build_hamiltonian(basis, p), tol)
    eig.basis = basis
    eig.params = p
    return eig


def _site_column(k: int) -> int:
    if k not in SITES:
        raise InvalidParameterError(f"site index must be 1, 2 or 3, got {k!r}")
    return k - 1


def number_matrix_element(a, b, k: int, basis: FockBasis) -> float:
    """<a|n_k|b> for real coefficient vectors over ``basis``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.shape != (len(basis),):
        raise InvalidParameterError(
            f"vector lengths {a.shape}, {b.shape} do not match basis size {len(basis)}"
        )
    col = _site_column(k)
    return float(np.sum(a * b * basis.occupations[:, col]))


def number_operator_matrices(eig: EigenSolution, indices=None) -> np.ndarray:
    """Matrix elements <a|n_k|b> in the eigenbasis, shape (3, m, m).

    ``indices`` restricts to a subset of eigenstates (in the given order).
    """
    V = eig.vectors if indices is None else eig.vectors[:, list(indices)]
    occ = eig.basis.occupations
    return np.stack([V.T @ (occ[:, c][:, None] * V) for c in range(3)])
