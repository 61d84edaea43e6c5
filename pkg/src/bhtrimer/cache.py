"""Versioned, parameter-stamped eigendata cache.

Layout: an ASCII header of ``key value`` lines ending with ``END``, then the
energies and the column-major eigenvector matrix as little-endian float64.
Floats in the header are written with repr so they round-trip exactly.
"""

from __future__ import annotations

import os

import numpy as np

from bhtrimer.errors import CacheError
from bhtrimer.model_core import EigenSolution, ModelParams, enumerate_basis

MAGIC = "BHTRIMER-EIGENDATA"
VERSION = 1
_FLOAT_PARAMS = ("epsilon_bar", "delta", "kappa12", "kappa23", "zeta")


def _header(eig: EigenSolution) -> bytes:
    p = eig.params
    lines = [MAGIC, f"version {VERSION}", f"N {p.N}"]
    lines += [f"{name} {getattr(p, name)!r}" for name in _FLOAT_PARAMS]
    lines += [f"tol {eig.residual_tol!r}", f"max_residual {eig.max_residual!r}", f"L {len(eig.energies)}", "END"]
    return ("\n".join(lines) + "\n").encode("ascii")


def save_eigendata(path, eig: EigenSolution):
    if eig.params is None:
        raise CacheError("eigensolution carries no parameters to stamp the cache with")
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(_header(eig))
        fh.write(np.asarray(eig.energies, dtype="<f8").tobytes())
        fh.write(np.asarray(eig.vectors, dtype="<f8").tobytes(order="F"))
    os.replace(tmp, path)


def load_eigendata(path, expected: ModelParams = None) -> EigenSolution:
    """Reload a cache; with ``expected`` the stamped parameters must match exactly."""
    if not os.path.exists(path):
        raise CacheError(f"no eigendata cache at {path}; run 'bhtrimer diagonalize' first")
    with open(path, "rb") as fh:
        blob = fh.read()
    end = blob.find(b"\nEND\n")
    if not blob.startswith(MAGIC.encode()) or end < 0:
        raise CacheError(f"{path} is not an eigendata cache")
    head = {}
    for line in blob[:end].decode("ascii").splitlines()[1:]:
        key, _, value = line.partition(" ")
        head[key] = value
    try:
        version = int(head["version"])
        if version != VERSION:
            raise CacheError(f"cache version {version} unsupported (expected {VERSION})")
        params = ModelParams(N=int(head["N"]), **{k: float(head[k]) for k in _FLOAT_PARAMS})
        tol = float(head["tol"])
        max_res = float(head["max_residual"])
        L = int(head["L"])
    except (KeyError, ValueError) as exc:
        raise CacheError(f"corrupt cache header in {path}: {exc}") from None
    body = blob[end + 5:]
    if len(body) != 8 * (L + L * L):
        raise CacheError(f"cache body in {path} has {len(body)} bytes, expected {8 * (L + L * L)}")
    if expected is not None and params != expected:
        diff = [k for k, v in expected.as_dict().items() if params.as_dict()[k] != v]
        raise CacheError(
            f"cache {path} was built for different parameters ({', '.join(diff)}); rerun 'bhtrimer diagonalize'"
        )
    E = np.frombuffer(body, dtype="<f8", count=L).astype(float)
    V = np.frombuffer(body, dtype="<f8", offset=8 * L).reshape((L, L), order="F").astype(float)
    basis = enumerate_basis(params.N)
    if len(basis) != L:
        raise CacheError(f"cache dimension {L} does not match N={params.N}")
    return EigenSolution(energies=E, vectors=V, residual_tol=tol, max_residual=max_res, basis=basis, params=params)
