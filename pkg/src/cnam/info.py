"""Entropic quantities, in bits."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .linalg import VALIDITY_TOL, DimensionError, as_matrix, dephase, eigvalsh, partial_trace
from .states import DensityMatrix

# eigenvalues in [-CLAMP_TOL, 0) are treated as exact zeros
CLAMP_TOL = 1e-9


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def _spectrum_entropy(w: np.ndarray, clamp: float = CLAMP_TOL) -> float:
    if w.size and w.min() < -clamp:
        raise ValueError(f"negative eigenvalue {w.min():.3e}: not a valid state")
    return shannon_entropy(np.clip(w, 0.0, 1.0))


def von_neumann_entropy(rho) -> float:
    """``-tr(rho log2 rho)`` from the eigenvalues of ``rho``.

    Accepts a :class:`DensityMatrix` or a bare Hermitian matrix. Slightly
    negative eigenvalues (within the state's tolerance) count as zero.
    """
    if isinstance(rho, DensityMatrix):
        return _spectrum_entropy(eigvalsh(rho.matrix), max(CLAMP_TOL, rho.tol))
    return _spectrum_entropy(eigvalsh(as_matrix(rho)))


def _groups(dims: Sequence[int], *groups: Iterable[int]) -> list[tuple[int, ...]]:
    n = len(dims)
    out = []
    used: set[int] = set()
    for g in groups:
        g = tuple(sorted({int(i) for i in g}))
        if not g:
            raise DimensionError("subsystem groups must be nonempty")
        if any(i < 0 or i >= n for i in g):
            raise DimensionError(f"group {g} out of range for {n} subsystems")
        if used & set(g):
            raise DimensionError("subsystem groups overlap")
        used |= set(g)
        out.append(g)
    return out


def _marginal_entropy(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> float:
    keep = tuple(sorted(keep))
    if len(keep) == len(dims):
        return von_neumann_entropy(m)
    return von_neumann_entropy(partial_trace(m, dims, keep))


def mutual_information(rho: DensityMatrix, cut) -> float:
    """``S(A) + S(B) - S(AB)`` for the groups ``cut = (a, b)``.

    Subsystems in neither group are traced out first.
    """
    a, b = _groups(rho.dims, *cut)
    m = rho.matrix
    return (_marginal_entropy(m, rho.dims, a) + _marginal_entropy(m, rho.dims, b)
            - _marginal_entropy(m, rho.dims, a + b))


def conditional_mutual_information(rho: DensityMatrix, parts) -> float:
    """``I(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C)`` for ``parts = (a, b, c)``."""
    a, b, c = _groups(rho.dims, *parts)
    m, dims = rho.matrix, rho.dims
    return (_marginal_entropy(m, dims, a + c) + _marginal_entropy(m, dims, b + c)
            - _marginal_entropy(m, dims, a + b + c) - _marginal_entropy(m, dims, c))


def rel_entropy_coherence(rho: DensityMatrix, targets: Iterable[int] | None = None) -> float:
    """Relative entropy of coherence ``S(Delta(rho)) - S(rho)``.

    ``targets`` selects the dephased subsystems (all by default).
    """
    return von_neumann_entropy(dephase(rho.matrix, rho.dims, targets)) - von_neumann_entropy(rho)


def is_incoherent_state(rho: DensityMatrix, targets: Iterable[int] | None = None,
                        tol: float = VALIDITY_TOL) -> bool:
    m = rho.matrix
    return bool(np.max(np.abs(m - dephase(m, rho.dims, targets))) <= tol)
