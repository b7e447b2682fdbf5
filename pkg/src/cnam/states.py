"""Density matrices, named example states and seeded random sampling."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    VALIDITY_TOL,
    DimensionError,
    as_matrix,
    check_dims,
    hermitian_eig,
    ket,
    projector,
    tensor_product,
)


class StateError(ValueError):
    """A matrix failed density-matrix validation."""

    invariant = "state"


class NotHermitian(StateError):
    invariant = "hermitian"


class NotPSD(StateError):
    invariant = "positive semidefinite"

    def __init__(self, min_eigenvalue: float):
        super().__init__(f"matrix is not PSD: most negative eigenvalue {min_eigenvalue:.3e}")
        self.min_eigenvalue = min_eigenvalue


class TraceNotOne(StateError):
    invariant = "unit trace"


class DimMismatch(StateError, DimensionError):
    invariant = "dimensions"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state together with its subsystem dimensions.

    Build instances through :func:`validate_density`; the constructor does
    not check anything.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    tol: float = field(default=VALIDITY_TOL)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims})"


def validate_density(m, dims: Sequence[int] | None = None, tol: float = VALIDITY_TOL) -> DensityMatrix:
    """Check ``m`` is a density matrix on ``dims`` and wrap it.

    Raises a :class:`StateError` subclass naming the violated invariant.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimMismatch(f"matrix of shape {m.shape} is not square")
    if dims is None:
        dims = (m.shape[0],)
    try:
        dims = check_dims(dims, m.shape[0])
    except DimensionError as exc:
        raise DimMismatch(str(exc)) from None
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise NotHermitian("matrix is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace is {tr:.12g}")
    w, _ = hermitian_eig(m, tol=tol, vectors=False)
    if w[-1] < -tol:
        raise NotPSD(float(w[-1]))
    m = 0.5 * (m + m.conj().T)
    m.setflags(write=False)
    return DensityMatrix(m, dims, tol)


def as_state(rho, dims: Sequence[int] | None = None, tol: float = VALIDITY_TOL) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        if dims is not None and tuple(dims) != rho.dims:
            return validate_density(rho.matrix, dims, tol)
        return rho
    return validate_density(rho, dims, tol)


def pure_state(psi, dims: Sequence[int] | None = None, tol: float = VALIDITY_TOL) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return validate_density(projector(psi), dims, tol)


_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def _basis_ket(bits: str, d: int = 2) -> np.ndarray:
    return tensor_product(*(ket(int(b), d) for b in bits)).ravel()


def max_ent_pm() -> DensityMatrix:
    psi = (np.kron(_PLUS, ket(0, 2)) + np.kron(_MINUS, ket(1, 2))) / np.sqrt(2)
    return pure_state(psi, (2, 2))


def ghz() -> DensityMatrix:
    return pure_state(_basis_ket("000") + _basis_ket("111"), (2, 2, 2))


def w_state() -> DensityMatrix:
    return pure_state(_basis_ket("001") + _basis_ket("010") + _basis_ket("100"), (2, 2, 2))


def activation_state() -> DensityMatrix:
    """Three-qubit A, A', B state with zero discord on the AA' cut.

    ``1/2 |000><000| + 1/4 (|01>+|10>)(<01|+<10|) (x) |1><1|``
    """
    psi = _basis_ket("01") + _basis_ket("10")
    m = 0.5 * projector(_basis_ket("000")) + 0.25 * np.kron(projector(psi), projector(ket(1, 2)))
    return validate_density(m, (2, 2, 2))


def prop2_witness(d: int, vectors=None) -> DensityMatrix:
    """``(1/d) sum_j |j><j| (x) |phi_j><phi_j| (x) |j><j|`` on A, A', B.

    ``vectors`` holds the ``phi_j`` as the ``d`` columns of a ``d' x d``
    array and each is normalised. They should be linearly independent with
    overlapping diagonal supports. The default is ``phi_0 = |0>`` and
    ``phi_j = (|0> + |j>)/sqrt(2)`` on a ``d``-dimensional A'.
    """
    d = int(d)
    if d < 2:
        raise ValueError("d must be at least 2")
    if vectors is None:
        phis = np.eye(d, dtype=complex)
        phis[0, 1:] = 1.0
    else:
        phis = as_matrix(vectors)
    if phis.shape[1] != d:
        raise ValueError(f"expected {d} vectors, got {phis.shape[1]}")
    da = phis.shape[0]
    m = np.zeros((d * da * d, d * da * d), dtype=complex)
    for j in range(d):
        phi = phis[:, j] / np.linalg.norm(phis[:, j])
        pj = projector(ket(j, d))
        m += tensor_product(pj, projector(phi), pj) / d
    return validate_density(m, (d, da, d))


NAMED_STATES = {
    "max_ent_pm": max_ent_pm,
    "ghz": ghz,
    "w": w_state,
    "activation": activation_state,
    "prop2_witness": prop2_witness,
}


def named_state(name: str, *params) -> DensityMatrix:
    try:
        factory = NAMED_STATES[name]
    except KeyError:
        raise KeyError(f"unknown state {name!r}; choose from {sorted(NAMED_STATES)}") from None
    try:
        return factory(*params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name!r}: {exc}") from None


def diagonal_support(m, tol: float = VALIDITY_TOL) -> frozenset[int]:
    return frozenset(np.flatnonzero(np.real(np.diag(as_matrix(m))) > tol).tolist())


def build_zero_qdi_state(components, tol: float = VALIDITY_TOL) -> DensityMatrix:
    """Mixture ``sum_j w_j rho_A^j (x) rho_B^j`` with zero discord on A.

    ``components`` is a sequence of ``(rho_A, rho_B, weight)``. The A parts
    must have pairwise disjoint diagonal supports, which is exactly when an
    incoherent measurement tells them apart perfectly.
    """
    components = list(components)
    if not components:
        raise ValueError("need at least one component")
    weights = np.array([float(c[2]) for c in components])
    if np.any(weights < -tol) or abs(weights.sum() - 1.0) > tol:
        raise ValueError(f"weights {weights.tolist()} are not a probability distribution")
    parts_a = [as_state(c[0]) for c in components]
    parts_b = [as_state(c[1]) for c in components]
    if len({p.dim for p in parts_a}) != 1 or len({p.dim for p in parts_b}) != 1:
        raise DimMismatch("all components must share the same dimensions")
    seen: set[int] = set()
    for k, (p, w) in enumerate(zip(parts_a, weights)):
        if w <= tol:
            continue
        supp = diagonal_support(p.matrix, tol)
        if seen & supp:
            raise ValueError(f"component {k} overlaps earlier diagonal supports on {sorted(seen & supp)}")
        seen |= supp
    m = sum(w * np.kron(a.matrix, b.matrix) for a, b, w in zip(parts_a, parts_b, weights))
    return validate_density(m, parts_a[0].dims + parts_b[0].dims)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def ginibre(d: int, seed=None, cols: int | None = None) -> np.ndarray:
    rng = _rng(seed)
    cols = d if cols is None else cols
    return rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))


def random_density(d: int | Sequence[int], seed=None) -> DensityMatrix:
    """Hilbert-Schmidt random state. ``d`` may be a dims vector."""
    dims = (d,) if np.isscalar(d) else tuple(d)
    n = int(np.prod(dims))
    if n < 2:
        raise ValueError("dimension must be at least 2")
    g = ginibre(n, seed)
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, dims)


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar random unitary from a QR factorisation with phase-fixed diagonal."""
    if d < 1:
        raise ValueError("dimension must be positive")
    q, r = np.linalg.qr(ginibre(d, seed))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure(d: int | Sequence[int], seed=None) -> DensityMatrix:
    dims = (d,) if np.isscalar(d) else tuple(d)
    return pure_state(ginibre(int(np.prod(dims)), seed, cols=1), dims)


def random_incoherent_unitary(d: int, seed=None) -> np.ndarray:
    """Permutation matrix with random phases."""
    rng = _rng(seed)
    perm = rng.permutation(d)
    u = np.zeros((d, d), dtype=complex)
    u[perm, np.arange(d)] = np.exp(2j * np.pi * rng.random(d))
    return u
