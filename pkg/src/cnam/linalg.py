"""Dense complex linear algebra on small multipartite operators.

Matrices are plain ``numpy`` complex arrays. A *dims* vector lists the
subsystem dimensions, leftmost tensor factor first (row-major Kronecker
ordering), so ``dims=(2, 3)`` labels a qubit-qutrit operator of size 6.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from numba import njit

VALIDITY_TOL = 1e-9
SOLVER_TOL = 1e-12

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class DimensionError(ValueError):
    """Operator size does not agree with the subsystem dimensions."""


class NotHermitianError(ValueError):
    pass


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    return a


def check_dims(dims: Iterable[int], size: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid dims {dims}")
    if size is not None and int(np.prod(dims)) != size:
        raise DimensionError(f"dims {dims} do not multiply to {size}")
    return dims


def _check_subsystems(idx: Iterable[int], n: int, what: str) -> tuple[int, ...]:
    out = tuple(sorted({int(i) for i in idx}))
    if any(i < 0 or i >= n for i in out):
        raise DimensionError(f"{what} {out} out of range for {n} subsystems")
    return out


def is_hermitian(m, tol: float = VALIDITY_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def is_psd(m, tol: float = VALIDITY_TOL) -> bool:
    if not is_hermitian(m, tol):
        return False
    w, _ = hermitian_eig(m, tol=tol)
    return bool(w[-1] >= -tol)


def is_identity(m, tol: float = VALIDITY_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - np.eye(m.shape[0]))) <= tol)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def tensor_product(*ops) -> np.ndarray:
    """Kronecker product of any number of matrices (left factor = subsystem 0)."""
    if not ops:
        raise ValueError("tensor_product needs at least one operand")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


def permute_subsystems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new subsystem ``k`` is old subsystem ``order[k]``."""
    m = as_matrix(m)
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    order = [int(i) for i in order]
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{order} is not a permutation of {n} subsystems")
    t = m.reshape(dims + dims).transpose(order + [n + i for i in order])
    size = m.shape[0]
    return t.reshape(size, size)


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not in ``keep``.

    The kept subsystems appear in increasing index order in the result.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("partial_trace needs a square matrix")
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    keep = _check_subsystems(keep, n, "keep")
    if not keep:
        raise DimensionError("keep must be nonempty")
    if 2 * n > len(_LETTERS):
        raise DimensionError("too many subsystems")
    row = list(_LETTERS[:n])
    col = [row[i] if i not in keep else _LETTERS[n + i] for i in range(n)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    subscripts = "".join(row) + "".join(col) + "->" + "".join(out)
    dk = int(np.prod([dims[i] for i in keep]))
    return np.einsum(subscripts, m.reshape(dims + dims)).reshape(dk, dk)


def dephase(m, dims: Sequence[int] | None = None, targets: Iterable[int] | None = None) -> np.ndarray:
    """Completely dephase the ``targets`` subsystems in the computational basis.

    Zeroes every entry whose row and column indices differ on a targeted
    subsystem. With ``targets=None`` every subsystem is dephased, leaving
    only the diagonal.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("dephase needs a square matrix")
    if dims is None:
        dims = (m.shape[0],)
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    targets = range(n) if targets is None else targets
    targets = _check_subsystems(targets, n, "targets")
    mask = np.ones(dims + dims)
    for t in targets:
        shape = [1] * (2 * n)
        shape[t] = shape[n + t] = dims[t]
        mask = mask * np.eye(dims[t]).reshape(shape)
    size = m.shape[0]
    return (m.reshape(dims + dims) * mask).reshape(size, size)


@njit(cache=True)
def _jacobi_sweeps(a, v, want_vectors, threshold, max_sweeps):
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) < threshold:
            return True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / abs(theta)
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # columns (p, q) times G = [[c, s], [-s*conj(e), c*conj(e)]], e = phase of a_pq
                sp = s * phase.conjugate()
                cp = c * phase.conjugate()
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - sp * y
                    a[k, q] = s * x + cp * y
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - sp.conjugate() * y
                    a[q, k] = s * x + cp.conjugate() * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - sp * y
                        v[k, q] = s * x + cp * y
    off = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off += a[i, j].real ** 2 + a[i, j].imag ** 2
    return np.sqrt(off) < threshold


def hermitian_eig(h, tol: float = VALIDITY_TOL, conv_tol: float = SOLVER_TOL,
                  max_sweeps: int = 100, vectors: bool = True):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` in descending order and the
    matching orthonormal eigenvectors as the columns of ``v`` (``None`` when
    ``vectors=False``). Sweeps stop once the off-diagonal Frobenius norm
    drops below ``conv_tol`` (scaled by the matrix norm when that exceeds 1).
    """
    a = as_matrix(h)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError("hermitian_eig needs a square matrix")
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.max(np.abs(a - a.conj().T), initial=0.0) > tol * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    a = np.ascontiguousarray(0.5 * (a + a.conj().T))
    v = np.eye(n, dtype=complex)
    if not _jacobi_sweeps(a, v, vectors, conv_tol * scale, max_sweeps):
        raise np.linalg.LinAlgError("Jacobi iteration did not converge")
    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], (v[:, order] if vectors else None)


def eigvalsh(h, tol: float = VALIDITY_TOL) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    return hermitian_eig(h, tol=tol, vectors=False)[0]


def fourier_basis(d: int) -> np.ndarray:
    """Columns are the discrete Fourier basis, mutually unbiased with the standard basis."""
    i, a = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * i * a / d) / np.sqrt(d)


def matrix_units(d: int):
    """Yield ``(j, k, E_jk)`` for all matrix units of a ``d``-dimensional space."""
    for j in range(d):
        for k in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = 1.0
            yield j, k, e
