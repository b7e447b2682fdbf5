"""POVMs, the incoherence test and the coherent-measurement witness.

A POVM is *incoherent* (coherence non-activating) when every element is
diagonal in the computational basis. For such a POVM, any orthonormal basis
``{phi_a}`` and any injective pairing ``a -> j`` of basis vectors with
outcomes obeys::

    sum_a <phi_a| M_{j(a)} |phi_a>  <=  sum_i max_a |<phi_a|i>|^2

so a strictly positive ``lhs - rhs`` certifies that the POVM is coherent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.optimize import linear_sum_assignment

from .linalg import (
    VALIDITY_TOL,
    DimensionError,
    as_matrix,
    fourier_basis,
    hermitian_eig,
    partial_trace,
    permute_subsystems,
)
from .states import DensityMatrix, StateError, _rng, random_unitary, validate_density

# a witness violation above this is reported as a certificate
CERTIFY_THRESHOLD = 1e-6
NULL_OUTCOME = 1e-12


class NotIncoherent(ValueError):
    """The POVM has an element with off-diagonal entries."""


class PovmError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered POVM elements on a ``dim``-dimensional space."""

    elements: tuple[np.ndarray, ...]
    tol: float = field(default=VALIDITY_TOL, repr=False)

    def __post_init__(self):
        els = tuple(as_matrix(e) for e in self.elements)
        if not els:
            raise PovmError("a POVM needs at least one element")
        d = els[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for k, e in enumerate(els):
            if e.shape != (d, d):
                raise PovmError(f"element {k} has shape {e.shape}, expected {(d, d)}")
            if np.max(np.abs(e - e.conj().T)) > self.tol:
                raise PovmError(f"element {k} is not Hermitian")
            w, _ = hermitian_eig(e, tol=self.tol, vectors=False)
            if w[-1] < -self.tol:
                raise PovmError(f"element {k} has negative eigenvalue {w[-1]:.3e}")
            total += e
        if np.max(np.abs(total - np.eye(d))) > self.tol:
            raise PovmError("elements do not sum to the identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k) -> np.ndarray:
        return self.elements[k]

    def padded(self, n: int) -> np.ndarray:
        """Elements stacked into an ``(max(n, N), d, d)`` array, zero padded."""
        d = self.dim
        out = np.zeros((max(n, self.n_outcomes), d, d), dtype=complex)
        out[: self.n_outcomes] = np.stack(self.elements)
        return out


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Basis vectors stored as the columns of a unitary matrix."""

    vectors: np.ndarray
    tol: float = field(default=VALIDITY_TOL, repr=False)

    def __post_init__(self):
        v = as_matrix(self.vectors)
        if v.shape[0] != v.shape[1]:
            raise ValueError(f"need d vectors of length d, got shape {v.shape}")
        if np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))) > self.tol:
            raise ValueError("vectors are not orthonormal")
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, a) -> np.ndarray:
        return self.vectors[:, a]

    @classmethod
    def computational(cls, d: int) -> "OrthonormalBasis":
        return cls(np.eye(d, dtype=complex))

    @classmethod
    def fourier(cls, d: int) -> "OrthonormalBasis":
        return cls(fourier_basis(d))


@dataclass(frozen=True)
class WitnessReport:
    lhs: float
    rhs: float
    basis: OrthonormalBasis = field(repr=False)
    assignment: tuple[int, ...]

    @property
    def violation(self) -> float:
        return self.lhs - self.rhs

    @property
    def certified(self) -> bool:
        return self.violation > CERTIFY_THRESHOLD


def computational_povm(d: int) -> Povm:
    return Povm(tuple(np.diag(np.eye(d)[k]).astype(complex) for k in range(d)))


def povm_from_kernel(kernel) -> Povm:
    """Incoherent POVM ``M_j = sum_k kernel[j, k] |k><k|`` from a column-stochastic kernel."""
    kernel = np.asarray(kernel, dtype=float)
    return Povm(tuple(np.diag(row).astype(complex) for row in kernel))


def measure(rho: DensityMatrix, m: Povm) -> np.ndarray:
    """Outcome probabilities ``tr(rho M_j)``."""
    if m.dim != rho.dim:
        raise DimensionError(f"POVM acts on dimension {m.dim}, state has {rho.dim}")
    p = np.array([np.trace(rho.matrix @ e).real for e in m])
    if p.min() < -max(m.tol, rho.tol):
        raise ValueError(f"negative probability {p.min():.3e}")
    return np.clip(p, 0.0, None)


def is_incoherent(m: Povm, tol: float = VALIDITY_TOL) -> tuple[bool, float]:
    """Whether every element is diagonal, and the largest off-diagonal magnitude."""
    worst = 0.0
    for e in m:
        off = np.abs(e - np.diag(np.diag(e)))
        worst = max(worst, float(off.max(initial=0.0)))
    return worst <= tol, worst


class ParentMeasurement(NamedTuple):
    parent: Povm
    kernel: np.ndarray
    projector_kernel: np.ndarray


def parent_measurement(m: Povm, tol: float = VALIDITY_TOL) -> ParentMeasurement:
    """Common parent of ``m`` and the computational projective measurement.

    The parent is the projective measurement itself; ``kernel[j, k]`` is the
    probability of reporting outcome ``j`` of ``m`` given parent outcome
    ``k`` and the projector kernel is the identity. Coherent POVMs have no
    such parent and raise :class:`NotIncoherent`.
    """
    ok, worst = is_incoherent(m, tol)
    if not ok:
        raise NotIncoherent(f"largest off-diagonal entry {worst:.3e} exceeds {tol:.1e}")
    kernel = np.array([np.real(np.diag(e)) for e in m])
    kernel = np.clip(kernel, 0.0, None)
    return ParentMeasurement(computational_povm(m.dim), kernel, np.eye(m.dim))


def random_stochastic_kernel(n: int, d: int, seed=None) -> np.ndarray:
    """``n x d`` matrix whose columns are independent flat-Dirichlet distributions."""
    rng = _rng(seed)
    return rng.dirichlet(np.ones(n), size=d).T


def random_incoherent_povm(d: int, n_outcomes: int | None = None, seed=None) -> Povm:
    """Random diagonal POVM; ``n_outcomes`` defaults to a draw from ``2..2d``."""
    rng = _rng(seed)
    n = int(rng.integers(2, 2 * d + 1)) if n_outcomes is None else n_outcomes
    return povm_from_kernel(random_stochastic_kernel(n, d, rng))


def noisy_projective(basis: OrthonormalBasis, lam: float) -> Povm:
    """``lam |phi_a><phi_a| + (1 - lam)/d * 1`` for each basis vector."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"noise parameter {lam} outside [0, 1]")
    d = basis.dim
    els = []
    for a in range(d):
        phi = basis[a]
        els.append(lam * np.outer(phi, phi.conj()) + (1.0 - lam) / d * np.eye(d))
    return Povm(tuple(els))


def _scores(elements: np.ndarray, u: np.ndarray) -> np.ndarray:
    # scores[a, j] = <phi_a| M_j |phi_a>
    return np.einsum("ia,jik,ka->aj", u.conj(), elements, u).real


def _rhs(u: np.ndarray) -> float:
    return float(np.sum(np.max(np.abs(u) ** 2, axis=1)))


def witness_value(m: Povm, basis: OrthonormalBasis, assignment: Sequence[int]) -> WitnessReport:
    """Evaluate both sides of the witness for one basis and pairing.

    ``assignment[a]`` is the outcome paired with basis vector ``a``. When
    the POVM has fewer outcomes than the dimension, indices ``>= n`` refer
    to zero padding elements.
    """
    d = basis.dim
    if m.dim != d:
        raise DimensionError(f"POVM dimension {m.dim} differs from basis dimension {d}")
    assignment = tuple(int(j) for j in assignment)
    size = max(d, m.n_outcomes)
    if len(assignment) != d:
        raise ValueError(f"assignment needs {d} entries, got {len(assignment)}")
    if len(set(assignment)) != d or any(j < 0 or j >= size for j in assignment):
        raise ValueError(f"assignment {assignment} is not injective into {size} outcomes")
    scores = _scores(m.padded(d), basis.vectors)
    lhs = float(sum(scores[a, j] for a, j in enumerate(assignment)))
    return WitnessReport(lhs, _rhs(basis.vectors), basis, assignment)


def best_assignment(m: Povm, basis: OrthonormalBasis) -> WitnessReport:
    """Exact best pairing for a fixed basis (rectangular linear assignment)."""
    scores = _scores(m.padded(basis.dim), basis.vectors)
    rows, cols = linear_sum_assignment(scores, maximize=True)
    assignment = tuple(int(c) for c in cols[np.argsort(rows)])
    return witness_value(m, basis, assignment)


def _violation(elements: np.ndarray, u: np.ndarray) -> float:
    s = _scores(elements, u)
    rows, cols = linear_sum_assignment(s, maximize=True)
    return float(s[rows, cols].sum()) - _rhs(u)


def _random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = g + g.conj().T
    return h / np.linalg.norm(h)


def _local_search(elements, u, rng, steps, step_max, step_min):
    best = _violation(elements, u)
    d = u.shape[0]
    for k in range(steps):
        eps = step_max * (step_min / step_max) ** (k / max(steps - 1, 1))
        cand = u @ expm(1j * eps * _random_hermitian(d, rng))
        val = _violation(elements, cand)
        if val > best:
            u, best = cand, val
    return u, best


def optimize_witness(m: Povm, restarts: int = 20, seed=0, steps: int = 200,
                     step_max: float = 0.3, step_min: float = 1e-4) -> WitnessReport:
    """Search bases for the largest witness violation.

    Start 0 is the Fourier basis (unbiased with the computational basis);
    starts ``1..restarts`` are Haar-random. Each start is refined by an
    annealed random walk ``U <- U exp(i eps H)`` that only accepts
    improvements, and every candidate basis gets its exact best pairing.
    The best start wins, ties going to the lowest index. Zero violation
    means nothing was found, not that ``m`` is incoherent.
    """
    d = m.dim
    elements = m.padded(d)
    children = np.random.SeedSequence(seed).spawn(restarts + 1)
    best_u, best_val = None, -np.inf
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        u0 = fourier_basis(d) if k == 0 else random_unitary(d, rng)
        u, val = _local_search(elements, u0, rng, steps, step_max, step_min)
        if val > best_val:
            best_u, best_val = u, val
    # re-orthonormalise accumulated rounding before wrapping
    q, r = np.linalg.qr(best_u)
    best_u = q * (np.diag(r) / np.abs(np.diag(r)))
    return best_assignment(m, OrthonormalBasis(best_u))


class Conditional(NamedTuple):
    prob: float
    state: DensityMatrix | None


def _a_first(rho: DensityMatrix, a_cut: Sequence[int]):
    n = rho.n_subsystems
    a = tuple(sorted({int(i) for i in a_cut}))
    if not a or any(i < 0 or i >= n for i in a):
        raise DimensionError(f"bad cut {a_cut} for {n} subsystems")
    b = tuple(i for i in range(n) if i not in a)
    if not b:
        raise DimensionError("the cut leaves nothing on the B side")
    da = int(np.prod([rho.dims[i] for i in a]))
    dims_b = tuple(rho.dims[i] for i in b)
    m = permute_subsystems(rho.matrix, rho.dims, a + b)
    return m, da, dims_b


def conditional_states(rho: DensityMatrix, m: Povm, a_cut: Sequence[int] = (0,)) -> list[Conditional]:
    """Outcome probabilities and post-measurement states of B for ``m`` on A.

    ``a_cut`` lists the subsystems forming A; the rest form B. Outcomes with
    probability below ``1e-12`` carry ``state=None``.
    """
    mat, da, dims_b = _a_first(rho, a_cut)
    if m.dim != da:
        raise DimensionError(f"POVM dimension {m.dim} differs from A dimension {da}")
    db = int(np.prod(dims_b))
    out = []
    for e in m:
        x = np.kron(e, np.eye(db)) @ mat
        p = float(np.trace(x).real)
        if p < NULL_OUTCOME:
            out.append(Conditional(max(p, 0.0), None))
            continue
        sub = partial_trace(x, (da, db), (1,)) / p
        sub = 0.5 * (sub + sub.conj().T)
        # rounding in the unnormalised block grows as 1/p
        tol = max(rho.tol, 1e-13 / p)
        try:
            out.append(Conditional(p, validate_density(sub, dims_b, tol)))
        except StateError as exc:
            raise ValueError(f"conditional state for outcome with p={p:.3e} is invalid: {exc}") from None
    return out
