"""Kraus channels, coherence classification predicates and example channels.

All predicates reduce to finitely many matrix checks by linearity:

* MIO: ``Lambda(|i><i|)`` is diagonal for every basis projector.
* GIO: ``Lambda(|i><i|) = |i><i|`` for every basis projector.
* coherence non-activating, ``Delta o Lambda = Delta o Lambda o Delta``:
  compared on every matrix unit ``E_jk``.
* completely QDI non-generating: the projector images are themselves
  projectors ``|s(j)><s(j)|`` for a permutation ``s`` and undoing ``s``
  leaves a GIO channel.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .discord import qdi
from .linalg import (
    VALIDITY_TOL,
    DimensionError,
    as_matrix,
    dephase,
    ket,
    matrix_units,
    projector,
)
from .states import DensityMatrix, _rng, activation_state, random_unitary, validate_density


class ChannelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Channel ``rho -> sum_l K_l rho K_l^dag``; trace preservation is checked."""

    kraus: tuple[np.ndarray, ...]
    tol: float = field(default=VALIDITY_TOL, repr=False)

    def __post_init__(self):
        ks = tuple(as_matrix(k) for k in self.kraus)
        if not ks:
            raise ChannelError("need at least one Kraus operator")
        shape = ks[0].shape
        if any(k.shape != shape for k in ks):
            raise ChannelError("Kraus operators must share one shape")
        object.__setattr__(self, "kraus", ks)
        if not is_cptp(self, self.tol):
            raise ChannelError("Kraus operators are not trace preserving")

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, x) -> np.ndarray:
        return apply_matrix(self, x)


def is_cptp(ch: KrausChannel, tol: float = VALIDITY_TOL) -> bool:
    s = sum(k.conj().T @ k for k in ch.kraus)
    return bool(np.max(np.abs(s - np.eye(s.shape[0]))) <= tol)


def apply_matrix(ch: KrausChannel, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(f"channel input dimension {ch.dim_in}, got {x.shape}")
    return sum(k @ x @ k.conj().T for k in ch.kraus)


def apply(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    out = apply_matrix(ch, rho.matrix)
    dims = rho.dims if ch.dim_out == ch.dim_in else (ch.dim_out,)
    return validate_density(out, dims, rho.tol)


def apply_on_subsystem(ch: KrausChannel, rho: DensityMatrix, target: int) -> DensityMatrix:
    """Apply ``ch`` to subsystem ``target`` and the identity elsewhere."""
    dims = rho.dims
    n = len(dims)
    if not 0 <= target < n:
        raise DimensionError(f"target {target} out of range for {n} subsystems")
    if dims[target] != ch.dim_in:
        raise DimensionError(f"subsystem {target} has dimension {dims[target]}, channel expects {ch.dim_in}")
    left = int(np.prod(dims[:target]))
    right = int(np.prod(dims[target + 1:]))
    il, ir = np.eye(left), np.eye(right)
    m = rho.matrix
    out = sum(np.kron(np.kron(il, k), ir) @ m @ np.kron(np.kron(il, k), ir).conj().T for k in ch.kraus)
    new_dims = dims[:target] + (ch.dim_out,) + dims[target + 1:]
    return validate_density(out, new_dims, rho.tol)


def adjoint_apply(ch: KrausChannel, x) -> np.ndarray:
    """Heisenberg-picture map ``X -> sum_l K_l^dag X K_l``."""
    x = as_matrix(x)
    if x.shape != (ch.dim_out, ch.dim_out):
        raise DimensionError(f"adjoint input dimension {ch.dim_out}, got {x.shape}")
    return sum(k.conj().T @ x @ k for k in ch.kraus)


def compose(*channels: KrausChannel) -> KrausChannel:
    """``compose(f, g)`` applies ``g`` first, then ``f``."""
    out = channels[-1]
    for ch in reversed(channels[:-1]):
        if ch.dim_in != out.dim_out:
            raise DimensionError("channel dimensions do not chain")
        out = KrausChannel(tuple(a @ b for a in ch.kraus for b in out.kraus))
    return out


def _square(ch: KrausChannel) -> int:
    if ch.dim_in != ch.dim_out:
        raise DimensionError("predicate needs dim_in == dim_out")
    return ch.dim_in


def _projector_images(ch: KrausChannel) -> list[np.ndarray]:
    d = _square(ch)
    return [apply_matrix(ch, projector(ket(j, d))) for j in range(d)]


def coherence_activation_deviation(ch: KrausChannel) -> float:
    """``max_jk |Delta(Lambda(E_jk)) - Delta(Lambda(Delta(E_jk)))|``."""
    d = ch.dim_in
    worst = 0.0
    for _, _, e in matrix_units(d):
        lhs = dephase(apply_matrix(ch, e))
        rhs = dephase(apply_matrix(ch, dephase(e)))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def is_coherence_non_activating(ch: KrausChannel, tol: float = VALIDITY_TOL) -> bool:
    return coherence_activation_deviation(ch) <= tol


def is_mio(ch: KrausChannel, tol: float = VALIDITY_TOL) -> bool:
    return all(np.max(np.abs(img - np.diag(np.diag(img)))) <= tol for img in _projector_images(ch))


def is_gio(ch: KrausChannel, tol: float = VALIDITY_TOL) -> bool:
    d = _square(ch)
    return all(np.max(np.abs(img - projector(ket(j, d)))) <= tol
               for j, img in enumerate(_projector_images(ch)))


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Unitary with ``P|j> = |perm[j]>``."""
    d = len(perm)
    p = np.zeros((d, d), dtype=complex)
    p[list(perm), np.arange(d)] = 1.0
    return p


def is_completely_qdi_nongenerating(ch: KrausChannel, tol: float = VALIDITY_TOL):
    """Decide whether ``ch`` is GIO up to an incoherent unitary.

    Returns ``(True, perm)`` where ``Lambda(|j><j|) = |perm[j]><perm[j]|``,
    otherwise ``(False, None)``.
    """
    d = _square(ch)
    images = _projector_images(ch)
    perm = []
    for j, img in enumerate(images):
        s = int(np.argmax(np.real(np.diag(img))))
        if np.max(np.abs(img - projector(ket(s, d)))) > tol:
            return False, None
        perm.append(s)
    if sorted(perm) != list(range(d)):
        return False, None
    p = permutation_matrix(perm)
    undone = KrausChannel(tuple(p.conj().T @ k for k in ch.kraus), tol=max(tol, ch.tol))
    if not is_gio(undone, tol):
        return False, None
    return True, tuple(perm)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((as_matrix(u),))


def weyl_operators(d: int) -> list[np.ndarray]:
    """The ``d^2`` shift-and-clock operators ``X^a Z^b``, ``(a, b) = (0, 0)`` first."""
    x = np.roll(np.eye(d), 1, axis=0).astype(complex)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
            for a, b in itertools.product(range(d), repeat=2)]


def depolarizing(d: int, p: float) -> KrausChannel:
    """``rho -> p rho + (1 - p) tr(rho) 1/d`` from the Weyl operators."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter {p} outside [0, 1]")
    ops = weyl_operators(d)
    weights = [p + (1.0 - p) / d**2] + [(1.0 - p) / d**2] * (d * d - 1)
    return KrausChannel(tuple(np.sqrt(w) * w_op for w, w_op in zip(weights, ops) if w > 0))


def dephasing(d: int) -> KrausChannel:
    return KrausChannel(tuple(projector(ket(j, d)) for j in range(d)))


def mio_not_io_qutrit() -> KrausChannel:
    plus = (ket(0, 3) + ket(1, 3)) / np.sqrt(2)
    minus = (ket(0, 3) - ket(1, 3)) / np.sqrt(2)
    k0 = (np.outer(minus, ket(0, 3)) + np.outer(ket(1, 3), ket(1, 3))) / np.sqrt(2)
    k1 = (np.outer(plus, ket(0, 3)) + np.outer(ket(0, 3), ket(1, 3))) / np.sqrt(2)
    k2 = np.outer(ket(2, 3), ket(2, 3))
    return KrausChannel((k0, k1, k2))


LIBRARY = {
    "depolarizing": depolarizing,
    "dephasing": dephasing,
    "mio_not_io_qutrit": mio_not_io_qutrit,
    "identity": identity_channel,
}


def library_channel(name: str, *params) -> KrausChannel:
    try:
        factory = LIBRARY[name]
    except KeyError:
        raise KeyError(f"unknown channel {name!r}; choose from {sorted(LIBRARY)}") from None
    try:
        return factory(*params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name!r}: {exc}") from None


def random_channel(d_in: int, d_out: int | None = None, n_kraus: int = 2, seed=None) -> KrausChannel:
    """Random channel from a Haar isometry ``d_in -> d_out * n_kraus``."""
    d_out = d_in if d_out is None else d_out
    u = random_unitary(d_out * n_kraus, seed)[:, :d_in]
    return KrausChannel(tuple(u[l * d_out:(l + 1) * d_out] for l in range(n_kraus)))


def random_gio(d: int, n_kraus: int = 3, seed=None) -> KrausChannel:
    """Random GIO channel: diagonal Kraus operators renormalised to be trace preserving."""
    rng = _rng(seed)
    c = rng.standard_normal((n_kraus, d)) + 1j * rng.standard_normal((n_kraus, d))
    c /= np.sqrt(np.sum(np.abs(c) ** 2, axis=0))
    return KrausChannel(tuple(np.diag(row) for row in c))


def random_permutation_gio(d: int, n_kraus: int = 3, seed=None) -> tuple[KrausChannel, tuple[int, ...]]:
    """A random GIO channel followed by a random permutation unitary."""
    rng = _rng(seed)
    perm = tuple(int(i) for i in rng.permutation(d))
    ch = compose(unitary_channel(permutation_matrix(perm)), random_gio(d, n_kraus, rng))
    return ch, perm


def random_measure_prepare(d: int, n_kraus: int = 2, seed=None) -> KrausChannel:
    """Random channel composed after full dephasing; never activates coherence."""
    return compose(random_channel(d, d, n_kraus, seed), dephasing(d))


class ActivationResult(NamedTuple):
    qdi_before: float
    qdi_after: float
    state_after: DensityMatrix


def activation_expected_state(p: float) -> np.ndarray:
    """Closed form of the activation state after ``depolarizing(2, p)`` on A."""
    p00 = projector(np.kron(ket(0, 2), ket(0, 2)))
    psi = np.kron(ket(0, 2), ket(1, 2)) + np.kron(ket(1, 2), ket(0, 2))
    first = 0.5 * (p * p00 + (1 - p) * np.kron(np.eye(2) / 2, projector(ket(0, 2))))
    # psi is unnormalised (norm^2 = 2), so its depolarised part is (1-p) 1/2 (x) 1
    second = 0.25 * (p * projector(psi) + (1 - p) * np.eye(4) / 2)
    return np.kron(first, projector(ket(0, 2))) + np.kron(second, projector(ket(1, 2)))


def activation_demo(p: float, check_tol: float = 1e-12) -> ActivationResult:
    """Depolarise qubit A of the zero-QDI activation state and measure QDI on AA'."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p={p} outside (0, 1]")
    rho = activation_state()
    before = qdi(rho, (0, 1)).value
    after_state = apply_on_subsystem(depolarizing(2, p), rho, 0)
    expected = activation_expected_state(p)
    err = float(np.max(np.abs(after_state.matrix - expected)))
    if err > check_tol:
        raise RuntimeError(f"depolarised state deviates from closed form by {err:.3e}")
    return ActivationResult(before, qdi(after_state, (0, 1)).value, after_state)
