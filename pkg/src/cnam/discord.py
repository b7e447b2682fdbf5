"""Discord with incoherent measurements on A (QDI).

The best incoherent measurement on A is always the computational-basis
projective one, so QDI has three closed forms, each evaluated by a
different numerical route:

* ``sum_i p_i S(rho_B|i) + S(rho_A) - S(rho_AB)`` (conditional states),
* ``I(rho_AB) - I(rho_~AB)`` with A dephased (global entropies),
* ``C_r(rho_AB) - C_r(rho_~AB) - C_r(rho_A)`` (coherence differences).

:func:`qdi` computes all three and fails loudly if they disagree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .info import conditional_mutual_information, mutual_information, rel_entropy_coherence, von_neumann_entropy
from .linalg import DimensionError, dephase, partial_trace
from .measurement import Povm, computational_povm, conditional_states, random_incoherent_povm
from .states import DensityMatrix, _rng, validate_density

CONSISTENCY_TOL = 1e-8


class QdiConsistencyError(RuntimeError):
    """The independent QDI formulas disagree; this is a numerics bug."""


@dataclass(frozen=True)
class QdiReport:
    qdi_projective: float
    qdi_mutinf: float
    qdi_coherence: float
    j_incoherent: float

    @property
    def value(self) -> float:
        return self.qdi_mutinf

    @property
    def max_discrepancy(self) -> float:
        v = (self.qdi_projective, self.qdi_mutinf, self.qdi_coherence)
        return max(v) - min(v)

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class MonogamyReport:
    gap: float
    gap_cmi: float

    @property
    def discrepancy(self) -> float:
        return abs(self.gap - self.gap_cmi)

    def __float__(self) -> float:
        return self.gap


def _split(rho: DensityMatrix, a_cut) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = rho.n_subsystems
    a = tuple(sorted({int(i) for i in a_cut}))
    if not a or any(i < 0 or i >= n for i in a):
        raise DimensionError(f"bad cut {tuple(a_cut)} for {n} subsystems")
    b = tuple(i for i in range(n) if i not in a)
    if not b:
        raise DimensionError("the cut leaves nothing on the B side")
    return a, b


def marginal(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    keep = tuple(sorted({int(i) for i in keep}))
    if len(keep) == rho.n_subsystems:
        return rho
    m = partial_trace(rho.matrix, rho.dims, keep)
    return validate_density(m, tuple(rho.dims[i] for i in keep), rho.tol)


def dephase_state(rho: DensityMatrix, targets: Sequence[int] | None = None) -> DensityMatrix:
    return validate_density(dephase(rho.matrix, rho.dims, targets), rho.dims, rho.tol)


def average_conditional_entropy(rho: DensityMatrix, m: Povm, a_cut: Sequence[int] = (0,)) -> float:
    """``sum_mu p_mu S(rho_B|mu)`` for the POVM ``m`` on A; null outcomes add nothing."""
    return sum(c.prob * von_neumann_entropy(c.state) for c in conditional_states(rho, m, a_cut)
               if c.state is not None)


def _projective_average(rho: DensityMatrix, a: tuple[int, ...]) -> float:
    da = int(np.prod([rho.dims[i] for i in a]))
    return average_conditional_entropy(rho, computational_povm(da), a)


def incoherent_correlation(rho: DensityMatrix, a_cut: Sequence[int] = (0,)) -> float:
    """Information about B gained by the best incoherent measurement on A."""
    a, b = _split(rho, a_cut)
    return von_neumann_entropy(marginal(rho, b)) - _projective_average(rho, a)


def qdi(rho: DensityMatrix, a_cut: Sequence[int] = (0,), consistency_tol: float = CONSISTENCY_TOL) -> QdiReport:
    """QDI of ``rho`` with A given by the subsystems in ``a_cut``."""
    a, b = _split(rho, a_cut)
    s_ab = von_neumann_entropy(rho)
    rho_a = marginal(rho, a)
    s_a = von_neumann_entropy(rho_a)
    cond = _projective_average(rho, a)
    j_inc = von_neumann_entropy(marginal(rho, b)) - cond

    q1 = cond + s_a - s_ab

    rho_t = dephase_state(rho, a)
    q2 = mutual_information(rho, (a, b)) - mutual_information(rho_t, (a, b))

    q3 = rel_entropy_coherence(rho) - rel_entropy_coherence(rho_t) - rel_entropy_coherence(rho_a)

    report = QdiReport(q1, q2, q3, j_inc)
    if report.max_discrepancy > consistency_tol:
        raise QdiConsistencyError(f"QDI formulas disagree: {q1!r}, {q2!r}, {q3!r}")
    return report


def qdi_value(rho: DensityMatrix, a_cut: Sequence[int] = (0,)) -> float:
    return qdi(rho, a_cut).value


def monogamy_gap(rho: DensityMatrix, parts=((0,), (1,), (2,)),
                 consistency_tol: float = CONSISTENCY_TOL) -> MonogamyReport:
    """``D_{B|A} + D_{B'|A} - D_{BB'|A}`` for ``parts = (A, B, B')``.

    Also evaluated as ``I(B:B'|~A) - I(B:B'|A)`` with A dephased; the two
    must agree within ``consistency_tol``.
    """
    a, b, b2 = (tuple(sorted({int(i) for i in p})) for p in parts)
    n = rho.n_subsystems
    groups = a + b + b2
    if len(set(groups)) != len(groups) or any(i < 0 or i >= n for i in groups) or not (a and b and b2):
        raise DimensionError(f"bad partition {parts} for {n} subsystems")

    def d_on(keep_b):
        keep = tuple(sorted(a + keep_b))
        sub = marginal(rho, keep)
        return qdi(sub, [keep.index(i) for i in a]).value

    gap = d_on(b) + d_on(b2) - d_on(b + b2)
    rho_t = dephase_state(rho, a)
    gap_cmi = (conditional_mutual_information(rho_t, (b, b2, a))
               - conditional_mutual_information(rho, (b, b2, a)))
    report = MonogamyReport(gap, gap_cmi)
    if report.discrepancy > consistency_tol:
        raise QdiConsistencyError(f"monogamy gap routes disagree: {gap!r} vs {gap_cmi!r}")
    return report


def qdi_povm_oracle(rho: DensityMatrix, a_cut: Sequence[int] = (0,), samples: int = 100, seed=0) -> float:
    """Smallest ``sum_mu p_mu S(rho_B|mu)`` over random incoherent POVMs on A.

    Each sample draws an outcome count from ``2..2 d_A`` and a random
    column-stochastic kernel over the computational projectors. Used to
    check that no incoherent POVM beats the projective measurement.
    """
    a, _ = _split(rho, a_cut)
    da = int(np.prod([rho.dims[i] for i in a]))
    rng = _rng(seed)
    best = np.inf
    for _ in range(samples):
        best = min(best, average_conditional_entropy(rho, random_incoherent_povm(da, seed=rng), a))
    return float(best)
