import numpy as np
import pytest
from numpy.testing import assert_allclose

from cnam import channels as chn
from cnam.discord import incoherent_correlation, qdi
from cnam.linalg import dephase, ket, matrix_units, projector
from cnam.states import (
    activation_state,
    build_zero_qdi_state,
    prop2_witness,
    pure_state,
    random_density,
    random_incoherent_unitary,
    random_unitary,
)


def test_identity_and_unitary_apply():
    rho = random_density(3, 1)
    assert_allclose(chn.apply(chn.identity_channel(3), rho).matrix, rho.matrix)
    u = random_unitary(3, 2)
    assert_allclose(chn.apply(chn.unitary_channel(u), rho).matrix, u @ rho.matrix @ u.conj().T, atol=1e-14)


def test_not_cptp_rejected():
    with pytest.raises(chn.ChannelError):
        chn.KrausChannel((np.eye(2) * 0.9,))


def test_adjoint_duality():
    for seed in range(10):
        ch = chn.random_channel(3, 2, 3, seed)
        rho = random_density(3, seed).matrix
        x = random_density(2, seed + 50).matrix
        lhs = np.trace(x @ chn.apply_matrix(ch, rho))
        rhs = np.trace(chn.adjoint_apply(ch, x) @ rho)
        assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_depolarizing_closed_form(d, p):
    ch = chn.depolarizing(d, p)
    for seed in range(5):
        rho = random_density(d, seed).matrix
        assert np.max(np.abs(ch(rho) - (p * rho + (1 - p) * np.eye(d) / d))) < 1e-10


def test_weyl_operators_orthogonal():
    ops = chn.weyl_operators(3)
    gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
    assert_allclose(gram, 3 * np.eye(9), atol=1e-12)


def test_compose_order():
    x = chn.unitary_channel(np.array([[0, 1], [1, 0]]))
    z_dep = chn.dephasing(2)
    plus = projector([1, 1]) / 2
    assert_allclose(chn.compose(x, z_dep)(plus), np.eye(2) / 2)
    assert_allclose(chn.compose(z_dep, x)(projector([1, 0])), np.diag([0, 1]))


def coherence_activation_oracle(ch, d):
    """Direct check of Delta o L = Delta o L o Delta on every matrix unit, with explicit loops."""
    worst = 0.0
    for j in range(d):
        for k in range(d):
            e = np.outer(ket(j, d), ket(k, d))
            lhs = np.diag(np.diag(ch(e)))
            rhs = np.diag(np.diag(ch(e if j == k else np.zeros((d, d)))))
            worst = max(worst, np.max(np.abs(lhs - rhs)))
    return worst


def test_coherence_non_activating_examples():
    assert chn.is_coherence_non_activating(chn.identity_channel(2))
    assert chn.is_coherence_non_activating(chn.depolarizing(2, 0.5))
    assert chn.is_coherence_non_activating(chn.dephasing(3))
    h = chn.unitary_channel(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert not chn.is_coherence_non_activating(h)
    assert coherence_activation_oracle(h, 2) == pytest.approx(0.5)


def test_coherence_predicate_matches_oracle():
    for seed in range(20):
        ch = chn.random_channel(3, 3, 2, seed)
        assert chn.coherence_activation_deviation(ch) == pytest.approx(coherence_activation_oracle(ch, 3), abs=1e-14)


def test_matrix_units_span():
    units = list(matrix_units(2))
    assert len(units) == 4
    assert_allclose(sum(e for _, _, e in units), np.ones((2, 2)))


def test_mio_not_io_qutrit_panel():
    q = chn.mio_not_io_qutrit()
    assert chn.is_cptp(q) and chn.is_mio(q)
    assert not chn.is_gio(q)
    assert chn.is_completely_qdi_nongenerating(q) == (False, None)
    assert_allclose(q(projector(ket(0, 3))), np.diag([0.5, 0.5, 0]), atol=1e-15)
    assert_allclose(q(projector(ket(1, 3))), np.diag([0.5, 0.5, 0]), atol=1e-15)
    assert_allclose(q(projector(ket(2, 3))), np.diag([0, 0, 1]), atol=1e-15)


def test_qutrit_channel_creates_no_qdi():
    q = chn.mio_not_io_qutrit()
    rng = np.random.default_rng(21)
    for seed in range(30):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        a0 = np.zeros((3, 3), dtype=complex)
        a0[:2, :2] = np.outer(v, v.conj())
        w = float(rng.uniform(0.1, 0.9))
        rho = build_zero_qdi_state([(a0, random_density(2, rng), w),
                                    (np.diag([0, 0, 1]), random_density(2, rng), 1 - w)])
        assert qdi(chn.apply_on_subsystem(q, rho, 0)).value <= 1e-9
        iq = chn.apply_on_subsystem(chn.dephasing(3), random_density((3, 2), seed), 0)
        assert qdi(chn.apply_on_subsystem(q, iq, 0)).value <= 1e-9


def test_qutrit_channel_keeps_qdi_of_entangled_input():
    # (|00> + |11>)/sqrt(2) on qutrit x qubit; value frozen from a LAPACK-only
    # evaluation of I(rho) - I(rho with A dephased)
    psi = (np.kron(ket(0, 3), ket(0, 2)) + np.kron(ket(1, 3), ket(1, 2))) / np.sqrt(2)
    out = chn.apply_on_subsystem(chn.mio_not_io_qutrit(), pure_state(psi, (3, 2)), 0)
    assert qdi(out).value == pytest.approx(0.6008760366928556, abs=1e-9)


def test_gio_and_permutation_predicates():
    for seed in range(10):
        g = chn.random_gio(3, 3, seed)
        assert chn.is_gio(g) and chn.is_mio(g)
        ch, perm = chn.random_permutation_gio(3, 3, seed)
        ok, found = chn.is_completely_qdi_nongenerating(ch)
        assert ok and found == perm
    assert not chn.is_completely_qdi_nongenerating(chn.depolarizing(2, 0.5))[0]


def test_permutation_matrix_convention():
    p = chn.permutation_matrix((2, 0, 1))
    assert_allclose(p @ ket(0, 3), ket(2, 3))


def test_gio_permutation_creates_no_qdi():
    for seed in range(10):
        ch, _ = chn.random_permutation_gio(2, 2, seed)
        for d in (2,):
            rho = prop2_witness(d)
            assert qdi(chn.apply_on_subsystem(ch, rho, 0), (0, 1)).value <= 1e-9
        act = chn.apply_on_subsystem(ch, activation_state(), 0)
        assert qdi(act, (0, 1)).value <= 1e-9


def test_non_gio_channels_create_qdi():
    dep = chn.depolarizing(2, 0.5)
    assert qdi(chn.apply_on_subsystem(dep, prop2_witness(2), 0), (0, 1)).value > 1e-6
    q = chn.mio_not_io_qutrit()
    assert qdi(chn.apply_on_subsystem(q, prop2_witness(3), 0), (0, 1)).value > 1e-6


def test_activation_closed_form_and_values():
    rho = activation_state()
    assert abs(qdi(rho, (0, 1)).value) <= 1e-9
    for p in (0.25, 0.5, 0.75):
        res = chn.activation_demo(p)
        expected = chn.activation_expected_state(p)
        assert abs(np.trace(expected) - 1) < 1e-15
        assert np.max(np.abs(res.state_after.matrix - expected)) < 1e-12
        assert res.qdi_after > 1e-6
    assert abs(chn.activation_demo(1.0).qdi_after) < 1e-9


def test_activation_regression_anchor():
    # frozen from the cross-checked engine
    assert chn.activation_demo(0.5).qdi_after == pytest.approx(0.03455656926506734, abs=1e-6)


def test_activation_single_channel_creates_nothing():
    # depolarising maps incoherent-quantum states to incoherent-quantum states
    for seed in range(10):
        rho = random_density((2, 2), seed)
        iq = chn.apply_on_subsystem(chn.dephasing(2), rho, 0)
        out = chn.apply_on_subsystem(chn.depolarizing(2, 0.5), iq, 0)
        assert abs(qdi(out).value) < 1e-9


def test_non_activating_channels_never_increase_j():
    rng = np.random.default_rng(17)
    for k in range(30):
        rho = random_density((2, 2), rng)
        kind = k % 4
        if kind == 0:
            ch = chn.random_measure_prepare(2, 2, rng)
        elif kind == 1:
            ch = chn.random_gio(2, 3, rng)
        elif kind == 2:
            ch = chn.depolarizing(2, float(rng.uniform()))
        else:
            ch = chn.unitary_channel(random_incoherent_unitary(2, rng))
        assert chn.is_coherence_non_activating(ch)
        out = chn.apply_on_subsystem(ch, rho, 0)
        assert incoherent_correlation(out) <= incoherent_correlation(rho) + 1e-9


def test_library_lookup():
    assert chn.library_channel("depolarizing", 2, 0.5).dim_in == 2
    with pytest.raises(KeyError):
        chn.library_channel("nope")
    with pytest.raises(ValueError):
        chn.library_channel("depolarizing", 2)


def test_dephase_as_channel_matches_linalg():
    rho = random_density(3, 4).matrix
    assert_allclose(chn.dephasing(3)(rho), dephase(rho), atol=1e-15)
