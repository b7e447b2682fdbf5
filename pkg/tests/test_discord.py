import math

import numpy as np
import pytest

from cnam.channels import apply_on_subsystem, random_channel
from cnam.discord import (
    average_conditional_entropy,
    dephase_state,
    incoherent_correlation,
    marginal,
    monogamy_gap,
    qdi,
    qdi_povm_oracle,
)
from cnam.info import mutual_information, rel_entropy_coherence, von_neumann_entropy
from cnam.linalg import DimensionError
from cnam.measurement import computational_povm, povm_from_kernel
from cnam.states import (
    build_zero_qdi_state,
    ghz,
    max_ent_pm,
    random_density,
    random_incoherent_unitary,
    random_unitary,
    validate_density,
    w_state,
)


def local(rho, u_a, u_b):
    u = np.kron(u_a, u_b)
    return validate_density(u @ rho.matrix @ u.conj().T, rho.dims)


def test_max_ent_pm_all_forms():
    rep = qdi(max_ent_pm())
    for v in (rep.qdi_projective, rep.qdi_mutinf, rep.qdi_coherence):
        assert v == pytest.approx(1.0, abs=1e-9)
    assert rep.j_incoherent == pytest.approx(1.0, abs=1e-9)


def test_max_ent_pm_terms_from_definition():
    rho = max_ent_pm()
    # pure state: S_AB = 0, S_A = 1, conditionals |+>, |-> are pure
    s_cond = average_conditional_entropy(rho, computational_povm(2))
    assert s_cond == pytest.approx(0.0, abs=1e-10)
    assert s_cond + von_neumann_entropy(marginal(rho, [0])) - von_neumann_entropy(rho) == pytest.approx(1.0, abs=1e-9)


def test_max_ent_pm_b_dephased():
    assert qdi(dephase_state(max_ent_pm(), [1])).value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("dims,cut", [((2, 2), (0,)), ((2, 3), (0,)), ((3, 2), (0,)), ((3, 3), (0,)),
                                      ((2, 2, 2), (0,)), ((2, 2, 2), (0, 1)), ((2, 2, 2), (1,))])
def test_three_forms_agree(dims, cut):
    for seed in range(25):
        rep = qdi(random_density(dims, seed), cut)
        assert rep.max_discrepancy < 1e-9
        assert rep.value >= -1e-9


def test_qdi_bounds_and_j_identity():
    for seed in range(30):
        rho = random_density((2, 2), seed)
        rep = qdi(rho)
        assert rep.value <= rel_entropy_coherence(rho, [0]) + 1e-9
        i_ab = mutual_information(rho, ([0], [1]))
        assert rep.j_incoherent + rep.value == pytest.approx(i_ab, abs=1e-9)


def test_qdi_rejects_bad_cut():
    with pytest.raises(DimensionError):
        qdi(random_density((2, 2), 0), (0, 1))
    with pytest.raises(DimensionError):
        qdi(random_density((2, 2), 0), (5,))


def test_monogamy_ghz_and_w():
    g = monogamy_gap(ghz())
    assert g.gap == pytest.approx(-1.0, abs=1e-9) and g.gap_cmi == pytest.approx(-1.0, abs=1e-9)
    w = monogamy_gap(w_state())
    assert w.gap == pytest.approx(2 - math.log2(3), abs=1e-9)
    assert w.gap_cmi == pytest.approx(2 - math.log2(3), abs=1e-9)


def test_monogamy_routes_agree_on_random_states():
    for seed in range(20):
        rep = monogamy_gap(random_density((2, 2, 2), seed))
        assert rep.discrepancy < 1e-9


def test_local_unitary_invariance():
    for seed in range(40):
        rho = random_density((2, 3), seed)
        moved = local(rho, random_incoherent_unitary(2, seed + 1), random_unitary(3, seed + 2))
        assert abs(qdi(moved).value - qdi(rho).value) < 1e-9


def test_coherent_unitary_on_a_changes_qdi():
    rho = validate_density(np.diag([0.5, 0, 0, 0.5]), (2, 2))
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert qdi(rho).value == pytest.approx(0.0, abs=1e-12)
    assert qdi(local(rho, h, np.eye(2))).value == pytest.approx(1.0, abs=1e-9)


def test_monotone_under_channels_on_b():
    for seed in range(40):
        rho = random_density((2, 2), seed)
        ch = random_channel(2, 2, int(1 + seed % 3), seed + 500)
        assert qdi(apply_on_subsystem(ch, rho, 1)).value <= qdi(rho).value + 1e-8


def test_chain_rule_identity():
    for seed in range(40):
        rho = random_density((2, 2, 2), seed)
        d_bb = qdi(rho, (0,)).value
        d_b = qdi(marginal(rho, [0, 1]), (0,)).value
        rho_t = dephase_state(rho, [0])
        rhs = mutual_information(rho, ([0, 1], [2])) - mutual_information(rho_t, ([0, 1], [2]))
        assert d_bb - d_b == pytest.approx(rhs, abs=1e-8)


def test_dephasing_b_never_increases_qdi():
    for seed in range(40):
        rho = random_density((2, 2), seed)
        assert qdi(rho).value >= qdi(dephase_state(rho, [1])).value - 1e-9


def test_zero_qdi_family():
    rng = np.random.default_rng(3)
    for _ in range(20):
        # two blocks of a qutrit A with disjoint diagonal support
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        a0 = np.zeros((3, 3), dtype=complex)
        a0[:2, :2] = np.outer(v, v.conj())
        w = float(rng.uniform(0.1, 0.9))
        rho = build_zero_qdi_state([(a0, random_density(2, rng), w),
                                    (np.diag([0, 0, 1]), random_density(2, rng), 1 - w)])
        assert abs(qdi(rho).value) < 1e-9


def test_povm_oracle_never_beats_projective():
    for seed in range(10):
        rho = random_density((2, 2), seed)
        proj = average_conditional_entropy(rho, computational_povm(2))
        assert qdi_povm_oracle(rho, samples=30, seed=seed) >= proj - 1e-9


def test_incoherent_correlation_classical_state():
    rho = validate_density(np.diag([0.5, 0, 0, 0.5]), (2, 2))
    assert incoherent_correlation(rho) == pytest.approx(1.0, abs=1e-12)
    assert qdi(rho).value == pytest.approx(0.0, abs=1e-12)


def test_three_forms_agree_thousand_states():
    worst = 0.0
    for seed in range(1000):
        rho = random_density((2, 2) if seed % 2 else (2, 3), seed)
        worst = max(worst, qdi(rho).max_discrepancy)
    assert worst <= 1e-8


def test_monogamy_product_state_is_zero():
    parts = [random_density(2, s).matrix for s in range(3)]
    rho = validate_density(np.kron(np.kron(parts[0], parts[1]), parts[2]), (2, 2, 2))
    assert monogamy_gap(rho).gap == pytest.approx(0.0, abs=1e-9)


def test_povm_oracle_examples():
    cc = validate_density(np.diag([0.5, 0, 0, 0.5]), (2, 2))
    assert qdi_povm_oracle(cc, samples=200) >= -1e-9
    rho = max_ent_pm()
    proj = average_conditional_entropy(rho, computational_povm(2))
    assert qdi_povm_oracle(rho, samples=500) >= proj - 1e-9
    # the identity kernel is the projective measurement itself
    assert average_conditional_entropy(rho, povm_from_kernel(np.eye(2))) == pytest.approx(proj, abs=1e-12)
