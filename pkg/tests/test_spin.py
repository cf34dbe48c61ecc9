"""Spin-coherent backend: composition law, loop closure, intrinsic errors."""

import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from amqc.linalg import PAULI_X, PAULI_Y, identity, kron, phase_distance, phase_gate
from amqc.spin import (
    ETA_MAX,
    LoopUnclosableError,
    SingularCompositionError,
    SpinBranchState,
    apply_controlled_spin,
    coherent_overlap,
    compose_on_origin,
    contraction_probe,
    eta_for_phase,
    fan_error,
    fan_sequence_simulate,
    fitted_loglog_slope,
    loop_close,
    phi_series_defect,
    spin_generator_check,
    spin_two_qubit_gate,
    su2_displacement,
    vacuum_return_infidelity,
)

ONE = np.array([0.0, 1.0], dtype=complex)  # reference per-spin state |1>


# ----------------------------------------------------------------------------
# single-spin displacement matrix
# ----------------------------------------------------------------------------

def test_zero_displacement_is_identity():
    np.testing.assert_array_equal(su2_displacement(0.0), identity(2))


def test_real_label_rotates_about_y():
    # A real label generates exp(i atan(zeta) sigma_y), a rotation by
    # 2 atan(zeta); the x-axis generator belongs to imaginary labels.
    for zeta in (0.37, -1.2):
        np.testing.assert_allclose(su2_displacement(zeta),
                                   expm(1j * math.atan(zeta) * PAULI_Y),
                                   atol=1e-14)
    np.testing.assert_allclose(su2_displacement(0.5j),
                               expm(1j * math.atan(0.5) * PAULI_X),
                               atol=1e-14)


def test_matches_angle_parameterisation():
    rng = np.random.default_rng(21)
    for _ in range(40):
        theta = rng.uniform(0.05, np.pi - 0.05)
        phi = rng.uniform(0.0, 2 * np.pi)
        zeta = -np.exp(-1j * phi) * np.tan(theta / 2)
        exponential = expm(1j * ((theta / 2) * np.sin(phi) * PAULI_X
                                 - (theta / 2) * np.cos(phi) * PAULI_Y))
        np.testing.assert_allclose(su2_displacement(zeta), exponential,
                                   atol=1e-12)


def test_displacement_creates_coherent_state():
    zeta = 0.4 - 0.7j
    got = su2_displacement(zeta) @ ONE
    expected = np.array([zeta, 1.0]) / math.sqrt(1 + abs(zeta) ** 2)
    np.testing.assert_allclose(got, expected, atol=1e-15)


# ----------------------------------------------------------------------------
# composition law
# ----------------------------------------------------------------------------

def test_compose_with_inverse():
    z_out, phase = compose_on_origin(0.3 + 0.2j, -0.3 - 0.2j, 7)
    assert abs(z_out) < 1e-15
    assert abs(phase - 1.0) < 1e-15


def test_compose_worked_example():
    z1, z2 = 0.3, 0.3j
    z_out, phase = compose_on_origin(z1, z2, 1)
    np.testing.assert_allclose(z_out, (0.3 + 0.3j) / (1 + 0.09j), atol=1e-16)
    np.testing.assert_allclose(phase, (1 + 0.09j) / abs(1 + 0.09j), atol=1e-15)
    assert abs(cmath.phase(phase) - math.atan(0.09)) < 1e-15
    # Amplitude-level agreement with the per-spin matrix product.
    per_spin = su2_displacement(z2) @ su2_displacement(z1) @ ONE
    predicted = phase * np.array([z_out, 1.0]) / math.sqrt(1 + abs(z_out) ** 2)
    np.testing.assert_allclose(per_spin, predicted, atol=1e-15)


def test_compose_matches_matrix_oracle_randomly():
    rng = np.random.default_rng(33)
    for _ in range(300):
        z1 = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        z2 = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(1 - z1 * z2.conjugate()) < 1e-3:
            continue
        n_spins = int(rng.integers(1, 11))
        z_out, phase = compose_on_origin(z1, z2, n_spins)
        single = su2_displacement(z2) @ su2_displacement(z1) @ ONE
        full = np.array([1.0], dtype=complex)
        for _ in range(n_spins):
            full = np.kron(full, single)
        coherent = np.array([z_out, 1.0]) / math.sqrt(1 + abs(z_out) ** 2)
        predicted = np.array([1.0], dtype=complex)
        for _ in range(n_spins):
            predicted = np.kron(predicted, coherent)
        np.testing.assert_allclose(full, phase * predicted, atol=1e-12)


def test_compose_singular_raises():
    with pytest.raises(SingularCompositionError):
        compose_on_origin(1.0, 1.0, 3)


# ----------------------------------------------------------------------------
# overlaps
# ----------------------------------------------------------------------------

def test_overlap_of_equal_labels():
    assert abs(coherent_overlap(0.3 - 0.5j, 0.3 - 0.5j, 9) - 1.0) < 1e-14


def test_overlap_with_origin():
    zeta, n_spins = 0.8 + 0.1j, 6
    got = abs(coherent_overlap(0.0, zeta, n_spins)) ** 2
    assert abs(got - (1 + abs(zeta) ** 2) ** -n_spins) < 1e-14


def test_overlap_contracts_to_gaussian():
    zeta = 1.3 - 0.4j
    for n_spins, tol in ((10 ** 6, 2e-6), (10 ** 8, 2e-8)):
        got = abs(coherent_overlap(0.0, zeta / math.sqrt(2 * n_spins),
                                   n_spins)) ** 2
        assert abs(got - math.exp(-abs(zeta) ** 2 / 2)) < tol


# ----------------------------------------------------------------------------
# loop closure
# ----------------------------------------------------------------------------

def test_tau_value_and_series():
    sol = loop_close(0.1)
    assert abs(sol.tau - 0.10206229412959567) < 1e-15
    # Next series term is 6 eta^5 = 6e-5.
    assert abs(sol.tau - (0.1 + 2 * 0.1 ** 3)) < 1e-4


def test_small_eta_phase_approaches_flat_rectangle():
    # phi_t / (2 N eta^2) -> 1: the flat loop with x = p = eta sqrt(2N).
    for eta in (1e-3, 1e-4):
        sol = loop_close(eta)
        assert abs(sol.phi_t / (2 * eta ** 2) - 1.0) < 50 * eta


def test_closure_residual_via_composition():
    for eta in np.linspace(1e-3, ETA_MAX, 100):
        sol = loop_close(float(eta))
        zeta = 0.0 + 0.0j
        total_phase = 0.0
        for leg in (sol.eta, 1j * sol.tau, -sol.tau, -1j * sol.eta):
            den = 1 - zeta * complex(leg).conjugate()
            zeta = (zeta + leg) / den
            total_phase += math.atan2(den.imag, den.real)
        assert abs(zeta) < 1e-12
        assert abs(total_phase - sol.phi_t) < 1e-12


def test_loop_close_domain():
    with pytest.raises(LoopUnclosableError):
        loop_close(ETA_MAX + 1e-6)
    sol = loop_close(0.0)
    assert sol.tau == 0.0 and sol.phi_t == 0.0
    # Odd in eta: flipping the sign flips tau and keeps the phase.
    plus, minus = loop_close(0.2), loop_close(-0.2)
    assert abs(plus.tau + minus.tau) < 1e-15
    assert abs(plus.phi_t - minus.phi_t) < 1e-15


def test_boundary_eta_included():
    sol = loop_close(ETA_MAX)
    assert abs(sol.tau - 1.0) < 1e-7  # discriminant hits zero, tau -> 1
    assert abs(sol.phi_t - math.pi / 4) < 1e-7


# ----------------------------------------------------------------------------
# branch states
# ----------------------------------------------------------------------------

def test_zero_displacement_leaves_branches():
    state = SpinBranchState.from_register(
        np.array([1, 1], dtype=complex) / np.sqrt(2), n_spins=5)
    out = apply_controlled_spin(state, 0, 0.0)
    for r in (0, 1):
        assert out.branches[r] == state.branches[r]


def test_branch_signs_follow_control_bit():
    state = SpinBranchState.from_register(
        np.array([1, 1], dtype=complex) / np.sqrt(2), n_spins=4)
    zeta = 0.2 + 0.1j
    out = apply_controlled_spin(state, 0, zeta)
    assert abs(out.branches[0][0] - zeta) < 1e-15   # bit 0 -> +zeta
    assert abs(out.branches[1][0] + zeta) < 1e-15   # bit 1 -> -zeta


def test_branch_norm_conserved():
    rng = np.random.default_rng(12)
    reg = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    reg /= np.linalg.norm(reg)
    state = SpinBranchState.from_register(reg, n_spins=6)
    for _ in range(8):
        qubit = int(rng.integers(0, 3))
        zeta = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        state = apply_controlled_spin(state, qubit, zeta)
        assert abs(state.gram_weighted_norm() - 1.0) < 1e-10
        assert abs(state.total_norm() - 1.0) < 1e-10


def test_branch_at_south_pole_raises():
    state = SpinBranchState.from_register(np.array([1, 0], dtype=complex), 3)
    state = apply_controlled_spin(state, 0, 1.0)  # bit 0 branch lands at +1
    with pytest.raises(SingularCompositionError):
        apply_controlled_spin(state, 0, 1.0)  # 1 - zeta*conj(step) = 0


def test_branch_update_agrees_with_compose():
    state = SpinBranchState.from_register(np.array([0, 1], dtype=complex), 7)
    state = apply_controlled_spin(state, 0, 0.3)          # bit 1: -0.3
    state = apply_controlled_spin(state, 0, -0.2 + 0.4j)  # bit 1: +0.2-0.4j
    z_direct, amp_direct = state.branches[1]
    z_chain, phase1 = compose_on_origin(0.0, -0.3, 7)
    z_chain, phase2 = compose_on_origin(z_chain, 0.2 - 0.4j, 7)
    assert abs(z_direct - z_chain) < 1e-14
    assert abs(amp_direct - phase1 * phase2) < 1e-14


# ----------------------------------------------------------------------------
# two-qubit gate
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("eta,n_spins", [(0.1, 6), (0.3, 4), (0.05, 40)])
def test_spin_two_qubit_gate(eta, n_spins):
    rep = spin_two_qubit_gate(eta, n_spins)
    sol = loop_close(eta)
    oracle = np.diag(np.exp(1j * n_spins * sol.phi_t *
                            np.array([1.0, -1.0, -1.0, 1.0])))
    assert abs(rep.ancilla_return_fidelity - 1.0) < 1e-12
    assert rep.residual_entanglement < 1e-12
    assert phase_distance(rep.register_unitary, oracle) < 1e-10
    # Branch phase signs: |00> gets +phi_t, |01> gets -phi_t.
    u = rep.register_unitary
    total = n_spins * sol.phi_t
    assert abs(u[0, 0] - cmath.exp(1j * total)) < 1e-12
    assert abs(u[1, 1] - cmath.exp(-1j * total)) < 1e-12


def test_eta_for_cz_phase():
    n_spins = 8
    eta = eta_for_phase(math.pi / 4, n_spins)
    assert 0 < eta <= ETA_MAX
    rep = spin_two_qubit_gate(eta, n_spins)
    corrected = kron(phase_gate(math.pi / 2), phase_gate(math.pi / 2)) @ \
        rep.register_unitary
    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    assert phase_distance(corrected, cz) < 1e-10


def test_eta_for_phase_rejects_unreachable():
    with pytest.raises(ValueError):
        eta_for_phase(10.0, 1)  # max per spin is pi/4


# ----------------------------------------------------------------------------
# closed-form error surfaces
# ----------------------------------------------------------------------------

def test_headline_error_endpoints():
    point = fan_error(40.0, 10 ** 7)
    assert 1.4e-4 <= point.phi_E <= 2.2e-4
    assert abs(point.infidelity - 4.096e-5) / 4.096e-5 < 0.1
    assert abs(point.infid_series - 4.096e-5) < 1e-12


def test_errors_vanish_with_ensemble_size():
    previous_phi, previous_inf = None, None
    for k in range(4, 11):
        point = fan_error(7.0, 10 ** k)
        if previous_phi is not None:
            assert point.phi_E < previous_phi
            assert point.infidelity < previous_inf
        previous_phi, previous_inf = point.phi_E, point.infidelity
    assert previous_phi < 1e-8 and previous_inf < 1e-14


def test_phi_series_defect_matches_direct_subtraction():
    # The direct subtraction itself carries ~eps * phi_f of rounding noise,
    # which dominates when the defect is tiny; allow for it.
    for zeta_n, n_spins in ((10.0, 10 ** 5), (40.0, 10 ** 5), (5.0, 10 ** 6)):
        point = fan_error(zeta_n, n_spins)
        direct = point.phi_f - point.phi_series
        tol = 1e-9 * abs(direct) + 5e-15 * point.phi_f
        assert abs(phi_series_defect(zeta_n, n_spins) - direct) < tol


def test_fan_extremal_branch_reproduces_closed_form():
    for zeta_n, n_spins in ((2.0, 10 ** 6), (5.0, 10 ** 6)):
        rep = fan_sequence_simulate([zeta_n / 2] * 2, [zeta_n / 2] * 2, n_spins)
        point = fan_error(zeta_n, n_spins)
        assert abs(rep.extremal_phase - point.phi_f) < 1e-12
        assert abs(vacuum_return_infidelity(rep.extremal_label, n_spins)
                   - point.infidelity) < 1e-14


def test_fan_worst_branch_small_at_large_n():
    rep = fan_sequence_simulate([2.5, 2.5], [2.5, 2.5], 10 ** 6)
    assert rep.worst_branch_infidelity < 1e-7  # series bound is ~1.6e-8
    assert rep.interaction_count == 8


def test_fan_infidelity_within_factor_two_of_series():
    for zeta_n in (2.0, 4.0, 8.0):
        for n_spins in (10 ** 5, 10 ** 6, 10 ** 7):
            rep = fan_sequence_simulate([zeta_n / 2] * 2, [zeta_n / 2] * 2,
                                        n_spins)
            series = zeta_n ** 6 / n_spins ** 2
            assert rep.worst_branch_infidelity <= 2 * series
            assert rep.worst_branch_infidelity > 0


def test_fan_single_pair_matches_corrected_gate_to_curvature():
    # Flat legs differ from the curvature-corrected loop at relative O(1/N).
    n_spins = 10 ** 4
    zeta_n = 0.5
    rep = fan_sequence_simulate([zeta_n], [zeta_n], n_spins)
    eta = zeta_n / math.sqrt(2 * n_spins)
    exact = n_spins * loop_close(eta).phi_t
    assert abs(rep.extremal_phase - exact) / exact < 5.0 / n_spins
    assert rep.worst_branch_infidelity > 0


def test_fan_phase_errors_against_zz_target():
    rep = fan_sequence_simulate([1.0, 2.0], [0.5, 1.5], 10 ** 6)
    # Every branch target is (sum +-x)(sum +-p); simulated phases agree to
    # the intrinsic curvature error, far below 1e-4 at this N.
    assert rep.worst_phase_error < 1e-4
    assert rep.worst_phase_error > 0


# ----------------------------------------------------------------------------
# contraction table
# ----------------------------------------------------------------------------

def test_prefactor_column_monotone():
    rows = contraction_probe(2.0, [10 ** k for k in range(3, 7)])
    values = [r.prefactor for r in rows]
    assert all(v < 1.0 for v in values)
    assert all(b > a for a, b in zip(values, values[1:]))


def test_contraction_slope_minus_one():
    n_list = [1000 * 2 ** k for k in range(11)]
    for mag in (1.0, 2.0, 5.0):
        rows = contraction_probe(mag, n_list)
        slope = fitted_loglog_slope([r.n_spins for r in rows],
                                    [r.abs_err_phi for r in rows])
        assert -1.05 <= slope <= -0.95


def test_contraction_overlap_limit():
    rows = contraction_probe(1.0 + 1.0j, [10 ** 6])
    limit = math.exp(-abs(1.0 + 1.0j) ** 2 / 2)
    assert rows[0].abs_err_overlap / limit < 1e-6


# ----------------------------------------------------------------------------
# Hamiltonian generator
# ----------------------------------------------------------------------------

def test_spin_generator_trivial_angle():
    assert spin_generator_check(0.0, 1.3, 2) < 1e-14


def test_spin_generator_examples():
    assert spin_generator_check(0.4, math.pi / 2, 3) < 1e-10
    assert spin_generator_check(1.1, 0.7, 2) < 1e-10


def test_spin_generator_resource_limit():
    with pytest.raises(ValueError):
        spin_generator_check(0.1, 0.1, 9)
