"""Identity suites: every backend's defining relations checked numerically.

Each suite runs a list of named checks, records the worst deviation per
check against its tolerance, and reports a :class:`SuiteResult`.  The CLI
``verify`` subcommand prints these; the pytest suite asserts the same
relations (plus the acceptance criteria) independently.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import qubus, qudit, spin
from .linalg import (
    PAULI_X,
    identity,
    kron,
    phase_distance,
    phase_gate,
    random_state,
)
from .qudit import (
    CONVENTIONS,
    HALF_ROOT,
    MOD_INVERSE,
    LatticeLabel,
    compose_labels,
    displacement,
    displacement_from_label,
    fourier,
    generalized_pauli,
    loop_phase,
    omega,
    rotation,
)
from .qudit_model import (
    extract_register_gate,
    fan_bipartite,
    fan_one_target,
    generalized_toffoli,
    hamiltonian_generator_check,
    mod_d_phase_gate,
    single_pair_arbitrary_rotation,
    two_qubit_sequence,
)


@dataclass
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def cases_run(self) -> int:
        return len(self.checks)

    @property
    def cases_passed(self) -> int:
        return sum(1 for c in self.checks if c.passed)

    @property
    def worst_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)

    @property
    def passed(self) -> bool:
        return self.cases_passed == self.cases_run


def _conventions_for(d: int):
    return CONVENTIONS if d % 2 else (HALF_ROOT,)


def _controlled_rotation_oracle(n_qubits: int, control: int, target: int,
                                theta: float) -> np.ndarray:
    """Dense C^c_t R(theta) by basis enumeration: phase iff both bits set."""
    phases = []
    for r in range(2 ** n_qubits):
        bc = (r >> (n_qubits - 1 - control)) & 1
        bt = (r >> (n_qubits - 1 - target)) & 1
        phases.append(np.exp(1j * theta * bc * bt))
    return np.diag(phases)


def _toffoli_oracle(n_controls: int, u: np.ndarray) -> np.ndarray:
    """Dense n-controlled-U by basis enumeration (target is the last qubit)."""
    dim = 2 ** (n_controls + 1)
    out = np.eye(dim, dtype=complex)
    base = dim - 2  # |1...1>|0>
    out[np.ix_([base, base + 1], [base, base + 1])] = np.asarray(u, complex)
    return out


# ----------------------------------------------------------------------------
# qudit suite
# ----------------------------------------------------------------------------

def run_qudit_suite(rng: np.random.Generator | None = None) -> SuiteResult:
    rng = rng or np.random.default_rng(20240901)
    t0 = time.perf_counter()
    checks: list[CheckResult] = []

    dev = 0.0
    for d in range(2, 9):
        xd, zd = generalized_pauli(d)
        dev = max(dev,
                  np.max(np.abs(np.linalg.matrix_power(xd, d) - identity(d))),
                  np.max(np.abs(np.linalg.matrix_power(zd, d) - identity(d))))
    checks.append(CheckResult("periodicity X^d = Z^d = I", float(dev), 1e-12))

    dev = 0.0
    for d in range(2, 9):
        xd, zd = generalized_pauli(d)
        for x in range(d):
            for p in range(d):
                lhs = np.linalg.matrix_power(zd, p) @ np.linalg.matrix_power(xd, x)
                rhs = omega(d, x * p) * np.linalg.matrix_power(xd, x) @ \
                    np.linalg.matrix_power(zd, p)
                dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    checks.append(CheckResult("Weyl relation Z^p X^x = w(xp) X^x Z^p", dev, 1e-12))

    dev = 0.0
    for d in range(2, 9):
        f = fourier(d)
        xd, zd = generalized_pauli(d)
        dev = max(dev,
                  float(np.max(np.abs(f.conj().T @ zd @ f - xd))),
                  float(np.max(np.abs(f.conj().T @ f - identity(d)))),
                  float(np.max(np.abs(np.linalg.matrix_power(f, 4) - identity(d)))))
    checks.append(CheckResult("Fourier: F+ Z F = X, unitary, F^4 = I", dev, 1e-12))

    dev = 0.0
    for d in range(2, 9):
        for conv in _conventions_for(d):
            for x in range(-d, d + 1, max(1, d // 2)):
                for p in range(-d, d + 1, max(1, d // 2)):
                    m = displacement(d, x, p, conv)
                    dev = max(dev, float(np.max(np.abs(
                        m.conj().T @ m - identity(d)))))
    checks.append(CheckResult("displacement unitarity (both conventions)", dev, 1e-12))

    dev = 0.0
    for conv in CONVENTIONS:
        for _ in range(200):
            d = int(rng.integers(2, 9))
            if conv == MOD_INVERSE and d % 2 == 0:
                d += 1
            l1 = LatticeLabel(int(rng.integers(-d, d + 1)),
                              int(rng.integers(-d, d + 1)), d)
            l2 = LatticeLabel(int(rng.integers(-d, d + 1)),
                              int(rng.integers(-d, d + 1)), d)
            total, scalar = compose_labels(l1, l2, conv)
            lhs = displacement_from_label(l2, conv) @ displacement_from_label(l1, conv)
            rhs = scalar * displacement_from_label(total, conv)
            dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    checks.append(CheckResult("compose_labels vs matrix product (200/convention)",
                              dev, 1e-12))

    dev = 0.0
    for d in range(2, 9):
        for x in range(d):
            for p in range(d):
                expected = complex(omega(d, x * p))
                for conv in _conventions_for(d):
                    rect = [LatticeLabel(x, 0, d), LatticeLabel(0, p, d),
                            LatticeLabel(-x, 0, d), LatticeLabel(0, -p, d)]
                    dev = max(dev, abs(loop_phase(rect, conv) - expected))
    checks.append(CheckResult("rectangle loop phase = w(xp), both conventions",
                              dev, 1e-12))

    dev = 0.0
    for d in range(2, 7):
        theta = float(rng.uniform(0.1, 2.0))
        for x in range(d):
            conj = displacement(d, -x, 0, HALF_ROOT) @ rotation(d, theta) @ \
                displacement(d, x, 0, HALF_ROOT)
            expected = np.diag([np.exp(1j * theta * ((x + m) % d))
                                for m in range(d)])
            dev = max(dev, float(np.max(np.abs(conj - expected))))
    checks.append(CheckResult("shifted rotation picks e^{i theta (x+m mod d)}",
                              dev, 1e-12))

    dev = 0.0
    fid_dev = 0.0
    for d in (2, 3, 4, 5, 8):
        for conv in _conventions_for(d):
            for x in range(d):
                for p in range(d):
                    rep = extract_register_gate(
                        two_qubit_sequence(0, 1, x, p, d), convention=conv)
                    fid_dev = max(fid_dev, abs(1.0 - rep.ancilla_return_fidelity))
                    oracle = _controlled_rotation_oracle(2, 0, 1, 2 * np.pi * x * p / d)
                    dev = max(dev, phase_distance(rep.register_unitary, oracle))
    checks.append(CheckResult("two-qubit rectangle = C^j_k R(2 pi x p / d)",
                              dev, 1e-10))
    checks.append(CheckResult("two-qubit rectangle ancilla return fidelity",
                              fid_dev, 1e-12))

    dev = 0.0
    d = 4
    xs, p = (1, 2, 3), 1
    seq = fan_one_target(xs, p, d)
    rep = extract_register_gate(seq)
    oracle = identity(2 ** 4)
    for k, xk in enumerate(xs):
        oracle = oracle @ _controlled_rotation_oracle(4, k, 3, 2 * np.pi * xk * p / d)
    dev = max(dev, phase_distance(rep.register_unitary, oracle))
    dev = max(dev, 0.0 if rep.interaction_count == 2 * (len(xs) + 1) else 1.0)
    d = 3
    xs2, ps2 = (1, 2), (1, 1)
    rep = extract_register_gate(fan_bipartite(xs2, ps2, d))
    oracle = identity(2 ** 4)
    for k, xk in enumerate(xs2):
        for j, pj in enumerate(ps2):
            oracle = oracle @ _controlled_rotation_oracle(
                4, k, 2 + j, 2 * np.pi * xk * pj / d)
    dev = max(dev, phase_distance(rep.register_unitary, oracle))
    dev = max(dev, 0.0 if rep.interaction_count == 2 * (len(xs2) + len(ps2)) else 1.0)
    checks.append(CheckResult("fan sequences match composed rotation oracles, "
                              "counts 2(n+1)/2(n+m)", dev, 1e-10))

    dev = 0.0
    for n in (1, 2, 3):
        for u in (PAULI_X, phase_gate(np.pi / 3)):
            rep = extract_register_gate(generalized_toffoli(n, u, n + 2))
            dev = max(dev, phase_distance(rep.register_unitary,
                                          _toffoli_oracle(n, u)))
    checks.append(CheckResult("generalized Toffoli vs n-controlled-U oracle",
                              dev, 1e-10))

    dev = 0.0
    theta, n, d = np.pi / 5, 4, 3
    rep = extract_register_gate(mod_d_phase_gate(theta, n, d))
    for r in range(2 ** (n + 1)):
        bits = [(r >> (n - j)) & 1 for j in range(n + 1)]
        expected = np.exp(1j * theta * (sum(bits[:n]) % d) * bits[n])
        dev = max(dev, abs(rep.register_unitary[r, r] - expected))
    checks.append(CheckResult("mod-d phase gate exponent theta (sum q mod d) q_t",
                              dev, 1e-12))

    dev = 0.0
    for theta, d in ((np.pi, 2), (2 * np.pi / 7, 3)):
        rep = extract_register_gate(single_pair_arbitrary_rotation(theta, d))
        dev = max(dev, phase_distance(rep.register_unitary,
                                      _controlled_rotation_oracle(2, 0, 1, theta)))
    checks.append(CheckResult("controlled ancilla rotation gives arbitrary CR(theta)",
                              dev, 1e-10))

    dev = 0.0
    for _ in range(10):
        dev = max(dev, hamiltonian_generator_check(
            float(rng.uniform(-np.pi, np.pi)), int(rng.integers(2, 7))))
    checks.append(CheckResult("Hamiltonian generator reproduces C(R(t), R(-t))",
                              dev, 1e-12))

    return SuiteResult("qudit", checks, time.perf_counter() - t0)


# ----------------------------------------------------------------------------
# spin suite
# ----------------------------------------------------------------------------

def run_spin_suite(rng: np.random.Generator | None = None) -> SuiteResult:
    from scipy.linalg import expm

    rng = rng or np.random.default_rng(20240902)
    t0 = time.perf_counter()
    checks: list[CheckResult] = []

    dev = 0.0
    for _ in range(50):
        theta = float(rng.uniform(0.05, np.pi - 0.05))
        phi = float(rng.uniform(0.0, 2 * np.pi))
        zeta = -np.exp(-1j * phi) * np.tan(theta / 2)
        direct = spin.su2_displacement(zeta)
        exponential = expm(1j * ((theta / 2) * np.sin(phi) * PAULI_X
                                 - (theta / 2) * np.cos(phi) * np.array(
                                     [[0, -1j], [1j, 0]])))
        dev = max(dev, float(np.max(np.abs(direct - exponential))))
    checks.append(CheckResult("stereographic matrix matches angle exponential",
                              dev, 1e-12))

    dev = 0.0
    for _ in range(500):
        z1 = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        z2 = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(1 - z1 * z2.conjugate()) < 1e-3:
            continue
        n_spins = int(rng.integers(1, 11))
        z_out, phase = spin.compose_on_origin(z1, z2, n_spins)
        one = np.array([0.0, 1.0], dtype=complex)
        per_qubit = spin.su2_displacement(z2) @ spin.su2_displacement(z1) @ one
        per_angle = cmath.phase(1 - z1 * z2.conjugate())
        predicted = cmath.exp(1j * per_angle) * \
            np.array([z_out, 1.0]) / math.sqrt(1 + abs(z_out) ** 2)
        dev = max(dev, float(np.max(np.abs(per_qubit - predicted))))
        dev = max(dev, abs(phase - cmath.exp(1j * n_spins * per_angle)))
    checks.append(CheckResult("composition law vs per-spin matrix oracle (500)",
                              dev, 1e-12))

    dev = 0.0
    for _ in range(100):
        z1 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        z2 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        n_spins = int(rng.integers(1, 11))
        one = np.array([0.0, 1.0], dtype=complex)
        v1 = spin.su2_displacement(z1) @ one
        v2 = spin.su2_displacement(z2) @ one
        dev = max(dev, abs(spin.coherent_overlap(z1, z2, n_spins)
                           - np.vdot(v1, v2) ** n_spins))
    checks.append(CheckResult("coherent overlap vs per-spin inner product",
                              dev, 1e-12))

    dev = 0.0
    phase_dev = 0.0
    for eta in np.linspace(1e-3, spin.ETA_MAX, 100):
        sol = spin.loop_close(float(eta))
        zeta, angle = 0.0 + 0.0j, 0.0
        for leg in (sol.eta, 1j * sol.tau, -sol.tau, -1j * sol.eta):
            den = 1.0 - zeta * complex(leg).conjugate()
            zeta = (zeta + leg) / den
            angle += math.atan2(den.imag, den.real)
        dev = max(dev, abs(zeta))
        phase_dev = max(phase_dev, abs(angle - sol.phi_t))
    checks.append(CheckResult("loop closure residual |zeta_t| on 100-point grid",
                              dev, 1e-12))
    checks.append(CheckResult("closed-loop phase formula vs composition chain",
                              phase_dev, 1e-12))

    dev = 0.0
    fid_dev = 0.0
    for eta, n_spins in ((0.1, 6), (0.25, 3), (0.4, 12)):
        rep = spin.spin_two_qubit_gate(eta, n_spins)
        sol = spin.loop_close(eta)
        oracle = np.diag(np.exp(1j * n_spins * sol.phi_t *
                                np.array([1.0, -1.0, -1.0, 1.0])))
        dev = max(dev, phase_distance(rep.register_unitary, oracle))
        fid_dev = max(fid_dev, abs(1.0 - rep.ancilla_return_fidelity))
    checks.append(CheckResult("corrected rectangle = exp(i N phi_t Z Z)", dev, 1e-10))
    checks.append(CheckResult("corrected rectangle ancilla fidelity exactly 1",
                              fid_dev, 1e-12))

    n_spins = 8
    eta = spin.eta_for_phase(np.pi / 4, n_spins)
    rep = spin.spin_two_qubit_gate(eta, n_spins)
    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    corrected = kron(phase_gate(np.pi / 2), phase_gate(np.pi / 2)) @ \
        rep.register_unitary
    checks.append(CheckResult("root-found eta gives CZ up to local rotations",
                              phase_distance(corrected, cz), 1e-10))

    dev = 0.0
    state = spin.SpinBranchState.from_register(
        random_state(8, rng), n_spins=6)
    for _ in range(8):
        qubit = int(rng.integers(0, 3))
        zeta = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        state = spin.apply_controlled_spin(state, qubit, zeta)
        dev = max(dev, abs(1.0 - state.gram_weighted_norm()))
    checks.append(CheckResult("branch norm conserved over 8 random interactions",
                              dev, 1e-10))

    point = spin.fan_error(40.0, 10 ** 7)
    dev = 0.0 if 1.4e-4 <= point.phi_E <= 2.2e-4 else abs(point.phi_E - 1.8e-4)
    checks.append(CheckResult("fractional phase error at (40, 1e7) in [1.4, 2.2]e-4",
                              dev, 0.0))
    dev = abs(point.infidelity - point.infid_series) / point.infid_series
    checks.append(CheckResult("infidelity at (40, 1e7) within 10% of series",
                              dev, 0.1))

    dev = 0.0
    for zeta_n in range(1, 51):
        for n_spins in (10 ** 5, 10 ** 6, 10 ** 7, 10 ** 8, 10 ** 9):
            # Cancellation-free defect: the direct subtraction cannot resolve
            # the O(zeta^6/N^2) bound below double precision at large N.
            defect = abs(spin.phi_series_defect(float(zeta_n), n_spins))
            bound = 10.0 * zeta_n ** 6 / n_spins ** 2
            dev = max(dev, defect - bound)
    checks.append(CheckResult("first-order phase series valid on 50x5 grid",
                              dev, 0.0))

    dev = 0.0
    for _ in range(5):
        dev = max(dev, spin.spin_generator_check(
            float(rng.uniform(-np.pi, np.pi)),
            float(rng.uniform(0.0, 2 * np.pi)),
            int(rng.integers(1, 5))))
    checks.append(CheckResult("spin Hamiltonian generator + axis conjugation",
                              dev, 1e-10))

    return SuiteResult("spin", checks, time.perf_counter() - t0)


# ----------------------------------------------------------------------------
# qubus suite
# ----------------------------------------------------------------------------

def run_qubus_suite(rng: np.random.Generator | None = None) -> SuiteResult:
    rng = rng or np.random.default_rng(20240903)
    t0 = time.perf_counter()
    checks: list[CheckResult] = []

    dev = 0.0
    for _ in range(100):
        l1 = qubus.FieldLabel(float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        l2 = qubus.FieldLabel(float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        _, ph12 = qubus.compose_field(l1, l2)
        _, ph21 = qubus.compose_field(l2, l1)
        dev = max(dev, abs(ph12 * ph21 - 1.0))
        _, ph_inv = qubus.compose_field(l1, -l1)
        dev = max(dev, abs(ph_inv - 1.0))
    checks.append(CheckResult("composition phase antisymmetric under swap",
                              dev, 1e-12))

    dev = 0.0
    for x, p in ((0.35, 0.61), (1.0, np.pi / 4), (0.9, -0.3)):
        zz = np.diag(np.exp(1j * x * p * np.array([1.0, -1.0, -1.0, 1.0])))
        for label in (qubus.ORIGIN, qubus.FieldLabel(0.7, -1.3)):
            rep = qubus.field_two_qubit(x, p, initial_label=label)
            dev = max(dev, phase_distance(rep.register_unitary, zz))
            dev = max(dev, abs(1.0 - rep.ancilla_return_fidelity))
    checks.append(CheckResult("rectangle = exp(i x p Z Z), any initial label",
                              dev, 1e-12))

    xp = np.pi / 4
    rep = qubus.field_two_qubit(math.sqrt(xp), math.sqrt(xp))
    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    corrected = kron(phase_gate(2 * xp), phase_gate(2 * xp)) @ rep.register_unitary
    checks.append(CheckResult("x p = pi/4 locally equivalent to CZ",
                              phase_distance(corrected, cz), 1e-12))

    dev = 0.0
    xs, ps = (0.3, 0.4), (0.2, 0.5)
    rep = qubus.field_fan(xs, ps)
    dev = max(dev, phase_distance(rep.register_unitary,
                                  qubus.fan_target_unitary(xs, ps)))
    dev = max(dev, 0.0 if rep.interaction_count == 8 else 1.0)
    dev = max(dev, abs(1.0 - rep.ancilla_return_fidelity))
    dev = max(dev, rep.residual_entanglement)
    checks.append(CheckResult("fan: 4 gates in 8 interactions, exact closure",
                              dev, 1e-12))

    return SuiteResult("qubus", checks, time.perf_counter() - t0)


# ----------------------------------------------------------------------------
# cross-backend suite
# ----------------------------------------------------------------------------

def run_cross_suite(rng: np.random.Generator | None = None) -> SuiteResult:
    t0 = time.perf_counter()
    checks: list[CheckResult] = []

    dev = 0.0
    n_list = [1000 * 2 ** k for k in range(11)]
    for mag in (1.0, 2.0, 5.0):
        rows = spin.contraction_probe(mag, n_list)
        slope = spin.fitted_loglog_slope(
            [r.n_spins for r in rows], [r.abs_err_phi for r in rows])
        dev = max(dev, abs(slope + 1.0) - 0.05)
    checks.append(CheckResult("phase error log-log slope in [-1.05, -0.95]",
                              max(dev, 0.0), 0.0))

    dev = 0.0
    for zeta in (1.0, 1.0 + 1.0j):
        rows = spin.contraction_probe(zeta, [10 ** 6])
        limit = math.exp(-abs(zeta) ** 2 / 2.0)
        dev = max(dev, rows[0].abs_err_overlap / limit)
    checks.append(CheckResult("vacuum overlap matches e^{-|z|^2/2} at N=1e6",
                              dev, 1e-6))

    rows = spin.contraction_probe(2.0, n_list)
    prefactors = [r.prefactor for r in rows]
    monotone = all(b > a for a, b in zip(prefactors, prefactors[1:]))
    below_one = all(p < 1.0 for p in prefactors)
    checks.append(CheckResult("prefactor atan(u)/u increases toward 1",
                              0.0 if (monotone and below_one) else 1.0, 0.0))

    dev = 0.0
    for zeta_n, n_spins in ((2.0, 10 ** 6), (5.0, 10 ** 6)):
        rep = spin.fan_sequence_simulate(
            [zeta_n / 2] * 2, [zeta_n / 2] * 2, n_spins)
        point = spin.fan_error(zeta_n, n_spins)
        dev = max(dev, abs(rep.extremal_phase - point.phi_f))
    checks.append(CheckResult("fan extremal branch phase equals closed form",
                              dev, 1e-12))

    dev = 0.0
    d = 5
    xs_int, ps_int = (1, 2), (1, 1)
    # The bus polarity is the symmetric one, so the qudit fan is run
    # symmetric as well; both then give prod exp(i theta_jk Z Z) with
    # theta_jk = 2 pi x_k p_j / d once the bus legs are scaled by
    # sqrt(2 pi / d) (the lattice spacing that equates loop areas).
    from .qudit_model import SYMMETRIC
    rep_qudit = extract_register_gate(
        fan_bipartite(xs_int, ps_int, d, polarity=SYMMETRIC))
    scale = math.sqrt(2 * math.pi / d)
    rep_field = qubus.field_fan([x * scale for x in xs_int],
                                [p * scale for p in ps_int])
    dev = max(dev, phase_distance(rep_qudit.register_unitary,
                                  rep_field.register_unitary))
    checks.append(CheckResult("qudit fan = field fan at matched angles 2 pi k/d",
                              dev, 1e-10))

    return SuiteResult("cross", checks, time.perf_counter() - t0)


SUITES = {
    "qudit": run_qudit_suite,
    "spin": run_spin_suite,
    "qubus": run_qubus_suite,
    "cross": run_cross_suite,
}


def run_suites(names) -> list[SuiteResult]:
    return [SUITES[name]() for name in names]
