"""Spin-coherent-state ancilla backend.

An ensemble of N identical spins, restricted to states of product form, is a
phase space on a sphere.  Points are tracked by the stereographic coordinate
zeta (the north-pole reference state |1>^(x)N maps to zeta = 0, the south pole
to infinity and is out of range), and a displacement by zeta acts per spin as

    ( [1, zeta], [-conj(zeta), 1] ) / sqrt(1 + |zeta|^2).

Displacements from the reference state compose by a Moebius rule with a phase
that scales with N:

    D(z2) D(z1) |0> = phase * |(z1 + z2) / (1 - z1*conj(z2))>,
    phase = ((1 - z1*conj(z2)) / |1 - z1*conj(z2)|)^N.

Because the sphere is curved, a rectangle of four equal orthogonal
displacements does not close; closing it requires the corrected second leg
tau(eta), and the enclosed geometric phase per spin follows from the same
composition rule.  The closed-form error formulas for uncorrected (flat)
rectangles, their 1/N series, and the large-N contraction onto the flat
field-mode algebra all live here as well.

Axis conventions: a real zeta generates exp(i*atan(zeta)*sigma_y) per spin, a
purely imaginary zeta generates a sigma_x rotation.  Equivalently, with
zeta = -e^{-i*phi} tan(theta/2) the per-spin matrix equals
exp(i*(theta/2)*(sin(phi)*sigma_x - cos(phi)*sigma_y)); the sign of that map
is load-bearing and pinned by the test suite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import controlled, kron, phase_distance
from .report import DISENTANGLE_TOL, GateReport

# Largest |eta| for which the closing leg tau(eta) is real.
ETA_MAX = math.sqrt(2.0) - 1.0


class SingularCompositionError(ValueError):
    """Composition drove a coherent-state label to the south pole."""


class LoopUnclosableError(ValueError):
    """|eta| exceeds sqrt(2)-1, so no real closing leg exists."""


def _log1p_complex(z: complex) -> complex:
    # Accurate log(1+z) for small complex z; numpy's log1p is real-only.
    z = complex(z)
    re = 0.5 * math.log1p(2.0 * z.real + abs(z) ** 2)
    im = math.atan2(z.imag, 1.0 + z.real)
    return complex(re, im)


def su2_displacement(zeta: complex) -> np.ndarray:
    """Per-spin displacement matrix in the (|0>, |1>) basis.

    Its N-fold tensor power is the ensemble displacement; acting on |1> it
    produces (|1> + zeta |0>) / sqrt(1 + |zeta|^2).
    """
    zeta = complex(zeta)
    return np.array([[1.0, zeta], [-zeta.conjugate(), 1.0]],
                    dtype=complex) / math.sqrt(1.0 + abs(zeta) ** 2)


def compose_on_origin(z1: complex, z2: complex, n_spins: int) -> tuple[complex, complex]:
    """Combine two displacements acting on the reference state (z1 first).

    Returns (zeta_out, phase) with

        D(z2) D(z1) |0> = phase * |zeta_out>,
        zeta_out = (z1 + z2) / (1 - z1*conj(z2)),
        phase = ((1 - z1*conj(z2)) / |1 - z1*conj(z2)|)^N.

    Since |zeta> = D(zeta)|0> exactly, iterating with z1 = current label also
    composes displacement chains started anywhere.  The phase is evaluated as
    exp(i*N*arg(...)) so its modulus stays exactly 1 for any N.
    """
    z1, z2 = complex(z1), complex(z2)
    den = 1.0 - z1 * z2.conjugate()
    if abs(den) < 1e-12:
        raise SingularCompositionError(
            f"antipodal composition: 1 - z1*conj(z2) = {den!r}")
    zeta_out = (z1 + z2) / den
    phase = cmath.exp(1j * n_spins * cmath.phase(den))
    return zeta_out, phase


def coherent_overlap(z1: complex, z2: complex, n_spins: int) -> complex:
    """<z1|z2> for two coherent labels, evaluated in the log domain.

    Equals ((1 + conj(z1)*z2) / sqrt((1+|z1|^2)(1+|z2|^2)))^N; the log-domain
    form stays accurate for N up to 1e10 and underflows gracefully to 0.
    """
    z1, z2 = complex(z1), complex(z2)
    log_num = _log1p_complex(z1.conjugate() * z2)
    log_den = 0.5 * (math.log1p(abs(z1) ** 2) + math.log1p(abs(z2) ** 2))
    return cmath.exp(n_spins * (log_num - log_den))


def vacuum_return_infidelity(zeta_final: complex, n_spins: int) -> float:
    """1 - |<0|zeta_final>|^2 = 1 - (1+|zeta|^2)^(-N), log-domain."""
    return float(-math.expm1(-n_spins * math.log1p(abs(complex(zeta_final)) ** 2)))


@dataclass(frozen=True)
class LoopSolution:
    """Closing leg and per-spin geometric phase of the corrected rectangle.

    ``phi_t`` is the phase per spin; an ensemble of N spins acquires
    N * phi_t around the loop.
    """

    eta: float
    tau: float
    phi_t: float

    def total_phase(self, n_spins: int) -> float:
        return n_spins * self.phi_t


def loop_close(eta: float) -> LoopSolution:
    """Solve the curved-rectangle closure for legs (eta, i*tau, -tau, -i*eta).

    tau(eta) = (1 - eta^2 - sqrt(eta^4 - 6 eta^2 + 1)) / (2 eta); the
    discriminant is nonnegative only for |eta| <= sqrt(2) - 1, beyond which a
    :class:`LoopUnclosableError` is raised.  eta = 0 returns the flat limit
    (tau = 0, phi_t = 0).  Recomposing the four legs with
    :func:`compose_on_origin` lands back on the origin to 1e-12.
    """
    eta = float(eta)
    if eta == 0.0:
        return LoopSolution(0.0, 0.0, 0.0)
    if abs(eta) > ETA_MAX + 1e-15:
        raise LoopUnclosableError(
            f"|eta| = {abs(eta):.6f} exceeds sqrt(2)-1 = {ETA_MAX:.6f}")
    disc = eta ** 4 - 6.0 * eta ** 2 + 1.0
    disc = max(disc, 0.0)
    tau = (1.0 - eta ** 2 - math.sqrt(disc)) / (2.0 * eta)
    num = 2.0 * eta * tau + tau ** 2 - eta ** 2
    den = 1.0 + 2.0 * eta * tau - eta ** 2 * tau ** 2
    return LoopSolution(eta, tau, math.atan2(num, den))


@dataclass
class SpinBranchState:
    """Register basis branches, each dragging one coherent label and amplitude.

    ``branches`` maps a register basis index (qubit 0 = most significant bit)
    to a (zeta, amplitude) pair; the joint state is
    sum_r amplitude_r |r> (x) |zeta_r>.  Register basis states of different
    branches are orthogonal, so the squared norm is sum |amplitude|^2 despite
    the coherent labels themselves overlapping.
    """

    n_qubits: int
    n_spins: int
    branches: dict = field(default_factory=dict)

    @classmethod
    def from_register(cls, register: np.ndarray, n_spins: int,
                      zeta0: complex = 0.0) -> "SpinBranchState":
        register = np.asarray(register, dtype=complex)
        n_qubits = int(round(math.log2(register.shape[0])))
        if 2 ** n_qubits != register.shape[0]:
            raise ValueError("register dimension is not a power of two")
        branches = {r: (complex(zeta0), complex(a))
                    for r, a in enumerate(register) if a != 0}
        return cls(n_qubits, n_spins, branches)

    def total_norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for _, a in self.branches.values()))

    def gram_weighted_norm(self) -> float:
        """Norm via the coherent-label Gram matrix restricted to matching
        register bitstrings (cross terms vanish by register orthogonality)."""
        total = 0.0
        for r1, (z1, a1) in self.branches.items():
            for r2, (z2, a2) in self.branches.items():
                if r1 != r2:
                    continue
                total += (a1.conjugate() * a2 *
                          coherent_overlap(z1, z2, self.n_spins)).real
        return math.sqrt(total)

    def reduced_register_density(self) -> np.ndarray:
        """Register density matrix after tracing out the ensemble."""
        dim = 2 ** self.n_qubits
        rho = np.zeros((dim, dim), dtype=complex)
        for r1, (z1, a1) in self.branches.items():
            for r2, (z2, a2) in self.branches.items():
                rho[r1, r2] = a1 * a2.conjugate() * \
                    coherent_overlap(z2, z1, self.n_spins)
        return rho

    def residual_entanglement(self) -> float:
        evals = np.linalg.eigvalsh(self.reduced_register_density())
        return float(1.0 - evals[-1])


def apply_controlled_spin(state: SpinBranchState, qubit: int,
                          zeta: complex) -> SpinBranchState:
    """Controlled displacement: bit 0 branches get D(+zeta), bit 1 D(-zeta).

    Each branch is updated through the per-spin 2x2 action on its product
    state, re-extracting the new label from the amplitude ratio and the
    per-spin phase from the |1> component (raised to the N-th power via its
    angle, so the modulus cannot drift).
    """
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    zeta = complex(zeta)
    new_branches = {}
    for r, (z_acc, amp) in state.branches.items():
        bit = (r >> (state.n_qubits - 1 - qubit)) & 1
        step = zeta if bit == 0 else -zeta
        m = su2_displacement(step)
        vec = m @ (np.array([z_acc, 1.0], dtype=complex)
                   / math.sqrt(1.0 + abs(z_acc) ** 2))
        if abs(vec[1]) < 1e-12:
            raise SingularCompositionError(
                f"branch {r:0{state.n_qubits}b} driven to the south pole")
        z_new = vec[0] / vec[1]
        per_spin_angle = cmath.phase(complex(vec[1]))
        new_branches[r] = (z_new,
                           amp * cmath.exp(1j * state.n_spins * per_spin_angle))
    return SpinBranchState(state.n_qubits, state.n_spins, new_branches)


def spin_two_qubit_gate(eta: float, n_spins: int) -> GateReport:
    """Run the corrected four-leg rectangle on two register qubits.

    The legs (eta on qubit 0, i*tau on qubit 1, -tau on qubit 0, -i*eta on
    qubit 1) close exactly for every branch, so the ancilla factors out with
    fidelity 1 and the register acquires exp(i*N*phi_t Z (x) Z).
    """
    sol = loop_close(eta)
    steps = [(0, complex(sol.eta)), (1, 1j * sol.tau),
             (0, complex(-sol.tau)), (1, -1j * sol.eta)]

    def run(register: np.ndarray) -> SpinBranchState:
        state = SpinBranchState.from_register(register, n_spins)
        for qubit, z in steps:
            state = apply_controlled_spin(state, qubit, z)
        return state

    unitary = np.zeros((4, 4), dtype=complex)
    worst_fid = 1.0
    for r in range(4):
        reg = np.zeros(4, dtype=complex)
        reg[r] = 1.0
        out = run(reg)
        z_f, amp = out.branches[r]
        worst_fid = min(worst_fid, 1.0 - vacuum_return_infidelity(z_f, n_spins))
        unitary[r, r] = amp

    residual = run(np.full(4, 0.5, dtype=complex)).residual_entanglement()
    return GateReport(
        register_unitary=unitary if residual < DISENTANGLE_TOL else None,
        ancilla_return_fidelity=worst_fid,
        residual_entanglement=residual,
        interaction_count=4,
    )


def eta_for_phase(target_phi: float, n_spins: int) -> float:
    """Bisection for the eta whose closed loop gives N * phi_t = target_phi.

    N * phi_t(eta) increases monotonically from 0 to N * pi/4 on
    (0, sqrt(2)-1]; monotonicity is asserted on a scan rather than assumed.
    """
    top = n_spins * loop_close(ETA_MAX).phi_t
    if not 0.0 < target_phi <= top:
        raise ValueError(f"target phase {target_phi} outside reachable "
                         f"(0, {top}]")
    grid = np.linspace(1e-6, ETA_MAX, 64)
    values = [loop_close(e).phi_t for e in grid]
    if not all(b > a for a, b in zip(values, values[1:])):
        raise RuntimeError("phi_t(eta) failed its monotonicity check")
    lo, hi = 0.0, ETA_MAX
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if n_spins * loop_close(mid).phi_t < target_phi:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ErrorPoint:
    """Closed-form intrinsic errors of the uncorrected (flat) rectangle.

    For total displacement budget zeta_n split over the fan, each leg of the
    extremal branch is zeta_N = zeta_n / sqrt(2N):

    * ``phi_f``:       exact accumulated phase N*atan(2 w / (1 + 2w - w^2)),
                       w = zeta_N^2.
    * ``phi_E``:       fractional phase error (zeta_n^2 - phi_f) / zeta_n^2.
    * ``infidelity``:  1 - (1 + 8 w^3 / (1+w)^4)^(-N), log-domain.
    * ``phi_series``:  first-order series zeta_n^2 - zeta_n^4 / N.
    * ``infid_series``: leading series term zeta_n^6 / N^2.
    """

    zeta_n: float
    n_spins: int
    phi_f: float
    phi_E: float
    infidelity: float
    phi_series: float
    infid_series: float


def fan_error(zeta_n: float, n_spins: int) -> ErrorPoint:
    """Evaluate the closed-form error formulas at one (zeta_n, N) point."""
    if zeta_n <= 0:
        raise ValueError("zeta_n must be positive")
    if n_spins < 1:
        raise ValueError("need at least one spin")
    w = zeta_n ** 2 / (2.0 * n_spins)
    phi_f = n_spins * math.atan(2.0 * w / (1.0 + 2.0 * w - w * w))
    phi_e = (zeta_n ** 2 - phi_f) / zeta_n ** 2
    u = 8.0 * w ** 3 / (1.0 + w) ** 4
    infidelity = float(-math.expm1(-n_spins * math.log1p(u)))
    return ErrorPoint(
        zeta_n=float(zeta_n),
        n_spins=int(n_spins),
        phi_f=phi_f,
        phi_E=phi_e,
        infidelity=infidelity,
        phi_series=zeta_n ** 2 - zeta_n ** 4 / n_spins,
        infid_series=zeta_n ** 6 / n_spins ** 2,
    )


def phi_series_defect(zeta_n: float, n_spins: int) -> float:
    """phi_f minus its first-order series, free of catastrophic cancellation.

    Subtracting phi_series from phi_f directly loses everything below the
    double-precision resolution of phi_f itself (~1e-16 * zeta_n^2), which
    swamps the true O(zeta_n^6/N^2) defect at large N.  Rearranged exactly,
    with w = zeta_n^2/(2N) and g = 2w / (1 + 2w - w^2):

        phi_f - phi_series = N * [ (atan(g) - g) + (10 w^3 - 4 w^4)/(1 + 2w - w^2) ]

    where atan(g) - g is summed as the alternating series -g^3/3 + g^5/5 - ...
    whenever g is small enough for the direct subtraction to cancel.
    """
    w = zeta_n ** 2 / (2.0 * n_spins)
    den = 1.0 + 2.0 * w - w * w
    g = 2.0 * w / den
    if abs(g) < 0.1:
        term = -g ** 3 / 3.0
        total = term
        k = 1
        while abs(term) > 1e-30 * max(abs(total), 1e-300) and k < 60:
            term *= -g * g * (2 * k + 1) / (2 * k + 3)
            total += term
            k += 1
        atan_defect = total
    else:
        atan_defect = math.atan(g) - g
    rational = (10.0 * w ** 3 - 4.0 * w ** 4) / den
    return n_spins * (atan_defect + rational)


@dataclass
class SpinFanReport:
    """Branch-resolved outcome of a contracted fan sequence.

    Phases are tracked as unwrapped angles (per-spin composition angles summed
    and scaled by N), so they can be compared against targets exceeding 2*pi.
    """

    n_controls: int
    n_targets: int
    n_spins: int
    interaction_count: int
    branch_labels: dict
    branch_phases: dict
    target_phases: dict
    worst_phase_error: float
    worst_branch_infidelity: float
    extremal_phase: float
    extremal_label: complex
    ancilla_return_fidelity: float
    residual_entanglement: float
    register_unitary: np.ndarray | None


def fan_sequence_simulate(xs, ps, n_spins: int) -> SpinFanReport:
    """Simulate the 2(n+m) fan with displacements scaled by 1/sqrt(2N).

    Controls are qubits 0..n-1 (real legs +-x_k / sqrt(2N)), targets qubits
    n..n+m-1 (imaginary legs +-i p_j / sqrt(2N)).  Displacements within one
    quadrature block commute and are composed additively in the label, so each
    branch traverses the four-leg rectangle with net legs
    (X(r), i P(r), -X(r), -i P(r)) / sqrt(2N) where X(r), P(r) are the
    sign-weighted coefficient sums of that branch.  The flat-space target
    phase per branch is X(r) * P(r), i.e. the gate
    prod_j prod_k exp(i x_k p_j Z_k (x) Z_j).

    The all-zeros branch is the extremal one (largest displacement for
    positive coefficients); its phase and final label reproduce the
    closed-form values of :func:`fan_error` exactly.
    """
    xs, ps = [float(v) for v in xs], [float(v) for v in ps]
    n, m = len(xs), len(ps)
    if n < 1 or m < 1:
        raise ValueError("need at least one control and one target")
    nq = n + m
    scale = 1.0 / math.sqrt(2.0 * n_spins)

    branch_labels: dict[int, complex] = {}
    branch_phases: dict[int, float] = {}
    target_phases: dict[int, float] = {}
    worst_err = 0.0
    worst_infid = 0.0
    worst_fid = 1.0

    for r in range(2 ** nq):
        signs = [1.0 - 2.0 * ((r >> (nq - 1 - q)) & 1) for q in range(nq)]
        x_net = sum(s * x for s, x in zip(signs[:n], xs))
        p_net = sum(s * p for s, p in zip(signs[n:], ps))
        legs = [scale * x_net, 1j * scale * p_net,
                -scale * x_net, -1j * scale * p_net]
        zeta = 0.0 + 0.0j
        angle = 0.0
        for leg in legs:
            den = 1.0 - zeta * complex(leg).conjugate()
            if abs(den) < 1e-12:
                raise SingularCompositionError(
                    f"branch {r:0{nq}b} passed through the south pole")
            zeta = (zeta + leg) / den
            angle += n_spins * math.atan2(den.imag, den.real)
        target = x_net * p_net
        err = abs((angle - target + math.pi) % (2.0 * math.pi) - math.pi)
        infid = vacuum_return_infidelity(zeta, n_spins)
        branch_labels[r] = zeta
        branch_phases[r] = angle
        target_phases[r] = target
        worst_err = max(worst_err, err)
        worst_infid = max(worst_infid, infid)
        worst_fid = min(worst_fid, 1.0 - infid)

    amp = 2.0 ** (-nq / 2.0)
    uniform = SpinBranchState(nq, n_spins, {
        r: (branch_labels[r], amp * cmath.exp(1j * branch_phases[r]))
        for r in range(2 ** nq)})
    residual = uniform.residual_entanglement()
    unitary = None
    if residual < DISENTANGLE_TOL:
        unitary = np.diag([cmath.exp(1j * branch_phases[r])
                           for r in range(2 ** nq)])

    return SpinFanReport(
        n_controls=n,
        n_targets=m,
        n_spins=n_spins,
        interaction_count=2 * (n + m),
        branch_labels=branch_labels,
        branch_phases=branch_phases,
        target_phases=target_phases,
        worst_phase_error=worst_err,
        worst_branch_infidelity=worst_infid,
        extremal_phase=branch_phases[0],
        extremal_label=branch_labels[0],
        ancilla_return_fidelity=worst_fid,
        residual_entanglement=residual,
        register_unitary=unitary,
    )


@dataclass(frozen=True)
class ContractionRow:
    n_spins: int
    phi_f: float
    abs_err_phi: float
    overlap: float
    abs_err_overlap: float
    prefactor: float


def contraction_probe(zeta: complex, n_list) -> list[ContractionRow]:
    """Large-N convergence table toward the flat field-mode algebra.

    For each N: the rectangle phase phi_f built from legs |zeta|/sqrt(2N)
    (target |zeta|^2, error falling off as 1/N), the squared vacuum overlap
    |<0|zeta/sqrt(2N)>|^2 (target e^{-|zeta|^2/2}), and the rotation-angle
    prefactor atan(u)/u with u = |zeta|/sqrt(2N), which increases to 1.
    """
    zeta = complex(zeta)
    mag = abs(zeta)
    rows = []
    for n_spins in n_list:
        point = fan_error(mag, n_spins)
        u = mag / math.sqrt(2.0 * n_spins)
        overlap = math.exp(-n_spins * math.log1p(u * u))
        rows.append(ContractionRow(
            n_spins=int(n_spins),
            phi_f=point.phi_f,
            abs_err_phi=abs(point.phi_f - mag ** 2),
            overlap=overlap,
            abs_err_overlap=abs(overlap - math.exp(-mag ** 2 / 2.0)),
            prefactor=math.atan(u) / u if u > 0 else 1.0,
        ))
    return rows


def fitted_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def collective_operator(single: np.ndarray, n_spins: int) -> np.ndarray:
    """Sum of one single-spin operator over every spin: J = sum_j op_j."""
    dim = 2 ** n_spins
    total = np.zeros((dim, dim), dtype=complex)
    for j in range(n_spins):
        ops = [np.eye(2, dtype=complex)] * n_spins
        ops[j] = np.asarray(single, dtype=complex)
        total += kron(*ops)
    return total


def spin_generator_check(theta: float, phi: float, n_spins: int) -> float:
    """Deviation of the controlled displacement from its Hamiltonian generator.

    Dense check on 2^(N+1) amplitudes, so N <= 8.  Two identities are
    evaluated and the larger deviation returned:

    1. exp(i (theta/2) Z (x) (sin(phi) J_x - cos(phi) J_y)) equals the
       controlled pair C(D_N(theta, phi), D_N(-theta, phi)) up to global
       phase, with J_mu the plain Pauli sums (so [J_x, J_y] = 2i J_z).
    2. U^dag exp(i theta J_x) U = exp(i theta J_y) with U the tensor power of
       R(pi/2) H, showing one interaction axis suffices.
    """
    from scipy.linalg import expm

    from .linalg import HADAMARD, PAULI_X, PAULI_Y, phase_gate

    if n_spins > 8:
        raise ValueError(f"dense generator check limited to 8 spins, "
                         f"got {n_spins}")
    jx = collective_operator(PAULI_X, n_spins)
    jy = collective_operator(PAULI_Y, n_spins)
    axis = math.sin(phi) * PAULI_X - math.cos(phi) * PAULI_Y
    single_plus = expm(1j * (theta / 2.0) * axis)
    single_minus = expm(-1j * (theta / 2.0) * axis)
    d_plus = kron(*([single_plus] * n_spins))
    d_minus = kron(*([single_minus] * n_spins))

    z = np.diag([1.0, -1.0]).astype(complex)
    generator = np.kron(z, math.sin(phi) * jx - math.cos(phi) * jy)
    target = expm(1j * (theta / 2.0) * generator)
    dist1 = phase_distance(target, controlled(d_plus, d_minus))

    w = phase_gate(math.pi / 2.0) @ HADAMARD
    u = kron(*([w] * n_spins))
    dist2 = float(np.max(np.abs(
        u.conj().T @ expm(1j * theta * jx) @ u - expm(1j * theta * jy))))
    return max(dist1, dist2)
