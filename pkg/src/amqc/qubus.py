"""Exact symbolic field-mode bus backend (the flat-phase-space reference).

The bus is never represented in a truncated Hilbert space: a displacement
sequence acting on a coherent state is fully described by the running label
(x, p) and an accumulated phase, because

    D(x2, p2) D(x1, p1) = exp(i (x1 p2 - p1 x2) / 2) D(x1 + x2, p1 + p2)

holds exactly.  Flat geometry means every branch of every fan sequence closes
exactly, which makes this backend the zero-error oracle that the spin
ensemble converges to as N grows.  The gate extraction routines keep the
closure exact even in floating point by counting signed integer multiples of
the step magnitudes per branch; floats only enter the continuous phases.

Interactions use the symmetric polarity C(D(x, p), D(-x, -p)): control bit 0
displaces one way, bit 1 the opposite way.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .report import DISENTANGLE_TOL, GateReport


@dataclass(frozen=True)
class FieldLabel:
    """A phase-space point (position displacement, momentum displacement)."""

    x: float
    p: float

    def __neg__(self) -> "FieldLabel":
        return FieldLabel(-self.x, -self.p)

    def __add__(self, other: "FieldLabel") -> "FieldLabel":
        return FieldLabel(self.x + other.x, self.p + other.p)


ORIGIN = FieldLabel(0.0, 0.0)


def compose_field(l1: FieldLabel, l2: FieldLabel) -> tuple[FieldLabel, complex]:
    """Combine two displacements applied in sequence (l1 first, then l2).

    Returns the summed label and the scalar e^{i phi}, phi = (x1 p2 - p1 x2)/2,
    such that D(l2) D(l1) = scalar * D(l1 + l2).
    """
    phi = 0.5 * (l1.x * l2.p - l1.p * l2.x)
    return l1 + l2, cmath.exp(1j * phi)


def field_overlap(l1: FieldLabel, l2: FieldLabel) -> float:
    """Magnitude of the coherent overlap |<l1|l2>| = e^{-(dx^2+dp^2)/4}.

    Only used for diagnostic entanglement reporting; the phase convention is
    pinned by compose_field and never enters register gates.
    """
    dx, dp = l2.x - l1.x, l2.p - l1.p
    return math.exp(-(dx * dx + dp * dp) / 4.0)


@dataclass
class FieldBranchState:
    """Register basis branches, each dragging one bus label and amplitude."""

    n_qubits: int
    branches: dict = field(default_factory=dict)

    @classmethod
    def from_register(cls, register: np.ndarray,
                      label: FieldLabel = ORIGIN) -> "FieldBranchState":
        register = np.asarray(register, dtype=complex)
        n_qubits = int(round(math.log2(register.shape[0])))
        if 2 ** n_qubits != register.shape[0]:
            raise ValueError("register dimension is not a power of two")
        branches = {r: (label, complex(a))
                    for r, a in enumerate(register) if a != 0}
        return cls(n_qubits, branches)

    def total_norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for _, a in self.branches.values()))

    def residual_entanglement(self) -> float:
        dim = 2 ** self.n_qubits
        rho = np.zeros((dim, dim), dtype=complex)
        for r1, (l1, a1) in self.branches.items():
            for r2, (l2, a2) in self.branches.items():
                # Overlap phase consistent with compose_field: the geometric
                # cross term (x1 p2 - p1 x2)/2 on top of the Gaussian falloff.
                cross = 0.5 * (l2.x * l1.p - l2.p * l1.x)
                rho[r1, r2] = a1 * a2.conjugate() * field_overlap(l2, l1) * \
                    cmath.exp(1j * cross)
        evals = np.linalg.eigvalsh(rho)
        return float(1.0 - evals[-1])


def apply_controlled_field(state: FieldBranchState, qubit: int, x: float,
                           p: float) -> FieldBranchState:
    """Symmetric controlled displacement: bit 0 gets +(x, p), bit 1 -(x, p)."""
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    step = FieldLabel(x, p)
    new_branches = {}
    for r, (label, amp) in state.branches.items():
        bit = (r >> (state.n_qubits - 1 - qubit)) & 1
        this = step if bit == 0 else -step
        label_new, scalar = compose_field(label, this)
        new_branches[r] = (label_new, amp * scalar)
    return FieldBranchState(state.n_qubits, new_branches)


def _run_branches(n_qubits: int, steps, initial_label: FieldLabel):
    """Propagate every register basis branch through a step list.

    Returns (labels, phases) keyed by register index; phases are complex
    amplitudes of modulus 1.  Label bookkeeping is symbolic: each branch
    counts signed integer multiples of the step magnitudes, so a sequence
    whose displacements cancel returns the branch to ``initial_label``
    exactly, with no float residue.  Floats only enter the (continuous)
    geometric phases.
    """
    labels, phases = {}, {}
    for r in range(2 ** n_qubits):
        coeffs: dict[tuple[float, float], int] = {}
        phase = 1.0 + 0.0j
        for qubit, x, p in steps:
            if x == 0.0 and p == 0.0:
                continue
            bit = (r >> (n_qubits - 1 - qubit)) & 1
            sign = 1 if bit == 0 else -1
            acc_x = initial_label.x + sum(c * kx for (kx, _), c in coeffs.items())
            acc_p = initial_label.p + sum(c * kp for (_, kp), c in coeffs.items())
            phase *= cmath.exp(0.5j * (acc_x * sign * p - acc_p * sign * x))
            # Canonical axis so a step and its negation share one bucket.
            sx, sp = sign * x, sign * p
            if (sx, sp) < (0.0, 0.0):
                axis, orient = (-sx, -sp), -1
            else:
                axis, orient = (sx, sp), 1
            coeffs[axis] = coeffs.get(axis, 0) + orient
        net_x = sum(c * kx for (kx, _), c in coeffs.items())
        net_p = sum(c * kp for (_, kp), c in coeffs.items())
        if all(c == 0 for c in coeffs.values()):
            labels[r] = initial_label
        else:
            labels[r] = FieldLabel(initial_label.x + net_x,
                                   initial_label.p + net_p)
        phases[r] = phase
    return labels, phases


def _report_from_branches(n_qubits: int, steps,
                          initial_label: FieldLabel) -> GateReport:
    labels, phases = _run_branches(n_qubits, steps, initial_label)
    dim = 2 ** n_qubits
    returned = all(labels[r] == initial_label for r in range(dim))
    worst_fid = min(field_overlap(initial_label, labels[r]) ** 2
                    for r in range(dim))
    amp = dim ** -0.5
    uniform = FieldBranchState(n_qubits, {
        r: (labels[r], amp * phases[r]) for r in range(dim)})
    residual = uniform.residual_entanglement()
    unitary = None
    if returned and residual < DISENTANGLE_TOL:
        unitary = np.diag([phases[r] for r in range(dim)])
    return GateReport(
        register_unitary=unitary,
        ancilla_return_fidelity=worst_fid,
        residual_entanglement=residual,
        interaction_count=len(steps),
    )


def field_two_qubit(x: float, p: float,
                    initial_label: FieldLabel = ORIGIN) -> GateReport:
    """Four-interaction rectangle: register gate exp(i x p Z (x) Z).

    The bus returns to its initial label on every branch whatever that label
    is; branch phases are +-x*p by the parity of the two control bits (the
    loop is traversed in opposite senses).  The result is locally equivalent
    to the controlled phase CR(4xp): multiplying by R(2xp) on each qubit
    yields CR(4xp) exactly up to a global phase, and x*p = pi/4 gives CZ.
    """
    steps = [(0, x, 0.0), (1, 0.0, p), (0, -x, 0.0), (1, 0.0, -p)]
    return _report_from_branches(2, steps, initial_label)


def field_fan(xs, ps, initial_label: FieldLabel = ORIGIN) -> GateReport:
    """2(n+m) interactions implementing all n*m phase gates exactly.

    Controls 0..n-1 displace in position by x_k, targets n..n+m-1 in momentum
    by p_j; the register gate is prod_j prod_k exp(i x_k p_j Z_k (x) Z_j) and
    every branch label closes exactly (flat phase space, no curvature term).
    A per-gate construction would spend 4nm interactions.
    """
    xs, ps = [float(v) for v in xs], [float(v) for v in ps]
    n, m = len(xs), len(ps)
    if n < 1 or m < 1:
        raise ValueError("need at least one control and one target")
    steps = [(k, xk, 0.0) for k, xk in enumerate(xs)]
    steps += [(n + j, 0.0, pj) for j, pj in enumerate(ps)]
    steps += [(k, -xk, 0.0) for k, xk in enumerate(xs)]
    steps += [(n + j, 0.0, -pj) for j, pj in enumerate(ps)]
    return _report_from_branches(n + m, steps, initial_label)


def fan_target_unitary(xs, ps) -> np.ndarray:
    """Dense oracle prod_j prod_k exp(i x_k p_j Z_k (x) Z_j), built directly
    from branch parities."""
    xs, ps = [float(v) for v in xs], [float(v) for v in ps]
    n, m = len(xs), len(ps)
    nq = n + m
    phases = []
    for r in range(2 ** nq):
        signs = [1.0 - 2.0 * ((r >> (nq - 1 - q)) & 1) for q in range(nq)]
        total = sum(xk * pj * signs[k] * signs[n + j]
                    for k, xk in enumerate(xs) for j, pj in enumerate(ps))
        phases.append(cmath.exp(1j * total))
    return np.diag(phases)
