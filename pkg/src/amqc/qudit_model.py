"""Hybrid-state simulation of the qudit-bus computational model.

A register of n qubits talks to a single d-level ancilla only through
controlled displacements.  The joint state is a dense vector over
2^n * d amplitudes (qubit-major, ancilla-minor: index = register_bits * d +
ancilla_level, with qubit 0 the most significant register bit).

Sequences are lists of elements in application order.  Besides controlled
displacements two special elements exist: a gate on a register qubit projected
on one ancilla level (the one non-displacement primitive needed for the
generalized Toffoli) and rotations of the ancilla, optionally controlled by a
register qubit.

Two control polarities are implemented:

* ``APPLY_ON_ONE``: |0><0| x I + |1><1| x D(x, p)
* ``SYMMETRIC``:    |0><0| x D(x, p) + |1><1| x D(-x, -p)

The rectangle loops of the two polarities produce register gates that agree
up to local phase rotations once the labels are matched as
symmetric(x, p) <-> apply-on-one(2x, 2p); with identical labels they generally
do not (symmetric branches separate twice as fast).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import largest_schmidt_weight
from .qudit import HALF_ROOT, LatticeLabel, displacement, rotation
from .report import DISENTANGLE_TOL, GateReport

APPLY_ON_ONE = "apply-on-one"
SYMMETRIC = "symmetric"
POLARITIES = (APPLY_ON_ONE, SYMMETRIC)


@dataclass(frozen=True)
class Interaction:
    """One controlled displacement of the ancilla by a register qubit."""

    qubit: int
    label: LatticeLabel
    polarity: str = APPLY_ON_ONE

    def __post_init__(self):
        if self.polarity not in POLARITIES:
            raise ValueError(f"unknown polarity {self.polarity!r}")


@dataclass(frozen=True)
class AncillaProjectedGate:
    """Apply ``gate`` to register qubit ``target`` iff the ancilla sits in
    position level ``level``; the identity on every other ancilla level."""

    target: int
    level: int
    gate: np.ndarray = field(compare=False)


@dataclass(frozen=True)
class ControlledAncillaRotation:
    """Rotation diag(e^{i*n*theta}) of the ancilla, controlled by a qubit."""

    control: int
    theta: float


@dataclass(frozen=True)
class LocalAncillaRotation:
    """Uncontrolled rotation diag(e^{i*n*theta}) of the ancilla."""

    theta: float


@dataclass
class InteractionSequence:
    """Ordered elements (first applied first) on a fixed (n_qubits, d) layout."""

    n_qubits: int
    d: int
    elements: list

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def interaction_count(self) -> int:
        return len(self.elements)


@dataclass
class HybridState:
    """Dense register (x) ancilla state vector."""

    n_qubits: int
    d: int
    amplitudes: np.ndarray

    @classmethod
    def from_product(cls, n_qubits: int, register: np.ndarray,
                     ancilla: np.ndarray) -> "HybridState":
        register = np.asarray(register, dtype=complex)
        ancilla = np.asarray(ancilla, dtype=complex)
        if register.shape != (2 ** n_qubits,):
            raise ValueError("register vector has wrong dimension")
        return cls(n_qubits, ancilla.shape[0], np.kron(register, ancilla))

    @classmethod
    def basis(cls, n_qubits: int, register_index: int,
              ancilla: np.ndarray) -> "HybridState":
        reg = np.zeros(2 ** n_qubits, dtype=complex)
        reg[register_index] = 1.0
        return cls.from_product(n_qubits, reg, ancilla)

    def as_matrix(self) -> np.ndarray:
        """View amplitudes as a (2^n, d) register-by-ancilla matrix."""
        return self.amplitudes.reshape(2 ** self.n_qubits, self.d)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _register_bits(n_qubits: int, qubit: int) -> np.ndarray:
    # Boolean mask over register indices where ``qubit`` is 1 (qubit 0 = MSB).
    r = np.arange(2 ** n_qubits)
    return (r >> (n_qubits - 1 - qubit)) & 1 == 1


def apply_element(state: HybridState, element, convention: str = HALF_ROOT) -> HybridState:
    """Apply one sequence element; returns a new HybridState."""
    amps = state.as_matrix().copy()
    n, d = state.n_qubits, state.d

    if isinstance(element, Interaction):
        if element.label.d != d:
            raise ValueError("interaction label dimension does not match state")
        if not 0 <= element.qubit < n:
            raise ValueError("interaction qubit out of range")
        mask = _register_bits(n, element.qubit)
        dm = displacement(d, element.label.x, element.label.p, convention)
        if element.polarity == APPLY_ON_ONE:
            amps[mask] = amps[mask] @ dm.T
        else:
            dm_neg = displacement(d, -element.label.x, -element.label.p, convention)
            amps[~mask] = amps[~mask] @ dm.T
            amps[mask] = amps[mask] @ dm_neg.T
    elif isinstance(element, AncillaProjectedGate):
        u = np.asarray(element.gate, dtype=complex)
        col = amps[:, element.level].reshape(
            2 ** element.target, 2, 2 ** (n - 1 - element.target))
        amps[:, element.level] = np.einsum("ab,ibj->iaj", u, col).reshape(-1)
    elif isinstance(element, ControlledAncillaRotation):
        mask = _register_bits(n, element.control)
        amps[mask] = amps[mask] * np.exp(1j * element.theta * np.arange(d))
    elif isinstance(element, LocalAncillaRotation):
        amps = amps * np.exp(1j * element.theta * np.arange(d))
    else:
        raise TypeError(f"unknown sequence element {element!r}")

    return HybridState(n, d, amps.reshape(-1))


def apply_interaction(state: HybridState, interaction: Interaction,
                      convention: str = HALF_ROOT) -> HybridState:
    """Controlled displacement on one register qubit; norm preserving."""
    return apply_element(state, interaction, convention)


def run_sequence(seq: InteractionSequence, state: HybridState,
                 convention: str = HALF_ROOT) -> HybridState:
    for element in seq.elements:
        state = apply_element(state, element, convention)
    return state


def extract_register_gate(seq: InteractionSequence, anc_init: np.ndarray | None = None,
                          convention: str = HALF_ROOT) -> GateReport:
    """Run a sequence on every register basis state and extract the gate.

    Each basis state (and, as an entanglement witness, the uniform register
    superposition) is propagated with the ancilla starting in ``anc_init``
    (default: position level |0>_x).  If every output factorises with the
    ancilla returned to ``anc_init`` up to phase, the register unitary is
    assembled column by column; otherwise the worst-case ancilla return
    fidelity and residual entanglement are reported and the unitary is left
    unset.  Non-disentangling sequences are reported, never rejected.
    """
    n, d = seq.n_qubits, seq.d
    if anc_init is None:
        anc_init = np.zeros(d, dtype=complex)
        anc_init[0] = 1.0
    anc_init = np.asarray(anc_init, dtype=complex)
    if anc_init.shape != (d,):
        raise ValueError("ancilla initial state has wrong dimension")

    dim_reg = 2 ** n
    unitary = np.zeros((dim_reg, dim_reg), dtype=complex)
    worst_fidelity = 1.0
    worst_residual = 0.0

    uniform = np.full(dim_reg, 1.0 / np.sqrt(dim_reg), dtype=complex)
    inputs = [HybridState.basis(n, r, anc_init) for r in range(dim_reg)]
    inputs.append(HybridState.from_product(n, uniform, anc_init))

    for r, state in enumerate(inputs):
        out = run_sequence(seq, state, convention).as_matrix()
        worst_residual = max(worst_residual, 1.0 - largest_schmidt_weight(out))
        returned = out @ np.conj(anc_init)
        worst_fidelity = min(worst_fidelity, float(np.linalg.norm(returned) ** 2))
        if r < dim_reg:
            unitary[:, r] = returned

    return GateReport(
        register_unitary=unitary if worst_residual < DISENTANGLE_TOL else None,
        ancilla_return_fidelity=worst_fidelity,
        residual_entanglement=worst_residual,
        interaction_count=len(seq.elements),
    )


# ----------------------------------------------------------------------------
# sequence builders
# ----------------------------------------------------------------------------

def two_qubit_sequence(j: int, k: int, x: int, p: int, d: int,
                       n_qubits: int | None = None,
                       polarity: str = APPLY_ON_ONE) -> InteractionSequence:
    """Four-interaction rectangle giving a controlled phase between qubits j, k.

    With apply-on-one polarity the extracted gate is C^j_k R(2*pi*x*p/d),
    entangling iff x*p is not a multiple of d, for any ancilla initial state.
    """
    if j == k:
        raise ValueError("control and target must differ")
    if n_qubits is None:
        n_qubits = max(j, k) + 1
    lab = lambda xx, pp: LatticeLabel(xx, pp, d)
    elements = [
        Interaction(j, lab(x, 0), polarity),
        Interaction(k, lab(0, p), polarity),
        Interaction(j, lab(-x, 0), polarity),
        Interaction(k, lab(0, -p), polarity),
    ]
    return InteractionSequence(n_qubits, d, elements)


def fan_one_target(xs, p: int, d: int, polarity: str = APPLY_ON_ONE) -> InteractionSequence:
    """2(n+1) interactions implementing prod_k C^k_t R(2*pi*x_k*p/d).

    Controls are qubits 0..n-1, the target is qubit n.  A per-gate
    construction would need 4n interactions.
    """
    xs = list(xs)
    n = len(xs)
    if n < 1:
        raise ValueError("need at least one control")
    t = n
    lab = lambda xx, pp: LatticeLabel(xx, pp, d)
    elements = [Interaction(k, lab(xk, 0), polarity) for k, xk in enumerate(xs)]
    elements.append(Interaction(t, lab(0, p), polarity))
    elements += [Interaction(k, lab(-xk, 0), polarity) for k, xk in enumerate(xs)]
    elements.append(Interaction(t, lab(0, -p), polarity))
    return InteractionSequence(n + 1, d, elements)


def fan_bipartite(xs, ps, d: int, polarity: str = APPLY_ON_ONE) -> InteractionSequence:
    """2(n+m) interactions implementing all n*m controlled rotations.

    Controls are qubits 0..n-1 with position displacements x_k, targets are
    qubits n..n+m-1 with momentum displacements p_j; the register gate is
    prod_j prod_k C^k_j R(2*pi*x_k*p_j/d).  Per-gate construction: 4nm.
    """
    xs, ps = list(xs), list(ps)
    n, m = len(xs), len(ps)
    if n < 1 or m < 1:
        raise ValueError("need at least one control and one target")
    lab = lambda xx, pp: LatticeLabel(xx, pp, d)
    elements = [Interaction(k, lab(xk, 0), polarity) for k, xk in enumerate(xs)]
    elements += [Interaction(n + j, lab(0, pj), polarity) for j, pj in enumerate(ps)]
    elements += [Interaction(k, lab(-xk, 0), polarity) for k, xk in enumerate(xs)]
    elements += [Interaction(n + j, lab(0, -pj), polarity) for j, pj in enumerate(ps)]
    return InteractionSequence(n + m, d, elements)


def generalized_toffoli(n: int, u: np.ndarray, d: int) -> InteractionSequence:
    """Apply ``u`` to a target qubit iff all n control qubits are 1.

    The controls each displace the ancilla (started in |0>_x) by one position
    step, counting the number of 1-controls into orthogonal ancilla levels; a
    gate projected on level n then fires exactly on the all-ones subspace and
    the displacements are undone.  Needs d > n so the count cannot wrap.
    """
    if d <= n:
        raise ValueError(f"ancilla dimension {d} too small to count {n} "
                         f"controls without wraparound")
    lab = lambda xx: LatticeLabel(xx, 0, d)
    elements = [Interaction(k, lab(1)) for k in range(n)]
    elements.append(AncillaProjectedGate(target=n, level=n % d,
                                         gate=np.asarray(u, dtype=complex)))
    elements += [Interaction(k, lab(-1)) for k in range(n)]
    return InteractionSequence(n + 1, d, elements)


def mod_d_phase_gate(theta: float, n: int, d: int) -> InteractionSequence:
    """Phase e^{i*theta*((q_1+...+q_n) mod d)*q_t} on n controls and target t.

    2n+1 elements with the ancilla started in |0>_x.  For n < d the modular
    sum never wraps and the gate coincides with prod_k C^k_t R(theta).
    """
    if n < 1:
        raise ValueError("need at least one control")
    lab = lambda xx: LatticeLabel(xx, 0, d)
    elements = [Interaction(k, lab(1)) for k in range(n)]
    elements.append(ControlledAncillaRotation(control=n, theta=theta))
    elements += [Interaction(k, lab(-1)) for k in range(n)]
    return InteractionSequence(n + 1, d, elements)


def single_pair_arbitrary_rotation(theta: float, d: int) -> InteractionSequence:
    """C^0_1 R(theta) for arbitrary real theta via one ancilla rotation.

    Pure displacement loops only reach the d integer powers of omega_d; with
    one qubit-controlled ancilla rotation any phase is reachable (the ancilla
    must start in |0>_x).
    """
    lab = lambda xx: LatticeLabel(xx, 0, d)
    return InteractionSequence(2, d, [
        Interaction(0, lab(1)),
        ControlledAncillaRotation(control=1, theta=theta),
        Interaction(0, lab(-1)),
    ])


def spin_z_operator(d: int) -> np.ndarray:
    """Effective z-spin diag(s, s-1, ..., -s) with s = (d-1)/2."""
    s = (d - 1) / 2.0
    return np.diag(s - np.arange(d)).astype(complex)


def hamiltonian_generator_check(theta: float, d: int) -> float:
    """Deviation of the displacement interaction from its Hamiltonian generator.

    Checks two identities and returns the larger deviation:

    1. exp(-i*theta * Z (x) S_z) equals (e^{-i*theta*s} Z-phase (x) I) times
       C(R_d(theta), R_d(-theta)) -- the local qubit phase is the only
       difference, so the comparison is made with a phase-blind metric.
    2. C(R_d(theta), R_d(-theta)) * (I (x) R_d(-theta)) = C(I, R_d(-2*theta)),
       the route from the generated interaction to a momentum displacement:
       theta = -pi*p/d turns the right side into the apply-on-one interaction
       with label (0, p).
    """
    from .linalg import controlled, identity, phase_distance

    sz = spin_z_operator(d)
    s = (d - 1) / 2.0
    # Z (x) S_z is diagonal, so its exponential is elementwise.
    zdiag = np.array([1.0, -1.0])
    gen = np.kron(zdiag, np.diag(sz).real)
    target = np.diag(np.exp(-1j * theta * gen))

    local = np.kron(np.diag([np.exp(-1j * theta * s), np.exp(1j * theta * s)]),
                    identity(d))
    built = local @ controlled(rotation(d, theta), rotation(d, -theta))
    dist1 = phase_distance(target, built)

    lhs = controlled(rotation(d, theta), rotation(d, -theta)) @ \
        np.kron(identity(2), rotation(d, -theta))
    rhs = controlled(identity(d), rotation(d, -2 * theta))
    dist2 = phase_distance(lhs, rhs)
    return max(dist1, dist2)
