"""Result record for register-gate extraction across all ancilla backends."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Residual entanglement below this populates the extracted register unitary.
DISENTANGLE_TOL = 1e-10


@dataclass
class GateReport:
    """What a simulated interaction sequence did to the register.

    Attributes
    ----------
    register_unitary : ndarray or None
        The (2^n, 2^n) register gate, populated only when
        ``residual_entanglement < DISENTANGLE_TOL``.
    ancilla_return_fidelity : float
        Worst-case overlap squared between the ancilla's final and initial
        states over the tested inputs; exactly 1 signals perfect
        disentanglement.
    residual_entanglement : float
        1 minus the largest Schmidt weight of the register/ancilla split,
        maximised over the tested inputs (the register basis states plus the
        uniform superposition, which witnesses branch-to-branch ancilla
        divergence that product basis inputs cannot show).
    interaction_count : int
        Number of elements in the sequence that produced the gate.
    """

    register_unitary: np.ndarray | None
    ancilla_return_fidelity: float
    residual_entanglement: float
    interaction_count: int
