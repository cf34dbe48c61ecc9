"""Spin-ensemble ancilla: exact loops, and the cost of pretending it is flat.

On the sphere a rectangle of four equal legs does not close; the corrected
second leg tau(eta) closes it exactly and the resulting two-qubit gate is
error free.  The flat-space fan decompositions, mapped onto the sphere with
legs scaled by 1/sqrt(2N), acquire an intrinsic phase error ~ zeta_n^4/N and
an ancilla infidelity ~ zeta_n^6/N^2 - already negligible for the ensemble
sizes demonstrated in the lab.
"""

import math

import numpy as np

from amqc import (
    eta_for_phase,
    fan_error,
    fan_sequence_simulate,
    loop_close,
    phase_distance,
    spin_two_qubit_gate,
)

print("curvature-corrected closing leg:")
for eta in (0.05, 0.1, 0.2, 0.4):
    sol = loop_close(eta)
    print(f"  eta={eta}: tau={sol.tau:.6f} (flat space would reuse {eta}), "
          f"per-spin phase {sol.phi_t:.6f}")

print("\nexact two-qubit gate at N = 6:")
n_spins = 6
sol = loop_close(0.1)
rep = spin_two_qubit_gate(0.1, n_spins)
oracle = np.diag(np.exp(1j * n_spins * sol.phi_t * np.array([1, -1, -1, 1.0])))
print(f"  gate distance to exp(i N phi_t ZZ): "
      f"{phase_distance(rep.register_unitary, oracle):.2e}, "
      f"ancilla fidelity {rep.ancilla_return_fidelity:.15f}")

eta_cz = eta_for_phase(math.pi / 4, 8)
print(f"  eta giving a CZ-equivalent gate at N=8: {eta_cz:.6f}")

print("\nintrinsic errors of the flat fan decomposition:")
print("  zeta_n      N        phi error (frac)   ancilla infidelity")
for zeta_n, n_spins in ((5, 10 ** 5), (10, 10 ** 6), (40, 10 ** 7),
                        (40, 10 ** 9)):
    point = fan_error(float(zeta_n), n_spins)
    print(f"  {zeta_n:>5}  {n_spins:.0e}   {point.phi_E:.3e}          "
          f"{point.infidelity:.3e}")
print("  (zeta_n = 40, N = 1e7 is the headline point: 1600 entangling gates "
      "from 160 interactions\n   at ~2e-4 phase error and ~4e-5 infidelity)")

print("\nbranch-resolved simulation agrees with the closed forms:")
rep = fan_sequence_simulate([2.5, 2.5], [2.5, 2.5], 10 ** 6)
point = fan_error(5.0, 10 ** 6)
print(f"  extremal branch phase {rep.extremal_phase:.12f} vs closed form "
      f"{point.phi_f:.12f}")
print(f"  worst branch infidelity {rep.worst_branch_infidelity:.3e} "
      f"(series {point.infid_series:.3e})")
