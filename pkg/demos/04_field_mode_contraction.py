"""The field-mode bus as the infinite-ensemble limit.

The bus backend is exact label algebra: every branch closes, every fan gate
comes out perfectly.  Scaling spin-ensemble displacements by 1/sqrt(2N) and
growing N reproduces it: loop phases converge at rate 1/N and spin coherent
states turn into field coherent states.
"""

import math

from amqc import field_fan, field_two_qubit, fitted_loglog_slope
from amqc.qubus import fan_target_unitary
from amqc.spin import contraction_probe
from amqc.linalg import phase_distance

print("flat bus: exact closure whatever the displacements")
rep = field_two_qubit(0.35, 0.61)
print(f"  rectangle (0.35, 0.61): branch phases +-xp = +-{0.35 * 0.61:.4f}, "
      f"fidelity {rep.ancilla_return_fidelity}")
xs, ps = (0.3, 0.4, 1.7), (0.2, 0.5)
rep = field_fan(xs, ps)
print(f"  fan {len(xs)}x{len(ps)}: {rep.interaction_count} interactions, "
      f"oracle distance "
      f"{phase_distance(rep.register_unitary, fan_target_unitary(xs, ps)):.2e}")

print("\ncontraction of the sphere onto the plane (zeta = 2):")
rows = contraction_probe(2.0, [1000 * 4 ** k for k in range(6)])
print("  N        phi_f         |phi_f - zeta^2|   overlap        prefactor")
for r in rows:
    print(f"  {r.n_spins:<8} {r.phi_f:.8f}   {r.abs_err_phi:.3e}      "
          f"{r.overlap:.8f}   {r.prefactor:.8f}")
slope = fitted_loglog_slope([r.n_spins for r in rows],
                            [r.abs_err_phi for r in rows])
print(f"  fitted phase-error slope: {slope:.4f} (limit rate is -1)")
limit = math.exp(-abs(2.0) ** 2 / 2)
print(f"  vacuum overlap converges to e^(-|zeta|^2/2) = {limit:.8f}")
