#!/usr/bin/env python3
"""Conservation laws under free evolution.

Evolves every mode of the coupled chain for a thousand periods from random
initial data, then prints the two conserved-quantity drifts: the energy
|A'|^2/2 + |a'|^2/2 + Vt|A|^2/2 (the velocity coupling is gyroscopic and
feeds none) and the cloud momentum a' - taut*A. Halving the step shows the
fourth-order falloff of the energy error.
"""

import numpy as np

from cloudlattice import ModeState, ModeSystem, canonical_chain, integrate

model = canonical_chain(coupling_nn=1e13)
system = ModeSystem.from_model(model)
omega_max = float(system.omega_branch.max())
omega_min = float(system.omega_branch.min())
period = 2 * np.pi / omega_min

rng = np.random.default_rng(0)
n = system.n_modes
state = ModeState(A=rng.standard_normal(n) + 1j * rng.standard_normal(n),
                  A_dot=rng.standard_normal(n) + 1j * rng.standard_normal(n),
                  a=rng.standard_normal(n) + 1j * rng.standard_normal(n),
                  a_dot=rng.standard_normal(n) + 1j * rng.standard_normal(n))

print(f"coupled chain, {n} modes, slowest period {period:.3e} s")
print(f"{'dt*Omega_max':>12}  {'energy drift':>13}  {'momentum drift':>15}")
previous = None
for frac in (0.06, 0.03, 0.015):
    dt = frac / omega_max
    rec = integrate(state, system, t_end=1000 * period, dt=dt,
                    record_every=period)
    note = ""
    if previous is not None:
        note = f"   ({previous / rec.energy_drift():.1f}x better)"
    print(f"{frac:>12}  {rec.energy_drift():>13.3e}  "
          f"{rec.momentum_drift():>15.3e}{note}")
    previous = rec.energy_drift()
