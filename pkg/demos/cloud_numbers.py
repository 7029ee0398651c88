#!/usr/bin/env python3
"""The worked kinematic numbers for a 30-proton-mass atom.

At room temperature such an atom crosses its equilibrium position near
400 m/s; its oscillation wavelength sits around 3.3e-11 m and the derived
cloud amplitude near 2.4e-5 m, five orders of magnitude beyond the lattice
constant, so neighbouring clouds overlap heavily. The two planetary flows
(orbital and daily rotation) give the second table; the literature
estimates for those are reproduced only within a factor ~2, which the
agreement column makes explicit.
"""

from cloudlattice import CONSTANTS, cloud_kinematics, earth_flows
from cloudlattice.kinematics import REFERENCE_FLOW_ESTIMATES, agreement_factor

mass = 30.0 * CONSTANTS.M_p
kin = cloud_kinematics(mass, temperature=293.0, g0=4e-10)

print("thermal motion at 293 K")
print(f"  velocity          {kin.v0:12.4e} m/s")
print(f"  wavelength        {kin.wavelength:12.4e} m")
print(f"  cloud amplitude   {kin.amplitude:12.4e} m")
print(f"  envelope (/pi)    {kin.envelope_amplitude:12.4e} m")
print(f"  overlap vs g0     {kin.overlap:12.4e}")
print(f"  identity check    v0*Lambda / (c*lambda) = "
      f"{kin.v0 * kin.amplitude / (CONSTANTS.c * kin.wavelength):.15f}")

print("\nplanetary flows (same 30-proton-mass atom)")
for flow in earth_flows():
    ref = REFERENCE_FLOW_ESTIMATES[flow.flow_id]
    print(f"  {flow.flow_id:10s} v = {flow.v:10.1f} m/s   "
          f"lambda = {flow.wavelength:.3e} m ({agreement_factor(flow.wavelength, ref['wavelength']):.2f}x ref)   "
          f"Lambda = {flow.amplitude:.3e} m ({agreement_factor(flow.amplitude, ref['amplitude']):.2f}x ref)")
