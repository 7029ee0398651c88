#!/usr/bin/env python3
"""Waveguide geometry and the tabletop resonator that mimics it.

A wave circling the planet covers 2*pi*R per cycle along the surface and
4*R along a diameter, a fixed ratio of pi/2 regardless of the radius. Any
object whose horizontal-to-vertical dimensions repeat that ratio shares the
geometry; the classic 20 cm x 12.7 cm triangle section misses pi/2 by a
quarter percent. The usable band runs from the lattice-vibration cutoff
wavelength up to the object size.
"""

from cloudlattice import (CONSTANTS, ResonatorGeometry, check_geometry,
                          earth_path_lengths, harmonic_lengths,
                          spectral_window, travel_times)

lengths = earth_path_lengths(CONSTANTS.R_earth)
t_tan, t_rad = travel_times(lengths.L_tan, lengths.L_rad, CONSTANTS.c)
print("planetary paths")
print(f"  surface   {lengths.L_tan:12.5e} m   front travel {t_tan:.4f} s")
print(f"  diameter  {lengths.L_rad:12.5e} m   front travel {t_rad:.4f} s")
print(f"  ratio     {lengths.ratio:.10f} (pi/2, radius-independent)")

print("\ntabletop check: 0.20 m x 0.127 m")
result = check_geometry(0.20, 0.127, tolerance=0.01)
print(f"  ratio {result.ratio:.6f}, deviation {result.deviation:.2%} "
      f"-> {'pass' if result.passed else 'fail'} at {result.tolerance:.0%}")

print("\n  square-base monument with side/height = pi/2:")
monument = check_geometry(1.5707963267948966 * 100.0, 100.0)
print(f"  deviation {monument.deviation:.2e} -> "
      f"{'pass' if monument.passed else 'fail'}")

print("\nfirst harmonics of the tabletop dimensions (ratio preserved)")
base = ResonatorGeometry(0.20, 0.127)
for n, lt, lr in harmonic_lengths(base, 4):
    print(f"  n={n}: {lt:.4f} m x {lr:.4f} m (ratio {lt / lr:.6f})")

window = spectral_window(nu_debye=1e13, l_max=0.12)
print("\nspectral window bounded by the vibration cutoff and the object size")
print(f"  wavelength {window.lambda_min:.3e} .. {window.lambda_max:.3e} m")
print(f"  frequency  {window.nu_min:.3e} .. {window.nu_max:.3e} Hz")
