"""Exercise the connection/torsion/contorsion tensor algebra.

Splits a random affine connection into symmetric and antisymmetric parts,
builds the contorsion from the torsion, reassembles the connection, and
verifies the defining identities to machine precision.  Ends with the
seeded randomized suite used by the `naqlab torsion-check` subcommand.
"""

import numpy as np

from naqlab import geometry

rng = np.random.default_rng(7)

# a random near-identity metric and a random antisymmetric torsion
a = rng.uniform(-0.2, 0.2, size=(4, 4))
g = np.eye(4) + 0.5 * (a + a.T)
t = rng.uniform(-1, 1, size=(4, 4, 4))
torsion = t - np.swapaxes(t, 0, 1)

k = geometry.contorsion_from_torsion(torsion, g)

anti = 0.5 * (k.mixed - np.swapaxes(k.mixed, 0, 1))
print("K_[mu nu]^rho + T/2       :", np.abs(anti + 0.5 * torsion).max())
print("K_{mu nu rho} + K_{mu rho nu}:", np.abs(k.lower + np.swapaxes(k.lower, 1, 2)).max())

# Christoffels of a constant metric vanish, so reassembly returns the
# torsion we started from.
one = np.array([0.0])
grid = geometry.Grid((one, one, 1.0 + 0.1 * (np.arange(9) - 4), one))
gm = np.broadcast_to(g, grid.shape + (4, 4)).copy()
christ, _ = geometry.christoffel_from_metric(gm, grid)
full = geometry.assemble_connection(christ[0, 0, 0, 0], k.mixed)
print("torsion round-trip residual  :", np.abs(geometry.torsion_from_connection(full) - torsion).max())

print()
print("seeded randomized suite (200 trials):")
for name, residual in geometry.random_identity_suite(seed=123, trials=200).items():
    print(f"  {name}: {residual:.3e}")
