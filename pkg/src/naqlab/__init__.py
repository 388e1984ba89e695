"""naqlab: a numerical lab for nonassociative quantum corrections.

Subpackages cover the associator correction series of nonassociative
operator powers, torsion/contorsion connection algebra, the closed-form
torsion-regularized point charge with its energy integrals, and the
shooting-method solution of the nonlinear gravitoelectric profile
equation.
"""

from . import algebra, charge, geometry, numerics, shooting

__all__ = ["algebra", "charge", "geometry", "numerics", "shooting"]
__version__ = "0.1.0"
