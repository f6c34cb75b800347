"""Exact-arithmetic toolkit for fractional GKZ hypergeometric systems.

Given a smooth projective toric fan with a nef-partition, the library builds
the extended point configuration and its half-integral GKZ system, computes
period series and cohomology-valued solution bases in exact rational
arithmetic, and verifies the structural identities relating triangulations,
Groebner bases, the Stanley-Reisner ring and maximal degeneracy at desk
scale.

Typical use::

    from gkzfrac import build_system, make_fan
    from gkzfrac import series, toric

    fan = make_fan(1, [(1,), (-1,)], [[0], [1]], [[0, 1]], name="p1")
    system = build_system(fan)
    omega = series.default_weight(system)
    period = series.normalized_period_series(system, omega, 8)
"""

from .degeneracy import maximal_degeneracy_check, subdivide_kahler_cone
from .errors import GkzfracError
from .gkz import build_system, canonical_alpha
from .polytopes import convex_hull, dual_nef_partition
from .series import (b_series, gamma_series, normalized_period_series,
                     pair_with_dual)
from .toric import cohomology_ring, make_fan, validate_fan
from .triangulations import maximal_triangulation, toric_groebner_basis

__version__ = "0.1.0"

__all__ = [
    "GkzfracError",
    "__version__",
    "b_series",
    "build_system",
    "canonical_alpha",
    "cohomology_ring",
    "convex_hull",
    "dual_nef_partition",
    "gamma_series",
    "make_fan",
    "maximal_degeneracy_check",
    "maximal_triangulation",
    "normalized_period_series",
    "pair_with_dual",
    "subdivide_kahler_cone",
    "toric_groebner_basis",
    "validate_fan",
]
