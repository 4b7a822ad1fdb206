"""Exact lattice arithmetic and point counting for polarized K3 surfaces
with an order-3 symmetry.

The library certifies, by finite exact computation, the minimal Picard
numbers attainable by degree-2d polarized K3 surfaces carrying a
non-symplectic order-3 automorphism, and reproduces the explicit
examples over small prime fields.  See the `k3lat` command-line tool
for the replayable check suite.
"""

from .lattices import (A2, A2_POS, BUILTIN_LATTICES, DiscriminantGroup,
                       IntegralLattice, LatticeParseError, Sublattice, U, U3,
                       lattice_from_json, load_lattice)
from .binaryforms import BinaryFormClass, canonical_class, classify_rank2_even
from .eisenstein import (A2_ROTATION, FIXED_LATTICE_TABLE, FixedLatticeRow,
                         Isometry, check_eisenstein_lemma, discriminant_action,
                         fixed_lattice_table, fixed_sublattice,
                         is_eisenstein_lattice, is_isometry, is_starred,
                         k3_numerology, order_of)
from .polarization import (ModPCertificate, PolarizationSearchReport, RootSet,
                           exists_polarization, is_chamber_interior,
                           mod_p_obstruction, roots_meeting,
                           verify_inequality_chain, verify_ua2_infeasible)
from .finitefield import field_build
from .surfaces import (CountResult, DoubleSextic, WeierstrassK3,
                       count_double_sextic, count_weierstrass, load_surface,
                       surface_from_json, x21, x66)
from .picard import (PicardBoundReport, TraceSequence, counts_from_charpoly,
                     picard_upper_bound, trace_sequence)

__version__ = "1.0.0"

__all__ = [
    "A2", "A2_POS", "A2_ROTATION", "BUILTIN_LATTICES", "BinaryFormClass",
    "CountResult", "DiscriminantGroup", "DoubleSextic",
    "FIXED_LATTICE_TABLE", "FixedLatticeRow", "IntegralLattice", "Isometry",
    "LatticeParseError", "ModPCertificate", "PicardBoundReport",
    "PolarizationSearchReport", "RootSet", "Sublattice", "TraceSequence",
    "U", "U3", "WeierstrassK3", "canonical_class", "check_eisenstein_lemma",
    "classify_rank2_even", "count_double_sextic", "count_weierstrass",
    "counts_from_charpoly", "discriminant_action", "exists_polarization",
    "field_build", "fixed_lattice_table", "fixed_sublattice",
    "is_chamber_interior", "is_eisenstein_lattice", "is_isometry",
    "is_starred", "k3_numerology", "lattice_from_json", "load_lattice",
    "load_surface", "mod_p_obstruction", "order_of", "picard_upper_bound",
    "roots_meeting", "surface_from_json", "trace_sequence",
    "verify_inequality_chain", "verify_ua2_infeasible", "x21", "x66",
]
