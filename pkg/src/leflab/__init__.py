"""Exact cohomology rings of nilmanifolds, the Lefschetz property, Massey
products and symplectic blow-ups."""

from .cemodel import (Cochain, StructureSpec, check_d_squared, cochain_basis, differential,
                      format_structure, parse_cochain, parse_structure, wedge)
from .cohomring import (CERing, CohomologyRing, RingElement, RingMap, compute_cohomology,
                        point_inclusion, point_ring, projective_space_ring, pushforward,
                        restriction_from_subtorus, ring_map_from_degree2, torus_ring)
from .exactla import EPS, EpsScalar, Matrix, rank_at, rref, solve
from .lefschetz import full_report, lefschetz_map, primitive_decomposition, symplectic_class
from .massey import (is_trivial, search_triple_products, survives_blowup_ambient,
                     survives_blowup_submanifold, triple_product)
from .blowup import (build_blowup, lefschetz_report_generic, make_blowup_input, multiply,
                     predict_general, predict_surface_blowup, toeplitz_det)

__version__ = "0.1.0"
