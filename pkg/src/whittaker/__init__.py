"""Exact computational toolkit for matrix groups over finite local rings.

Builds GL_n and SL_n over Z/p^l and F_q[t]/(t^l), and verifies
multiplicity-one / Whittaker-model statements, regular-representation
counting and dimension formulas, and GL -> SL branching rules by
independent brute-force character computation, all in exact arithmetic.
"""

__version__ = "0.1.0"

from .localring import (AdditiveChar, RingDesc, RingElem, RingKind, get_ring,
                        is_unit, parse_ring, primitive_char, project, ring_make,
                        units, valuation)
from .linalg import (FqElem, GF, Mat, Poly, char_poly, companion, det,
                     factor_poly, inverse, min_poly, monic_irreducibles,
                     solve_count, span_size)
from .cyclotomic import CycloNum, NonRationalError, rational_value, root_of_unity
from .groups import (CapExceeded, GroupSpec, GroupTable, SubgroupHandle,
                     centralizer, congruence_subgroup, enumerate_group,
                     iter_group_chunks, lie_centralizer_count, unipotent_subgroup)
from .regular import (TypeMatrix, a_regular, centralizer_order_residue,
                      count_a_regular_classes, iota, is_cyclic, is_regular,
                      type_of)
from .whittaker_verify import (DualityChar, IntegralityError, NonDegenChar,
                               VerificationReport, induced_dim, induced_norm,
                               phi_x_value, predicted_dim_sum,
                               predicted_regular_count, theta_value,
                               verify_multiplicity_one)
from .chartab import (CharTable, ClassData, character_table, classify_regular,
                      conjugacy_classes, decompose_induced, restriction_norm,
                      special_regular_scan)
