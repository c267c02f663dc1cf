"""fourwave: exact fourfold wave-interaction symbols and causal geometry
on preset globally hyperbolic spacetimes."""

__version__ = "0.1.0"

from .exact import (CoVec4, RationalSym2, covec, involution, mink_pair,
                    q_factor, rank_nullspace, sym_outer)
from .symbols import (ConstraintFibre, LightDirection, Quadruple,
                      compat_maps, constraint_fibre_basis,
                      constraint_membership, decompose_xi,
                      divergence_symbol_pair, enumerate_valid_quadruples,
                      fluid_decompose, pythagorean_directions)
from .cascade import (CascadeState, SymbolVector, cascade_symbols,
                      christoffel_form, interaction_symbol,
                      interaction_symbol_unweighted)
from .certificate import full_certificate, genericity_sample, span_rank_certificate
from .spacetime import (SpacetimeSpec, christoffels, conformal_minkowski,
                        flat_torus, load_spec, minkowski)
from .flows import BicharState, geodesic_flow, geodesic_point, symbol_transport
from .causal import (causal_leq, chronological_relation, cut_value,
                     time_separation)
from .observe import ObservationSet, Tube, flowout_set, observation_set
from .fermi import FermiChart, fermi_chart
from .arrangement import plane_arrangement_analysis
from .detect import (SourceConfig, Tolerances, detection_surrogate,
                     earliest_points, exclusion_sets,
                     four_geodesic_intersection, injectivity_report)
