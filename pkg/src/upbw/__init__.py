"""Certified artifacts from unextendible product bases.

Pipeline: build a UPB (:mod:`upbw.upb`), form the bound-entangled state
(:mod:`upbw.states`), bound the separation constant (:mod:`upbw.epsilon`),
build the witness (:mod:`upbw.witness`) and the indecomposable positive map
(:mod:`upbw.posmap`).
"""
from .config import Tolerances, get_tolerances, set_tolerances, use_tolerances
from .epsilon import (EpsilonBounds, NoAdmissiblePairError, SubsetCertificate, epsilon_bounds,
                      epsilon_lower_bound, epsilon_upper_bound, f_value, proposition1_check)
from .kernels import BACKEND
from .linalg import (BipartiteIndex, hermitian_eig, kron, min_eigenvalue, partial_trace_A,
                     partial_trace_B, partial_transpose_B)
from .posmap import (MapCertificates, PositiveMapRep, adjoint_apply, apply, complete_positivity_check,
                     identity_map, indecomposability_certificate, map_from_witness, positivity_probe,
                     transposition_map, unitality_defect)
from .states import BoundEntangledState, bound_entangled_state, is_ppt, overlap_with
from .upb import (ProductState, Upb, ValidationOptions, ValidationReport, Verdict, build_gentiles3n,
                  build_pyramid, load_upb, tensor_upb, validate)
from .witness import (MaxEntangledState, Witness, build_witness, check_product_positivity,
                      choose_max_entangled, is_maximally_entangled, lemma1_check, psi_plus)

__version__ = "0.1.0"
