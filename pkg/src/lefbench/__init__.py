"""Numerical verification workbench for fixed-point densities on flat tori.

The package evaluates every local coincidence density twice — once in
closed form, once by the definitional pairing of an index form against an
oriented intersection plane — and checks the corresponding global
identities (alternating traces, heat supertraces, line-pair mode sums,
translation averages, coisotropic pairings) exactly or spectrally on flat
tori and their complex / symplectic refinements.
"""

from .errors import (CoarseTimeGrid, ConfigError, DegenerateProjection,
                     InfeasibleSpec, LefbenchError, NonTransverse,
                     NotCoisotropic, NotConformal, NotLagrangian,
                     TruncationInsufficient)
from .exterior import (ComplexFrame, ExteriorElement, ProductSplit,
                       basis_covector, bitype_project, conjugate, hodge_star,
                       inner, j_action, j_action_inverse, lefschetz_L,
                       masks_of_degree, multigrade_project, pullback,
                       unit_scalar, volume_element, wedge, wedge_list)
from .invariants import (TangentConfiguration, density, difference_volume_form,
                         gb_index_form, graph_configuration, nu_gb,
                         nu_gb_density, nu_rr, nu_rr_density, nu_rr_excess,
                         nu_sig, nu_sig_density, nu_sig_excess, nu_spin,
                         pi_gram_sqrt_det, realify, rr_pair_form,
                         sig_index_form, trace_configuration)
from .geometry import (PlaneWithStructure, bitype_mm_check, coisotropic_check,
                       conformal_factor, extended_pair_check, rotation_angles,
                       self_dual_middle_check, transversality_check)
from .spin import GammaRep, build_gammas, spin_density_oracle, spin_lift, spinor_symbol
from .torus import (AffineSubtorus, FlatTorus, TorusMap,
                    average_identity_check, coisotropic_pairing_check,
                    gb_identity_check, heat_supertrace, holo_lefschetz_check,
                    lefschetz_cohomological, signature_pairing_check,
                    slag_identity_check, slag_phase)
from .parametrix import (GaussianKernel, aj_flat, localization_limit,
                         periodized_gaussian, spectral_kernel,
                         torus_kernel_compare)
from .reports import VerificationReport, emit, emit_csv, emit_json
from .suite import CHECKS, run_suite, seeded_random_inputs

__version__ = "0.1.0"
