from .exact_linalg import (
    smith_normal_form, rank, rank_mod_p, cokernel_structure, kernel_lattice,
    integer_determinant, fk_determinant, fk_factorization_check,
)
from .chain_complex import homology, rho_Z, rho_2, alpha_log_dets, verify_rho_identity
from .group_ring import base_change, homology_with_action, operator_norm_bound
from .finite_group_homology import (
    standard_resolution, group_homology, coinvariants, nu_kernel_cokernel,
    estimate_constants, verify_estimate_bounds,
)
from .growth import (
    run_tower, bound_lambda, probe_alpha_vanishing, probe_torsion_growth, rank_gradient_example,
)

__all__ = [
    "smith_normal_form", "rank", "rank_mod_p", "cokernel_structure", "kernel_lattice",
    "integer_determinant", "fk_determinant", "fk_factorization_check",
    "homology", "rho_Z", "rho_2", "alpha_log_dets", "verify_rho_identity",
    "base_change", "homology_with_action", "operator_norm_bound",
    "standard_resolution", "group_homology", "coinvariants", "nu_kernel_cokernel",
    "estimate_constants", "verify_estimate_bounds",
    "run_tower", "bound_lambda", "probe_alpha_vanishing", "probe_torsion_growth",
    "rank_gradient_example",
]
