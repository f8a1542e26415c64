"""Cyclic Weyl-algebra lattice transfer matrices and their spectral closure.

The package builds the periodic chain of p-dimensional cyclic sites from its
six-vertex R-matrix and site L-operators, verifies the operator and
functional identities of the commuting transfer-matrix family, exposes an
exact-diagonalization oracle for the eigenvalue curves, and solves the
closing system of Bethe-root equations behind the inhomogeneous T-Q
representation of the spectrum.
"""

from .algebra import BlockMatrix2, det_lu, eig_dense, embed, weyl_pair
from .bethe import (
    BetheState,
    DegenerateSpec,
    bae_residuals,
    canonicalize,
    degenerate_reduce,
    lambda_tq,
    load_states,
    refine_state,
    save_states,
    solve_bae,
    verify_state,
)
from .functional import (
    FkFunction,
    ScalarFunctions,
    check_truncation,
    fk,
    fused_eigenvalue,
    g_function,
    g_laurent,
    scalar_functions,
)
from .model import (
    ModelConfig,
    SiteParams,
    check_rll,
    config_from_dict,
    config_to_dict,
    l_operator,
    load_config,
    r_matrix,
    save_config,
    validate,
    yang_baxter_residual,
)
from .presets import (
    BENCHMARK_N1,
    BENCHMARK_N2,
    BENCHMARK_N3,
    benchmark_config,
    degenerate_n1_config,
    reference_states,
)
from .spectrum import SpectrumCurve, diagonalize_at, eigenvalue_curve, spectrum_curves
from .transfer import (
    ModelConstants,
    charge_q,
    constants,
    laurent_charges,
    monodromy,
    transfer,
)

__version__ = "0.1.0"
