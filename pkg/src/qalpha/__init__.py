"""Numerical toolkit for the quantum relative alpha-entropy and its relatives."""

from .channels import (
    DPIReport,
    KrausChannel,
    apply_channel,
    dpi_gap,
    dpi_random_search,
    identity_channel,
    kraus_validate,
    random_channel,
)
from .classical import (
    JointDistribution,
    alpha_generator,
    classical_dpd,
    escort_vector,
    f_divergence,
    j_alpha,
    j_alpha_nz,
    j_alpha_via_f,
    kl,
    nz_distributions,
    nz_escort,
    renyi_classical,
    theorem7_residual,
)
from .divergences import (
    DIVERGENCES,
    DivergenceValue,
    InfinityReason,
    LogBase,
    cross_entropy_alpha,
    d_max,
    d_min,
    escort,
    fidelity,
    petz_renyi,
    qdpd,
    renyi_entropy,
    s_alpha,
    sandwiched_renyi,
    umegaki,
    von_neumann_entropy,
)
from .errors import *  # noqa: F401,F403
from .io import SweepSpec, parse_state_file, serialize_state, sweep
from .mixing import (
    CommutingQuadruple,
    generalized_mix,
    petz_convexity_gap,
    s_alpha_convexity_gap,
    z_factor,
)
from .operators import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    PositiveOperator,
    Tolerances,
    maximally_mixed,
    pure_state,
    random_density,
    random_unitary,
    tensor_product,
    validate_density,
)
from .reference import run_reference_examples

__version__ = "0.1.0"
