"""Probability kinematics for angular variables.

Revise a prior over fine-grained angles by evidence stated on a coarse
scalar (Jeffrey conditioning via the reference-ratio rule), sample the
resulting posterior with an in-house NUTS, and validate the coarse
marginal with an in-house one-sample KS test.
"""

from .backbone3d import (
    GeometryParams,
    build_backbone,
    ca_distance_matrix,
    coords_to_pdb,
    end_to_end_ca_distance,
    end_to_end_grad,
    measure_backbone_dihedrals,
    measure_bond_angle,
    measure_dihedral,
    place_atom,
)
from .distributions import (
    GaussianParams,
    ScaledBetaParams,
    StephensParams,
    VonMisesParams,
    gaussian_cdf,
    gaussian_logpdf,
    scaled_beta_cdf,
    scaled_beta_logpdf,
    stephens_cdf,
    stephens_logpdf,
    vm_logpdf,
    vm_sample,
    wrap_angle,
)
from .errors import (
    AdaptationFailureError,
    DegenerateFrameError,
    DegenerateSampleError,
    DomainError,
    GradientError,
    InvalidCdfError,
    NumericError,
    ProbkinError,
    SingularityError,
    SupportMismatchError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    ProteinSettings,
    VrwSettings,
    WhitworthSettings,
    emit_report,
    run_experiment,
    run_protein_experiment,
    run_vrw_experiment,
    run_whitworth,
)
from .pk import (
    DiscreteDistribution,
    Partition,
    PkModel,
    RobustGaussianFit,
    discrete_pk_update,
    estimate_reference_gaussian,
    faithfulness_check,
    reference_ratio_from_parts,
    reference_ratio_logpdf,
)
from .sampler import (
    ChainResult,
    SamplerConfig,
    TargetDensity,
    build_target_density,
    check_gradient,
    leapfrog,
    nuts_sample,
)
from .stats import KSReport, histogram, kolmogorov_sf, ks_one_sample, thin
from .walk2d import (
    coords_from_angles,
    resultant_length,
    resultant_length_and_grad,
    resultant_length_grad,
    resultant_vector,
    vrw_resultant_sample,
    vrw_sample,
)

__version__ = "0.1.0"
