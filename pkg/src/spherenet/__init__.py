"""Randomized equidistributed nets on the unit n-sphere, built from words in
Haar-random rotations, plus the harmonic machinery that measures their
quality."""

__version__ = "0.1.0"

from .geometry import (
    GeneratorSet,
    Rotation,
    UnitVector,
    apply,
    compose,
    identity_rotation,
    inverse,
    sample_generator_set,
    sample_haar_rotation,
    uniform_unit_vectors,
)
from .harmonics import (
    HarmonicSpec,
    HeatKernelSeries,
    brownian_motion_series,
    build_series,
    cumulative_dim_identity_check,
    dim_harmonic,
    effective_degree,
    eigenvalue,
    hecke_funk_gamma,
    heat_kernel_point,
    l2_norm_sq,
    legendre_all,
    legendre_eval,
    truncation_cutoffs,
    truncation_degree,
)
from .netgen import (
    SphericalNet,
    Word,
    dedupe_points,
    enumerate_net,
    sample_words_net,
    word_to_rotation,
)
from .params import (
    TheoremParams,
    compute_a_n,
    compute_k,
    compute_l,
    compute_r,
    theorem_params,
)
from .analysis import (
    LipschitzTestFunction,
    QualityReport,
    averaging_gap,
    averaging_matrices,
    covering_radius,
    harmonic_discrepancy,
    integrate,
    integration_errors,
    lipschitz_family,
    quality_report,
    su2_export,
    thread_count,
    w1_lower_bound,
)
