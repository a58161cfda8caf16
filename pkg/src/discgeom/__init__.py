"""Discrete differential calculus and spectral geometry on weighted graphs.

A finite vertex set with a positive measure and symmetric non-negative edge
weights carries a full calculus: differentials and one-forms, Dirichlet
energy, a Laplacian with its Fourier analysis, heat semigroups and commute
distances, isoperimetric bounds, curvature flows on embeddings, and the
spectral embedding and clustering algorithms built on top of them.
"""
import os as _os

# DISCGEOM_THREADS caps the BLAS pools; it must land before numpy loads.
if "DISCGEOM_THREADS" in _os.environ:
    for _k in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_k, _os.environ["DISCGEOM_THREADS"])

from .calculus import (
    GraphSpace,
    Partition,
    basis_function,
    codifferential,
    differential,
    dirichlet_energy,
    energy_matrix,
    inner_a,
    inner_form,
    integral,
    laplacian_apply,
    laplacian_matrix,
    mean,
    module_action,
    norm_a,
    pointwise_product,
    volume,
)
from .spectral import (
    FilterSpec,
    NumericalError,
    Spectrum,
    apply_filter,
    chebyshev_coefficients,
    convolve,
    eigendecompose,
    fourier,
    inverse_fourier,
    laplacian_variant,
)
from .walk import (
    WalkOperator,
    commute_distance,
    commute_embedding,
    evolve_continuous,
    evolve_discrete,
    expected_hitting,
    simulate_hitting_times,
    step,
    transition_density,
    transition_probability,
    walk_operator,
)
from .bounds import (
    BoundCheck,
    BoundsReport,
    boundary_volume,
    isoperimetric_constant,
    verify_bounds,
)
from .geometry import (
    FlowResult,
    MonotonicityReport,
    PhysicsSystem,
    curvature,
    dirichlet_solve,
    embedding_energy,
    energy_monotonicity_check,
    gaussian_weights,
    hooke_force,
    hooke_trajectory,
    newton_system,
    newton_trajectory,
    newton_weights,
    oscillation_frequencies,
    smooth,
    variable_weight_flow,
)
from .learning import (
    BridgeReport,
    ClusterResult,
    DatasetAsGraph,
    IdentityReport,
    LppResult,
    PcaResult,
    bridge_weights,
    covariance_bridge,
    graph_cut_loss,
    graph_cut_loss_spectral,
    kernel_kmeans_features,
    laplacian_eigenmaps,
    lle,
    lle_curvature_identity,
    lle_embed,
    lle_weights,
    lpp,
    nearest_neighbor_sets,
    pca,
    spectral_clustering,
    weighted_kmeans,
)

__version__ = "0.1.0"
