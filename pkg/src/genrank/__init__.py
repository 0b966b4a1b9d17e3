"""Generator rank of (sub)homogeneous C*-algebras and the matrix algebra behind it."""
from .errors import GenRankError
from .gentest import (
    FiberedTuple,
    FiniteFiberAlgebra,
    GenerationReport,
    brute_force_generates,
    fibers_conjugate,
    fiberwise_generates,
    generates_direct_sum,
)
from .matalg import (
    MatrixTuple,
    OrbitType,
    StarAlgebra,
    canonical_model,
    commutant,
    generated_algebra,
    is_generating,
    orbit_type,
    validate_tuple,
)
from .rank import (
    DimensionProfile,
    RankResult,
    cube_bundle_table,
    extension_bounds,
    gr_direct_sum,
    gr_from_gr0_rr,
    gr_homogeneous,
    gr_subhomogeneous,
)
from .strata import (
    StratumInfo,
    density_threshold,
    enumerate_orbit_types,
    max_nontrivial_stratum_dim,
    normalizer_dim_numeric,
    stratum_dim,
    tangent_rank_dim,
)

__version__ = "0.1.0"
