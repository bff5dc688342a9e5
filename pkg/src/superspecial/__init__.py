"""Superspecial (2,2)-isogeny graphs of principally polarized abelian
surfaces over F_{p^2}: explicit construction via Richelot and elliptic-
product isogenies, reduced-automorphism classification, orbit-weighted
edges, and random-walk spectral analysis."""

from .elliptic import (
    EllipticModel,
    build_gamma1,
    enumerate_supersingular,
    is_supersingular,
    two_torsion_model,
    velu_two_isogeny,
)
from .field import (
    ExtField,
    FieldElement,
    FieldError,
    Poly,
    PrimeField,
    QuadExtField,
    build_quad_ext,
    factor,
    find_roots,
    poly_gcd,
    square_root,
)
from .genus2 import (
    RA_ORDER,
    SexticModel,
    bolza_type,
    canonical_jacobian_key,
    clebsch_invariants,
    mestre_derived,
    moebius_group,
    product_type,
)
from .graph import (
    CensusReport,
    EdgeRecord,
    SuperspecialGraph,
    VertexRecord,
    build_graph,
    census,
    diameter,
    dual_round_trip,
    expected_census,
    reroute_path,
    subgraph,
)
from .richelot import (
    IsogenyStep,
    hlp_glue,
    product_isogeny_codomain,
    product_kernels,
    quadratic_splittings,
    richelot_step,
    splitting_delta,
)
from .spectra import (
    LinearImbalanceSpec,
    SpectralReport,
    lambda_star,
    linear_imbalance_solve,
    mixing_bound,
    stationary_closed_form,
    transition_matrix,
)
from .walk import WalkConfig, WalkStats, empirical_distribution_check, random_walk

__version__ = "0.1.0"
