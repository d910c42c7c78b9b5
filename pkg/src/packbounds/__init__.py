"""Packing-based lower bounds for Dirichlet Laplacian eigenvalues.

Three legs: finite-difference spectra of planar domains, double-lattice
packing densities of convex polygons, and the closed-form bound family that
ties the two together.
"""

from .bounds import (
    BoundInputs,
    BoundResult,
    bound_table_csv,
    convex_planar_bound,
    counting_upper_bound,
    dominates_li_yau,
    general_dimension_floors,
    li_yau_bound,
    polya_bound,
    theorem1_bound,
    unit_ball_volume,
    weyl_constant,
)
from .errors import (
    ConfigError,
    ConvergenceFailureError,
    LemmaEnvelopeError,
    PackBoundsError,
    ResolutionTooCoarseError,
    SpectrumRangeError,
    UnknownBodyError,
)
from .geometry import (
    ConvexPolygon,
    Point2,
    Pose2,
    area,
    convex_intersection_area,
    diameter,
    is_convex,
    point_reflect,
    random_convex_polygon,
    regular_polygon,
)
from .packing import (
    DoubleLatticeConfig,
    KnownConstant,
    Lattice2,
    PackingDensity,
    WindowCount,
    density,
    empirical_density,
    is_valid_packing,
    known_constant,
    lemma_limit_check,
    optimize_double_lattice,
    packing_to_svg,
    total_overlap_area,
    window_count,
    window_csv,
)
from .spectral import (
    DomainSpec,
    GridDomain,
    SparseOperator,
    Spectrum,
    assemble_laplacian,
    counting_function,
    lowest_eigenvalues,
    rasterize,
    refine_extrapolate,
    spectrum_to_csv,
)

__version__ = "0.1.0"
