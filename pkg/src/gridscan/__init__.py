"""Grid-scan detection of low-dimensional manifolds in point clouds."""

from .data import SyntheticSpec, generate, load_points, save_points
from .errors import GridScanError
from .geometry import (
    CellHistogram,
    Dataset,
    GridResolution,
    UnitCubeTransform,
    build_histogram,
    cell_center,
    cell_of,
    normalize_to_unit_cube,
)
from .manifold import Chain, PiecewiseLinearManifold, build_chain, build_manifold, count_tied_steps
from .pca import PrincipalAxes, pca_fit
from .scan import (
    AbsoluteDensity,
    CapPolicy,
    Found,
    FractionDensity,
    KeptCells,
    NotFound,
    NotFoundReason,
    ScanConfig,
    effective_p,
    filter_cells,
    resolution_cap,
    scan,
)

__version__ = "0.1.0"
