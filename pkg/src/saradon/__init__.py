"""Reconstruction of box-spline functions from single-angle Radon samples."""

from .errors import SARadonError
from .splines import BoxSplineGenerator, eval_box, eval_bspline, eval_centered, fourier_box
from .radon import (
    GeneratorField,
    ProjectionVector,
    RadonProfile,
    fourier_slice,
    radon_box_analytic,
    radon_box_closedform_n1,
    radon_f,
    radon_line_integral,
    support_bound,
)
from .projection import (
    DesignCertificate,
    LatticeRegion,
    check_injectivity,
    check_lattice_condition,
    compute_region,
    design_projection,
    sample_set_theorem2,
)
from .recon import (
    CoefficientGrid,
    GramSystem,
    add_noise,
    build_system,
    collocation_solve,
    error_metric,
    gram_matrix,
    pd_certify,
    sample_radon,
    solve_direct,
    synthesize,
    tikhonov_solve,
)

__version__ = "0.1.0"
