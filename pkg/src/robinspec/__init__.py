"""Robin and Steklov eigenvalue bounds for planar domains.

Verifies, at desk scale, that the area-normalized third Robin eigenvalue
of a simply-connected domain stays below the double-disk value
2*pi*lambda_2(D; alpha/(4*pi)) for alpha in [-4*pi, 0], and the Steklov
corollary sigma_2 * L < 4*pi.  Built from closed-form conformal cap maps,
Bessel-series disk modes, and a weighted Robin finite element solver on a
single disk mesh.
"""

from .bounds import (
    BoundReport,
    SaturationWeights,
    convergence_check_A2,
    pulled_apart_perimeter,
    saturation_lower,
    steklov_sigma,
    steklov_sigma2,
    sweep,
    verify_main,
)
from .caps import Cap, cap_contains, cap_map, cap_map_inverse, cap_radius_param, cap_reflection, fold
from .diskmodes import (
    DiskMode,
    bessel_j,
    disk_g,
    disk_lambda1,
    disk_lambda2,
    disk_mode,
    disk_mode_energies,
)
from .domains import DomainSpec, default_gallery, load_gallery, make_domain, pullback_problem, scale_coeffs
from .femrobin import (
    Mesh,
    SpectrumResult,
    WeightedRobinProblem,
    assemble,
    build_disk_mesh,
    export_mesh,
    rayleigh_quotient,
    solve_lowest,
    solve_problem,
)
from .trial import (
    TrialContext,
    find_normalizing_point,
    find_orthogonal_cap,
    make_trial_context,
    phi,
    trial_rayleigh_pieces,
    vector_field,
)
from .winding import winding_number

__version__ = "0.1.0"
