"""Top-level verification: the sharp third-eigenvalue bound, the Steklov
corollary via Robin root-finding, and the pulled-apart saturation lower
bound with its convergence check.

The headline inequality, for a simply-connected domain with area A and
perimeter L and alpha in [-4*pi, 0], is

    lambda_3(Omega; alpha/L) * A  <  2*pi * lambda_2(D; alpha/(4*pi)),

strict for every Jordan domain, saturating as the domain pulls apart into
two disjoint disks.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import functools
import math
import time

import numpy as np
from scipy import optimize

from . import diskmodes, domains, femrobin, trial
from .errors import BracketError, DomainError

__all__ = [
    "BoundReport",
    "verify_main",
    "sweep",
    "steklov_sigma",
    "steklov_sigma2",
    "SaturationWeights",
    "pulled_apart_perimeter",
    "saturation_lower",
    "convergence_check_A2",
]

#: vertex count above which the shift-inverted sparse eigensolver is used
_SPARSE_CUTOVER = 1500


@functools.lru_cache(maxsize=8)
def _mesh(n_rings):
    return femrobin.build_disk_mesh(n_rings)


@dataclasses.dataclass(frozen=True)
class BoundReport:
    """One row of the main-theorem verification."""

    name: str
    alpha: float
    rings: int
    lhs: float  # lambda_3(Omega; alpha/L) * A
    rhs: float  # 2*pi * lambda_2(D; alpha/(4*pi))
    margin: float  # rhs - lhs
    err_estimate: float  # two-mesh Richardson estimate on lhs
    seconds: float
    lam3: float
    trial_quotient: float | None = None
    case: int | None = None


class _PullbackSolver:
    """Assembled pullback forms for one (domain, mesh), solvable at any
    alpha without reassembly: K(alpha) = S + (alpha/L) * B1."""

    def __init__(self, domain, mesh):
        self.domain = domain
        self.mesh = mesh
        base = domains.pullback_problem(domain, 0.0)
        K0, M = femrobin.assemble(base, mesh)
        ref = domains.pullback_problem(domain, domain.perimeter)  # beta = |f'|
        K1, _ = femrobin.assemble(ref, mesh)
        self.S = K0
        self.B1 = K1 - K0
        self.M = M
        self.L = domain.perimeter
        self.bound = domains.pullback_problem(domain, 4.0 * math.pi).bound
        self.n = mesh.n_vertices

    def solve(self, alpha, k=3):
        K = self.S + (alpha / self.L) * self.B1
        sigma = None
        if self.n > _SPARSE_CUTOVER:
            sigma = -(10.0 * self.bound * self.bound + 1.0)
        vals, vecs = femrobin.solve_lowest(K, self.M, k, sigma=sigma)
        return vals, vecs


@functools.lru_cache(maxsize=32)
def _pullback_solver(domain, n_rings):
    return _PullbackSolver(domain, _mesh(n_rings))


def verify_main(domain, alpha, n_rings=30, with_trial=False) -> BoundReport:
    """Verify the bound for one domain and one alpha in [-4*pi, 0].

    lhs uses the third pullback eigenvalue on the n_rings mesh and the
    series-exact area; the error estimate is Richardson from the mesh
    with half as many rings.  With ``with_trial`` the Case-1/Case-2 trial
    quotient is attached (it upper-bounds the discrete lambda_3 up to
    quadrature error).
    """
    if not (-4.0 * math.pi - 1e-12 <= alpha <= 1e-12):
        raise DomainError("verify_main requires alpha in [-4*pi, 0]")
    t0 = time.time()
    fine = _pullback_solver(domain, n_rings)
    coarse = _pullback_solver(domain, max(4, n_rings // 2))
    vals, vecs = fine.solve(alpha, k=3)
    lam3 = float(vals[2])
    lam3_coarse = float(coarse.solve(alpha, k=3)[0][2])
    lhs = lam3 * domain.area
    rhs = 2.0 * math.pi * diskmodes.disk_lambda2(alpha / (4.0 * math.pi))
    err = abs(lam3_coarse - lam3) / 3.0 * domain.area

    quotient = None
    case = None
    if with_trial:
        spectrum = femrobin.SpectrumResult(vals, vecs, fine.mesh, None)
        ctx = trial.make_trial_context(
            domain, alpha, mesh=fine.mesh, spectrum=spectrum
        )
        if ctx.case_two():
            case = 2
            cap, w, _ = trial.find_orthogonal_cap(ctx, return_details=True)
            num, den = trial.trial_rayleigh_pieces(ctx, cap, w)
        else:
            case = 1
            num, den = trial.case_one_pieces(ctx)
        quotient = num / den

    return BoundReport(
        name=domain.name,
        alpha=float(alpha),
        rings=int(n_rings),
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        err_estimate=err,
        seconds=time.time() - t0,
        lam3=lam3,
        trial_quotient=quotient,
        case=case,
    )


def sweep(gallery, alphas, n_rings=30, with_trial=False, workers=1):
    """Verify the bound over a gallery x alpha grid.

    Jobs are independent and run on a fixed-size worker pool; results are
    returned sorted by (name, alpha) so output does not depend on
    scheduling.
    """
    jobs = [(d, a) for d in gallery for a in alphas]
    if workers <= 1:
        reports = [verify_main(d, a, n_rings, with_trial) for d, a in jobs]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(verify_main, d, a, n_rings, with_trial) for d, a in jobs
            ]
            reports = [f.result() for f in futures]
    return sorted(reports, key=lambda r: (r.name, r.alpha))


def steklov_sigma(domain, n_rings=30, k=2):
    """k-th nonzero Steklov eigenvalue via the Robin root: sigma_k = -a*/L
    where lambda_{k+1}(Omega; a*/L) = 0, found by bracketed root-finding
    on [-4*pi, 0]."""
    solver = _pullback_solver(domain, n_rings)

    def lam(alpha):
        return float(solver.solve(alpha, k=k + 1)[0][k])

    lo, hi = -4.0 * math.pi, 0.0
    flo = lam(lo)
    if k == 2 and flo >= 0.0:
        raise BracketError(
            "lambda_3 at alpha = -4*pi is nonnegative; the bound guarantees "
            "it negative, so the mesh is too coarse"
        )
    if flo >= 0.0:
        raise BracketError(f"lambda_{k+1} has no root in [-4*pi, 0] on this mesh")
    root = optimize.brentq(lam, lo, hi, xtol=1e-10)
    resid = lam(root)
    if abs(resid) > 1e-6:
        raise BracketError(f"Robin root residual {resid:.2e} exceeds 1e-6")
    return -root / domain.perimeter


def steklov_sigma2(domain, n_rings=30):
    """Second nonzero Steklov eigenvalue (the sharp-bound quantity)."""
    return steklov_sigma(domain, n_rings, k=2)


def pulled_apart_perimeter(eps):
    """Boundary length of the union of two unit disks with centers
    +-(1 - eps): L(eps) = 4*pi - 4*arccos(1 - eps), tending to 4*pi."""
    if not (0.0 < eps < 1.0):
        raise DomainError("pulled-apart overlap requires 0 < eps < 1")
    return 4.0 * math.pi - 4.0 * math.acos(1.0 - eps)


@dataclasses.dataclass(frozen=True)
class SaturationWeights:
    """Pulled-apart weights on the double disk, in single-disk local
    coordinates: the overlap lens is {z in D : |z - (-2 + 2 eps)| < 1};
    rho drops to 1/2 inside it and the boundary weight vanishes on the
    arc it covers."""

    eps: float

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise DomainError("eps must lie in (0, 1)")

    @property
    def lens_center(self) -> float:
        return -2.0 + 2.0 * self.eps

    @property
    def perimeter(self) -> float:
        return pulled_apart_perimeter(self.eps)

    def in_lens(self, z):
        return np.abs(np.asarray(z) - self.lens_center) < 1.0

    def rho(self, z):
        return np.where(self.in_lens(z), 0.5, 1.0)

    def beta_scale(self, z):
        return np.where(self.in_lens(z), 0.0, 1.0)

    def problem(self, alpha) -> femrobin.WeightedRobinProblem:
        """Weighted single-disk problem whose doubled spectrum is the
        pulled-apart lower bound for the double disk: interior weights
        rho = omega = rho_eps, boundary weight (alpha/L(eps)) beta_eps."""
        scale = alpha / self.perimeter

        def beta(z):
            return scale * self.beta_scale(z)

        bound = max(2.0, abs(scale)) + 1.0
        return femrobin.WeightedRobinProblem(
            rho=self.rho, omega=self.rho, beta=beta, bound=bound
        )


def saturation_lower(eps, alpha, j=3, n_rings=30):
    """j-th eigenvalue of the weighted double disk (the pulled-apart lower
    bound for lambda_j(Omega_eps; alpha/L(eps))).

    The double disk is two mirror copies of one weighted disk, so its
    spectrum is the single-disk spectrum with every eigenvalue doubled:
    lambda_j equals single-disk eigenvalue ceil(j/2).
    """
    weights = SaturationWeights(eps)
    k = (int(j) + 1) // 2
    mesh = _mesh(n_rings)
    res = femrobin.solve_problem(weights.problem(alpha), mesh, k)
    return float(res.eigenvalues[k - 1])


def convergence_check_A2(weight_family, eps_list, j=3, n_rings=30):
    """Eigenvalue convergence under pointwise weight convergence.

    ``weight_family(eps)`` must return a WeightedRobinProblem for eps >= 0,
    with eps = 0 the limit weights.  Returns rows
    (eps, lambda_j(eps), |lambda_j(eps) - lambda_j(0)|), eps descending.
    """
    mesh = _mesh(n_rings)

    def lam(eps):
        res = femrobin.solve_problem(weight_family(eps), mesh, j)
        return float(res.eigenvalues[j - 1])

    limit = lam(0.0)
    rows = []
    for eps in sorted(eps_list, reverse=True):
        val = lam(eps)
        rows.append((float(eps), val, abs(val - limit)))
    return rows, limit
