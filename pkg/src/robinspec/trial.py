"""Hersch-Szegő normalized trial functions and the orthogonal-cap search.

The excited disk mode v = g(r) e^{i theta} is transplanted to a gallery
domain through a chain of maps: a Möbius recentering M_{w0} fixing
orthogonality to the ground state, a fold of the disk onto a hyperbolic
cap, the inverse cap map back to the disk, and a second Möbius M_w chosen
per cap so orthogonality to the ground state is restored.  A topological
degree argument guarantees some cap also kills the projection onto the
second eigenfunction; this module locates that cap numerically.

All integrals run on the same disk mesh and quadrature as the finite
element solve, so orthogonality residuals are commensurate with the
discrete eigenproblem.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import optimize

from . import caps as capsmod
from . import conformal, diskmodes, domains, femrobin
from .errors import DomainError, SearchError
from .winding import winding_number

__all__ = [
    "TrialContext",
    "make_trial_context",
    "vector_field",
    "find_normalizing_point",
    "phi",
    "phi_loop",
    "phi_grid",
    "find_orthogonal_cap",
    "trial_rayleigh_pieces",
    "case_one_pieces",
    "boundary_modulus_error",
    "orthogonality_residuals",
    "winding_number",
]

#: zero tolerance for V, relative to g(1) * mass of the ground state
V_REL_TOL = 1e-8
#: |zeta| below this (relative) routes the domain to the fold-free Case 1
ZETA_REL_TOL = 1e-6
#: |Phi| target for the orthogonal cap, relative to |zeta|
PHI_REL_TOL = 1e-6


@dataclasses.dataclass(frozen=True, eq=False)
class TrialContext:
    """Everything the trial-function machinery needs for one domain/alpha."""

    domain: domains.DomainSpec
    alpha: float
    mesh: femrobin.Mesh
    problem: femrobin.WeightedRobinProblem
    eigenvalues: np.ndarray  # lowest three of the pullback problem
    f1: np.ndarray
    f2: np.ndarray
    w0: complex
    zeta: complex
    disk_param: float  # alpha / (4 pi)
    energies: tuple  # (dirichlet, mass, g(1)^2) of the disk mode
    qpts: np.ndarray
    qwts: np.ndarray
    f1_q: np.ndarray
    f2_q: np.ndarray
    omega_q: np.ndarray
    v_scale: float
    zeta_scale: float
    _cap_cache: dict

    @property
    def g1(self) -> float:
        return math.sqrt(self.energies[2])

    def g(self, r):
        return diskmodes.disk_g(self.disk_param, r)

    def v(self, z):
        """Excited disk mode g(|z|) e^{i arg z} at points of the closed disk."""
        a = np.asarray(z, dtype=complex)
        r = np.abs(a)
        gr = diskmodes.disk_g(self.disk_param, np.minimum(r, 1.0))
        safe = np.where(r == 0.0, 1.0, r)
        out = np.where(r == 0.0, 0.0 + 0.0j, gr / safe * a)
        return complex(out) if np.ndim(z) == 0 else out

    def integrate(self, values_at_q):
        """Quadrature of a field sampled at the interior quadrature points
        against the pullback area element |f'|^2 dA."""
        return np.sum(self.qwts * values_at_q * self.omega_q)

    def case_two(self) -> bool:
        """Whether v o B has a nonzero projection onto f2 (fold needed)."""
        return abs(self.zeta) > ZETA_REL_TOL * self.zeta_scale


def _transport(ctx, cap):
    """G_C(F_C(M_{w0}(q))) at the quadrature points; cap=None is the
    identity transport of the fold-free trial function."""
    if cap is None:
        key = None
    else:
        key = (cap.p_angle, cap.t)
    cached = ctx._cap_cache.get(key)
    if cached is not None:
        return cached
    base = conformal.moebius(ctx.w0, ctx.qpts)
    if cap is None:
        out = base
    else:
        out = capsmod.cap_map_inverse(cap, capsmod.fold(cap, base))
    if len(ctx._cap_cache) > 8:
        ctx._cap_cache.clear()
    ctx._cap_cache[key] = out
    return out


def vector_field(ctx, cap, w):
    """Projection field V_C(w): the integral of the w-recentered cap trial
    function against the ground state, by disk quadrature against |f'|^2.
    Zero exactly at the cap's Hersch point; for |w| = 1 it points radially
    outward with modulus g(1) * mass(f1)."""
    tq = _transport(ctx, cap)
    vals = ctx.v(conformal.moebius(w, tq))
    return complex(ctx.integrate(vals * ctx.f1_q))


def _newton_on_plane(fun, x0, tol, max_iter=40, step=1e-6, box=None):
    # damped Newton for a C -> C zero problem seen as R^2 -> R^2,
    # finite-difference Jacobian
    x = complex(x0)
    fx = fun(x)
    for _ in range(max_iter):
        if abs(fx) < tol:
            return x, abs(fx)
        fpx = fun(x + step)
        fpy = fun(x + 1j * step)
        J = np.array(
            [
                [(fpx.real - fx.real) / step, (fpy.real - fx.real) / step],
                [(fpx.imag - fx.imag) / step, (fpy.imag - fx.imag) / step],
            ]
        )
        try:
            dxy = np.linalg.solve(J, -np.array([fx.real, fx.imag]))
        except np.linalg.LinAlgError:
            break
        delta = complex(dxy[0], dxy[1])
        lam = 1.0
        for _ in range(25):
            xn = x + lam * delta
            if box is not None:
                xn = box(xn)
            fn = fun(xn)
            if abs(fn) < abs(fx):
                x, fx = xn, fn
                break
            lam *= 0.5
        else:
            break
    return x, abs(fx)


def _clip_disk(w, radius=0.98):
    return w if abs(w) <= radius else radius * w / abs(w)


def find_normalizing_point(ctx, cap, w_start=None):
    """Hersch point of the cap: the unique w in the disk with V_C(w) = 0.

    Coarse 11x11 polar scan over |w| <= 0.95 followed by damped Newton
    with a finite-difference Jacobian; three rounds of restarts before
    :class:`SearchError`.  Requires alpha <= 0 so g is strictly
    increasing and the zero is unique.
    """
    tol = V_REL_TOL * ctx.v_scale

    def fun(w):
        return vector_field(ctx, cap, w)

    starts = []
    if w_start is not None:
        starts.append(complex(w_start))

    def grid_starts(nr, na, count):
        rr = np.linspace(0.0, 0.95, nr)
        aa = np.linspace(0.0, 2.0 * np.pi, na, endpoint=False)
        ws = (rr[:, None] * np.exp(1j * aa)[None, :]).ravel()
        vals = np.array([abs(fun(w)) for w in ws])
        return [complex(w) for w in ws[np.argsort(vals)[:count]]]

    rounds = [
        lambda: starts or grid_starts(11, 11, 1),
        lambda: grid_starts(11, 11, 4),
        lambda: grid_starts(21, 21, 6),
    ]
    for make_candidates in rounds:
        for w in make_candidates():
            root, resid = _newton_on_plane(fun, w, tol, box=_clip_disk)
            if resid < tol and abs(root) < 1.0:
                return root
    raise SearchError(
        "no zero of the normalizing field found; quadrature may be too "
        "coarse for this cap - refine the mesh"
    )


def phi(ctx, cap, w_start=None, return_w=False):
    """Projection of the cap trial function onto the second eigenfunction,
    Phi(p,t) = int u_{C,w(C)} f2 dA."""
    w = find_normalizing_point(ctx, cap, w_start=w_start)
    tq = _transport(ctx, cap)
    vals = ctx.v(conformal.moebius(w, tq))
    out = complex(ctx.integrate(vals * ctx.f2_q))
    return (out, w) if return_w else out


def phi_loop(ctx, t, n_samples=64):
    """Phi sampled around the loop p_angle in [0, 2pi) at fixed t."""
    out = np.empty(n_samples, dtype=complex)
    w = 0.0 + 0.0j
    for i, ang in enumerate(np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)):
        out[i], w = phi(ctx, capsmod.Cap(ang, t), w_start=w, return_w=True)
    return out

def phi_grid(ctx, n_p=32, n_t=17, t_max=0.95):
    """Rows (p_angle, t, Re Phi, Im Phi) over the cap cylinder, for
    diagnostics and plotting."""
    rows = []
    for t in np.linspace(-t_max, t_max, n_t):
        w = 0.0 + 0.0j
        for ang in np.linspace(0.0, 2.0 * np.pi, n_p, endpoint=False):
            val, w = phi(ctx, capsmod.Cap(ang, t), w_start=w, return_w=True)
            rows.append((float(ang), float(t), val.real, val.imag))
    return rows


def find_orthogonal_cap(ctx, n_p=32, n_t=17, return_details=False):
    """Cap for which the trial function is orthogonal to both f1 and f2.

    Grid scan over the cap cylinder followed by Nelder-Mead refinement of
    |Phi|^2 (with a Newton polish on Phi if needed).  Requires Case 2,
    i.e. |zeta| above the Case-1 routing threshold.
    """
    if not ctx.case_two():
        raise DomainError(
            "zeta is numerically zero; the fold-free trial function is "
            "already orthogonal (Case 1)"
        )
    target = PHI_REL_TOL * abs(ctx.zeta)

    best = None
    for t in np.linspace(-0.95, 0.95, n_t):
        w = 0.0 + 0.0j
        for ang in np.linspace(0.0, 2.0 * np.pi, n_p, endpoint=False):
            val, w = phi(ctx, capsmod.Cap(ang, t), w_start=w, return_w=True)
            if best is None or abs(val) < best[0]:
                best = (abs(val), ang, t, w)

    _, ang0, t0, w_near = best
    w_hint = [w_near]

    def objective(x):
        cap = capsmod.Cap(x[0], float(np.clip(x[1], -0.999, 0.999)))
        try:
            val, w = phi(ctx, cap, w_start=w_hint[0], return_w=True)
        except SearchError:
            return np.inf
        w_hint[0] = w
        return abs(val) ** 2

    res = optimize.minimize(
        objective,
        np.array([ang0, t0]),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": (0.01 * target) ** 2, "maxiter": 600},
    )
    ang, t = res.x[0], float(np.clip(res.x[1], -0.999, 0.999))
    cap = capsmod.Cap(ang, t)
    val, w = phi(ctx, cap, w_start=w_hint[0], return_w=True)

    if abs(val) >= target:
        # polish the simplex output with Newton on Phi over (p_angle, t)
        def fun(x):
            c = capsmod.Cap(x.real, float(np.clip(x.imag, -0.999, 0.999)))
            return phi(ctx, c, w_start=w_hint[0])

        root, resid = _newton_on_plane(fun, complex(ang, t), target, step=1e-7)
        if resid < target:
            cap = capsmod.Cap(root.real, float(np.clip(root.imag, -0.999, 0.999)))
            val, w = phi(ctx, cap, w_start=w_hint[0], return_w=True)
    if abs(val) >= target:
        raise SearchError(
            f"orthogonal-cap search stalled at |Phi| = {abs(val):.3e} "
            f"(target {target:.3e}); refine the mesh"
        )
    return (cap, w, val) if return_details else cap


def trial_rayleigh_pieces(ctx, cap, w):
    """Numerator and denominator of the folded trial Rayleigh quotient.

    numerator = 2 * int |grad v|^2 + alpha * g(1)^2  (exact, by conformal
    invariance of the two branches); denominator = int |u|^2 over the
    domain by disk quadrature.
    """
    dirichlet, _, g1sq = ctx.energies
    num = 2.0 * dirichlet + ctx.alpha * g1sq
    tq = _transport(ctx, cap)
    vals = ctx.v(conformal.moebius(w, tq))
    den = float(np.real(ctx.integrate(np.abs(vals) ** 2)))
    return num, den


def case_one_pieces(ctx):
    """Rayleigh pieces of the fold-free trial function v o B (Case 1):
    numerator = int |grad v|^2 + alpha g(1)^2, denominator = int |v o B|^2."""
    dirichlet, _, g1sq = ctx.energies
    num = dirichlet + ctx.alpha * g1sq
    vals = ctx.v(conformal.moebius(ctx.w0, ctx.qpts))
    den = float(np.real(ctx.integrate(np.abs(vals) ** 2)))
    return num, den


def orthogonality_residuals(ctx, cap, w):
    """(|int u f1 dA|, |int u f2 dA|) for the trial function of (cap, w)."""
    tq = _transport(ctx, cap)
    vals = ctx.v(conformal.moebius(w, tq))
    return (
        abs(complex(ctx.integrate(vals * ctx.f1_q))),
        abs(complex(ctx.integrate(vals * ctx.f2_q))),
    )


def boundary_modulus_error(ctx, cap, w, n_samples=720):
    """max over circle samples of ||u| - g(1)|; the trial function has
    constant modulus g(1) on the boundary."""
    z = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False))
    base = conformal.moebius(ctx.w0, z)
    if cap is not None:
        base = capsmod.cap_map_inverse(cap, capsmod.fold(cap, base))
    vals = ctx.v(conformal.moebius(w, base))
    return float(np.max(np.abs(np.abs(vals) - ctx.g1)))


def _pick_f2(ctx_zeta_fn, eigenvalues, vecs):
    """Degeneracy policy: when lambda2 and lambda3 are within 1e-3
    relative, rotate within their span to maximize |zeta|."""
    lam2, lam3 = eigenvalues[1], eigenvalues[2]
    scale = max(abs(lam2), abs(lam3), 1e-12)
    if abs(lam3 - lam2) > 1e-3 * scale:
        return vecs[1]
    z2 = ctx_zeta_fn(vecs[1])
    z3 = ctx_zeta_fn(vecs[2])
    mat = np.array([[z2.real, z3.real], [z2.imag, z3.imag]])
    _, _, vt = np.linalg.svd(mat)
    c, s = vt[0]
    return c * vecs[1] + s * vecs[2]


def make_trial_context(domain, alpha, n_rings=24, mesh=None, spectrum=None):
    """Assemble a :class:`TrialContext`: solve the pullback eigenproblem,
    fix signs and the degenerate-pair rotation, and locate the Hersch
    point w0 of the identity transport."""
    if not (-4.0 * math.pi <= alpha <= 0.0):
        raise DomainError("trial machinery requires alpha in [-4*pi, 0]")
    if mesh is None:
        mesh = femrobin.build_disk_mesh(n_rings)
    problem = domains.pullback_problem(domain, alpha)
    if spectrum is None:
        spectrum = femrobin.solve_problem(problem, mesh, 3)

    qpts, qwts, interp = mesh.interior_quadrature()
    omega_q = np.asarray(problem.omega(qpts), dtype=float)
    disk_param = alpha / (4.0 * math.pi)
    energies = diskmodes.disk_mode_energies(disk_param)
    g1 = math.sqrt(energies[2])

    f1 = spectrum.eigenfunctions[0]
    f1_q = interp @ f1
    mass1 = float(np.sum(qwts * f1_q * omega_q))
    if mass1 < 0.0:
        f1 = -f1
        f1_q = -f1_q
        mass1 = -mass1

    ctx = TrialContext(
        domain=domain,
        alpha=alpha,
        mesh=mesh,
        problem=problem,
        eigenvalues=spectrum.eigenvalues[:3].copy(),
        f1=f1,
        f2=np.zeros_like(f1),
        w0=0.0 + 0.0j,
        zeta=0.0 + 0.0j,
        disk_param=disk_param,
        energies=energies,
        qpts=qpts,
        qwts=qwts,
        f1_q=f1_q,
        f2_q=np.zeros_like(f1_q),
        omega_q=omega_q,
        v_scale=g1 * mass1,
        zeta_scale=1.0,
        _cap_cache={},
    )
    w0 = find_normalizing_point(ctx, None)
    object.__setattr__(ctx, "w0", complex(w0))
    ctx._cap_cache.clear()

    def zeta_of(vec):
        vals = ctx.v(conformal.moebius(w0, qpts))
        return complex(np.sum(qwts * vals * (interp @ vec) * omega_q))

    f2 = _pick_f2(zeta_of, spectrum.eigenvalues, spectrum.eigenfunctions)
    f2 = femrobin._fix_signs(f2[None, :])[0]
    f2_q = interp @ f2
    zeta = zeta_of(f2)
    zeta_scale = g1 * float(np.sum(qwts * np.abs(f2_q) * omega_q))
    object.__setattr__(ctx, "f2", f2)
    object.__setattr__(ctx, "f2_q", f2_q)
    object.__setattr__(ctx, "zeta", complex(zeta))
    object.__setattr__(ctx, "zeta_scale", zeta_scale)
    return ctx
