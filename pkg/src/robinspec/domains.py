"""Gallery domains as univalent polynomial images of the unit disk.

A domain is Omega = f(D) with f(z) = c1 z + ... + cd z^d.  The Robin
problem on Omega pulls back conformally to a weighted problem on the disk
with rho = 1, omega = |f'|^2 and boundary weight (alpha/L)|f'|, so one
disk mesh serves the whole gallery.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np
from scipy import spatial

from .errors import UnivalenceError
from .femrobin import WeightedRobinProblem
from .winding import winding_number

__all__ = [
    "DomainSpec",
    "make_domain",
    "pullback_problem",
    "scale_coeffs",
    "load_gallery",
    "default_gallery",
]

#: boundary sample count for the injectivity heuristic
_N_INJECTIVITY = 4096


@dataclasses.dataclass(frozen=True)
class DomainSpec:
    """Univalent polynomial disk image with derived area and perimeter."""

    name: str
    coeffs: tuple  # complex Taylor coefficients (c1, ..., cd), no constant term
    area: float
    perimeter: float

    def map(self, z):
        """f(z) = sum c_k z^k."""
        a = np.asarray(z, dtype=complex)
        out = np.zeros_like(a)
        for ck in reversed(self.coeffs):
            out = (out + ck) * a
        return complex(out) if np.ndim(z) == 0 else out

    def dmap(self, z):
        """f'(z)."""
        a = np.asarray(z, dtype=complex)
        out = np.zeros_like(a)
        for k in range(len(self.coeffs), 0, -1):
            out = out * a + k * self.coeffs[k - 1]
        return complex(out) if np.ndim(z) == 0 else out

    def boundary_dmap_range(self):
        """(min, max) of |f'| on the closed disk.

        f' is nonvanishing holomorphic for a valid domain, so both
        extremes are attained on the boundary circle.
        """
        theta = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
        mod = np.abs(self.dmap(np.exp(1j * theta)))
        return float(mod.min()), float(mod.max())


def _series_area(coeffs):
    return math.pi * sum((k + 1) * abs(c) ** 2 for k, c in enumerate(coeffs))


def _perimeter(coeffs, spec):
    m = 64 * max(1, len(coeffs))
    theta = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
    mod = np.abs(spec.dmap(np.exp(1j * theta)))
    # periodic trapezoid rule; spectrally accurate since |f'| is smooth
    return float(2.0 * np.pi * mod.mean())


def _check_univalence(spec):
    dcoeffs = [k * c for k, c in enumerate(spec.coeffs, start=1)]
    theta = np.linspace(0.0, 2.0 * np.pi, _N_INJECTIVITY, endpoint=False)
    circle = np.exp(1j * theta)
    dvals = spec.dmap(circle)
    if np.min(np.abs(dvals)) < 1e-12:
        raise UnivalenceError(f"{spec.name or spec.coeffs}: f' vanishes on the boundary")
    # argument principle: zeros of f' inside the disk show up as winding
    if winding_number(dvals) != 0:
        roots = np.roots(list(reversed(dcoeffs)))
        inside = roots[np.abs(roots) <= 1.0]
        raise UnivalenceError(
            f"{spec.name or spec.coeffs}: f' vanishes inside the disk near "
            f"{inside[0] if inside.size else 'the boundary'}"
        )
    # boundary injectivity: closest approach of non-neighbor samples
    bvals = spec.map(circle)
    pts = np.column_stack([bvals.real, bvals.imag])
    diam = float(np.ptp(bvals.real) + np.ptp(bvals.imag))
    threshold = 1e-6 * diam
    tree = spatial.cKDTree(pts)
    for i, j in tree.query_pairs(threshold):
        gap = min(abs(i - j), _N_INJECTIVITY - abs(i - j))
        if gap >= 2:
            raise UnivalenceError(
                f"{spec.name or spec.coeffs}: boundary self-intersection near "
                f"f({circle[i]}) ~ f({circle[j]})",
                witness=(complex(circle[i]), complex(circle[j])),
            )


def make_domain(coeffs, name="") -> DomainSpec:
    """Validate and derive a :class:`DomainSpec` from Taylor coefficients.

    Area comes from the exact series pi * sum k |c_k|^2, perimeter from
    trapezoid quadrature of |f'| on the circle.  Univalence is checked
    heuristically (argument principle for f' plus sampled boundary
    injectivity) and failures raise :class:`UnivalenceError`.
    """
    cs = tuple(complex(c) for c in coeffs)
    if not cs or cs[0] == 0:
        raise UnivalenceError("leading coefficient c1 must be nonzero")
    spec = DomainSpec(name=name, coeffs=cs, area=_series_area(cs), perimeter=0.0)
    _check_univalence(spec)
    spec = dataclasses.replace(spec, perimeter=_perimeter(cs, spec))
    return spec


def scale_coeffs(domain, c) -> DomainSpec:
    """Dilate the domain by c > 0: area scales by c^2, perimeter by c."""
    if not c > 0:
        raise ValueError("scale factor must be positive")
    return make_domain(
        tuple(ck * c for ck in domain.coeffs),
        name=f"{domain.name}*{c:g}" if domain.name else "",
    )


def pullback_problem(domain, alpha) -> WeightedRobinProblem:
    """Weighted disk problem equivalent to the Robin problem on Omega at
    boundary parameter alpha/L: rho = 1, omega = |f'|^2, beta = (alpha/L)|f'|."""
    L = domain.perimeter
    dmap = domain.dmap
    lo, hi = domain.boundary_dmap_range()
    bound = max(2.0, hi * hi, 1.0 / (lo * lo), abs(alpha) / L * hi) + 1.0

    def rho(z):
        return np.ones(np.shape(z))

    def omega(z):
        return np.abs(dmap(z)) ** 2

    def beta(z):
        return (alpha / L) * np.abs(dmap(z))

    return WeightedRobinProblem(rho=rho, omega=omega, beta=beta, bound=bound)


def load_gallery(path):
    """Load a JSON gallery: [{"name": str, "coeffs": [[re, im], ...]}, ...].

    Returns (domains, rejected) where rejected holds (entry_name, reason)
    pairs for entries that failed validation.
    """
    with open(path) as fh:
        raw = json.load(fh)
    domains = []
    rejected = []
    for entry in raw:
        name = entry.get("name", "?")
        try:
            coeffs = [complex(re, im) for re, im in entry["coeffs"]]
            domains.append(make_domain(coeffs, name=name))
        except (UnivalenceError, KeyError, TypeError, ValueError) as exc:
            rejected.append((name, str(exc)))
    return domains, rejected


def default_gallery():
    """Built-in gallery: the disk, a limaçon-type quadratic, a symmetric
    cubic (Hersch point pinned to 0 by the z -> -z symmetry), and a mixed
    quadratic-cubic blend."""
    return [
        make_domain([1.0], name="disk"),
        make_domain([1.0, 0.3], name="limacon"),
        make_domain([1.0, 0.0, 0.2], name="cubic"),
        make_domain([1.0, 0.25, 0.1], name="blend"),
    ]
