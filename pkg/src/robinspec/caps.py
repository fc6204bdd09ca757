"""Hyperbolic caps of the Poincaré disk and their conformal machinery.

A cap is the closure of one side of a geodesic, parameterized by a
boundary "center" p = exp(i*p_angle) and a size t in (-1,1): t = 0 is the
half-disk facing p, t -> 1 fills the disk, t -> -1 collapses onto p.
The module provides membership, the hyperbolic reflection swapping a cap
with its complement, the conformal map of the disk onto a cap (with its
closed-form inverse), and the fold map.
"""

from __future__ import annotations

import cmath
import dataclasses
import math

import numpy as np

from . import conformal
from .errors import DomainError

__all__ = [
    "Cap",
    "cap_contains",
    "cap_membership_margin",
    "cap_reflection",
    "cap_radius_param",
    "cap_map",
    "cap_map_inverse",
    "fold",
]

#: |t| is kept this far away from 1 by the Cap constructor
T_CLAMP = 1e-6
#: width of the tolerance band around the geodesic used by cap_map_inverse
GEODESIC_BAND = 1e-9


@dataclasses.dataclass(frozen=True)
class Cap:
    """Hyperbolic cap with center angle ``p_angle`` and size ``t``.

    ``t`` must lie strictly inside (-1,1); values closer to +-1 than 1e-6
    are clamped, mirroring that the t = +-1 caps exist only as limits.
    """

    p_angle: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.p_angle) and math.isfinite(self.t)):
            raise DomainError("cap parameters must be finite")
        if abs(self.t) >= 1.0:
            raise DomainError("cap size t must satisfy |t| < 1")
        object.__setattr__(self, "p_angle", self.p_angle % (2.0 * math.pi))
        object.__setattr__(self, "t", float(np.clip(self.t, -1.0 + T_CLAMP, 1.0 - T_CLAMP)))

    @property
    def p(self) -> complex:
        return cmath.exp(1j * self.p_angle)

    @property
    def endpoint_a(self) -> complex:
        """Geodesic endpoint M_{-pt}(ip); reduces to ip at t = 0."""
        return conformal.moebius(-self.p * self.t, 1j * self.p)

    @property
    def endpoint_b(self) -> complex:
        """Geodesic endpoint M_{-pt}(-ip); reduces to -ip at t = 0."""
        return conformal.moebius(-self.p * self.t, -1j * self.p)

    def complement(self) -> "Cap":
        return Cap(self.p_angle + math.pi, -self.t)


def cap_membership_margin(cap, z):
    """Signed membership indicator: Re(M_{pt}(z) * conj(p)), >= 0 inside."""
    pulled = conformal.moebius(cap.p * cap.t, z)
    return np.real(np.conj(cap.p) * np.asarray(pulled))


def cap_contains(cap, z):
    """Whether z (in the closed disk) lies in the closed cap."""
    margin = cap_membership_margin(cap, z)
    out = margin >= 0.0
    return bool(out) if np.ndim(out) == 0 else out


def cap_reflection(cap, z):
    """Hyperbolic reflection swapping the cap and its complement.

    tau = M_{-pt} o R_p o M_{pt}; an involution of the closed disk fixing
    the geodesic pointwise.
    """
    pt = cap.p * cap.t
    return conformal.moebius(-pt, conformal.reflect(cap.p, conformal.moebius(pt, z)))


def cap_radius_param(t):
    """Radius of the halfdisk that C_{1,t} becomes in the halfplane frame.

    r(t) = |W^{-1}(M_{-t}(i))|, strictly increasing, r(0) = 1, blowing up
    as t -> 1.
    """
    if not (-1.0 < t < 1.0):
        raise DomainError("cap size t must satisfy |t| < 1")
    return abs(conformal.disk_to_halfplane(conformal.moebius(-t, 1j)))


def cap_map(cap, z):
    """Conformal map K of the closed disk onto the closed cap.

    Normalized by K(p) = p and K(M_{p/3}(a)) = a, K(M_{p/3}(b)) = b at the
    geodesic endpoints, which makes K -> identity as t -> 1.  For t >= 0
    the map factors through the halfplane as p * W(H_r(W^{-1}(z/p)));
    for t < 0 it is tau o R_p o K_{p,-t}.
    """
    if cap.t < 0.0:
        inner = cap_map(dataclasses.replace(cap, t=-cap.t), z)
        return cap_reflection(cap, conformal.reflect(cap.p, inner))
    a, scalar = conformal._asarray(z)
    conformal._require_closed_disk(a)
    p = cap.p
    r = cap_radius_param(cap.t)
    # W^{-1} has its pole at z = -p; the composition extends continuously
    # there with value p*W(ir), the midpoint of the geodesic.
    at_pole = np.abs(a + p) < conformal.POLE_TOL
    safe = np.where(at_pole, 0.0 + 0.0j, a)
    xi = conformal.disk_to_halfplane(safe / p)
    xi = np.where(xi.imag < 0.0, xi.real + 0.0j, xi)
    out = p * conformal.halfplane_to_disk(conformal.halfdisk_map(r, xi))
    out = np.where(at_pole, p * (1.0 - r) / (1.0 + r), out)
    return conformal._restore(out, scalar)


def _project_to_band(cap, a, margin):
    # Kill the p-component in the half-disk frame, which lands exactly on
    # the geodesic, then push back out.
    pt = cap.p * cap.t
    pulled = np.asarray(conformal.moebius(pt, a))
    pulled = pulled - cap.p * np.real(np.conj(cap.p) * pulled)
    projected = np.asarray(conformal.moebius(-pt, pulled))
    return np.where(margin < 0.0, projected, a)


def cap_map_inverse(cap, z):
    """Closed-form inverse G = K^{-1} of :func:`cap_map`, mapping the cap
    onto the closed disk.

    Points outside the cap by more than 1e-9 (in the half-disk frame
    margin) raise :class:`DomainError`; points inside the tolerance band
    are first projected onto the geodesic.
    """
    if cap.t < 0.0:
        flipped = conformal.reflect(cap.p, cap_reflection(cap, z))
        return cap_map_inverse(dataclasses.replace(cap, t=-cap.t), flipped)
    a, scalar = conformal._asarray(z)
    conformal._require_closed_disk(a)
    margin = cap_membership_margin(cap, a)
    if np.any(margin < -GEODESIC_BAND):
        raise DomainError("point outside the cap")
    if np.any(margin < 0.0):
        a = _project_to_band(cap, a, margin)
    p = cap.p
    r = cap_radius_param(cap.t)
    xi = conformal.disk_to_halfplane(a / p)
    s = xi / r
    # Fused W o H_r^{-1}: W((r/2) S(s)) = (i(1+s^2) - rs) / (i(1+s^2) + rs),
    # which has no pole on the closed halfdisk.
    num = 1j * (1.0 + s * s) - r * s
    den = 1j * (1.0 + s * s) + r * s
    return conformal._restore(p * num / den, scalar)


def fold(cap, z):
    """Fold of the closed disk onto the cap: identity on the cap,
    hyperbolic reflection on the complement; two-to-one except on the
    geodesic."""
    a, scalar = conformal._asarray(z)
    inside = cap_membership_margin(cap, a) >= 0.0
    out = np.where(inside, a, np.asarray(cap_reflection(cap, a)))
    return conformal._restore(out, scalar)
