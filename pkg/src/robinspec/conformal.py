"""Closed-form conformal maps: disk Möbius self-maps, line reflections,
the halfplane wrap, the doubly-slit map, and the halfdisk map.

All maps accept a python complex or a numpy array of complex and return a
value of the same kind.  They are pure functions and safe to call
concurrently.
"""

from __future__ import annotations

import numpy as np

from .errors import BranchError, DomainError, IndeterminateError, PoleError

__all__ = [
    "moebius",
    "reflect",
    "halfplane_to_disk",
    "disk_to_halfplane",
    "slit_map",
    "slit_map_inverse",
    "halfdisk_map",
]

#: slack allowed on closed-disk / closed-halfplane membership tests
BOUNDARY_TOL = 1e-9
#: proximity at which evaluation near a pole is refused
POLE_TOL = 1e-12


def _asarray(z):
    a = np.asarray(z, dtype=complex)
    return a, a.ndim == 0


def _restore(a, scalar):
    return complex(a) if scalar else a


def _require_closed_disk(a, tol=BOUNDARY_TOL, what="z"):
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{what} must be finite")
    if np.any(np.abs(a) > 1.0 + tol):
        raise DomainError(f"{what} must lie in the closed unit disk")


def moebius(w, z):
    """Möbius self-map of the closed disk, M_w(z) = (z + w)/(z*conj(w) + 1).

    Requires |w| <= 1 and |z| <= 1.  For |w| < 1 this is a disk
    automorphism with M_w(0) = w and inverse M_{-w}; for |w| = 1 it is the
    constant map w, undefined only at z = -w.
    """
    a, scalar = _asarray(z)
    w = complex(w)
    if not np.isfinite(w) or abs(w) > 1.0 + BOUNDARY_TOL:
        raise DomainError("Moebius parameter must satisfy |w| <= 1")
    _require_closed_disk(a)
    den = a * w.conjugate() + 1.0
    if np.any(np.abs(den) < POLE_TOL):
        raise IndeterminateError("M_w is 0/0-indeterminate at z = -w when |w| = 1")
    return _restore((a + w) / den, scalar)


def reflect(p, z):
    """Reflection across the line through 0 perpendicular to p: -p^2*conj(z)."""
    a, scalar = _asarray(z)
    p = complex(p)
    if abs(abs(p) - 1.0) > BOUNDARY_TOL:
        raise DomainError("reflection direction p must lie on the unit circle")
    return _restore(-p * p * np.conj(a), scalar)


def halfplane_to_disk(z):
    """Wrap of the closed upper halfplane onto the closed disk, (i-z)/(i+z)."""
    a, scalar = _asarray(z)
    if np.any(a.imag < -BOUNDARY_TOL):
        raise DomainError("halfplane_to_disk requires Im z >= 0")
    if np.any(np.abs(a + 1j) < POLE_TOL):
        raise PoleError("halfplane_to_disk has a pole at z = -i")
    return _restore((1j - a) / (1j + a), scalar)


def disk_to_halfplane(z):
    """Inverse of :func:`halfplane_to_disk`: z -> i(1-z)/(1+z)."""
    a, scalar = _asarray(z)
    _require_closed_disk(a)
    if np.any(np.abs(a + 1.0) < POLE_TOL):
        raise PoleError("disk_to_halfplane has a pole at z = -1")
    return _restore(1j * (1.0 - a) / (1.0 + a), scalar)


def slit_map(z):
    """Map of the disk onto the plane slit along (-inf,-1] and [1,inf).

    S(z) = 2z/(z^2 + 1), with S(0) = 0, S'(0) = 2, S(+-1) = +-1.
    """
    a, scalar = _asarray(z)
    _require_closed_disk(a)
    if np.any(np.minimum(np.abs(a - 1j), np.abs(a + 1j)) < POLE_TOL):
        raise PoleError("slit map has poles at z = +-i")
    return _restore(2.0 * a / (a * a + 1.0), scalar)


def _slit_inverse_roots(w):
    # The two roots of w z^2 - 2 z + w = 0 are r and 1/r.  With the
    # principal square root, w/(1 + sqrt(1 - w^2)) is always the root in
    # the closed disk, and the formula is cancellation-free near w = 0.
    q = np.sqrt(1.0 - w * w)
    return w / (1.0 + q)


def slit_map_inverse(w):
    """Branch of S^{-1} into the open unit disk.

    Singular set is the two slits: there the quadratic roots pair up on
    the unit circle and a :class:`BranchError` is raised.  Near w = 0 the
    series w/2 + w^3/8 is used to keep (S^{-1})'(0) = 1/2 exact.
    """
    a, scalar = _asarray(w)
    if not np.all(np.isfinite(a)):
        raise DomainError("w must be finite")
    root = np.where(np.abs(a) < 1e-4, a / 2.0 + a**3 / 8.0, _slit_inverse_roots(a))
    if np.any(np.abs(root) > 1.0 - BOUNDARY_TOL):
        raise BranchError("no root strictly inside the disk: w lies on the slits")
    return _restore(root, scalar)


def _slit_inverse_upper(w):
    """Extension of S^{-1} continuous from the (open) upper halfplane.

    Maps the closed upper halfplane onto the closed upper halfdisk: real w
    in [-1,1] go to the real segment, real w with |w| > 1 resolve to the
    upper unit semicircle.  Inputs within 1e-12 of the slit tips +-1 are
    snapped to +-1; the map is only Hölder-1/2 there, so closer
    distinctions are below evaluable precision anyway.
    """
    a, _ = _asarray(w)
    a = np.where(np.abs(a - 1.0) < 1e-12, 1.0 + 0.0j, a)
    a = np.where(np.abs(a + 1.0) < 1e-12, -1.0 + 0.0j, a)
    root = np.where(np.abs(a) < 1e-4, a / 2.0 + a**3 / 8.0, _slit_inverse_roots(a))
    # For real w beyond the tips both roots sit on the circle as a
    # conjugate pair; continuity from above picks the upper one.
    flip = (a.imag == 0.0) & (np.abs(a.real) > 1.0) & (root.imag < 0.0)
    root = np.where(flip, np.conj(root), root)
    return root


def halfdisk_map(r, z):
    """Map of the closed upper halfplane onto the closed upper halfdisk of
    radius r:  H_r(z) = r * S^{-1}(2z/r), with H_r(0) = 0, H_r(+-r/2) = +-r.

    Converges to the identity locally uniformly as r -> infinity.
    """
    if not (np.isfinite(r) and r > 0):
        raise DomainError("halfdisk radius r must be positive")
    a, scalar = _asarray(z)
    if np.any(a.imag < -BOUNDARY_TOL):
        raise DomainError("halfdisk_map requires Im z >= 0")
    a = np.where(a.imag < 0.0, a.real + 0.0j, a)
    return _restore(r * _slit_inverse_upper(2.0 * a / r), scalar)
