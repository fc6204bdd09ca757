"""Winding number of a sampled closed loop about the origin."""

from __future__ import annotations

import numpy as np

from .errors import RefinementError

__all__ = ["winding_number"]


def winding_number(samples):
    """Integer winding about 0 of the closed loop through ``samples``.

    The loop is closed implicitly from the last sample back to the first.
    Sums principal-branch argument increments; a jump of pi or more
    between consecutive samples is ambiguous and raises
    :class:`RefinementError` so the caller can double the sampling.
    """
    vals = np.asarray(samples, dtype=complex).ravel()
    if vals.size < 2:
        raise RefinementError("need at least two samples of the loop")
    if np.any(vals == 0) or not np.all(np.isfinite(vals)):
        raise RefinementError("loop passes through 0 or contains non-finite samples")
    args = np.angle(vals)
    jumps = np.diff(np.concatenate([args, args[:1]]))
    jumps = (jumps + np.pi) % (2.0 * np.pi) - np.pi
    if np.any(np.abs(jumps) >= np.pi - 1e-9):
        raise RefinementError("argument jump >= pi between samples; refine the loop")
    total = jumps.sum() / (2.0 * np.pi)
    return int(np.rint(total))
