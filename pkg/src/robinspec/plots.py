"""Figure rendering for the CLI report paths.

Every writer takes already-computed rows and a target path; figures are
rendered with the Agg backend so the CLI works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "margins_figure",
    "steklov_figure",
    "saturation_figure",
    "phi_grid_figure",
    "disk_spectrum_figure",
]


def margins_figure(reports, path):
    """Margin rhs - lhs per domain over alpha, log scale, with the
    Richardson error estimates overlaid."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    names = sorted({r.name for r in reports})
    for name in names:
        rows = sorted((r for r in reports if r.name == name), key=lambda r: r.alpha)
        alphas = [r.alpha for r in rows]
        ax.plot(alphas, [r.margin for r in rows], "o-", label=name)
        ax.plot(alphas, [r.err_estimate for r in rows], ":", color=ax.lines[-1].get_color())
    ax.set_yscale("log")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("margin (solid), mesh error estimate (dotted)")
    ax.set_title(r"$2\pi\,\lambda_2(\mathbb{D};\alpha/4\pi) - \lambda_3(\Omega;\alpha/L)\,A$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def steklov_figure(rows, path):
    """Bar chart of sigma_2 L against the 4*pi bound."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    names = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    ax.bar(names, vals, color="tab:blue")
    ax.axhline(4.0 * np.pi, color="tab:red", ls="--", label=r"$4\pi$")
    ax.axhline(2.0 * np.pi, color="gray", ls=":", label=r"$2\pi$ (disk)")
    ax.set_ylabel(r"$\sigma_2 L$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def saturation_figure(rows, limit, path):
    """Pulled-apart lower bound and its gap to the double-disk limit."""
    eps = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    gaps = [r[2] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.plot(eps, vals, "o-")
    ax1.axhline(limit, color="tab:red", ls="--", label="double-disk limit")
    ax1.set_xlabel(r"$\varepsilon$")
    ax1.set_ylabel(r"weighted $\lambda$")
    ax1.legend()
    ax2.loglog(eps, gaps, "o-")
    ax2.set_xlabel(r"$\varepsilon$")
    ax2.set_ylabel("gap to limit")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def phi_grid_figure(rows, path):
    """Phase portrait of Phi over the cap cylinder: hue = arg Phi,
    brightness = |Phi| (normalized); zeros show as dark points."""
    rows = np.asarray(rows, dtype=float)
    p = np.unique(rows[:, 0])
    t = np.unique(rows[:, 1])
    phi = (rows[:, 2] + 1j * rows[:, 3]).reshape(t.size, p.size)
    mag = np.abs(phi)
    hue = (np.angle(phi) / (2.0 * np.pi)) % 1.0
    val = mag / (mag.max() + 1e-300)
    hsv = np.stack([hue, np.ones_like(hue), val ** 0.4], axis=-1)
    rgb = matplotlib.colors.hsv_to_rgb(hsv)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.imshow(
        rgb,
        origin="lower",
        aspect="auto",
        extent=[p.min(), p.max(), t.min(), t.max()],
    )
    ax.set_xlabel("cap center angle")
    ax.set_ylabel("cap size t")
    ax.set_title(r"$\Phi(p, t)$ (hue = phase, dark = small modulus)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def disk_spectrum_figure(alphas, lam1, lam2, path, fem_rows=None):
    """Closed-form disk eigenvalue curves with optional FEM markers."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(alphas, lam1, label=r"$\lambda_1$")
    ax.plot(alphas, lam2, label=r"$\lambda_2$")
    if fem_rows:
        a = [r[0] for r in fem_rows]
        ax.plot(a, [r[1] for r in fem_rows], "x", color="k", label="FEM")
        ax.plot(a, [r[2] for r in fem_rows], "x", color="k")
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel(r"disk Robin parameter $\alpha$")
    ax.set_ylabel(r"$\lambda$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
