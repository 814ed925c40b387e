"""Closed-form prediction of the imaging map under a probe wavenumber eta.

For well-separated small cracks the imaging functional reduces to

    E(x; eta) ~ (1 - sum_m J0(|eta x - k z_m|)^p)^(-1/2)

with p = 2 ("squared" variant, the form the derivation's algebra yields) or
p = 1 ("linear" variant, the form the result is usually printed in).  The
squared variant is the default; both are kept so their fit to the numeric
pipeline can be compared.
"""

import json
from dataclasses import dataclass

import numpy as np

from .music import ImageGrid, ImageMap
from .special import bessel_j0

_EPS = 1e-12


@dataclass(frozen=True)
class TheoryParams:
    wavenumber: float             # true k of the data
    eta: float                    # probe wavenumber
    centers: np.ndarray           # (M, 2) crack centers
    variant: str = "squared"      # squared | linear

    def __post_init__(self):
        if self.wavenumber <= 0 or self.eta <= 0:
            raise ValueError("wavenumber and eta must be positive")
        c = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if c.size == 0:
            raise ValueError("need at least one crack center")
        if self.variant not in ("squared", "linear"):
            raise ValueError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "centers", c)


def _radicand(params, pts):
    d = np.linalg.norm(params.eta * pts[:, None, :] - params.wavenumber * params.centers[None, :, :],
                       axis=2)
    j = bessel_j0(d)
    if params.variant == "squared":
        j = j * j
    return 1.0 - np.sum(j, axis=1)


def theory_value(params, x):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    rad = np.maximum(_radicand(params, x), _EPS)
    out = 1.0 / np.sqrt(rad)
    return float(out[0]) if out.size == 1 else out


def theory_map(params, grid):
    pts = grid.points()
    if pts.size == 0:
        raise ValueError("empty grid")
    rad = np.maximum(_radicand(params, pts), _EPS)
    ny, nx = grid.ys().size, grid.xs().size
    return ImageMap(grid=grid, values=(1.0 / np.sqrt(rad)).reshape(ny, nx),
                    eta=params.eta, m=params.centers.shape[0], provenance="theory")


def phase_distance(params, pts):
    """min_m |eta x - k z_m| for each point."""
    pts = np.atleast_2d(pts)
    d = np.linalg.norm(params.eta * pts[:, None, :] - params.wavenumber * params.centers[None, :, :],
                       axis=2)
    return np.min(d, axis=1)


def compare_maps(a, b, params, exclusion_radius=0.5):
    """Relative deviation of two maps away from the predicted peaks.

    Grid points with phase distance min_m |eta x - k z_m| <= exclusion_radius
    are excluded, as are points where either map is clamp-dominated (value
    within three decades of the clamp ceiling).  Returns a dict report.
    """
    if a.grid != b.grid:
        raise ValueError("maps must share a grid")
    pts = a.grid.points()
    keep = phase_distance(params, pts) > exclusion_radius
    near_clamp = 1.0 / np.sqrt(_EPS) * 1e-3
    keep &= (a.values.ravel() < near_clamp) & (b.values.ravel() < near_clamp)
    va = a.values.ravel()[keep]
    vb = b.values.ravel()[keep]
    rel = np.abs(va - vb) / np.abs(vb)
    return {
        "max_dev": float(np.max(rel)) if rel.size else 0.0,
        "mean_dev": float(np.mean(rel)) if rel.size else 0.0,
        "excluded_count": int(np.sum(~keep)),
        "compared_count": int(np.sum(keep)),
    }


def save_report(report, path):
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
