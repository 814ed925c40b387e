"""Bessel function J0 and the finite plane-wave direction average.

The direction average (1/N) sum_n exp(i w theta_n . x) over equispaced
directions on the unit circle tends to J0(w|x|); this identity is what links
the imaging functional to Bessel asymptotics, so both sides are provided here.
"""

import numpy as np

# Series / asymptotic crossover.  The classical Hankel expansion reaches
# ~5e-13 only for x >= 12 in double precision (optimal truncation at 24
# terms); below that the power series is exact to ~4e-12.
_CROSSOVER = 12.0
_SERIES_TERMS = 56
_ASYM_TERMS = 24


def _j0_series(x):
    q = -0.25 * x * x
    s = np.ones_like(x)
    t = np.ones_like(x)
    for m in range(1, _SERIES_TERMS):
        t = t * q / (m * m)
        s = s + t
    return s


def _j0_asym(x):
    # J0(x) = Re{ sqrt(2/(pi x)) e^{i(x - pi/4)} sum_k i^k a_k / x^k },
    # a_k = prod_{j<=k} -(2j-1)^2 / (8j)   (Hankel expansion, order zero)
    term = np.ones_like(x, dtype=np.complex128)
    s = term.copy()
    for k in range(1, _ASYM_TERMS):
        term = term * (-1j * (2 * k - 1) ** 2 / (8.0 * k * x))
        s = s + term
    return (np.sqrt(2.0 / (np.pi * x)) * np.exp(1j * (x - 0.25 * np.pi)) * s).real


def bessel_j0(x):
    """Bessel function of order zero of the first kind.

    Accepts a scalar or ndarray; absolute error <= 1e-10 for |x| <= 200
    (validated against a 4096-node trapezoid quadrature oracle and mpmath).
    Even in x by construction.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j0 requires finite input")
    a = np.abs(arr)
    small = a < _CROSSOVER
    out = np.empty_like(a)
    if np.any(small):
        out[small] = _j0_series(a[small])
    if np.any(~small):
        out[~small] = _j0_asym(a[~small])
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def direction_average(w, x, dirs):
    """Average of exp(i*w*theta_n . x) over a direction set.

    For the closed scheme (duplicated angle at 0 and 2*pi) the duplicated
    endpoints get trapezoid weights 1/2, which makes the average the exact
    periodic rectangle rule over the distinct angles; a plain mean would
    carry an O(1/N) endpoint bias.  Converges spectrally to J0(w|x|).
    """
    x = np.asarray(x, dtype=float)
    if not (np.isfinite(w) and np.all(np.isfinite(x))):
        raise ValueError("direction_average requires finite inputs")
    ang = dirs.angles
    if ang.size == 0:
        raise ValueError("direction set is empty")
    phases = np.exp(1j * w * (np.cos(ang) * x[0] + np.sin(ang) * x[1]))
    if dirs.mode == "closed":
        wts = np.ones(ang.size)
        wts[0] = wts[-1] = 0.5
        return complex(np.sum(wts * phases) / (ang.size - 1))
    return complex(np.mean(phases))
