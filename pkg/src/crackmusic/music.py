"""SVD of the MSR matrix, noise-subspace projector, and the imaging functional.

The imaging functional is E(x; eta) = 1 / |P_noise f(x; eta)| with the test
vector f built from plane-wave phases exp(i eta theta_n . x).  f is normalized
to unit Euclidean norm so the functional has baseline 1 on the noise floor.
"""

import csv
from dataclasses import dataclass, replace

import numpy as np

EPS_CLAMP = 1e-12


@dataclass(frozen=True)
class SignalSpace:
    singular_values: np.ndarray   # descending
    left_vectors: np.ndarray      # (N, N) columns U_m
    right_vectors: np.ndarray     # (N, N) columns V_m
    m: int = None                 # selected signal dimension
    ambiguous: bool = False

    @property
    def n(self):
        return self.left_vectors.shape[0]


@dataclass(frozen=True)
class ImageGrid:
    x0: float
    x1: float
    y0: float
    y1: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError("grid ranges must be nonempty")

    def xs(self):
        return self.x0 + self.step * np.arange(int(round((self.x1 - self.x0) / self.step)) + 1)

    def ys(self):
        return self.y0 + self.step * np.arange(int(round((self.y1 - self.y0) / self.step)) + 1)

    def points(self):
        """All grid points, shape (ny*nx, 2), row-major over (y, x)."""
        xx, yy = np.meshgrid(self.xs(), self.ys())
        return np.column_stack([xx.ravel(), yy.ravel()])


@dataclass(frozen=True)
class ImageMap:
    grid: ImageGrid
    values: np.ndarray            # (ny, nx), values[iy, ix] at (xs[ix], ys[iy])
    eta: float
    m: int = None
    provenance: str = "music"


def svd_msr(msr):
    """Full SVD of the MSR matrix; selected dimension left unset."""
    try:
        u, s, vh = np.linalg.svd(msr.entries)
    except np.linalg.LinAlgError as e:
        raise ArithmeticError(f"SVD of {msr.n}x{msr.n} MSR matrix failed: {e}") from e
    return SignalSpace(singular_values=s, left_vectors=u, right_vectors=vh.conj().T)


def select_signal_dim(space, method="log_gap", m=None, tau=None, max_dim=None):
    """Pick the signal-space dimension M.

    method "manual" uses m directly; "threshold" counts sigma_m/sigma_1 >= tau;
    "log_gap" takes the argmax of log(sigma_m / sigma_{m+1}) over a bounded
    prefix (default N/2 -- the tail gaps of a pure-noise spectrum can be
    arbitrarily large since the smallest singular value clusters near zero)
    and flags the result ambiguous when no usable gap exists.
    """
    s = space.singular_values
    n = space.n
    if method == "manual":
        if m is None or not (0 <= m <= n):
            raise ValueError(f"manual M must lie in [0, {n}]")
        return replace(space, m=int(m), ambiguous=False)
    if method == "threshold":
        if tau is None:
            raise ValueError("threshold method needs tau")
        if s[0] == 0:
            return replace(space, m=0, ambiguous=True)
        return replace(space, m=int(np.sum(s / s[0] >= tau)), ambiguous=False)
    if method == "log_gap":
        bound = min(n - 1, max_dim if max_dim else max(n // 2, 1))
        with np.errstate(divide="ignore"):
            gaps = np.log(s[:bound]) - np.log(s[1:bound + 1])
        if not np.any(np.isfinite(gaps)):
            return replace(space, m=bound, ambiguous=True)
        gaps = np.where(np.isfinite(gaps), gaps, np.inf)
        best = int(np.argmax(gaps)) + 1
        ambiguous = bool(np.max(gaps[np.isfinite(gaps)], initial=0.0) < 0.1)
        if ambiguous:
            best = bound
        return replace(space, m=best, ambiguous=ambiguous)
    raise ValueError(f"unknown selection method {method!r}")


def noise_projector_apply(space, v):
    """(I - sum_{m<=M} U_m U_m^*) v."""
    if space.m is None:
        raise ValueError("signal dimension M not selected")
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != space.n:
        raise ValueError("vector dimension mismatch")
    if space.m == 0:
        return v.copy()
    u = space.left_vectors[:, :space.m]
    return v - u @ (u.conj().T @ v)


def test_vector(x, eta, dirs):
    """Unit-norm steering vector with entries proportional to exp(i eta theta_n . x)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    x = np.asarray(x, dtype=float)
    th = dirs.vectors()
    f = np.exp(1j * eta * (th @ x))
    return f / np.linalg.norm(f)


def _test_matrix(points, eta, dirs):
    th = dirs.vectors()
    f = np.exp(1j * eta * (points @ th.T))     # (npts, N)
    return f / np.sqrt(th.shape[0])


def imaging_value(space, x, eta, dirs):
    """E(x; eta) = 1 / max(|P_noise f(x; eta)|, eps)."""
    f = test_vector(x, eta, dirs)
    r = np.linalg.norm(noise_projector_apply(space, f))
    return 1.0 / max(r, EPS_CLAMP)


def imaging_map(space, grid, eta, dirs):
    """Evaluate the imaging functional over the grid (vectorized)."""
    if space.m is None:
        raise ValueError("signal dimension M not selected")
    pts = grid.points()
    if pts.size == 0:
        raise ValueError("empty grid")
    f = _test_matrix(pts, eta, dirs)
    if space.m > 0:
        u = space.left_vectors[:, :space.m]
        f = f - (f @ u.conj()) @ u.T
    r = np.maximum(np.linalg.norm(f, axis=1), EPS_CLAMP)
    ny, nx = grid.ys().size, grid.xs().size
    return ImageMap(grid=grid, values=(1.0 / r).reshape(ny, nx), eta=eta, m=space.m)


@dataclass(frozen=True)
class PeakList:
    peaks: tuple        # ((x, y), value) pairs, descending value
    complete: bool      # False when fewer maxima exist than requested


def find_peaks(imap, count):
    """Top `count` strict 8-neighbor local maxima with sub-cell quadratic refinement."""
    if count < 1:
        raise ValueError("count must be >= 1")
    v = imap.values
    ny, nx = v.shape
    c = v[1:-1, 1:-1]
    mask = np.ones_like(c, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            mask &= c > v[1 + dy:ny - 1 + dy, 1 + dx:nx - 1 + dx]
    iy, ix = np.nonzero(mask)
    iy, ix = iy + 1, ix + 1
    order = np.argsort(v[iy, ix])[::-1][:count]
    xs, ys = imap.grid.xs(), imap.grid.ys()
    step = imap.grid.step
    out = []
    for j in order:
        py, px = int(iy[j]), int(ix[j])
        dx = _quad_offset(v[py, px - 1], v[py, px], v[py, px + 1])
        dy = _quad_offset(v[py - 1, px], v[py, px], v[py + 1, px])
        out.append(((float(xs[px] + dx * step), float(ys[py] + dy * step)),
                    float(v[py, px])))
    return PeakList(peaks=tuple(out), complete=len(out) >= count)


def _quad_offset(left, mid, right):
    denom = left - 2.0 * mid + right
    if denom >= 0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))


# --- exports ---

def save_map_csv(imap, path):
    xs, ys = imap.grid.xs(), imap.grid.ys()
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["x", "y", "value"])
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                w.writerow([repr(float(x)), repr(float(y)), repr(float(imap.values[iy, ix]))])


def save_map_pgm(imap, path):
    """8-bit binary PGM (P5), min-max normalized, rows top-to-bottom = increasing y."""
    v = imap.values
    lo, hi = float(v.min()), float(v.max())
    scaled = np.zeros_like(v) if hi == lo else (v - lo) / (hi - lo)
    pix = np.round(255.0 * scaled).astype(np.uint8)
    ny, nx = v.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{nx} {ny}\n255\n".encode())
        f.write(pix.tobytes())


def save_spectrum_csv(space, path):
    s = space.singular_values
    top = s[0] if s.size and s[0] > 0 else 1.0
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["index", "sigma", "sigma_rel"])
        for i, val in enumerate(s, start=1):
            w.writerow([i, repr(float(val)), repr(float(val / top))])
