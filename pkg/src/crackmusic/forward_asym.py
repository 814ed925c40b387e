"""Leading-order far-field model for small cracks and MSR matrix assembly.

The far-field pattern of a collection of well-separated small sound-soft
cracks is, to leading order in 1/|ln h|,

    u_inf(obs, inc) = -(2*pi / ln(h/2)) * sum_m exp(i k (inc - obs) . z_m).

With the observation convention obs_j = -theta_j the resulting multistatic
response (MSR) matrix is complex symmetric and factors as c * A A^T with
A[n, m] = exp(i k theta_n . z_m).
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .scene import DirectionSet


@dataclass(frozen=True)
class MsrMatrix:
    entries: np.ndarray          # (N, N) complex
    directions: DirectionSet
    wavenumber: float
    obs_is_neg_inc: bool = True
    provenance: str = "asymptotic"   # asymptotic | bie | file
    extra: dict = None

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("MSR matrix must be square")
        object.__setattr__(self, "entries", e)

    @property
    def n(self):
        return self.entries.shape[0]


def _check_h(h):
    if not (0.0 < h < 2.0):
        raise ValueError("half-length h must lie in (0, 2): ln(h/2) degenerates otherwise")


def farfield_asym(obs, inc, scene, h):
    """Leading-term far-field value for all small cracks in the scene."""
    _check_h(h)
    obs = np.asarray(obs, dtype=float)
    inc = np.asarray(inc, dtype=float)
    k = scene.wavenumber
    z = scene.centers()
    c = -2.0 * np.pi / np.log(h / 2.0)
    return c * np.sum(np.exp(1j * k * (z @ (inc - obs))))


def steering_matrix(scene, dirs):
    """A[n, m] = exp(i k theta_n . z_m)."""
    z = scene.centers()
    th = dirs.vectors()
    return np.exp(1j * scene.wavenumber * (th @ z.T))


def assemble_msr(scene, h, dirs):
    """K[j, l] = farfield_asym(-theta_j, theta_l); equals c * A A^T."""
    _check_h(h)
    a = steering_matrix(scene, dirs)
    c = -2.0 * np.pi / np.log(h / 2.0)
    entries = c * (a @ a.T)
    return MsrMatrix(entries=entries, directions=dirs, wavenumber=scene.wavenumber,
                     provenance="asymptotic")


# --- MSR file format: CSV of interleaved re,im pairs + JSON sidecar ---

def save_msr(msr, csv_path, sidecar_path):
    with open(csv_path, "w", newline="") as f:
        w = csv.writer(f)
        for row in msr.entries:
            flat = []
            for v in row:
                flat.append(repr(float(v.real)))
                flat.append(repr(float(v.imag)))
            w.writerow(flat)
    meta = {
        "n": msr.n,
        "wavenumber": msr.wavenumber,
        "convention": "obs=-inc" if msr.obs_is_neg_inc else "obs=inc",
        "provenance": msr.provenance,
        "direction_mode": msr.directions.mode,
    }
    if msr.extra:
        meta.update(msr.extra)
    with open(sidecar_path, "w") as f:
        json.dump(meta, f, indent=2, sort_keys=True)


def load_msr(csv_path, sidecar_path):
    from .scene import make_directions

    with open(sidecar_path) as f:
        meta = json.load(f)
    rows = []
    with open(csv_path, newline="") as f:
        for rec in csv.reader(f):
            vals = np.array([float(v) for v in rec])
            rows.append(vals[0::2] + 1j * vals[1::2])
    entries = np.array(rows)
    dirs = make_directions(meta["n"], meta.get("direction_mode", "closed"))
    extra = {k: v for k, v in meta.items()
             if k not in ("n", "wavenumber", "convention", "provenance", "direction_mode")}
    return MsrMatrix(entries=entries, directions=dirs,
                     wavenumber=float(meta["wavenumber"]),
                     obs_is_neg_inc=(meta["convention"] == "obs=-inc"),
                     provenance=meta["provenance"], extra=extra or None)
