import numpy as np
import pytest

from crackmusic import (ImageGrid, Scene, SegmentCrack, assemble_msr,
                        find_peaks, imaging_map, imaging_value,
                        make_directions, noise_projector_apply,
                        select_signal_dim, svd_msr)
from crackmusic.forward_asym import MsrMatrix
from crackmusic.music import test_vector as steering_vector
from crackmusic.music import ImageMap, save_map_csv, save_map_pgm, save_spectrum_csv
from crackmusic.presets import preset_config
from crackmusic.scene import scene_from_dict

K1 = 2 * np.pi / 0.5


def scene3():
    return scene_from_dict(preset_config("fig1")["scene"])


def msr3(n=16):
    return assemble_msr(scene3(), 0.05, make_directions(n, "closed"))


def random_msr(n, seed):
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return MsrMatrix(entries=e, directions=make_directions(n, "closed"),
                     wavenumber=1.0, provenance="file")


# ---- svd ----

def test_svd_zero_matrix():
    z = MsrMatrix(entries=np.zeros((8, 8), complex),
                  directions=make_directions(8, "closed"), wavenumber=1.0)
    assert np.all(svd_msr(z).singular_values == 0.0)


def test_svd_rank_one_single_crack():
    sc = Scene(cracks=(SegmentCrack(center=(0, 0), half_length=0.05),), wavenumber=K1)
    s = svd_msr(assemble_msr(sc, 0.05, make_directions(16, "closed"))).singular_values
    assert s[1] / s[0] < 1e-12


def test_svd_reconstruction():
    msr = random_msr(12, 5)
    sp = svd_msr(msr)
    rebuilt = (sp.left_vectors * sp.singular_values) @ sp.right_vectors.conj().T
    assert np.linalg.norm(rebuilt - msr.entries) / np.linalg.norm(msr.entries) < 1e-10
    assert np.all(np.diff(sp.singular_values) <= 0)
    gram = sp.left_vectors.conj().T @ sp.left_vectors
    assert np.linalg.norm(gram - np.eye(12)) < 1e-10


def test_svd_unitary_invariance():
    msr = random_msr(10, 17)
    rng = np.random.default_rng(3)
    d1 = np.exp(1j * rng.uniform(0, 2 * np.pi, 10))
    d2 = np.exp(1j * rng.uniform(0, 2 * np.pi, 10))
    rotated = MsrMatrix(entries=np.diag(d1) @ msr.entries @ np.diag(d2),
                        directions=msr.directions, wavenumber=1.0)
    assert np.allclose(svd_msr(rotated).singular_values,
                       svd_msr(msr).singular_values)


# ---- signal dimension selection ----

def test_threshold_selects_three_cracks():
    sp = select_signal_dim(svd_msr(msr3()), "threshold", tau=0.01)
    assert sp.m == 3


def test_manual_selection_and_bounds():
    sp = svd_msr(msr3())
    assert select_signal_dim(sp, "manual", m=13).m == 13
    with pytest.raises(ValueError):
        select_signal_dim(sp, "manual", m=17)


def test_log_gap_flat_spectrum_is_ambiguous():
    flat = MsrMatrix(entries=np.eye(8, dtype=complex),
                     directions=make_directions(8, "closed"), wavenumber=1.0)
    sp = select_signal_dim(svd_msr(flat), "log_gap")
    assert sp.ambiguous
    assert sp.m == 4   # the prefix bound


# ---- noise projector ----

def test_projector_m0_is_identity():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=0)
    v = np.arange(16) + 1j
    assert np.array_equal(noise_projector_apply(sp, v), v)


def test_projector_annihilates_signal_vectors():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=3)
    for m in range(3):
        out = noise_projector_apply(sp, sp.left_vectors[:, m])
        assert np.linalg.norm(out) < 1e-10


def test_projector_idempotent():
    sp = select_signal_dim(svd_msr(random_msr(14, 8)), "manual", m=5)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(14) + 1j * rng.standard_normal(14)
    once = noise_projector_apply(sp, v)
    twice = noise_projector_apply(sp, once)
    assert np.linalg.norm(twice - once) < 1e-12


def test_projector_algebra():
    for seed in range(5):
        n = 16
        sp = select_signal_dim(svd_msr(random_msr(n, seed)), "manual", m=3 + seed)
        u = sp.left_vectors[:, :sp.m]
        p = np.eye(n) - u @ u.conj().T
        assert np.linalg.norm(p @ p - p) < 1e-12
        assert np.linalg.norm(p - p.conj().T) < 1e-12
        assert abs(np.trace(p).real - (n - sp.m)) < 1e-8


def test_projector_dimension_mismatch():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=3)
    with pytest.raises(ValueError):
        noise_projector_apply(sp, np.ones(5, complex))


# ---- test vector ----

def test_test_vector_origin_is_constant():
    dirs = make_directions(16, "closed")
    f = steering_vector((0.0, 0.0), 10.0, dirs)
    assert np.allclose(f, 1 / 4.0)


def test_test_vector_unit_norm():
    dirs = make_directions(32, "closed")
    rng = np.random.default_rng(2)
    for _ in range(10):
        f = steering_vector(rng.uniform(-2, 2, 2), rng.uniform(1, 30), dirs)
        assert np.linalg.norm(f) == pytest.approx(1.0)


def test_test_vector_scale_identity():
    dirs = make_directions(16, "closed")
    x = np.array([0.4, -0.7])
    eta, eta2 = 12.0, 18.0
    assert np.allclose(steering_vector(x, eta, dirs),
                       steering_vector((eta / eta2) * x, eta2, dirs))


# ---- imaging ----

def test_imaging_m0_is_one_everywhere():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=0)
    dirs = make_directions(16, "closed")
    for x in [(0, 0), (0.5, -0.3), (-1.1, 0.9)]:
        assert imaging_value(sp, x, 10.0, dirs) == pytest.approx(1.0)


def test_imaging_huge_at_crack_for_origin_crack():
    sc = Scene(cracks=(SegmentCrack(center=(0, 0), half_length=0.05),), wavenumber=K1)
    dirs = make_directions(16, "closed")
    sp = select_signal_dim(svd_msr(assemble_msr(sc, 0.05, dirs)), "manual", m=1)
    assert imaging_value(sp, (0.0, 0.0), K1, dirs) > 1e3


def test_imaging_near_one_far_from_peaks():
    sc = Scene(cracks=(SegmentCrack(center=(0, 0), half_length=0.05),), wavenumber=K1)
    dirs = make_directions(64, "open")
    sp = select_signal_dim(svd_msr(assemble_msr(sc, 0.05, dirs)), "manual", m=1)
    # k|x| large, far from (k/eta) z_1 = origin
    assert imaging_value(sp, (1.5, -1.2), K1, dirs) == pytest.approx(1.0, abs=0.1)


def test_imaging_map_single_point_grid():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=3)
    dirs = make_directions(16, "closed")
    g = ImageGrid(0.25, 0.25, -0.5, -0.5, 0.1)
    m = imaging_map(sp, g, 12.0, dirs)
    assert m.values.shape == (1, 1)
    assert m.values[0, 0] == pytest.approx(imaging_value(sp, (0.25, -0.5), 12.0, dirs))


def test_imaging_floor_noiseless():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=3)
    m = imaging_map(sp, ImageGrid(-2, 2, -2, 2, 0.05), 15.0, make_directions(16, "closed"))
    assert np.all(m.values >= 1.0 - 1e-9)


def _peak_targets(eta, k=K1):
    return (k / eta) * scene3().centers()


@pytest.mark.parametrize("eta", [10.0, K1])
def test_imaging_map_peaks_at_scaled_centers(eta):
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=3)
    g = ImageGrid(-2, 2, -2, 2, 0.01)
    m = imaging_map(sp, g, eta, make_directions(16, "closed"))
    pk = find_peaks(m, 3)
    assert pk.complete
    targets = _peak_targets(eta)
    claimed = set()
    for p, _ in pk.peaks:
        d = np.linalg.norm(targets - np.asarray(p), axis=1)
        j = int(np.argmin(d))
        assert d[j] <= 0.02
        claimed.add(j)
    assert claimed == {0, 1, 2}


def test_peak_count_matches_crack_count_across_eta():
    sp = select_signal_dim(svd_msr(msr3()), "manual", m=3)
    dirs = make_directions(16, "closed")
    g = ImageGrid(-2, 2, -2, 2, 0.02)
    for eta in (K1 / 2, K1, 2 * K1):
        m = imaging_map(sp, g, eta, dirs)
        pk = find_peaks(m, 3)
        vals = [v for _, v in pk.peaks]
        # three dominant peaks well above the sidelobe floor
        assert len(vals) == 3 and min(vals) > 5.0


# ---- peaks ----

def test_find_peaks_constant_map_flagged():
    g = ImageGrid(-1, 1, -1, 1, 0.1)
    m = ImageMap(grid=g, values=np.ones((21, 21)), eta=1.0)
    pk = find_peaks(m, 2)
    assert pk.peaks == () and not pk.complete


def test_find_peaks_single_crack():
    sc = Scene(cracks=(SegmentCrack(center=(0.3, -0.4), half_length=0.05),), wavenumber=K1)
    dirs = make_directions(16, "closed")
    sp = select_signal_dim(svd_msr(assemble_msr(sc, 0.05, dirs)), "manual", m=1)
    m = imaging_map(sp, ImageGrid(-2, 2, -2, 2, 0.01), 20.0, dirs)
    pk = find_peaks(m, 1)
    target = (K1 / 20.0) * np.array([0.3, -0.4])
    assert np.linalg.norm(np.asarray(pk.peaks[0][0]) - target) <= 0.01


# ---- exports ----

def test_map_csv_export(tmp_path):
    g = ImageGrid(0, 0.2, 0, 0.1, 0.1)
    m = ImageMap(grid=g, values=np.arange(6, dtype=float).reshape(2, 3), eta=1.0)
    save_map_csv(m, tmp_path / "m.csv")
    lines = (tmp_path / "m.csv").read_text().strip().splitlines()
    assert lines[0] == "x,y,value"
    assert len(lines) == 7
    assert lines[1].split(",") == ["0.0", "0.0", "0.0"]


def test_map_pgm_export(tmp_path):
    g = ImageGrid(0, 0.2, 0, 0.1, 0.1)
    m = ImageMap(grid=g, values=np.arange(6, dtype=float).reshape(2, 3), eta=1.0)
    save_map_pgm(m, tmp_path / "m.pgm")
    data = (tmp_path / "m.pgm").read_bytes()
    assert data.startswith(b"P5\n3 2\n255\n")
    assert len(data) == len(b"P5\n3 2\n255\n") + 6
    assert data[-1] == 255 and data[len(b"P5\n3 2\n255\n")] == 0


def test_spectrum_csv(tmp_path):
    sp = svd_msr(msr3())
    save_spectrum_csv(sp, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().strip().splitlines()
    assert lines[0] == "index,sigma,sigma_rel"
    assert len(lines) == 17
    assert lines[1].split(",")[2] == "1.0"
