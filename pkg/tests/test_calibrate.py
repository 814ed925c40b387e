import numpy as np
import pytest

from crackmusic import (CalibrationPlan, ImageGrid, Scene, SegmentCrack,
                        assemble_msr, calibrate_and_image, estimate_k,
                        find_peaks, imaging_map, make_directions, safe_cone,
                        select_signal_dim, svd_msr)
from crackmusic.presets import extended_arc_points
from crackmusic.scene import ParametricCrack

K3 = 2 * np.pi / 0.4


# ---- plan validation ----

def test_plan_rejects_origin_and_bad_eta():
    with pytest.raises(ValueError):
        CalibrationPlan(y=(0.0, 0.0), eta=20.0)
    with pytest.raises(ValueError):
        CalibrationPlan(y=(0.0, -1.0), eta=0.0)


# ---- safe cone ----

def test_cone_quadrant_example():
    cone = safe_cone([(1.0, 0.0), (0.0, 1.0)],
                     [(0.5, 0.5), (0.9, 0.2), (0.1, 0.8)])
    assert cone.width == pytest.approx(np.pi / 2)
    assert cone.contains((0.3, 0.3))
    assert not cone.contains((-1.0, -1.0))
    assert not cone.contains((0.0, -1.0))


def test_cone_scale_invariance():
    args = ([(1.0, 0.0), (0.0, 1.0)], [(0.5, 0.5)])
    c1 = safe_cone(*args)
    c2 = safe_cone([(2.0, 0.0), (0.0, 2.0)], [(1.0, 1.0)])
    assert c1 == c2


def test_cone_picks_sector_containing_samples():
    # samples in the three other quadrants -> complement sector is chosen
    cone = safe_cone([(1.0, 0.0), (0.0, 1.0)],
                     [(-1.0, 0.5), (-0.5, -0.5), (0.5, -1.0)])
    assert cone.width == pytest.approx(3 * np.pi / 2)
    assert cone.contains((-1.0, -1.0))
    assert not cone.contains((0.5, 0.5))


def test_cone_degenerate_endpoint():
    with pytest.raises(ValueError):
        safe_cone([(0.0, 0.0), (0.0, 1.0)], [(0.5, 0.5)])


def _arc_image_points(eta):
    """Peak-localized images of the extended arc's endpoints and body."""
    arc = ParametricCrack(points=extended_arc_points())
    scene = Scene(cracks=(arc,), wavenumber=K3)
    scale = K3 / eta
    ends = [scale * np.asarray(e) for e in arc.endpoints]
    body = scale * scene.centers()
    return ends, body


def test_cone_from_arc_excludes_placement_ray():
    ends, body = _arc_image_points(20.0)
    cone = safe_cone(ends, body)
    assert not cone.contains((0.0, -1.0))


def test_cone_eta_invariance_for_arc():
    cones = []
    for eta in (15.0, 20.0):
        ends, body = _arc_image_points(eta)
        cones.append(safe_cone(ends, body))
    assert cones[0].angle_lo == pytest.approx(cones[1].angle_lo, abs=1e-9)
    assert cones[0].angle_hi == pytest.approx(cones[1].angle_hi, abs=1e-9)


# ---- scalar estimate ----

def test_estimate_examples():
    assert estimate_k((0.0, -0.77), (0.0, -1.0), 20.0) == pytest.approx(15.4)
    assert estimate_k((0.3, 0.4), (0.3, 0.4), 7.5) == pytest.approx(7.5)
    assert estimate_k((0.5, 0.0), (1.0, 0.0), 10.0) == pytest.approx(5.0)


def test_estimate_rejects_wrong_side():
    with pytest.raises(ValueError):
        estimate_k((0.0, 0.77), (0.0, -1.0), 20.0)
    with pytest.raises(ValueError):
        estimate_k((1.0, 0.0), (0.0, -1.0), 20.0)


def test_estimate_scale_consistency():
    base = estimate_k((0.2, -0.9), (0.0, -1.0), 20.0)
    for alpha in (0.5, 2.0, 3.7):
        scaled = estimate_k((0.2 * alpha, -0.9 * alpha), (0.0, -1.0), 20.0)
        assert scaled == pytest.approx(alpha * base)


# ---- end-to-end calibration ----

def _segment_msr(y, eta_ignored=None, extra_cracks=(), n=32, k=K3):
    cracks = tuple(extra_cracks) + (
        SegmentCrack(center=y, half_length=0.05),)
    scene = Scene(cracks=cracks, wavenumber=k)
    return assemble_msr(scene, 0.05, make_directions(n, "closed"))


def test_calibrate_small_scatterer_recovers_k():
    msr = _segment_msr((0.0, -1.0))
    plan = CalibrationPlan(y=(0.0, -1.0), eta=20.0, kind="small")
    grid = ImageGrid(-2, 2, -2, 2, 0.01)
    k_hat, remap, info = calibrate_and_image(msr, plan, grid,
                                             signal_dim=("manual", 1))
    assert abs(k_hat - K3) / K3 < 0.05
    assert remap.eta == k_hat
    assert info["k_hat"] == k_hat
    assert info["eta_used"] == 20.0
    assert not info["ambiguous"]


def test_calibrate_eta_equal_k_is_fixed_point():
    msr = _segment_msr((0.0, -1.0))
    plan = CalibrationPlan(y=(0.0, -1.0), eta=K3, kind="small")
    grid = ImageGrid(-2, 2, -2, 2, 0.01)
    k_hat, remap, _ = calibrate_and_image(msr, plan, grid,
                                          signal_dim=("manual", 1))
    assert abs(k_hat - K3) / K3 < 0.01
    pk = find_peaks(remap, 1)
    assert np.linalg.norm(np.asarray(pk.peaks[0][0]) - np.array([0.0, -1.0])) < 0.02


def test_calibrate_accuracy_improves_with_grid_step():
    msr = _segment_msr((0.0, -1.0))
    plan = CalibrationPlan(y=(0.0, -1.0), eta=20.0, kind="small")
    errs = []
    for step in (0.02, 0.01, 0.005):
        k_hat, _, _ = calibrate_and_image(msr, plan,
                                          ImageGrid(-2, 2, -2, 2, step),
                                          signal_dim=("manual", 1))
        errs.append(abs(k_hat - K3) / K3)
        # bound: (step/|y|)*(eta/k) plus sub-cell fit slack
        assert errs[-1] <= (step / 1.0) * (20.0 / K3) + 0.002


def test_calibrate_ambiguous_when_crack_image_near_ray():
    # a crack whose scaled image lands on the calibration ray
    decoy = SegmentCrack(center=(0.0, -0.5), half_length=0.05)
    msr = _segment_msr((0.0, -1.0), extra_cracks=(decoy,))
    plan = CalibrationPlan(y=(0.0, -1.0), eta=20.0, kind="small")
    grid = ImageGrid(-2, 2, -2, 2, 0.01)
    k_hat, _, info = calibrate_and_image(msr, plan, grid,
                                         signal_dim=("manual", 2))
    assert info["ambiguous"]


def test_calibrate_no_peak_near_ray_raises():
    # crack far from the ray through y; no calibration scatterer present
    scene = Scene(cracks=(SegmentCrack(center=(1.0, 1.0), half_length=0.05),),
                  wavenumber=K3)
    msr = assemble_msr(scene, 0.05, make_directions(32, "closed"))
    plan = CalibrationPlan(y=(0.0, -1.0), eta=20.0, kind="small")
    with pytest.raises(ValueError):
        calibrate_and_image(msr, plan, ImageGrid(-2, 2, -2, 2, 0.01),
                            signal_dim=("manual", 1))
