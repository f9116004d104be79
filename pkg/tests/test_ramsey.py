import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcsim import (AtomState, CoherentSpec, CrossingQuery, JointPureState,
                   ModelParams, NoCrossingError, RamseyScan, build_coherent,
                   coherence_series_gt, contrast_sweep_gt, contrast_vs_alpha,
                   find_crossing, find_crossing_gt, ramsey_fringe,
                   scan_at_crossing)

PARAMS = ModelParams(omega=2 * np.pi * 51.099e9, g=2 * np.pi * 50e3)

# independently located with Brent root finding on a dense-matrix evolution
FIRST_EXPECTED = {1.0: (0.5739735880482212, 0.5719051950741354),
                  2.0: (0.35867070072949786, 0.8307852537818339),
                  3.0: (0.2512498977537077, 0.9162575900927181)}
NEAREST70_EXPECTED = {1.0: (69.540, 0.26946),
                      2.0: (70.135, 0.23913),
                      3.0: (69.734, 0.19822)}


def coherent_excited(alpha):
    return build_coherent(CoherentSpec(alpha=alpha, atom=AtomState.excited()))


def test_vacuum_first_crossing_is_quarter_rabi_period():
    st0 = coherent_excited(0.0)
    gt = find_crossing_gt(st0, 0.5, 0.0, 2.0, 201)
    assert gt == pytest.approx(np.pi / 4, abs=1e-9)
    # a lone Fock field stores full which-path information: no contrast
    _, _, eg = coherence_series_gt(st0, np.array([gt]))
    assert abs(eg[0]) < 1e-14


@pytest.mark.parametrize("alpha", sorted(FIRST_EXPECTED))
def test_first_crossing_frozen(alpha):
    st0 = coherent_excited(alpha)
    gt = find_crossing_gt(st0, 0.5, 0.0, 4.0, 8001)
    want_gt, want_contrast = FIRST_EXPECTED[alpha]
    assert gt == pytest.approx(want_gt, abs=1e-8)
    _, _, eg = coherence_series_gt(st0, np.array([gt]))
    assert 2 * abs(eg[0]) == pytest.approx(want_contrast, rel=1e-8)
    ee, _, _ = coherence_series_gt(st0, np.array([gt]))
    assert abs(ee[0] - 0.5) < 1e-10


@pytest.mark.parametrize("alpha", sorted(NEAREST70_EXPECTED))
def test_nearest_crossing_frozen(alpha):
    st0 = coherent_excited(alpha)
    gt = find_crossing_gt(st0, 0.5, 60.0, 80.0, 4001, which="nearest", gt_ref=70.0)
    want_gt, want_contrast = NEAREST70_EXPECTED[alpha]
    assert gt == pytest.approx(want_gt, abs=1e-3)
    _, _, eg = coherence_series_gt(st0, np.array([gt]))
    assert 2 * abs(eg[0]) == pytest.approx(want_contrast, abs=1e-4)


def test_contrast_sweep_monotonicity():
    first = contrast_sweep_gt([1.0, 2.0, 3.0], 0.5, 0.0, 4.0, 8001)
    c_first = [c for _, _, c in first]
    assert c_first[0] < c_first[1] < c_first[2]
    late = contrast_sweep_gt([1.0, 2.0, 3.0], 0.5, 60.0, 80.0, 4001,
                             which="nearest", gt_ref=70.0)
    c_late = [c for _, _, c in late]
    assert c_late[0] > c_late[1] > c_late[2]


def test_no_crossing_raises_with_range():
    st0 = JointPureState(0, [0.0], [1.0, 0.0])  # dark state, rho_ee = 0 always
    with pytest.raises(NoCrossingError, match=r"range \["):
        find_crossing_gt(st0, 0.5, 0.0, 10.0, 101)


def test_crossing_query_validation():
    with pytest.raises(ValueError):
        CrossingQuery(target=0.0)
    with pytest.raises(ValueError):
        CrossingQuery(which="last")
    with pytest.raises(ValueError):
        CrossingQuery(grid=(1.0, 0.5, 100))
    with pytest.raises(ValueError):
        CrossingQuery(grid=(0.0, 1.0, 5))
    with pytest.raises(ValueError):
        CrossingQuery(which="nearest")  # t_ref missing
    with pytest.raises(ValueError):
        CrossingQuery(which="nearest", t_ref=5.0, grid=(0.0, 1.0, 100))


def test_find_crossing_seconds_scales_with_g():
    st0 = coherent_excited(2.0)
    q = CrossingQuery(target=0.5, grid=(0.0, 4.0 / PARAMS.g, 8001))
    t = find_crossing(st0, PARAMS, q)
    assert t * PARAMS.g == pytest.approx(FIRST_EXPECTED[2.0][0], abs=1e-8)


def test_ramsey_fringe_shape_and_bounds():
    phi = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    pg = ramsey_fringe(0.3 - 0.2j, phi)
    assert pg.shape == phi.shape
    assert np.all(pg >= 0.0) and np.all(pg <= 1.0)
    assert pg.mean() == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        ramsey_fringe(0.6, phi)


@settings(max_examples=60, deadline=None)
@given(re=st.floats(-0.35, 0.35), im=st.floats(-0.35, 0.35))
def test_fringe_probabilities_stay_physical(re, im):
    rho_ge = complex(re, im)
    if abs(rho_ge) > 0.5:
        return
    pg = ramsey_fringe(rho_ge, np.linspace(0, 2 * np.pi, 41))
    assert np.all(pg >= -1e-12) and np.all(pg <= 1.0 + 1e-12)


def test_scan_at_crossing_span_equals_contrast():
    st0 = coherent_excited(2.0)
    q = CrossingQuery(target=0.5, grid=(0.0, 4.0 / PARAMS.g, 8001))
    scan = scan_at_crossing(st0, PARAMS, q, n_phi=64)
    assert scan.t_alpha * PARAMS.g == pytest.approx(FIRST_EXPECTED[2.0][0], abs=1e-8)
    span = scan.p_g.max() - scan.p_g.min()
    assert span == pytest.approx(scan.contrast, abs=1e-10)
    assert scan.contrast == pytest.approx(FIRST_EXPECTED[2.0][1], rel=1e-8)
    with pytest.raises(ValueError):
        scan.p_g[0] = 2.0  # frozen


def test_scan_vacuum_contrast_zero():
    st0 = coherent_excited(0.0)
    q = CrossingQuery(target=0.5, grid=(0.0, 2.0 / PARAMS.g, 201))
    scan = scan_at_crossing(st0, PARAMS, q)
    assert scan.contrast < 1e-13
    assert np.allclose(scan.p_g, 0.5, atol=1e-13)


def test_ramsey_scan_rejects_inconsistent_span():
    phi = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    pg = ramsey_fringe(0.2, phi)
    with pytest.raises(ValueError, match="span"):
        RamseyScan(t_alpha=1.0, rho_ge=0.3, phi_grid=phi, p_g=pg)


def test_contrast_vs_alpha_seconds_wrapper():
    q = CrossingQuery(target=0.5, grid=(0.0, 4.0 / PARAMS.g, 8001))
    rows = contrast_vs_alpha([1.0, 3.0], PARAMS, q)
    assert [a for a, _, _ in rows] == [1.0, 3.0]
    for a, t_a, c in rows:
        assert t_a * PARAMS.g == pytest.approx(FIRST_EXPECTED[a][0], abs=1e-8)
        assert c == pytest.approx(FIRST_EXPECTED[a][1], rel=1e-8)


def test_bisection_honors_target_not_half():
    st0 = coherent_excited(1.0)
    gt = find_crossing_gt(st0, 0.25, 0.0, 4.0, 4001)
    ee, _, _ = coherence_series_gt(st0, np.array([gt]))
    assert abs(ee[0] - 0.25) < 1e-10
