import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from dgblend import wall_model as wm

GAMMA, PR = 1.4, 0.72


def mp_spalding(up):
    x = mpmath.mpf(up) * mpmath.mpf("0.4")
    bracket = mpmath.exp(x) - 1 - x - x**2 / 2 - x**3 / 6 - x**4 / 24
    return mpmath.mpf(up) + mpmath.mpf("0.1108") * bracket


def oracle_u_plus(y_plus):
    # independent root of the forward map
    return brentq(lambda u: wm.spalding_y_plus(u) - y_plus, 0.0, min(max(y_plus, 1.0), 60.0), xtol=1e-300, rtol=1e-15)


def test_spalding_zero_and_sublayer():
    assert wm.spalding_y_plus(0.0) == 0.0
    for up in (1e-6, 1e-3, 0.1, 1.0):
        lead = 0.1108 * (0.4 * up) ** 5 / 120
        # next term is (0.4 u+)/6 of the leading one; tiny remainders vanish below one ulp
        assert abs(wm.spalding_y_plus(up) - up - lead) <= 0.1 * up * lead + 2e-16 * up


@pytest.mark.parametrize("up", [0.5, 3.0, 4.99, 5.01, 12.0, 20.0, 30.0])
def test_spalding_against_high_precision(up):
    mpmath.mp.dps = 50
    ref = float(mp_spalding(up))
    assert abs(wm.spalding_y_plus(up) - ref) <= 1e-12 * ref


def test_spalding_monotone_and_derivative():
    u = np.linspace(0.0, 40.0, 4001)
    y = wm.spalding_y_plus(u)
    assert np.all(np.diff(y) > 0)
    h = 1e-6
    for up in (0.3, 4.0, 15.0):
        fd = (wm.spalding_y_plus(up + h) - wm.spalding_y_plus(up - h)) / (2 * h)
        assert wm.spalding_dy_plus(up) == pytest.approx(fd, rel=1e-7)


def test_spalding_overflow_is_range_error():
    with pytest.raises(wm.WallModelRangeError, match="2000"):
        wm.spalding_y_plus(2000.0)
    with pytest.raises(OverflowError):
        wm.spalding_y_plus(np.array([1.0, 5000.0]))


def test_inverse_round_trip_on_u_plus_grid():
    u = np.linspace(0.0, 30.0, 301)
    back = wm.spalding_u_plus(wm.spalding_y_plus(u))
    np.testing.assert_allclose(back, u, rtol=1e-10, atol=1e-14)


def test_sublayer_recovery_at_y_plus_5():
    # true y+ = 5: u+ from a tabulated forward map
    table_u = np.linspace(0, 10, 100001)
    table_y = wm.spalding_y_plus(table_u)
    up_true = np.interp(5.0, table_y, table_u)
    rho_w, mu_w, h = 1.2, 1.8e-5, 1e-4
    u_tau = 5.0 * mu_w / (rho_w * h)
    res = wm.solve_wall_stress(wm.WallModelQuery(u_tau * up_true, h, rho_w, mu_w))
    assert res.y_plus == pytest.approx(5.0, rel=1e-6)
    assert abs(res.u_plus - res.y_plus) / res.y_plus < 0.01
    assert res.tau_w == pytest.approx(rho_w * res.u_tau**2)


@pytest.mark.parametrize("y_plus", [0.2, 3.0, 11.0, 60.0, 450.0, 3000.0])
def test_solver_round_trip(y_plus):
    rho_w, mu_w, h = 1.0, 1e-5, 2e-3
    u_tau_true = y_plus * mu_w / (rho_w * h)
    u = u_tau_true * oracle_u_plus(y_plus)
    res = wm.solve_wall_stress(wm.WallModelQuery(u, h, rho_w, mu_w))
    assert res.u_tau == pytest.approx(u_tau_true, rel=1e-10)
    assert abs(res.y_plus - wm.spalding_y_plus(res.u_plus)) < 1e-10 * max(1.0, res.y_plus)
    assert res.iterations <= wm.MAX_ITERATIONS


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 1e7))
def test_invert_spalding_residual(re_h):
    up, _ = wm.invert_spalding(re_h)
    y = wm.spalding_y_plus(up)
    assert abs(up * y - re_h) <= 1e-12 * re_h


def test_zero_velocity_short_circuit():
    res = wm.solve_wall_stress(wm.WallModelQuery(0.0, 1e-3, 1.0, 1e-5))
    assert res.tau_w == 0.0 and res.iterations == 0


def test_query_validation():
    with pytest.raises(wm.WallModelDomainError, match="h_wm"):
        wm.solve_wall_stress(wm.WallModelQuery(1.0, 0.0, 1.0, 1e-5))
    with pytest.raises(wm.WallModelDomainError, match="exceeds u_inf"):
        wm.solve_wall_stress(wm.WallModelQuery(2.0, 1e-3, 1.0, 1e-5, ma_inf=0.5, u_inf=1.0), use_van_driest=True)


def test_low_mach_transform_is_identity():
    q0 = wm.WallModelQuery(0.8, 1e-3, 1.0, 1e-5, ma_inf=1e-4, u_inf=1.0)
    a = wm.solve_wall_stress(q0, use_van_driest=False)
    b = wm.solve_wall_stress(q0, use_van_driest=True)
    assert b.u_tau == pytest.approx(a.u_tau, rel=1e-8)
    u = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(wm.van_driest_transform(u, 1.0, 1e-4), u, rtol=1e-7)
    assert wm.van_driest_transform(0.7, 1.0, 0.0) == 0.7
    assert wm.van_driest_transform(0.0, 1.0, 0.72) == 0.0


def test_van_driest_against_high_precision():
    mpmath.mp.dps = 40
    k = (mpmath.mpf("1.4") - 1) / 2 * mpmath.mpf("0.72") ** 2 * mpmath.cbrt(mpmath.mpf("0.72"))
    b = mpmath.sqrt(k) / mpmath.sqrt(1 + k)
    assert abs(wm.van_driest_coefficient(0.72, GAMMA, PR) - float(b)) < 1e-15
    ref = float(mpmath.asin(b) / b) * 3.0
    assert wm.van_driest_transform(3.0, 3.0, 0.72, GAMMA, PR) == pytest.approx(ref, rel=1e-12)


def test_transform_monotone_and_not_smaller():
    u = np.linspace(0.0, 2.0, 201)
    for ma in (0.1, 0.72, 2.0, 6.0):
        ueq = wm.van_driest_transform(u, 2.0, ma)
        assert np.all(np.diff(ueq) > 0) and np.all(ueq >= u)


def test_edge_form_examples():
    assert wm.van_driest_edge_form(0.3, 1.0, 2.0, 2.0) == 0.3
    # a = 0.5 -> T_e/T_aw = 3/4
    assert wm.van_driest_edge_form(1.0, 1.0, 3.0, 4.0) == pytest.approx(math.pi / 3, rel=1e-15)
    with pytest.raises(wm.WallModelDomainError):
        wm.van_driest_edge_form(0.5, 1.0, 2.0, 1.0)


@pytest.mark.parametrize("ma", [0.3, 0.72, 1.5, 4.0])
def test_edge_form_matches_freestream_form(ma):
    ratio = wm.matched_temperature_ratio(ma, GAMMA, PR)
    u = np.linspace(0.0, 1.5, 31)
    edge = wm.van_driest_edge_form(u, 1.5, 1.0, ratio)
    free = wm.van_driest_transform(u, 1.5, ma, GAMMA, PR)
    np.testing.assert_allclose(edge, free, rtol=1e-12, atol=1e-15)


def test_recovery_ratio_as_printed():
    assert wm.recovery_ratio(0.0, 1.4, 0.72) == 0.0
    assert wm.recovery_ratio(1.0, 1.4, 1.0) == pytest.approx(9 / 7, rel=1e-15)
    assert wm.recovery_ratio(2.0, 1.4, 1.0) == pytest.approx(4 * 9 / 7, rel=1e-15)


def test_transform_never_lowers_u_tau():
    for ma in (0.2, 0.72, 1.5, 3.0):
        for u in (0.1, 0.5, 0.99):
            q = wm.WallModelQuery(u, 1e-3, 1.0, 1e-5, ma_inf=ma, u_inf=1.0)
            assert wm.solve_wall_stress(q, True).u_tau >= wm.solve_wall_stress(q, False).u_tau


def test_log_law_and_sublayer_asymptotics():
    y = np.logspace(np.log10(0.1), 3, 200)
    up = wm.spalding_u_plus(y)
    sub = y < 1
    assert np.all(np.abs(up[sub] - y[sub]) / y[sub] < 1e-3)
    log = y > 300
    law = np.log(y[log]) / 0.4 + wm.LOG_LAW_B
    assert np.all(np.abs(up[log] - law) / law < 0.01)
    assert math.exp(-0.4 * wm.LOG_LAW_B) == pytest.approx(0.1108, rel=1e-14)


def test_sweep_curves():
    y = np.logspace(-1, 3, 50)
    curves = wm.sweep_curves(y, 0.72, GAMMA, PR, 25.0)
    inc = wm.spalding_u_plus(y)
    assert len(curves) == 3
    np.testing.assert_allclose(curves[0], inc)
    # compressible profiles sit below the incompressible one and map back onto it
    vd = curves[1]
    assert np.all(vd <= inc + 1e-12)
    np.testing.assert_allclose(wm.van_driest_transform(vd, 25.0, 0.72, GAMMA, PR), inc, rtol=1e-12)
    np.testing.assert_allclose(curves[2], vd, rtol=1e-12)
