import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gwimm import limits, periodic, series_alg
from gwimm.periodic import auto_dps, fourier_table, julia_sector_probe, kl_eval


@settings(max_examples=40, deadline=None)
@given(x=st.floats(-3, 3))
def test_periodic_in_x(quad03, cfg, x):
    k0, l0 = kl_eval(quad03, cfg, x)
    k1, l1 = kl_eval(quad03, cfg, x + 1.0)
    assert k1 == pytest.approx(k0, rel=1e-11)
    assert l1 == pytest.approx(l0, rel=1e-11)


def test_positive_and_nonconstant(ref_model, cfg):
    xs = np.linspace(0, 1, 65)
    k, l = kl_eval(ref_model, cfg, xs)
    assert np.all(k > 0) and np.all(l > 0)
    # K is not constant for a non-degenerate offspring law, though its wobble is tiny
    assert np.ptp(k) > 0


def test_recovers_pi(quad03, cfg):
    # Pi(z) = Phi^{-1}(z^{log_E p1} K(log_E z))
    z = 10.0
    x = math.log(z) / quad03.log_e
    w = quad03.p1 ** x * periodic.k_eval(quad03, cfg, x)
    g = series_alg.phi_inv_coeffs(quad03, 60)
    # w is small, so the inverse series converges quickly
    assert abs(w) < 0.01
    assert series_alg.horner(g.coeffs, w) == pytest.approx(limits.pi_eval(quad03, cfg, z).real,
                                                           rel=1e-12)


def test_no_immigration_l_is_one(no_imm, cfg):
    _, l = kl_eval(no_imm, cfg, np.linspace(0, 1, 17))
    np.testing.assert_allclose(l, 1.0, atol=1e-13)


def test_auto_dps():
    from gwimm.pgf import quadratic_model
    assert auto_dps(quadratic_model(0.3, 0.5), 8) == 150


def test_table_shape_and_symmetry(quad03_tail):
    _, table = quad03_tail
    assert table.theta.shape == (table.n_max + 1, 2 * table.m_max + 1)
    for m in range(1, table.m_max + 1):
        np.testing.assert_allclose(table.theta[:, table.m_max - m],
                                   np.conj(table.theta[:, table.m_max + m]), rtol=1e-10, atol=0)


def test_zeroth_coefficient_positive_real(quad03_tail):
    _, table = quad03_tail
    c0 = table.theta[:, table.m_max]
    assert np.all(c0.real > 0)
    assert np.max(np.abs(c0.imag)) < 1e-14


def test_row_sums_give_value_at_zero(quad03_tail):
    _, table = quad03_tail
    np.testing.assert_allclose(table.row_sums().real, table.values_at_zero, rtol=1e-13)


def test_coefficients_decay_geometrically(quad03_tail):
    _, table = quad03_tail
    mags = np.abs(table.theta[0, table.m_max:])
    ratios = mags[2:] / mags[1:-1]
    assert np.all(ratios < 1e-6)


def test_highest_mode_above_rounding_floor(ref_model):
    from conftest import tail_pieces
    _, table = tail_pieces(ref_model)
    more = fourier_table(ref_model, n_max=0, m_max=table.m_max, dps=table.dps + 40)
    np.testing.assert_allclose(table.theta[0], more.theta[0], rtol=1e-12)


def test_grid_refinement_stable(quad03):
    coarse = fourier_table(quad03, n_max=2, m_max=4, grid_size=64)
    fine = fourier_table(quad03, n_max=2, m_max=4, grid_size=128)
    rel = np.abs(coarse.theta - fine.theta) / np.abs(fine.theta)
    assert rel.max() < 1e-12


def test_double_precision_table_is_noisy_at_large_m(quad03):
    t = fourier_table(quad03, n_max=0, m_max=4, grid_size=64, dps=None)
    exact = fourier_table(quad03, n_max=0, m_max=4, grid_size=64)
    # low modes agree, high modes sit at the rounding floor
    assert abs(t.coeff(0, 1) - exact.coeff(0, 1)) < 1e-15
    assert abs(exact.coeff(0, 4)) < 1e-30 < abs(t.coeff(0, 4))


def test_grid_too_small(quad03):
    with pytest.raises(ValueError):
        fourier_table(quad03, n_max=1, m_max=8, grid_size=16)


# measured with the default radii and 0.01 angle resolution
@pytest.mark.parametrize("p1,q0,angle", [(0.3, 0.5, 3.83), (0.4, 0.5, 4.09), (0.5, 0.7, 4.38)])
def test_probe_angles(p1, q0, angle):
    from gwimm.pgf import quadratic_model
    rep = julia_sector_probe(quadratic_model(p1, q0))
    assert rep.theta_star_lower == pytest.approx(angle, abs=1e-9)
    assert rep.hypothesis_pi_ok
    assert rep.theta_star_lower < 2 * math.pi


@pytest.mark.parametrize("p1", [0.01, 0.05, 0.2, 0.7, 0.95])
def test_probe_across_family(p1):
    from gwimm.pgf import quadratic_model
    rep = julia_sector_probe(quadratic_model(p1, 0.5))
    # the unit disc alone guarantees an opening of pi
    assert rep.theta_star_lower >= math.pi - rep.resolution
    assert rep.hypothesis_pi_ok and not rep.inconclusive


def test_probe_escape_and_inconclusive(quad03):
    # angle 2 pi puts the probe at 1 + r, which escapes
    rep = julia_sector_probe(quad03, angles=[1.0, 2 * math.pi], radii=[0.05])
    assert rep.status[0, 0] == 1 and rep.status[1, 0] == -1
    assert rep.theta_star_lower == 1.0
    short = julia_sector_probe(quad03, angles=[1.0], radii=[0.05], max_iter=1)
    assert short.inconclusive == [(1.0, 0.05)]
    assert short.theta_star_lower == 0.0


def test_decay_rate_follows_probe(ref_model):
    from conftest import tail_pieces
    _, table = tail_pieces(ref_model)
    ms = np.arange(1, table.m_max + 1)
    slope = np.polyfit(ms, np.log(np.abs(table.theta[0, table.m_max + 1:])), 1)[0]
    angle = julia_sector_probe(ref_model).theta_star_lower
    # 1 nat of margin (implementer-calibrated) absorbs the sub-exponential
    # prefactor that biases a fit over only eight modes
    assert slope <= -math.pi * angle / ref_model.log_e + 1.0
