import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gwimm import series_alg as S
from gwimm.errors import CompositionNeedsZeroConstant, DivisionByZeroConstant
from gwimm.pgf import REFERENCE_PARAMS, imm_pgf_coeffs, quadratic_model, validate_model
from gwimm.series_alg import TruncatedSeries


def test_mul_example():
    out = S.series_mul([1, 1, 0], [1, -1, 0])
    np.testing.assert_array_equal(out.coeffs, [1, 0, -1])


def test_reciprocal_geometric():
    np.testing.assert_allclose(S.series_reciprocal([1, -1, 0, 0]).coeffs, [1, 1, 1, 1])


def test_compose_example():
    np.testing.assert_allclose(S.series_compose([0, 1, 1], [0, 1, 1]).coeffs, [0, 1, 2])


def test_compose_needs_zero_constant():
    with pytest.raises(CompositionNeedsZeroConstant):
        S.series_compose([0, 1, 1], [1, 1, 0])


def test_reciprocal_needs_constant():
    with pytest.raises(DivisionByZeroConstant):
        S.series_reciprocal([0, 1, 1])


coeff_lists = st.lists(st.floats(-2, 2), min_size=6, max_size=6)


@settings(max_examples=50, deadline=None)
@given(a=coeff_lists, c0=st.floats(0.5, 2))
def test_reciprocal_identity(a, c0):
    a = np.array([c0] + a)
    prod = S.mul(a, S.reciprocal(a, 6), 6)
    np.testing.assert_allclose(prod, [1, 0, 0, 0, 0, 0, 0], atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(a=coeff_lists, b=coeff_lists, c=coeff_lists)
def test_compose_associative(a, b, c):
    b = np.array([0.0] + b[1:])
    c = np.array([0.0] + c[1:])
    lhs = S.compose(S.compose(a, b, 5), c, 5)
    rhs = S.compose(a, S.compose(b, c, 5), 5)
    np.testing.assert_allclose(lhs, rhs, atol=1e-8 * (1 + np.abs(lhs).max()))


@settings(max_examples=40, deadline=None)
@given(a=st.lists(st.floats(-1, 1), min_size=5, max_size=5), a1=st.floats(0.5, 2))
def test_reversion_roundtrip(a, a1):
    a = np.array([0.0, a1] + a)
    b = S.reversion(a, 6)
    ident = S.compose(a, b, 6)
    np.testing.assert_allclose(ident, [0, 1, 0, 0, 0, 0, 0], atol=1e-9)


# --- recursions ------------------------------------------------------------

@pytest.mark.parametrize("p1,q0", REFERENCE_PARAMS)
def test_low_order_closed_forms(p1, q0):
    m = quadratic_model(p1, q0)
    p2, q1 = 1 - p1, 1 - q0
    g = S.phi_inv_coeffs(m, 8)
    h = S.psi_of_phi_inv_coeffs(m, g, 8)
    a = S.a_coeffs(m, 8)
    g2 = -p2 / (p1 * (1 - p1))
    h1 = q1 / (q0 * (1 - p1))
    assert g[1] == 1.0
    assert g[2] == pytest.approx(g2, abs=1e-12)
    assert h[0] == 1.0
    assert h[1] == pytest.approx(h1, abs=1e-12)
    assert a[0] == pytest.approx(1.0, abs=1e-15)
    assert a[1] == pytest.approx(g2 - h1, abs=1e-12)


def test_quad03_values(quad03):
    assert S.phi_inv_coeffs(quad03, 4)[2] == pytest.approx(-10 / 3, abs=1e-12)
    assert S.psi_of_phi_inv_coeffs(quad03, None, 4)[1] == pytest.approx(10 / 7, abs=1e-12)
    assert S.a_coeffs(quad03, 4)[1] == pytest.approx(-100 / 21, abs=1e-12)
    assert S.phi_coeffs(quad03, 4)[2] == pytest.approx(10 / 3, abs=1e-12)


def test_no_immigration_h_vanishes(no_imm):
    h = S.psi_of_phi_inv_coeffs(no_imm, None, 10)
    np.testing.assert_array_equal(h.coeffs[1:], 0.0)
    np.testing.assert_array_equal(S.psi_coeffs(no_imm, 10).coeffs[1:], 0.0)


def test_a_identity(quad03):
    n = 20
    g = S.phi_inv_coeffs(quad03, n + 1)
    h = S.psi_of_phi_inv_coeffs(quad03, g, n + 1)
    a = S.a_coeffs(quad03, n)
    zh = np.concatenate([[0.0], h.coeffs[:n + 1]])
    lhs = S.mul(a.coeffs, zh, n + 1)
    np.testing.assert_allclose(lhs, g.coeffs, rtol=1e-9, atol=1e-12)


def test_reversion_inverts_g(quad03):
    g = S.phi_inv_coeffs(quad03, 12)
    phi = S.series_reversion(g)
    ident = S.series_compose(phi, g)
    expected = np.zeros(13)
    expected[1] = 1
    np.testing.assert_allclose(ident.coeffs, expected, atol=1e-6)


def test_direct_schroder_matches_reversion(quad03):
    direct = S.phi_coeffs(quad03, 10).coeffs
    rev = S.phi_taylor_by_reversion(quad03, 10).coeffs
    np.testing.assert_allclose(direct, rev, rtol=1e-8)


def test_psi_series_equals_h_of_phi(quad03):
    phi = S.phi_coeffs(quad03, 10)
    h = S.psi_of_phi_inv_coeffs(quad03, None, 10)
    # composing h with Phi cancels a few digits in double
    np.testing.assert_allclose(S.series_compose(h, phi).coeffs, S.psi_coeffs(quad03, 10).coeffs,
                               rtol=1e-8, atol=1e-12)


def test_psi_routes_agree_in_extended_precision(quad03):
    import mpmath
    n = 10
    with mpmath.workdps(40):
        p, q = S._model_coeffs(quad03, 40)
        pj = S._fit(np.array([mpmath.mpf(0), mpmath.mpf(1)], dtype=object), n)
        prod = S._fit(np.array([mpmath.mpf(1)], dtype=object), n)
        for _ in range(80):
            prod = S.mul(prod, S.compose(q, pj, n) / q[0], n)
            pj = S.compose(p, pj, n)
        psi = S.psi_coeffs(quad03, n, dps=40).coeffs
        via_h = S.series_compose(S.psi_of_phi_inv_coeffs(quad03, None, n, dps=40),
                                 S.phi_coeffs(quad03, n, dps=40)).coeffs
        assert max(abs(a - b) for a, b in zip(prod, psi)) < 1e-25
        assert max(abs(a - b) for a, b in zip(via_h, psi)) < 1e-25


def test_poincare_second_coefficient(quad03):
    # 1 - Pi(z) = E[W] z - E[W^2] z^2 / 2 + ... with E[W^2] = 1 + Var(xi) / (E^2 - E)
    var = 0.3 * 1 + 0.7 * 4 - 1.7 ** 2
    ew2 = 1 + var / (1.7 ** 2 - 1.7)
    f = S.poincare_coeffs(quad03, 6)
    assert f[1] == 1.0
    assert f[2] == pytest.approx(-ew2 / 2, rel=1e-12)


def test_r_first_coefficient(quad03):
    # R'(0) = -Q'(1) / (E - 1)
    r = S.r_coeffs(quad03, None, 6)
    assert r[0] == 1.0
    assert r[1] == pytest.approx(-0.5 / 0.7, rel=1e-12)


def test_a_geometric_growth(ref_model):
    a = S.a_coeffs(ref_model, 30).coeffs
    rates = np.log(np.abs(a[1:])) / np.arange(1, 31)
    # log|A_n| / n stays bounded; a geometric envelope r^n exists
    assert np.all(np.isfinite(rates))
    assert rates.max() < 5.0
    assert np.ptp(rates[10:]) < 0.5


def _iterated_coeffs(m, t, n):
    pt = S._fit(np.array([0.0, 1.0]), n)
    for _ in range(t):
        pt = S.compose(m.p.array, pt, n)
    return pt


def test_phi_oracle_quad03(quad03):
    phi = S.phi_taylor_by_reversion(quad03, 8).coeffs
    np.testing.assert_allclose(phi, _iterated_coeffs(quad03, 30, 8) / quad03.p1 ** 30, atol=1e-8, rtol=0)


def test_phi_psi_two_routes_quad03(quad03):
    lim = S.phi_psi_product_coeffs(quad03, 6).coeffs
    ratios = imm_pgf_coeffs(quad03, 30, 6) / (quad03.p1 * quad03.q0) ** 30
    np.testing.assert_allclose(ratios, lim, atol=1e-6, rtol=0)


def test_extended_precision_agrees(quad03):
    d = S.a_coeffs(quad03, 10).coeffs
    mp = S.a_coeffs(quad03, 10, dps=40).coeffs
    np.testing.assert_allclose(d, [float(x) for x in mp], rtol=1e-10)


def test_truncated_series_container():
    s = TruncatedSeries([1.0, 2.0, 3.0])
    assert s.order == 2 and len(s) == 3
    assert s(2.0) == 17.0
    assert s.truncate(4).coeffs.tolist() == [1, 2, 3, 0, 0]
    with pytest.raises(ValueError):
        TruncatedSeries([])
