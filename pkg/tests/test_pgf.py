import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import polynomial as npoly

from gwimm import errors
from gwimm.pgf import (Pgf, eval_pgf, imm_pgf_coeffs, iterate_p, load_model, quadratic_model,
                       save_model, validate_model)


@st.composite
def models(draw, max_deg=4):
    p1 = draw(st.floats(0.05, 0.95))
    deg = draw(st.integers(2, max_deg))
    raw = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=deg - 1, max_size=deg - 1)))
    p = [0.0, p1] + list((1 - p1) * raw / raw.sum())
    q0 = draw(st.floats(0.05, 1.0))
    qr = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=3)))
    q = [q0] + list((1 - q0) * qr / qr.sum())
    p[-1] = 1.0 - sum(p[:-1])
    q[-1] = 1.0 - sum(q[:-1])
    return validate_model(p, q)


def test_validate_quad03():
    m = validate_model([0, 0.3, 0.7], [0.5, 0.5])
    assert m.p1 == 0.3 and m.q0 == 0.5
    assert m.big_e == pytest.approx(1.7, abs=1e-15)
    assert m.q_mean == pytest.approx(0.5)
    assert m.hypothesis_flags.all_hard()
    assert m.schroder_exponent == pytest.approx(np.log(0.15) / np.log(1.7))


def test_validate_classical_case():
    m = validate_model([0, 0.5, 0.5], [1.0])
    assert m.q_mean == 0.0
    assert m.q0 == 1.0


@pytest.mark.parametrize("p, q, exc", [
    ([0, 0.4, 0.5], [0.5, 0.5], errors.NotNormalized),
    ([0, 0.5, 0.5], [0.5, 0.6], errors.NotNormalized),
    ([0, -0.1, 1.1], [0.5, 0.5], errors.NegativeCoefficient),
    ([0.1, 0.4, 0.5], [0.5, 0.5], errors.NotSchroder),
    ([0, 1.0], [0.5, 0.5], errors.NotSchroder),
    ([0, 0.0, 1.0], [0.5, 0.5], errors.NotSchroder),
    ([0, 0.5, 0.5], [0.0, 1.0], errors.NoImmigrationGap),
])
def test_validate_rejects(p, q, exc):
    with pytest.raises(exc):
        validate_model(p, q)


def test_subcritical_is_unreachable_but_flagged():
    # with p0 = 0 and p1 < 1 the mean always exceeds 1; the check still guards the flag
    assert validate_model([0, 0.99, 0.01], [1.0]).hypothesis_flags.supercritical


def test_exponent_flag_is_advisory():
    m = validate_model([0, 0.7, 0, 0, 0.3], [0.9, 0.1])
    assert not m.hypothesis_flags.exponent_below_minus_one
    assert m.schroder_exponent > -1


def test_model_json_roundtrip(tmp_path, quad03):
    path = tmp_path / "m.json"
    save_model(quad03, path)
    assert load_model(path) == quad03


def test_eval_examples(quad03):
    assert eval_pgf(quad03.p, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert eval_pgf(quad03.p, 0.0) == 0.0
    assert eval_pgf(quad03.p, 0.5) == pytest.approx(0.325, abs=1e-15)


def test_iterate_examples(quad03):
    assert iterate_p(quad03, 0.3, 0) == 0.3
    z = 0.2 + 0.4j
    assert iterate_p(quad03, z, 1) == eval_pgf(quad03.p, z)
    assert iterate_p(quad03, 0.5, 2) == pytest.approx(0.1714375, abs=1e-15)


def test_iterate_escape(quad03):
    with pytest.raises(errors.EscapeError):
        iterate_p(quad03, 1.5, 50)


@settings(max_examples=40, deadline=None)
@given(m=models(), r=st.floats(0, 0.95), a=st.floats(0, 2 * np.pi),
       s=st.integers(0, 6), t=st.integers(0, 6))
def test_iterate_semigroup(m, r, a, s, t):
    z = r * np.exp(1j * a)
    assert abs(iterate_p(m, z, s + t) - iterate_p(m, iterate_p(m, z, t), s)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(m=models(), xs=st.lists(st.floats(0, 1), min_size=2, max_size=10))
def test_eval_monotone_on_unit_interval(m, xs):
    xs = np.sort(xs)
    assert np.all(np.diff(eval_pgf(m.p, xs)) >= 0)


def test_imm_coeffs_examples(quad03):
    np.testing.assert_allclose(imm_pgf_coeffs(quad03, 0, 4), [0, 1, 0, 0, 0])
    np.testing.assert_allclose(imm_pgf_coeffs(quad03, 1, 3), [0, 0.15, 0.5, 0.35], atol=1e-15)


def _imm_by_recursion(m, t):
    """Untruncated ``P_imm,t+1(z) = P_imm,t(P(z)) Q(z)`` with numpy polynomials."""
    p, q = np.array(m.p.coeffs), np.array(m.q.coeffs)
    cur = np.array([0.0, 1.0])
    for _ in range(t):
        comp = np.array([0.0])
        for c in cur[::-1]:
            comp = npoly.polyadd(npoly.polymul(comp, p), [c])
        cur = npoly.polymul(comp, q)
    return cur


@settings(max_examples=25, deadline=None)
@given(m=models(max_deg=3), t=st.integers(0, 4))
def test_imm_coeffs_match_recursion(m, t):
    full = _imm_by_recursion(m, t)
    got = imm_pgf_coeffs(m, t, full.size - 1)
    np.testing.assert_allclose(got, full, atol=1e-13)
    assert abs(got.sum() - 1) < 1e-12


def _support_bound(m, t):
    # X_{s+1} <= deg(P) X_s + deg(Q) starting from X_0 = 1
    x = 1
    for _ in range(t):
        x = m.p.degree * x + m.q.degree
    return x


@settings(max_examples=10, deadline=None)
@given(m=models(max_deg=2), t=st.integers(1, 9))
def test_imm_coeffs_normalized(m, t):
    c = imm_pgf_coeffs(m, t, _support_bound(m, t))
    assert abs(c.sum() - 1) < 1e-10


def test_imm_coeffs_normalized_t12(quad03):
    c = imm_pgf_coeffs(quad03, 12, _support_bound(quad03, 12))
    assert abs(c.sum() - 1) < 1e-10


def test_pgf_trims_trailing_zeros():
    assert Pgf((0.5, 0.5, 0.0, 0.0)).degree == 1
