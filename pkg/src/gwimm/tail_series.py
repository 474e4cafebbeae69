"""Left-tail expansion of the limit density and its quick approximation.

The density is a double sum over ``n >= 0`` (powers of ``x``) and
``m in Z`` (Fourier modes of one-periodic modulations)::

    p(x) = sum_n A_n x**e_n B_n(-log_E x),    e_n = -log_E(p1**(n+1) q0) - 1
    B_n(z) = sum_m theta[n, m] exp(2 pi i m z) / Gamma(s_nm)
    s_nm = -(ln(p1**(n+1) q0) + 2 pi i m) / ln E
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisWarning, NonPositiveX
from .limits import LimitConfig, DEFAULT_CONFIG
from .periodic import FourierTable, fourier_table
from .pgf import Model
from .series_alg import TruncatedSeries, a_coeffs

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _log_gamma_right(s):
    """``log Gamma(s)`` (some branch) for ``Re s >= 0.5``."""
    z = s - 1
    x = np.full_like(z, _LANCZOS_C[0])
    for i in range(1, _LANCZOS_C.size):
        x = x + _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def recip_gamma(s):
    """``1/Gamma(s)`` for complex ``s``; entire, exactly 0 at ``0, -1, -2, ...``.

    Lanczos in log form, with the reflection formula for ``Re s < 0.5``.
    """
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.empty_like(s)
    right = s.real >= 0.5
    out[right] = np.exp(-_log_gamma_right(s[right]))
    left = ~right
    if left.any():
        sl = s[left]
        # reduce by the nearest integer so sin(pi s) keeps full relative accuracy near poles
        k = np.round(sl.real)
        sign = np.where(k % 2 == 0, 1.0, -1.0)
        val = sign * np.sin(np.pi * (sl - k)) / np.pi * np.exp(_log_gamma_right(1 - sl))
        out[left] = val
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class SeriesTerm:
    n: int
    m: int
    exponent: complex  # power of x
    weight: complex    # A_n theta_nm / Gamma(s_nm)


def gamma_arguments(model: Model, n_max: int, m_max: int) -> np.ndarray:
    """``s[n, m + m_max] = -(ln(p1**(n+1) q0) + 2 pi i m) / ln E``."""
    n = np.arange(n_max + 1)[:, None]
    m = np.arange(-m_max, m_max + 1)[None, :]
    lam = (n + 1) * math.log(model.p1) + math.log(model.q0)
    return -(lam + 2j * np.pi * m) / model.log_e


def x_exponents(model: Model, n_max: int) -> np.ndarray:
    """``e_n = -log_E(p1**(n+1) q0) - 1`` for ``n = 0..n_max``."""
    return np.array([model.tail_exponent(n) for n in range(n_max + 1)])


def weights(model: Model, a: TruncatedSeries, table: FourierTable, n_terms: int | None = None):
    """Matrix ``A_n theta_nm / Gamma(s_nm)`` of shape ``(n_terms, 2 m_max + 1)``."""
    n_terms = table.n_max + 1 if n_terms is None else n_terms
    s = gamma_arguments(model, n_terms - 1, table.m_max)
    an = np.asarray(a.coeffs[:n_terms], dtype=float)[:, None]
    return an * table.theta[:n_terms] * recip_gamma(s)


def series_terms(model: Model, a: TruncatedSeries, table: FourierTable,
                 n_terms: int | None = None) -> list[SeriesTerm]:
    w = weights(model, a, table, n_terms)
    s = gamma_arguments(model, w.shape[0] - 1, table.m_max)
    return [SeriesTerm(n=n, m=int(m), exponent=complex(s[n, j] - 1), weight=complex(w[n, j]))
            for n in range(w.shape[0]) for j, m in enumerate(table.ms)]


def b_n_eval(table: FourierTable, model: Model, n: int, z, m_max: int | None = None,
             return_imag: bool = False):
    """One-periodic modulation ``B_n(z)`` for real ``z``, using ``|m| <= m_max``."""
    if n > table.n_max:
        raise ValueError(f"n={n} exceeds the table's n_max={table.n_max}")
    m_max = table.m_max if m_max is None else min(m_max, table.m_max)
    sl = slice(table.m_max - m_max, table.m_max + m_max + 1)
    ms = table.ms[sl]
    s = gamma_arguments(model, n, table.m_max)[n, sl]
    coef = table.theta[n, sl] * recip_gamma(s)
    z = np.asarray(z, dtype=float)
    val = np.exp(2j * np.pi * np.multiply.outer(z, ms)) @ coef
    if return_imag:
        return val.real, val.imag
    return val.real


def _check_hypothesis(model: Model):
    if not model.hypothesis_flags.exponent_below_minus_one:
        warnings.warn(
            f"log_E(p1 q0) = {model.schroder_exponent:.4f} >= -1: the leading terms of the "
            "left-tail series are computed without the absolute-convergence guarantee",
            HypothesisWarning, stacklevel=3)


def _positive_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise NonPositiveX("the left-tail series needs x > 0")
    return x


def density_series_complex(model: Model, a: TruncatedSeries, table: FourierTable, x,
                           n_terms: int = 11, m_max: int | None = None):
    """Complex partial sums; the imaginary part is pure rounding residue.

    Returns ``(values, last_term_magnitude)``.
    """
    _check_hypothesis(model)
    if n_terms > min(a.order, table.n_max) + 1:
        raise ValueError("n_terms exceeds the available coefficients")
    x = _positive_x(x)
    m_max = table.m_max if m_max is None else min(m_max, table.m_max)
    w = weights(model, a, table, n_terms)[:, table.m_max - m_max: table.m_max + m_max + 1]
    ms = np.arange(-m_max, m_max + 1)
    e = x_exponents(model, n_terms - 1)
    lx = np.log(x)
    # B_n(-log_E x): phase exp(-2 pi i m log_E x)
    phase = np.exp(-2j * np.pi * np.multiply.outer(lx / model.log_e, ms))
    b = phase @ w.T                              # (..., n_terms)
    terms = np.exp(np.multiply.outer(lx, e)) * b
    return terms.sum(axis=-1), np.abs(terms[..., -1])


def density_series(model: Model, a: TruncatedSeries, table: FourierTable, x,
                   n_terms: int = 11, m_max: int | None = None):
    """Partial sum over ``n < n_terms`` of the complete left-tail series.

    Returns ``(density, |last term|)``; both follow the shape of ``x``.
    """
    val, last = density_series_complex(model, a, table, x, n_terms, m_max)
    if np.ndim(x) == 0:
        return float(val.real), float(last)
    return val.real, last


def quick_coefficients(model: Model, a: TruncatedSeries, table: FourierTable, m_terms: int = 10):
    """``c_n = (K^{n+1} L)(0) A_n / Gamma(-ln(p1**(n+1) q0) / ln E)``, ``n = 0..m_terms``."""
    if m_terms > table.n_max or m_terms > a.order:
        raise ValueError("m_terms exceeds the available coefficients")
    s = gamma_arguments(model, m_terms, 0)[:, 0]
    an = np.asarray(a.coeffs[: m_terms + 1], dtype=float)
    return (table.values_at_zero[: m_terms + 1] * an * recip_gamma(s)).real


def density_quick(model: Model, a: TruncatedSeries, table: FourierTable, x, m_terms: int = 10):
    """Quick approximation: the series with the periodic modulations frozen at 0."""
    _check_hypothesis(model)
    x = _positive_x(x)
    c = quick_coefficients(model, a, table, m_terms)
    e = x_exponents(model, m_terms)
    lx = np.log(x)
    out = np.zeros_like(lx)
    for cn, en in zip(c, e):
        out += cn * np.exp(en * lx)
    return float(out) if out.ndim == 0 else out


def prepare(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, n_max: int = 16, m_max: int = 8,
            grid_size: int = 256, dps="auto"):
    """Coefficients ``A_n`` and the Fourier table, with the module defaults."""
    a = a_coeffs(model, max(n_max, 32))
    table = fourier_table(model, cfg, n_max=n_max, m_max=m_max, grid_size=grid_size, dps=dps)
    return a, table


def fit_term_bound(model: Model, a: TruncatedSeries, table: FourierTable, n_max: int = 12,
                   m_max: int = 8, floor: float = 1e-3):
    """Fit ``|w_nm| <= C exp(-alpha n ln(n+|m|) - beta |m|)`` as a tight envelope.

    Solves the linear program in ``(ln C, alpha, beta)`` that minimizes the
    summed log-gap subject to every term lying under the envelope and
    ``alpha, beta >= floor``.  Returns ``(C, alpha, beta, violations)``.
    """
    from scipy.optimize import linprog

    w = np.abs(weights(model, a, table, n_max + 1))
    ms = table.ms
    keep = np.abs(ms) <= m_max
    w = w[:, keep]
    ms = ms[keep]
    n = np.arange(n_max + 1)[:, None] * np.ones_like(ms)[None, :]
    am = np.abs(ms)[None, :] * np.ones((n_max + 1, 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        a_feat = np.where(n > 0, n * np.log(n + am), 0.0)
    logw = np.log(w)
    feats = np.stack([np.ones_like(a_feat), -a_feat, -am], axis=-1).reshape(-1, 3)
    y = logw.reshape(-1)
    ok = np.isfinite(y)
    feats, y = feats[ok], y[ok]
    res = linprog(c=feats.sum(axis=0), A_ub=-feats, b_ub=-y,
                  bounds=[(None, None), (floor, None), (floor, None)], method="highs")
    if not res.success:
        return None
    log_c, alpha, beta = res.x
    envelope = feats @ res.x
    violations = int(np.sum(y > envelope + 1e-9 * np.maximum(1.0, np.abs(envelope))))
    return math.exp(log_c), float(alpha), float(beta), violations
