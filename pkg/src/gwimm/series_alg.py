"""Truncated power series and the Taylor-coefficient recursions.

Coefficient arrays are plain 1-d numpy arrays, ``c[k]`` being the coefficient
of ``z**k``.  Every routine works both for ``float``/``complex`` arrays and
for ``object`` arrays holding :mod:`mpmath` numbers, so the same recursions
serve the double-precision and the extended-precision code paths.

The recursions solve, order by order,

* ``G(p1 z) = P(G(z))``                 -> inverse Schroder function ``G``
* ``H(z) q0 = Q(G(z)) H(p1 z)``         -> ``H = Psi o G``
* ``A(z) = G(z) / (z H(z))``
* ``Phi(P(z)) = p1 Phi(z)``             -> Schroder (Koenigs) function
* ``Q(z) Psi(P(z)) = q0 Psi(z)``        -> immigration factor ``Psi``
* ``F(E z) = 1 - P(1 - F(z))``          -> ``F = 1 - Pi`` (Poincare function)
* ``S(E z) = S(z) Q(1 - F(z))``         -> the immigration product ``R``
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import CompositionNeedsZeroConstant, DivisionByZeroConstant

if TYPE_CHECKING:
    from .pgf import Model

DEFAULT_ORDER = 32


@dataclass(frozen=True)
class TruncatedSeries:
    """Taylor coefficients ``c_0..c_N`` of a function analytic at 0."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __call__(self, z):
        """Evaluate the truncated polynomial at ``z`` by Horner's rule."""
        return horner(self.coeffs, z)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(_fit(self.coeffs, order))

    def tolist(self) -> list:
        return [complex(c) if np.iscomplexobj(self.coeffs) else float(c)
                for c in self.coeffs]


# ---------------------------------------------------------------------------
# raw coefficient-array helpers
# ---------------------------------------------------------------------------

def horner(coeffs, z):
    acc = coeffs[-1] + 0 * z
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _zero_like(c):
    return c[:1] * 0


def _fit(c, order):
    """Truncate or zero-pad ``c`` to length ``order + 1``."""
    c = np.asarray(c)
    if c.size > order + 1:
        return c[: order + 1].copy()
    out = np.concatenate([c, np.repeat(_zero_like(c), order + 1 - c.size)])
    return out


def mul(a, b, order):
    a = np.asarray(a)[: order + 1]
    b = np.asarray(b)[: order + 1]
    return _fit(np.convolve(a, b), order)


def compose(f, g, order):
    """Coefficients of ``f(g(z))`` to ``order``; requires ``g[0] == 0``."""
    g = _fit(g, order)
    if g[0] != 0:
        raise CompositionNeedsZeroConstant("inner series must vanish at 0")
    f = np.asarray(f)
    acc = _fit(f[-1:], order)
    for c in f[-2::-1]:
        acc = mul(acc, g, order)
        acc[0] = acc[0] + c
    return acc


def reciprocal(a, order):
    a = _fit(a, order)
    if a[0] == 0:
        raise DivisionByZeroConstant("series has zero constant term")
    out = _fit(a[:1] * 0, order)
    out[0] = 1 / a[0]
    for n in range(1, order + 1):
        s = a[1 : n + 1] @ out[n - 1 :: -1][:n]
        out[n] = -s / a[0]
    return out


def reversion(a, order):
    """Compositional inverse of ``a`` with ``a[0] == 0``, ``a[1] != 0``.

    Newton-free fixed point: ``b <- b - (a(b) - z) / a1`` gains at least one
    correct coefficient per sweep, which is plenty at the orders used here.
    """
    a = _fit(a, order)
    if a[0] != 0:
        raise CompositionNeedsZeroConstant("series to invert must vanish at 0")
    if a[1] == 0:
        raise DivisionByZeroConstant("series to invert has zero linear term")
    b = _fit(a[:1] * 0, order)
    if order >= 1:
        b[1] = 1 / a[1]
    for _ in range(order):
        r = compose(a, b, order)
        r[1] = r[1] - 1
        b = b - r / a[1]
    return b


def poly_power_table(p, kmax, order):
    """Rows ``k = 0..kmax`` hold the truncated coefficients of ``p(z)**k``."""
    p = _fit(p, order)
    rows = [_fit(p[:1] * 0 + 1, 0)]
    rows[0] = _fit(rows[0], order)
    for _ in range(kmax):
        rows.append(mul(rows[-1], p, order))
    return np.array(rows)


# ---------------------------------------------------------------------------
# public series operations
# ---------------------------------------------------------------------------

def _as_series(x):
    return x if isinstance(x, TruncatedSeries) else TruncatedSeries(np.asarray(x))


def series_mul(a, b, order: int | None = None) -> TruncatedSeries:
    a, b = _as_series(a), _as_series(b)
    order = min(a.order, b.order) if order is None else order
    return TruncatedSeries(mul(a.coeffs, b.coeffs, order))


def series_compose(a, b, order: int | None = None) -> TruncatedSeries:
    """``a(b(z))``; raises :class:`CompositionNeedsZeroConstant` unless ``b(0) == 0``."""
    a, b = _as_series(a), _as_series(b)
    order = min(a.order, b.order) if order is None else order
    return TruncatedSeries(compose(a.coeffs, b.coeffs, order))


def series_reciprocal(a, order: int | None = None) -> TruncatedSeries:
    a = _as_series(a)
    order = a.order if order is None else order
    return TruncatedSeries(reciprocal(a.coeffs, order))


def series_reversion(a, order: int | None = None) -> TruncatedSeries:
    a = _as_series(a)
    order = a.order if order is None else order
    return TruncatedSeries(reversion(a.coeffs, order))


# ---------------------------------------------------------------------------
# recursions driven by a model
# ---------------------------------------------------------------------------

def _model_coeffs(model: "Model", dps):
    if dps is None:
        return np.array(model.p.coeffs, dtype=float), np.array(model.q.coeffs, dtype=float)
    import mpmath
    with mpmath.workdps(dps):
        p = np.array([mpmath.mpf(c) for c in model.p.coeffs], dtype=object)
        q = np.array([mpmath.mpf(c) for c in model.q.coeffs], dtype=object)
        # binary inputs such as 0.3 + 0.7 only sum to 1 in double; restore f(1) = 1 exactly
        p = p / p.sum()
        q = q / q.sum()
    return p, q


def _maybe_workdps(dps):
    if dps is None:
        from contextlib import nullcontext
        return nullcontext()
    import mpmath
    return mpmath.workdps(dps)


def phi_inv_coeffs(model: "Model", n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients ``g_n`` of the inverse Schroder function.

    Matching ``[z^n]`` in ``G(p1 z) = P(G(z))`` gives
    ``g_n (p1**n - p1) = [z^n] sum_{k>=2} p_k G(z)**k`` where the right side
    only involves ``g_1..g_{n-1}``.
    """
    with _maybe_workdps(dps):
        p, _ = _model_coeffs(model, dps)
        p1 = p[1]
        g = _fit(p[:1] * 0, n_max)
        g[1] = p1 / p1
        for n in range(2, n_max + 1):
            # g[n] is still zero here, so powers k >= 2 see only lower coefficients
            rhs = 0 * p1
            gk = _fit(g[:2] * 0, n)
            gk[0] = p1 / p1
            for k in range(1, p.size):
                gk = mul(gk, g[: n + 1], n)
                if k >= 2:
                    rhs = rhs + p[k] * gk[n]
            g[n] = rhs / (p1 ** n - p1)
    return TruncatedSeries(g)


def psi_of_phi_inv_coeffs(model: "Model", g: TruncatedSeries | None = None,
                          n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients ``h_n`` of ``Psi(Phi^{-1}(z))``.

    With ``c_j = [z^j] Q(G(z))``:
    ``h_n q0 (1 - p1**n) = sum_{j=1..n} c_j h_{n-j} p1**(n-j)``.
    """
    if g is None:
        g = phi_inv_coeffs(model, n_max, dps=dps)
    with _maybe_workdps(dps):
        p, q = _model_coeffs(model, dps)
        p1, q0 = p[1], q[0]
        c = compose(q, g.coeffs[: n_max + 1], n_max)
        h = _fit(p[:1] * 0, n_max)
        h[0] = p1 / p1
        for n in range(1, n_max + 1):
            s = 0 * p1
            for j in range(1, n + 1):
                s = s + c[j] * h[n - j] * p1 ** (n - j)
            h[n] = s / (q0 * (1 - p1 ** n))
    return TruncatedSeries(h)


def a_coeffs(model: "Model", n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients of ``A(z) = G(z) / (z H(z))``; ``A_0 = 1``."""
    g = phi_inv_coeffs(model, n_max + 1, dps=dps)
    h = psi_of_phi_inv_coeffs(model, g, n_max, dps=dps)
    with _maybe_workdps(dps):
        g_over_z = g.coeffs[1 : n_max + 2]
        a = mul(g_over_z, reciprocal(h.coeffs, n_max), n_max)
    return TruncatedSeries(a)


def phi_coeffs(model: "Model", n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients of the Schroder function ``Phi`` directly from ``Phi(P) = p1 Phi``.

    ``phi_n (p1 - p1**n) = sum_{k<n} phi_k [z^n] P(z)**k``.
    """
    with _maybe_workdps(dps):
        p, _ = _model_coeffs(model, dps)
        p1 = p[1]
        powers = poly_power_table(p, n_max, n_max)
        phi = _fit(p[:1] * 0, n_max)
        phi[1] = p1 / p1
        for n in range(2, n_max + 1):
            s = phi[1:n] @ powers[1:n, n]
            phi[n] = s / (p1 - p1 ** n)
    return TruncatedSeries(phi)


def psi_coeffs(model: "Model", n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients of ``Psi`` from ``Q(z) Psi(P(z)) = q0 Psi(z)``."""
    with _maybe_workdps(dps):
        p, q = _model_coeffs(model, dps)
        p1, q0 = p[1], q[0]
        powers = poly_power_table(p, n_max, n_max)
        psi = _fit(p[:1] * 0, n_max)
        psi[0] = p1 / p1
        # composed[m] = [z^m] Psi(P(z)) restricted to the known psi_0..psi_{n-1}
        for n in range(1, n_max + 1):
            s = 0 * p1
            for j in range(0, min(n, q.size - 1) + 1):
                m = n - j
                known = psi[:m] @ powers[:m, m] if m > 0 else 0 * p1
                if j == 0:
                    s = s + q0 * known
                else:
                    s = s + q[j] * (known + psi[m] * powers[m, m])
            psi[n] = s / (q0 * (1 - p1 ** n))
    return TruncatedSeries(psi)


def poincare_coeffs(model: "Model", n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients of ``F(z) = 1 - Pi(z)``.

    ``F`` solves ``F(E z) = Pt(F(z))`` with ``Pt(u) = 1 - P(1 - u)`` and
    ``F(z) = z + O(z^2)``.
    """
    with _maybe_workdps(dps):
        p, _ = _model_coeffs(model, dps)
        pt = shifted_coeffs(p)
        big_e = pt[1]
        f = _fit(p[:1] * 0, n_max)
        f[1] = big_e / big_e
        for n in range(2, n_max + 1):
            # [z^n] sum_{k>=2} pt_k F**k uses only f_1..f_{n-1}
            rhs = 0 * big_e
            fk = _fit(f[:1] * 0 + 1, n)
            for k in range(1, pt.size):
                fk = mul(fk, f[: n + 1], n)
                if k >= 2:
                    rhs = rhs + pt[k] * fk[n]
            f[n] = rhs / (big_e ** n - big_e)
    return TruncatedSeries(f)


def r_coeffs(model: "Model", f: TruncatedSeries | None = None,
             n_max: int = DEFAULT_ORDER, dps=None) -> TruncatedSeries:
    """Taylor coefficients of ``R`` from ``R(E z) = R(z) Q(Pi(z))``, ``R(0) = 1``."""
    if f is None:
        f = poincare_coeffs(model, n_max, dps=dps)
    with _maybe_workdps(dps):
        p, q = _model_coeffs(model, dps)
        big_e = shifted_coeffs(p)[1]
        c = compose(shifted_coeffs(q), f.coeffs[: n_max + 1], n_max)
        c = -c
        c[0] = c[0] + 1  # Q(Pi(z)) = 1 - Qt(F(z))
        r = _fit(p[:1] * 0, n_max)
        r[0] = big_e / big_e
        for n in range(1, n_max + 1):
            s = r[:n] @ c[n:0:-1]
            r[n] = s / (big_e ** n - 1)
    return TruncatedSeries(r)


def shifted_coeffs(c):
    """Coefficients of ``u -> 1 - f(1 - u)`` for a polynomial ``f`` with ``f(1) = 1``.

    The constant term is dropped (it is ``1 - f(1) == 0`` up to rounding).
    """
    c = np.asarray(c)
    deg = c.size - 1
    out = _fit(c[:1] * 0, deg)
    # f(1 - u) = sum_k c_k sum_j binom(k, j) (-u)**j
    from math import comb
    for k in range(deg + 1):
        for j in range(k + 1):
            out[j] = out[j] + c[k] * (comb(k, j) * (-1) ** j)
    out = -out
    out[0] = out[0] * 0
    return out


def phi_taylor_by_reversion(model: "Model", n_max: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``Phi`` as the compositional inverse of :func:`phi_inv_coeffs`."""
    return series_reversion(phi_inv_coeffs(model, n_max), n_max)


def phi_psi_product_coeffs(model: "Model", n_max: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Taylor coefficients of ``Phi(z) Psi(z)`` built from ``G`` and ``H`` alone.

    ``Phi`` is the reversion of ``G``; ``Psi = H o Phi`` because ``H = Psi o G``.
    """
    g = phi_inv_coeffs(model, n_max)
    h = psi_of_phi_inv_coeffs(model, g, n_max)
    phi = series_reversion(g, n_max)
    psi = series_compose(h, phi, n_max)
    return series_mul(phi, psi, n_max)
