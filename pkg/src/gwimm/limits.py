"""Limit functions of the branching process evaluated at complex points.

``Pi``      Poincare-type function, ``P(Pi(z)) = Pi(E z)``
``R``       immigration product, ``R(E z) = R(z) Q(Pi(z))``
``Pi_imm``  ``Pi * R``, the Laplace transform of the limit law
``Phi``     Schroder function, ``Phi(P(w)) = p1 Phi(w)``
``Psi``     immigration factor, ``Q(w) Psi(P(w)) = q0 Psi(w)``

``Pi`` and ``R`` are entire, so they are evaluated by scaling the argument
into a small disc, summing their Taylor series there, and climbing back with
the functional equations (``s`` applications of ``P``).  All iteration is
carried out on ``u = 1 - Pi`` so that nothing is lost to cancellation near
``Pi = 1``.  ``Phi`` and ``Psi`` are handled the other way round: ``P`` is
iterated until the orbit enters a small disc about the attracting point 0
and the Taylor series finishes the job.

Every function accepts scalars or numpy arrays.  With ``LimitConfig.dps``
set, arithmetic is done in :mod:`mpmath` at that many decimal digits and
values come back as ``mpc`` objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import series_alg
from .errors import Diverged, NotInBasin
from .pgf import Model


@dataclass(frozen=True)
class LimitConfig:
    """Knobs for the limit-function evaluators.

    ``t_iter`` is the composition depth of the literal ``P_t(1 - z/E^t)``
    formula and the iteration cap for basin iterations; ``prod_terms`` caps
    the factor count of the literal products; ``conv_tol`` is the target
    truncation error of the Taylor pieces.  ``dps=None`` means IEEE double.
    """

    t_iter: int = 70
    prod_terms: int = 80
    conv_tol: float = 1e-16
    escape_radius: float = 1e6
    series_order: int = 40
    dps: int | None = None

    def __post_init__(self):
        if self.t_iter < 1 or self.prod_terms < 1:
            raise ValueError("t_iter and prod_terms must be >= 1")
        if not self.conv_tol > 0:
            raise ValueError("conv_tol must be positive")
        if self.series_order < 4:
            raise ValueError("series_order must be >= 4")

    @property
    def target_error(self) -> float:
        if self.dps is None:
            return self.conv_tol
        return min(self.conv_tol, 10.0 ** (-self.dps - 2))


DEFAULT_CONFIG = LimitConfig()


# ---------------------------------------------------------------------------
# working-precision plumbing
# ---------------------------------------------------------------------------

def _ctx(dps):
    return series_alg._maybe_workdps(dps)


def _to_working(z, dps):
    arr = np.asarray(z)
    if dps is None:
        return arr.astype(complex)
    import mpmath
    flat = [mpmath.mpc(x) if not isinstance(x, (mpmath.mpf, mpmath.mpc)) else mpmath.mpc(x)
            for x in arr.ravel().tolist()]
    return np.array(flat, dtype=object).reshape(arr.shape)


def _out(arr, scalar):
    return arr.item() if scalar and isinstance(arr, np.ndarray) else arr


def _maxabs(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def _start_radius(coeffs, order, eps, cap=0.5) -> float:
    """Largest disc radius where dropping terms beyond ``order`` costs ``~eps``."""
    c = np.abs(np.asarray(coeffs[1:], dtype=complex if coeffs.dtype != object else object))
    c = np.array([float(x) for x in c])
    k = np.arange(1, c.size + 1)
    tail = slice(c.size // 2, None)
    nz = c[tail] > 0
    growth = float(np.max(c[tail][nz] ** (1.0 / k[tail][nz]))) if np.any(nz) else 0.0
    if growth == 0.0:
        return cap
    return min(cap, eps ** (1.0 / (order + 1)) / growth)


class _Kernel:
    """Series data and shifted polynomials for one (model, config) pair."""

    def __init__(self, model: Model, cfg: LimitConfig):
        self.model, self.cfg = model, cfg
        n, dps = cfg.series_order, cfg.dps
        self.f = series_alg.poincare_coeffs(model, n, dps=dps).coeffs
        self.r = series_alg.r_coeffs(model, None, n, dps=dps).coeffs
        self.phi = series_alg.phi_coeffs(model, n, dps=dps).coeffs
        self.psi = series_alg.psi_coeffs(model, n, dps=dps).coeffs
        with _ctx(dps):
            p, q = series_alg._model_coeffs(model, dps)
            self.p, self.q = p, q
            self.pt = series_alg.shifted_coeffs(p)
            self.qt = series_alg.shifted_coeffs(q)
            self.big_e = self.pt[1]
            self.p1, self.q0 = p[1], q[0]
        eps = cfg.target_error
        self.rho_entire = min(_start_radius(self.f, n, eps, cap=1.0),
                              _start_radius(self.r, n, eps, cap=1.0))
        self.rho_basin = min(_start_radius(self.phi, n, eps, cap=0.25),
                             _start_radius(self.psi, n, eps, cap=0.25))

    # -- entire functions ---------------------------------------------------
    def reduction_depth(self, z) -> int:
        m = _maxabs(z)
        if m <= self.rho_entire:
            return 0
        return max(0, math.ceil(math.log(m / self.rho_entire) / self.model.log_e))

    def climb(self, z, with_r: bool):
        """Return ``(u, r)`` with ``u = 1 - Pi(z)`` and ``r = R(z)`` (or None)."""
        s = self.reduction_depth(z)
        h = series_alg.horner
        w = z / self.big_e ** s
        u = h(self.f, w)
        r = h(self.r, w) if with_r else None
        radius = self.cfg.escape_radius
        for _ in range(s):
            if with_r:
                r = r * (1 - h(self.qt, u))
            u = h(self.pt, u)
            if _maxabs(u) > radius:
                raise Diverged("Poincare iteration escaped; argument outside the admissible sector")
        return u, r

    # -- basin functions ----------------------------------------------------
    def descend(self, w, with_psi: bool):
        """Iterate ``P`` until the orbit is inside ``rho_basin``.

        Returns ``(t, v, psi_prefix)`` with ``v = P_t(w)`` and the partial
        product ``prod_{j<t} Q(P_j(w)) / q0``.
        """
        h = series_alg.horner
        v = w
        pref = (w * 0 + 1) if with_psi else None
        cap = max(self.cfg.t_iter, 4 * self.cfg.prod_terms)
        for t in range(cap + 1):
            if _maxabs(v) <= self.rho_basin:
                return t, v, pref
            if with_psi:
                pref = pref * (h(self.q, v) / self.q0)
            v = h(self.p, v)
            if _maxabs(v) > self.cfg.escape_radius:
                break
        raise NotInBasin("iterates of P did not contract to 0")


@lru_cache(maxsize=64)
def kernel(model: Model, cfg: LimitConfig = DEFAULT_CONFIG) -> _Kernel:
    return _Kernel(model, cfg)


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def pi_eval(model: Model, cfg: LimitConfig, z):
    """``Pi(z) = lim P_t(1 - z/E^t)``."""
    k = kernel(model, cfg)
    scalar = np.ndim(z) == 0
    with _ctx(cfg.dps):
        zw = _to_working(z, cfg.dps)
        u, _ = k.climb(zw, with_r=False)
        return _out(1 - u, scalar)


def one_minus_pi_eval(model: Model, cfg: LimitConfig, z):
    """``1 - Pi(z)`` without the cancellation of forming ``Pi`` first."""
    k = kernel(model, cfg)
    scalar = np.ndim(z) == 0
    with _ctx(cfg.dps):
        u, _ = k.climb(_to_working(z, cfg.dps), with_r=False)
        return _out(u, scalar)


def r_eval(model: Model, cfg: LimitConfig, z):
    """``R(z) = prod_{t>=1} Q(Pi(z/E^t))``."""
    k = kernel(model, cfg)
    scalar = np.ndim(z) == 0
    with _ctx(cfg.dps):
        _, r = k.climb(_to_working(z, cfg.dps), with_r=True)
        return _out(r, scalar)


def pi_and_r(model: Model, cfg: LimitConfig, z):
    """``(Pi(z), R(z))`` from one shared climb."""
    k = kernel(model, cfg)
    scalar = np.ndim(z) == 0
    with _ctx(cfg.dps):
        u, r = k.climb(_to_working(z, cfg.dps), with_r=True)
        return _out(1 - u, scalar), _out(r, scalar)


def pi_imm_eval(model: Model, cfg: LimitConfig, z):
    """``Pi_imm(z) = Pi(z) R(z)``: the Laplace transform of the limit law."""
    k = kernel(model, cfg)
    scalar = np.ndim(z) == 0
    with _ctx(cfg.dps):
        u, r = k.climb(_to_working(z, cfg.dps), with_r=True)
        return _out((1 - u) * r, scalar)


def phi_eval(model: Model, cfg: LimitConfig, w):
    """``Phi(w) = lim p1^{-t} P_t(w)`` for ``w`` in the basin of 0."""
    k = kernel(model, cfg)
    scalar = np.ndim(w) == 0
    with _ctx(cfg.dps):
        t, v, _ = k.descend(_to_working(w, cfg.dps), with_psi=False)
        return _out(series_alg.horner(k.phi, v) / k.p1 ** t, scalar)


def psi_eval(model: Model, cfg: LimitConfig, w):
    """``Psi(w) = prod_{t>=0} Q(P_t(w)) / q0`` for ``w`` in the basin of 0."""
    k = kernel(model, cfg)
    scalar = np.ndim(w) == 0
    with _ctx(cfg.dps):
        _, v, pref = k.descend(_to_working(w, cfg.dps), with_psi=True)
        return _out(pref * series_alg.horner(k.psi, v), scalar)


def phi_psi_eval(model: Model, cfg: LimitConfig, w):
    """``(Phi(w), Psi(w))`` from one shared orbit."""
    k = kernel(model, cfg)
    scalar = np.ndim(w) == 0
    with _ctx(cfg.dps):
        t, v, pref = k.descend(_to_working(w, cfg.dps), with_psi=True)
        h = series_alg.horner
        return _out(h(k.phi, v) / k.p1 ** t, scalar), _out(pref * h(k.psi, v), scalar)


# ---------------------------------------------------------------------------
# literal finite-depth formulas (independent cross-checks)
# ---------------------------------------------------------------------------

def pi_imm_direct(model: Model, z, t: int = 70):
    """``P_imm,t(1 - z/E^t)`` at finite depth ``t``, in double precision.

    The orbit of ``1 - z/E^t`` is tracked through ``u = 1 - P_j``.  Returns
    ``(Pi_t, Pi_imm_t)``.
    """
    pt = series_alg.shifted_coeffs(model.p.array)
    qt = series_alg.shifted_coeffs(model.q.array)
    h = series_alg.horner
    u = np.asarray(z, dtype=complex) / model.big_e ** t
    acc = np.ones_like(u)
    for _ in range(t):
        acc = acc * (1 - h(qt, u))
        u = h(pt, u)
    return 1 - u, (1 - u) * acc


def phi_direct(model: Model, w, t: int = 70):
    """``p1^{-t} P_t(w)`` at finite depth."""
    v = np.asarray(w, dtype=complex)
    for _ in range(t):
        v = model.p(v)
    return v / model.p1 ** t


def psi_direct(model: Model, w, t: int = 80):
    """``prod_{j<t} Q(P_j(w)) / q0`` at finite depth."""
    v = np.asarray(w, dtype=complex)
    acc = np.ones_like(v)
    for _ in range(t):
        acc = acc * model.q(v) / model.q0
        v = model.p(v)
    return acc
