"""One-periodic functions K and L, their Fourier tables, and the sector probe.

``K(x) = p1^{-x} Phi(Pi(E^x))`` and ``L(x) = q0^{-x} R(E^x) Psi(Pi(E^x))``.

The Fourier coefficients ``theta[n, m]`` of ``K^{n+1} L`` fall off roughly
like ``exp(-pi * angle * |m| / ln E)`` while the Gamma weights they are
later multiplied by grow like ``exp(pi**2 |m| / ln E)``.  The table is
therefore sampled in extended precision, with enough digits that rounding
noise survives that amplification, and stored afterwards as complex doubles
(relative accuracy is what matters downstream).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import limits
from .limits import LimitConfig, DEFAULT_CONFIG
from .pgf import Model


def _real_working(x, dps):
    arr = np.asarray(x, dtype=float) if dps is None else np.asarray(x)
    if dps is None:
        return arr
    import mpmath
    return np.array([mpmath.mpf(v) for v in arr.ravel().tolist()], dtype=object).reshape(arr.shape)


def _real(v, dps):
    if dps is None:
        return np.real(v)
    return np.vectorize(lambda c: c.real, otypes=[object])(v) if isinstance(v, np.ndarray) else v.real


def kl_eval(model: Model, cfg: LimitConfig, x):
    """``(K(x), L(x))`` sharing one evaluation of ``Pi(E^x)``."""
    scalar = np.ndim(x) == 0
    k = limits.kernel(model, cfg)
    with limits._ctx(cfg.dps):
        xw = _real_working(x, cfg.dps)
        ex = k.big_e ** xw
        pi, r = limits.pi_and_r(model, cfg, ex)
        pi = _real(pi, cfg.dps)
        phi, psi = limits.phi_psi_eval(model, cfg, pi)
        kv = _real(phi, cfg.dps) * k.p1 ** (-xw)
        lv = _real(r, cfg.dps) * _real(psi, cfg.dps) * k.q0 ** (-xw)
    if scalar:
        return limits._out(kv, True), limits._out(lv, True)
    return kv, lv


def k_eval(model: Model, cfg: LimitConfig, x):
    """Karlin-McGregor function on the real axis (positive and one-periodic)."""
    return kl_eval(model, cfg, x)[0]


def l_eval(model: Model, cfg: LimitConfig, x):
    """Immigration analogue of the Karlin-McGregor function."""
    return kl_eval(model, cfg, x)[1]


@dataclass(frozen=True)
class FourierTable:
    """``theta[n, m + m_max]`` = m-th Fourier coefficient of ``K^{n+1} L``."""

    theta: np.ndarray
    n_max: int
    m_max: int
    grid_size: int
    values_at_zero: np.ndarray  # (K^{n+1} L)(0), n = 0..n_max
    k0: float
    l0: float
    dps: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def ms(self) -> np.ndarray:
        return np.arange(-self.m_max, self.m_max + 1)

    def coeff(self, n: int, m: int) -> complex:
        return complex(self.theta[n, m + self.m_max])

    def row_sums(self) -> np.ndarray:
        return self.theta.sum(axis=1)

    def records(self) -> list[dict]:
        return [{"n": int(n), "m": int(m), "re": float(self.theta[n, m + self.m_max].real),
                 "im": float(self.theta[n, m + self.m_max].imag)}
                for n in range(self.n_max + 1) for m in self.ms]


def auto_dps(model: Model, m_max: int, guard: int = 20) -> int:
    """Digits that keep every ``theta[n, m]``, ``|m| <= m_max``, above the rounding floor.

    The coefficients fall off by ``pi * angle / ln E`` nats per mode with an
    opening ``angle`` of at most ``2 pi``, so this also covers the growth of
    the Gamma weights, which corresponds to ``angle = pi``.
    """
    return int(math.ceil(2 * math.pi ** 2 * m_max / (model.log_e * math.log(10)))) + guard


def fourier_table(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, n_max: int = 16,
                  m_max: int = 8, grid_size: int = 256, dps="auto") -> FourierTable:
    """Fourier coefficients of ``K^{n+1} L`` by the trapezoid/DFT rule on one period.

    ``dps="auto"`` picks the working precision from :func:`auto_dps`;
    ``dps=None`` forces double precision (coefficients with large ``|m|``
    then drown in rounding noise).
    """
    if grid_size < 4 * m_max:
        raise ValueError("grid_size must be at least 4 * m_max")
    if dps == "auto":
        dps = auto_dps(model, m_max)
    work = replace(cfg, dps=dps)
    xs_float = np.arange(grid_size) / grid_size
    with limits._ctx(dps):
        if dps is None:
            xs = xs_float
        else:
            import mpmath
            xs = np.array([mpmath.mpf(j) / grid_size for j in range(grid_size)], dtype=object)
        kv, lv = kl_eval(model, work, xs)
        ms = np.arange(-m_max, m_max + 1)
        if dps is None:
            basis = np.exp(-2j * np.pi * np.outer(xs, ms))
        else:
            import mpmath
            basis = np.array([[mpmath.expjpi(-2 * mpmath.mpf(int(m)) * x) for m in ms] for x in xs],
                             dtype=object)
        theta = np.empty((n_max + 1, ms.size), dtype=complex)
        at_zero = np.empty(n_max + 1)
        f = lv * kv
        for n in range(n_max + 1):
            row = (f @ basis) / grid_size
            theta[n] = np.array([complex(v) for v in row])
            at_zero[n] = float(f[0])
            f = f * kv
        k0, l0 = float(kv[0]), float(lv[0])
    return FourierTable(theta=theta, n_max=n_max, m_max=m_max, grid_size=grid_size,
                        values_at_zero=at_zero, k0=k0, l0=l0, dps=dps,
                        meta={"p": list(model.p.coeffs), "q": list(model.q.coeffs)})


# ---------------------------------------------------------------------------
# critical-angle probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalAngleReport:
    """Outcome of the escape-time probe of sectors ``1 - r e^{+-i angle/2}``.

    ``theta_star_lower`` is the largest probed opening angle such that every
    probe at that or any smaller angle was decided inside.
    """

    theta_star_lower: float
    hypothesis_pi_ok: bool
    resolution: float
    angles: np.ndarray = field(compare=False)
    radii: np.ndarray = field(compare=False)
    status: np.ndarray = field(compare=False)  # +1 inside, -1 escaped, 0 inconclusive

    @property
    def inconclusive(self) -> list[tuple[float, float]]:
        i, j = np.nonzero(self.status == 0)
        return [(float(self.angles[a]), float(self.radii[b])) for a, b in zip(i, j)]


def default_radii(model: Model, r_max: float = 1e-3, periods: int = 4, per_period: int = 4):
    """Radii spread over several multiplicative periods ``[r, E r)`` below ``r_max``.

    The critical angle is a small-radius limit; from about ``r_max = 1e-2``
    down the measured opening no longer moves for the quadratic family.
    """
    k = np.arange(periods * per_period)
    return r_max * model.big_e ** (-k / per_period)


def julia_sector_probe(model: Model, angles=None, radii=None, max_iter: int = 5000,
                       escape_radius: float = 1e6, resolution: float = 0.01) -> CriticalAngleReport:
    """Decide membership of ``1 - r e^{i angle/2}`` in the filled Julia set.

    ``angle`` is the full opening of the sector at 1, so the unit disc alone
    guarantees membership for every angle below pi.  Real coefficients make
    the conjugate point redundant.  A probe is inside once an iterate drops
    below modulus 0.5, outside once it exceeds ``escape_radius``, and
    inconclusive otherwise; inconclusive probes do not count as inside.
    """
    if angles is None:
        angles = np.arange(resolution, 2 * math.pi, resolution)
    if radii is None:
        radii = default_radii(model)
    angles = np.asarray(angles, dtype=float)
    radii = np.asarray(radii, dtype=float)
    z = 1 - np.outer(np.exp(0.5j * angles), radii)
    status = np.zeros(z.shape, dtype=int)
    for _ in range(max_iter):
        live = status == 0
        if not live.any():
            break
        z[live] = model.p(z[live])
        a = np.abs(z)
        status[live & (a < 0.5)] = 1
        status[live & (a > escape_radius)] = -1
    inside = np.all(status == 1, axis=1)
    order = np.argsort(angles)
    lower = 0.0
    for i in order:
        if not inside[i]:
            break
        lower = float(angles[i])
    return CriticalAngleReport(theta_star_lower=lower, hypothesis_pi_ok=lower > math.pi + resolution,
                               resolution=resolution, angles=angles, radii=radii, status=status)
