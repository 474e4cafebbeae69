"""Residual suites for the functional equations and periodicity identities."""
from __future__ import annotations

import numpy as np

from . import limits, periodic
from .limits import LimitConfig, DEFAULT_CONFIG
from .pgf import Model

TOL = 1e-8


def sector_grid(r_max: float = 100.0, n_r: int = 25, n_phi: int = 13) -> np.ndarray:
    """Points of the closed right half-disc ``Re z >= 0, |z| <= r_max``."""
    r = np.linspace(0.0, r_max, n_r)
    phi = np.linspace(-np.pi / 2, np.pi / 2, n_phi)
    return np.outer(r, np.exp(1j * phi)).ravel()


def pi_residual(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, z=None) -> float:
    z = sector_grid() if z is None else z
    lhs = model.p(limits.pi_eval(model, cfg, z))
    return float(np.max(np.abs(lhs - limits.pi_eval(model, cfg, model.big_e * z))))


def r_residual(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, z=None) -> float:
    z = sector_grid() if z is None else z
    pi, r = limits.pi_and_r(model, cfg, z)
    r_ez = limits.r_eval(model, cfg, model.big_e * z)
    return float(np.max(np.abs(r_ez - r * model.q(pi))))


def basin_grid(n: int = 61) -> np.ndarray:
    return np.linspace(0.0, 0.6, n)


def phi_residual(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, w=None) -> float:
    w = basin_grid() if w is None else w
    lhs = limits.phi_eval(model, cfg, model.p(w))
    return float(np.max(np.abs(lhs - model.p1 * limits.phi_eval(model, cfg, w))))


def psi_residual(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, w=None) -> float:
    w = basin_grid() if w is None else w
    lhs = model.q(w) * limits.psi_eval(model, cfg, model.p(w))
    return float(np.max(np.abs(lhs - model.q0 * limits.psi_eval(model, cfg, w))))


def l_equation_residual(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, z=None) -> float:
    """``|R(Ez) Psi(Pi(Ez)) - q0 R(z) Psi(Pi(z))|`` at real ``z``."""
    z = np.linspace(0.2, 5.0, 25) if z is None else np.asarray(z, dtype=float)

    def g(v):
        pi, r = limits.pi_and_r(model, cfg, v)
        return r * limits.psi_eval(model, cfg, pi.real)

    return float(np.max(np.abs(g(model.big_e * z) - model.q0 * g(z))))


def periodicity_residual(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, xs=None) -> dict:
    xs = np.array([0.0, 0.25, 0.5, 0.75]) if xs is None else np.asarray(xs, dtype=float)
    k0, l0 = periodic.kl_eval(model, cfg, xs)
    k1, l1 = periodic.kl_eval(model, cfg, xs + 1.0)
    return {"K": float(np.max(np.abs(k1 - k0))), "L": float(np.max(np.abs(l1 - l0)))}


def residual_report(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, tol: float = TOL) -> dict:
    """All residual suites; ``ok`` is true when every residual is below ``tol``."""
    per = periodicity_residual(model, cfg)
    res = {
        "P(Pi(z)) - Pi(Ez)": pi_residual(model, cfg),
        "R(Ez) - R(z)Q(Pi(z))": r_residual(model, cfg),
        "Q(w)Psi(P(w)) - q0 Psi(w)": psi_residual(model, cfg),
        "Phi(P(w)) - p1 Phi(w)": phi_residual(model, cfg),
        "R Psi(Pi) scaling": l_equation_residual(model, cfg),
        "K(x+1) - K(x)": per["K"],
        "L(x+1) - L(x)": per["L"],
    }
    return {"residuals": res, "tol": tol, "ok": all(v < tol for v in res.values())}
