"""Simulation of the process and goodness-of-fit against computed densities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientCoverage
from .inversion import DensityCurve
from .pgf import Model, imm_pgf_coeffs

BLOCK = 1024


@dataclass(frozen=True)
class SimConfig:
    n_paths: int = 100_000
    t_horizon: int = 30
    seed: int = 20240917

    def __post_init__(self):
        if self.n_paths < 1 or self.t_horizon < 1:
            raise ValueError("n_paths and t_horizon must be >= 1")


def _block_rng(seed: int, block: int) -> np.random.Generator:
    # keyed by (seed, block index): samples do not depend on how blocks are scheduled
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def simulate_counts(model: Model, cfg: SimConfig) -> np.ndarray:
    """Raw population sizes ``X_t`` at ``t = cfg.t_horizon`` for each path."""
    p = np.asarray(model.p.coeffs)
    p = p / p.sum()
    k = np.arange(p.size)
    q_cdf = model.q.cdf()
    out = np.empty(cfg.n_paths, dtype=np.int64)
    for b, lo in enumerate(range(0, cfg.n_paths, BLOCK)):
        hi = min(lo + BLOCK, cfg.n_paths)
        rng = _block_rng(cfg.seed, b)
        x = np.ones(hi - lo, dtype=np.int64)
        for _ in range(cfg.t_horizon):
            # the offspring total of x iid individuals is a multinomial count vector
            offspring = rng.multinomial(x, p) @ k
            immigrants = np.searchsorted(q_cdf, rng.random(hi - lo), side="right")
            x = offspring + np.minimum(immigrants, q_cdf.size - 1)
        out[lo:hi] = x
    return out


def simulate(model: Model, cfg: SimConfig = SimConfig()) -> np.ndarray:
    """``n_paths`` samples of ``E^{-t} X_t``."""
    return simulate_counts(model, cfg) / model.big_e ** cfg.t_horizon


def summary(samples: np.ndarray, model: Model | None = None) -> dict:
    n = samples.size
    mean = float(np.mean(samples))
    var = float(np.var(samples, ddof=1)) if n > 1 else 0.0
    out = {"n": int(n), "mean": mean, "variance": var, "stderr": math.sqrt(var / n),
           "min": float(np.min(samples)), "max": float(np.max(samples))}
    if model is not None:
        out["expected_mean"] = model.mean_limit
        out["mean_z"] = (mean - model.mean_limit) / out["stderr"] if out["stderr"] > 0 else 0.0
    return out


def ks_distance(samples, curve: DensityCurve, max_uncovered: float = 0.01) -> float:
    """Sup distance between the empirical CDF and the curve's trapezoid CDF."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    outside = np.mean((s < curve.xs[0]) | (s > curve.xs[-1]))
    if outside > max_uncovered:
        raise InsufficientCoverage(f"{outside:.2%} of the samples lie outside the curve's grid")
    f = np.interp(s, curve.xs, curve.cdf(), left=0.0, right=curve.area())
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def sample_from_curve(curve: DensityCurve, n: int, seed: int = 0) -> np.ndarray:
    """Inverse-transform draws from the curve's normalized trapezoid CDF."""
    cdf = curve.cdf()
    cdf = cdf / cdf[-1]
    u = np.random.default_rng(seed).random(n)
    return np.interp(u, cdf, curve.xs)


def rare_event_ratios(model: Model, t: int, n_max: int) -> np.ndarray:
    """``(p1 q0)^{-t} P(X_t = n)`` for ``n = 0..n_max`` from exact coefficients."""
    return imm_pgf_coeffs(model, t, n_max) / (model.p1 * model.q0) ** t


def empirical_curve(samples, bins: int = 200, x_range=None) -> DensityCurve:
    """Histogram density of ``samples`` at bin centers."""
    hist, edges = np.histogram(samples, bins=bins, range=x_range, density=True)
    centers = 0.5 * (edges[1:] + edges[:-1])
    return DensityCurve(centers, hist, "montecarlo", {"bins": bins, "n": int(np.size(samples))})
