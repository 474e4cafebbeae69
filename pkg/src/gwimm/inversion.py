"""Reference density by Fourier inversion of ``Pi_imm`` along the imaginary axis.

    p(x) = (1/pi) Re int_0^Y Pi_imm(iy) exp(iyx) dy

with the trapezoid rule.  ``Pi_imm(iy)`` is sampled once and reused for
every ``x``.  The sum is organized in blocks of ``y`` so that the bulk of
the work is a complex matrix product: inside a block the phases
``exp(i j dy x)`` are shared, and block partial sums are combined in
extended precision.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import limits
from .errors import OutOfRange
from .limits import LimitConfig, DEFAULT_CONFIG
from .pgf import Model

PAPER_PROFILE = {"y_max": 2000.0, "n_points": 1_000_000, "t_iter": 70}
FAST_PROFILE = {"y_max": 500.0, "n_points": 200_000, "t_iter": 70}
METHODS = ("fourier", "series", "quick", "montecarlo")


def default_grid(x0: float = 0.005, x1: float = 12.0, count: int = 2400) -> np.ndarray:
    return np.linspace(x0, x1, count)


@dataclass(frozen=True)
class DensityCurve:
    """Density samples ``ps`` on a strictly increasing grid ``xs``."""

    xs: np.ndarray
    ps: np.ndarray
    method: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ps = np.asarray(self.ps, dtype=float)
        if xs.ndim != 1 or xs.shape != ps.shape or xs.size < 2:
            raise ValueError("xs and ps must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if not np.all(np.isfinite(ps)):
            raise ValueError("density values must be finite")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)

    def cdf(self) -> np.ndarray:
        """Trapezoid cumulative mass from ``xs[0]``."""
        seg = 0.5 * (self.ps[1:] + self.ps[:-1]) * np.diff(self.xs)
        return np.concatenate([[0.0], np.cumsum(seg)])

    def area(self) -> float:
        return float(self.cdf()[-1])

    def mass_ok(self, slack: float = 0.02) -> bool:
        return 0.0 <= self.area() <= 1.0 + slack

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "p"])
            for x, p in zip(self.xs, self.ps):
                w.writerow([repr(float(x)), repr(float(p))])

    @classmethod
    def from_csv(cls, path, method: str = "fourier", params: dict | None = None) -> "DensityCurve":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1], method, params or {})

    def metadata(self) -> dict:
        return {"method": self.method, "params": self.params, "n": int(self.xs.size),
                "x_range": [float(self.xs[0]), float(self.xs[-1])], "area": self.area()}

    def write(self, path) -> Path:
        """CSV plus ``<path>.json`` metadata sidecar; returns the sidecar path."""
        path = Path(path)
        self.to_csv(path)
        side = path.with_name(path.name + ".json")
        side.write_text(json.dumps(self.metadata(), indent=2, default=_jsonable) + "\n")
        return side


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def trapezoid_weights(n_points: int) -> np.ndarray:
    w = np.ones(n_points)
    w[0] = w[-1] = 0.5
    return w


def sample_pi_imm(model: Model, cfg: LimitConfig, y_max: float, n_points: int,
                  chunk: int = 250_000):
    """``(ys, Pi_imm(i ys))`` on the uniform grid ``[0, y_max]``."""
    ys = np.linspace(0.0, y_max, n_points)
    vals = np.empty(n_points, dtype=complex)
    for lo in range(0, n_points, chunk):
        hi = min(lo + chunk, n_points)
        vals[lo:hi] = limits.pi_imm_eval(model, cfg, 1j * ys[lo:hi])
    return ys, vals


def invert_samples(ys: np.ndarray, vals: np.ndarray, xs, block: int = 2048) -> np.ndarray:
    """``(1/pi) Re sum_k w_k vals_k exp(i ys_k x) dy`` for each ``x``; uniform ``ys`` from 0."""
    xs = np.asarray(xs, dtype=float)
    n = ys.size
    dy = ys[1] - ys[0]
    if not np.allclose(np.diff(ys), dy, rtol=1e-6, atol=0):
        raise ValueError("ys must be uniform")
    f = vals * trapezoid_weights(n)
    n_blocks = -(-n // block)
    f = np.concatenate([f, np.zeros(n_blocks * block - n, dtype=complex)]).reshape(n_blocks, block)
    inner = np.exp(1j * dy * np.outer(np.arange(block), xs))        # (block, nx)
    partial = f @ inner                                              # (n_blocks, nx)
    outer = np.exp(1j * (ys[0] + dy * block * np.arange(n_blocks))[:, None] * xs[None, :])
    terms = (outer * partial).real.astype(np.longdouble)
    total = terms.sum(axis=0)
    return np.asarray(total * dy / np.pi, dtype=float)


def density_fourier(model: Model, cfg: LimitConfig = DEFAULT_CONFIG, xs=None,
                    y_max: float = PAPER_PROFILE["y_max"],
                    n_points: int = PAPER_PROFILE["n_points"]) -> DensityCurve:
    """Density of the martingale limit on ``xs`` by trapezoid Fourier inversion."""
    xs = default_grid() if xs is None else np.asarray(xs, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("xs must be positive")
    if not y_max > 0 or n_points < 2:
        raise ValueError("need y_max > 0 and n_points >= 2")
    ys, vals = sample_pi_imm(model, cfg, y_max, n_points)
    ps = invert_samples(ys, vals, xs)
    params = {"y_max": y_max, "n_points": n_points, "t_iter": cfg.t_iter,
              "series_order": cfg.series_order, "model": model.to_dict()}
    return DensityCurve(xs, ps, "fourier", params)


def density_fourier_profile(model: Model, profile="fast", xs=None) -> DensityCurve:
    """Fourier inversion with a named profile (``"paper"``, ``"fast"``) or a profile dict."""
    if isinstance(profile, dict):
        prof = profile
    elif profile in ("paper", "fast"):
        prof = PAPER_PROFILE if profile == "paper" else FAST_PROFILE
    else:
        raise ValueError(f"unknown profile {profile!r}")
    cfg = replace(DEFAULT_CONFIG, t_iter=prof["t_iter"])
    return density_fourier(model, cfg, xs, prof["y_max"], prof["n_points"])


def tail_mass(curve: DensityCurve, x0: float) -> float:
    """Trapezoid mass on ``[xs[0], x0]`` (linear interpolation in the last cell)."""
    xs, ps = curve.xs, curve.ps
    if not xs[0] <= x0 <= xs[-1]:
        raise OutOfRange(f"x0={x0} outside [{xs[0]}, {xs[-1]}]")
    cdf = curve.cdf()
    i = int(np.searchsorted(xs, x0, side="right")) - 1
    if i >= xs.size - 1:
        return float(cdf[-1])
    h = x0 - xs[i]
    p_at = ps[i] + (ps[i + 1] - ps[i]) * h / (xs[i + 1] - xs[i])
    return float(cdf[i] + 0.5 * (ps[i] + p_at) * h)


def moment(curve: DensityCurve, k: int = 1) -> float:
    y = curve.xs ** k * curve.ps
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(curve.xs)))
