"""Polynomial probability-generating functions and the model they define."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import errors
from .series_alg import compose, mul, horner, _fit

NORMALIZATION_TOL = 1e-12
ESCAPE_RADIUS = 1e6

#: (p1, q0) of the three quadratic-offspring / Bernoulli-immigration examples.
REFERENCE_PARAMS = ((0.3, 0.5), (0.4, 0.5), (0.5, 0.7))


@dataclass(frozen=True)
class Pgf:
    """A finite PGF ``f(z) = sum_k coeffs[k] z**k``."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        if len(c) == 0:
            raise ValueError("a PGF needs at least one coefficient")
        # trailing zeros carry no information
        while len(c) > 1 and c[-1] == 0.0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def __call__(self, z):
        return eval_pgf(self, z)

    def mean(self) -> float:
        return float(sum(k * c for k, c in enumerate(self.coeffs)))

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.coeffs)


@dataclass(frozen=True)
class HypothesisFlags:
    p1_in_unit_interval: bool
    p0_zero: bool
    q0_positive: bool
    supercritical: bool
    exponent_below_minus_one: bool

    def all_hard(self) -> bool:
        return (self.p1_in_unit_interval and self.p0_zero
                and self.q0_positive and self.supercritical)

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Model:
    """Validated offspring law ``p`` and immigration law ``q``.

    Build instances through :func:`validate_model`.
    """

    p: Pgf
    q: Pgf
    p1: float
    q0: float
    big_e: float
    q_mean: float
    schroder_exponent: float
    hypothesis_flags: HypothesisFlags = field(compare=False)

    @property
    def log_e(self) -> float:
        """Natural log of the mean offspring number."""
        return math.log(self.big_e)

    @property
    def mean_limit(self) -> float:
        """Mean of the martingale limit, ``1 + Q'(1)/(E - 1)``."""
        return 1.0 + self.q_mean / (self.big_e - 1.0)

    def tail_exponent(self, n: int = 0) -> float:
        """Power of ``x`` in the ``n``-th left-tail term."""
        return -math.log(self.p1 ** (n + 1) * self.q0) / self.log_e - 1.0

    def to_dict(self) -> dict:
        return {"p": list(self.p.coeffs), "q": list(self.q.coeffs)}

    def describe(self) -> dict:
        return {
            "p": list(self.p.coeffs), "q": list(self.q.coeffs),
            "p1": self.p1, "q0": self.q0, "E": self.big_e, "q_mean": self.q_mean,
            "log_E(p1 q0)": self.schroder_exponent,
            "flags": self.hypothesis_flags.as_dict(),
        }


def validate_model(p_coeffs, q_coeffs) -> Model:
    """Check the hard assumptions and derive the scalars used everywhere else.

    Raises
    ------
    NegativeCoefficient, NotNormalized, NotSchroder, SubcriticalOrCritical,
    NoImmigrationGap
    """
    p_coeffs = [float(x) for x in p_coeffs]
    q_coeffs = [float(x) for x in q_coeffs]
    if not p_coeffs or not q_coeffs:
        raise ValueError("coefficient sequences must be non-empty")
    for name, c in (("p", p_coeffs), ("q", q_coeffs)):
        if any(not math.isfinite(x) for x in c):
            raise ValueError(f"{name} has non-finite coefficients")
        if any(x < 0 for x in c):
            raise errors.NegativeCoefficient(f"{name} has a negative coefficient")
        if abs(math.fsum(c) - 1.0) > NORMALIZATION_TOL:
            raise errors.NotNormalized(f"{name} sums to {math.fsum(c)!r}, not 1")
    p, q = Pgf(tuple(p_coeffs)), Pgf(tuple(q_coeffs))
    p0 = p.coeffs[0]
    p1 = p.coeffs[1] if p.degree >= 1 else 0.0
    q0 = q.coeffs[0]
    big_e = p.mean()
    flags = HypothesisFlags(
        p1_in_unit_interval=0.0 < p1 < 1.0,
        p0_zero=p0 == 0.0,
        q0_positive=q0 > 0.0,
        supercritical=big_e > 1.0,
        exponent_below_minus_one=False,
    )
    if not (flags.p0_zero and flags.p1_in_unit_interval):
        raise errors.NotSchroder(f"need p0 = 0 and 0 < p1 < 1, got p0={p0}, p1={p1}")
    if not flags.supercritical:
        raise errors.SubcriticalOrCritical(f"mean offspring {big_e} <= 1")
    if not flags.q0_positive:
        raise errors.NoImmigrationGap("q0 must be positive")
    expo = math.log(p1 * q0) / math.log(big_e)
    flags = HypothesisFlags(**{**flags.as_dict(), "exponent_below_minus_one": expo < -1.0})
    return Model(p=p, q=q, p1=p1, q0=q0, big_e=big_e, q_mean=q.mean(),
                 schroder_exponent=expo, hypothesis_flags=flags)


def quadratic_model(p1: float, q0: float) -> Model:
    """``P(z) = p1 z + (1 - p1) z**2`` with ``Q(z) = q0 + (1 - q0) z``."""
    return validate_model([0.0, p1, 1.0 - p1], [q0, 1.0 - q0])


def load_model(path) -> Model:
    """Read a ``{"p": [...], "q": [...]}`` JSON model file."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "p" not in data or "q" not in data:
        raise ValueError(f"{path}: expected an object with keys 'p' and 'q'")
    return validate_model(data["p"], data["q"])


def save_model(model: Model, path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2) + "\n")


def eval_pgf(f: Pgf, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    return horner(f.coeffs, z)


def iterate_p(model: Model, z, t: int, escape_radius: float = ESCAPE_RADIUS):
    """``t``-fold composition ``P(P(...P(z)))``; ``t = 0`` returns ``z``.

    Raises :class:`~gwimm.errors.EscapeError` once any iterate leaves the
    disc of radius ``escape_radius``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    w = z
    for _ in range(t):
        w = model.p(w)
        if np.any(np.abs(w) > escape_radius):
            raise errors.EscapeError("iterate left the escape radius")
    return w


def imm_pgf_coeffs(model: Model, t: int, n_max: int) -> np.ndarray:
    """``P(X_t = n)`` for ``n = 0..n_max`` (process started from one individual).

    Uses ``P_imm,t = P_t * Q(P_{t-1}) * ... * Q(P_1) * Q``.  Truncation at
    ``n_max`` is exact for every kept index because the products only push
    mass upward.
    """
    if t < 0 or n_max < 1:
        raise ValueError("need t >= 0 and n_max >= 1")
    p, q = model.p.array, model.q.array
    pj = _fit(np.array([0.0, 1.0]), n_max)
    acc = _fit(np.array([1.0]), n_max)
    for _ in range(t):
        acc = mul(acc, compose(q, pj, n_max), n_max)
        pj = compose(p, pj, n_max)
    return mul(acc, pj, n_max)
