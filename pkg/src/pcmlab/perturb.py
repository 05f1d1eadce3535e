"""Multiplicative perturbation factor models.

Each model describes one distribution for the factor e applied to judgment
entries. Truncation is realized by rejection sampling; truncated families
can be calibrated so that the truncated mean hits a target (normally 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError

PER_ENTRY = "per-entry"
SHARED = "shared"

_REJECTION_BUDGET = 1_000_000

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _quad(fn, a: float, b: float) -> float:
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (b + a)
    return float(0.5 * (b - a) * np.sum(_GL_WEIGHTS * fn(x)))


def _truncated_mean(logpdf, a: float, b: float) -> float:
    # Work with a shifted log-density so extreme parameters cannot underflow.
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (b + a)
    y = logpdf(x)
    p = np.exp(y - np.max(y))
    den = float(np.sum(_GL_WEIGHTS * p))
    if den <= 0.0 or not np.isfinite(den):
        raise ConfigError("distribution has no mass on the truncation interval")
    return float(np.sum(_GL_WEIGHTS * x * p)) / den


def _bisect(fn, lo: float, hi: float, tol: float = 1e-13) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo * fhi > 0:
        raise ConfigError("calibration failed: target mean not bracketed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if abs(fmid) < tol or hi - lo < tol:
            return mid
        if flo * fmid <= 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _gamma_logpdf(shape: float, scale: float):
    return lambda x: (shape - 1.0) * np.log(x) - x / scale


def _lognormal_logpdf(mu: float, sigma: float):
    return lambda x: -((np.log(x) - mu) ** 2) / (2.0 * sigma * sigma) - np.log(x)


def _normal_logpdf(loc: float, sd: float):
    return lambda x: -((x - loc) ** 2) / (2.0 * sd * sd)


@lru_cache(maxsize=128)
def _calibrated_gamma_scale(shape: float, a: float, b: float, target: float) -> float:
    def gap(scale: float) -> float:
        return _truncated_mean(_gamma_logpdf(shape, scale), a, b) - target

    return _bisect(gap, 1e-6 / shape, 1e3 / shape)


@lru_cache(maxsize=128)
def _calibrated_lognormal_mu(sigma: float, a: float, b: float, target: float) -> float:
    def gap(mu: float) -> float:
        return _truncated_mean(_lognormal_logpdf(mu, sigma), a, b) - target

    return _bisect(gap, math.log(a) - 5.0 * sigma, math.log(b) + 5.0 * sigma)


@lru_cache(maxsize=128)
def _calibrated_normal_loc(sd: float, a: float, b: float, target: float) -> float:
    def gap(loc: float) -> float:
        return _truncated_mean(_normal_logpdf(loc, sd), a, b) - target

    return _bisect(gap, a - 5.0 * sd, b + 5.0 * sd)


@dataclass(frozen=True)
class PerturbationModel:
    """A factor distribution plus optional truncation and a draw mode.

    ``draw_mode`` controls whether an array request yields independent
    factors per entry or one shared factor broadcast over the array.
    """

    family: str
    params: tuple[float, ...]
    support: tuple[float, float] | None = None
    draw_mode: str = PER_ENTRY

    def __post_init__(self) -> None:
        if self.family not in ("uniform", "gamma", "lognormal", "truncnorm", "fisher_snedecor"):
            raise ConfigError(f"unknown distribution family {self.family!r}")
        if self.draw_mode not in (PER_ENTRY, SHARED):
            raise ConfigError(f"unknown draw mode {self.draw_mode!r}")
        if self.support is not None:
            a, b = self.support
            if not (0.0 < a <= b) or not math.isfinite(b):
                raise ConfigError("support must be a positive finite interval")
        if self.family == "truncnorm" and self.support is None:
            raise ConfigError("a truncated normal model needs a support interval")

    # -- constructors -----------------------------------------------------

    @classmethod
    def uniform(cls, low: float, high: float, draw_mode: str = PER_ENTRY) -> "PerturbationModel":
        if not (0.0 < low <= high):
            raise ConfigError("uniform bounds must satisfy 0 < low <= high")
        return cls("uniform", (float(low), float(high)), (float(low), float(high)), draw_mode)

    @classmethod
    def constant(cls, value: float, draw_mode: str = PER_ENTRY) -> "PerturbationModel":
        return cls.uniform(value, value, draw_mode)

    @classmethod
    def gamma(
        cls,
        shape: float,
        scale: float | None = None,
        support: tuple[float, float] | None = None,
        match_mean: float | None = None,
        draw_mode: str = PER_ENTRY,
    ) -> "PerturbationModel":
        """Gamma factors; default scale 1/shape gives raw mean 1.

        With ``match_mean`` and a support, the scale is solved so the
        truncated mean hits the target.
        """
        if shape <= 0:
            raise ConfigError("gamma shape must be positive")
        sup = (float(support[0]), float(support[1])) if support else None
        if match_mean is not None:
            if sup is None:
                scale = match_mean / shape
            else:
                scale = _calibrated_gamma_scale(float(shape), sup[0], sup[1], float(match_mean))
        elif scale is None:
            scale = 1.0 / shape
        return cls("gamma", (float(shape), float(scale)), sup, draw_mode)

    @classmethod
    def lognormal(
        cls,
        sigma: float,
        mu: float | None = None,
        support: tuple[float, float] | None = None,
        match_mean: float | None = None,
        draw_mode: str = PER_ENTRY,
    ) -> "PerturbationModel":
        """Log-normal factors; default mu = -sigma^2/2 gives raw mean 1."""
        if sigma <= 0:
            raise ConfigError("lognormal sigma must be positive")
        sup = (float(support[0]), float(support[1])) if support else None
        if match_mean is not None:
            if sup is None:
                mu = math.log(match_mean) - 0.5 * sigma * sigma
            else:
                mu = _calibrated_lognormal_mu(float(sigma), sup[0], sup[1], float(match_mean))
        elif mu is None:
            mu = -0.5 * sigma * sigma
        return cls("lognormal", (float(mu), float(sigma)), sup, draw_mode)

    @classmethod
    def truncated_normal(
        cls,
        sd: float,
        support: tuple[float, float],
        match_mean: float = 1.0,
        draw_mode: str = PER_ENTRY,
    ) -> "PerturbationModel":
        """Normal factors restricted to a positive interval; the location is
        solved so the truncated mean hits ``match_mean``."""
        if sd <= 0:
            raise ConfigError("truncated normal sd must be positive")
        a, b = float(support[0]), float(support[1])
        loc = _calibrated_normal_loc(float(sd), a, b, float(match_mean))
        return cls("truncnorm", (loc, float(sd)), (a, b), draw_mode)

    @classmethod
    def fisher_snedecor(cls, d1: float, d2: float, draw_mode: str = PER_ENTRY) -> "PerturbationModel":
        if d1 <= 0 or d2 <= 0:
            raise ConfigError("degrees of freedom must be positive")
        return cls("fisher_snedecor", (float(d1), float(d2)), None, draw_mode)

    # -- behaviour ---------------------------------------------------------

    def mean(self) -> float:
        """Expected factor value (analytic where available, else quadrature)."""
        if self.family == "uniform":
            return 0.5 * (self.params[0] + self.params[1])
        if self.family == "fisher_snedecor":
            d2 = self.params[1]
            if d2 <= 2:
                raise ConfigError("fisher_snedecor mean needs d2 > 2")
            return d2 / (d2 - 2.0)
        if self.support is None:
            if self.family == "gamma":
                return self.params[0] * self.params[1]
            mu, sigma = self.params
            return math.exp(mu + 0.5 * sigma * sigma)
        a, b = self.support
        if self.family == "gamma":
            logpdf = _gamma_logpdf(*self.params)
        elif self.family == "lognormal":
            logpdf = _lognormal_logpdf(*self.params)
        else:
            logpdf = _normal_logpdf(*self.params)
        return _truncated_mean(logpdf, a, b)

    def _draw_raw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.family == "uniform":
            low, high = self.params
            return rng.uniform(low, high, size)
        if self.family == "gamma":
            shape, scale = self.params
            return rng.gamma(shape, scale, size)
        if self.family == "lognormal":
            mu, sigma = self.params
            return rng.lognormal(mu, sigma, size)
        if self.family == "truncnorm":
            loc, sd = self.params
            return rng.normal(loc, sd, size)
        d1, d2 = self.params
        return rng.f(d1, d2, size)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw factors; a shared-mode model broadcasts one draw over ``size``."""
        if size is None:
            return float(self._sample_n(rng, 1)[0])
        if self.draw_mode == SHARED:
            return np.full(size, self._sample_n(rng, 1)[0])
        return self._sample_n(rng, size)

    def _sample_n(self, rng: np.random.Generator, count: int) -> np.ndarray:
        needs_rejection = self.support is not None and self.family != "uniform"
        if not needs_rejection:
            return self._draw_raw(rng, count)
        a, b = self.support
        out = np.empty(count)
        filled = 0
        attempts = 0
        while filled < count:
            batch = max(count - filled, 16)
            attempts += batch
            if attempts > _REJECTION_BUDGET:
                raise ConfigError(
                    "rejection sampling budget exhausted; the support interval "
                    "captures almost no mass of the configured distribution"
                )
            draws = self._draw_raw(rng, batch)
            accepted = draws[(draws >= a) & (draws <= b)]
            take = min(accepted.size, count - filled)
            out[filled : filled + take] = accepted[:take]
            filled += take
        return out


def small_error_models() -> tuple[PerturbationModel, ...]:
    """The four mild-factor models on [0.5, 1.5], each with truncated mean 1."""
    return (
        PerturbationModel.gamma(16.0, support=(0.5, 1.5), match_mean=1.0),
        PerturbationModel.lognormal(0.25, support=(0.5, 1.5), match_mean=1.0),
        PerturbationModel.truncated_normal(0.25, (0.5, 1.5), match_mean=1.0),
        PerturbationModel.uniform(0.5, 1.5),
    )
