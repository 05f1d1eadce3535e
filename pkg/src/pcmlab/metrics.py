"""Estimation-quality statistics between true and estimated weight vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import MatrixError
from .matrix import PriorityVector

# Large-sample critical values used for significance reporting.
T_CRITICAL = {0.01: 2.326472, 0.02: 2.053838, 0.03: 1.880865}


def _as_vector(x) -> np.ndarray:
    if isinstance(x, PriorityVector):
        return x.values
    return np.asarray(x, dtype=float)


def _paired(w, x) -> tuple[np.ndarray, np.ndarray]:
    a, b = _as_vector(w), _as_vector(x)
    if a.shape != b.shape or a.ndim != 1:
        raise MatrixError("vectors must be one-dimensional and of equal length")
    return a, b


def mae(w, x) -> float:
    """Mean absolute error (1/n) sum |w_i - x_i|."""
    a, b = _paired(w, x)
    return float(np.mean(np.abs(a - b)))


def relative_error(w, x) -> float:
    """Mean relative error (1/m) sum |w_i - x_i| / w_i."""
    a, b = _paired(w, x)
    if np.any(a <= 0):
        raise MatrixError("reference vector must be strictly positive")
    return float(np.mean(np.abs(a - b) / a))


def relative_ratio(w, x) -> float:
    """Mean relative ratio (1/m) sum x_i / w_i."""
    a, b = _paired(w, x)
    if np.any(a <= 0):
        raise MatrixError("reference vector must be strictly positive")
    return float(np.mean(b / a))


def rank_with_ties(x) -> np.ndarray:
    """1-based ranks; tied values share the average of their rank block."""
    a = _as_vector(x)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(a.size, dtype=float)
    i = 0
    while i < a.size:
        j = i
        while j + 1 < a.size and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman_rho(w, x) -> float:
    """Spearman rank correlation with average ranks for ties."""
    a, b = _paired(w, x)
    if a.size < 2:
        raise MatrixError("need at least two observations")
    ra = rank_with_ties(a)
    rb = rank_with_ties(b)
    da = ra - ra.mean()
    db = rb - rb.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0.0:
        raise MatrixError("rank correlation undefined: zero rank variance")
    return float((da @ db) / denom)


@dataclass(frozen=True)
class QualityRecord:
    """Per-repetition quality of one estimated vector against the truth."""

    mae: float
    re: float
    rr: float
    src: float


@dataclass(frozen=True)
class AggregateSummary:
    """Unweighted means of per-record quality values."""

    msrc: float
    mre: float
    mrr: float
    count: int


def aggregate(records: Sequence[QualityRecord]) -> AggregateSummary:
    if not records:
        raise MatrixError("cannot aggregate an empty record sequence")
    return AggregateSummary(
        msrc=float(np.mean([r.src for r in records])),
        mre=float(np.mean([r.re for r in records])),
        mrr=float(np.mean([r.rr for r in records])),
        count=len(records),
    )


def empirical_quantile(values, p: float) -> float:
    """Order statistic with linear interpolation at h = (n - 1) * p."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise MatrixError("quantile of an empty sample is undefined")
    if not 0.0 <= p <= 1.0:
        raise MatrixError("quantile order must lie in [0, 1]")
    return float(np.quantile(v, p, method="linear"))


def t_statistic(r: float, sample_size: int) -> tuple[float, int]:
    """t = R * sqrt((n - 2) / (1 - R^2)) with n - 2 degrees of freedom."""
    if sample_size < 3:
        raise MatrixError("sample size must be at least 3")
    if abs(r) >= 1.0:
        raise MatrixError("|R| must be below 1")
    df = sample_size - 2
    return float(r * math.sqrt(df / (1.0 - r * r))), df


def significance_level(t: float) -> float | None:
    """Smallest tabulated alpha whose critical value the statistic exceeds."""
    for alpha in sorted(T_CRITICAL):
        if t > T_CRITICAL[alpha]:
            return alpha
    return None
