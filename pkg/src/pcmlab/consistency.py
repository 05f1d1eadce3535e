"""Consistency measures for pairwise comparison matrices.

Procedure-linked indices (ci_rev, ci_llsm, ci_lua, ci_srdm) plus the
triad-based family: Koczkodaj's max index, the mean triad index, mean
log-triad indices of first and second order, and the corrected mean of the
squared-log triad index. All logarithms are natural.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import MeasureDomainError
from .matrix import RECIPROCAL, PairwiseComparisonMatrix
from .prioritize import (
    OptimizerSettings,
    llsm_priority,
    lua_priority,
    rev_priority,
    srdm_priority,
)


@dataclass(frozen=True)
class Triad:
    """Judgment triple (alpha, beta, chi) = (a_ik, a_ij, a_kj)."""

    alpha: float
    beta: float
    chi: float
    indices: tuple[int, int, int]  # (i, k, j)


@dataclass(frozen=True)
class TriadSet:
    triads: tuple[Triad, ...]

    @property
    def count(self) -> int:
        return len(self.triads)


@lru_cache(maxsize=64)
def _triad_index_arrays(n: int, reciprocal: bool):
    if reciprocal:
        triples = list(itertools.combinations(range(n), 3))
    else:
        triples = list(itertools.permutations(range(n), 3))
    i, k, j = (np.array(x, dtype=np.intp) for x in zip(*triples))
    return i, k, j


def _triad_ratios(m: PairwiseComparisonMatrix) -> np.ndarray:
    """alpha*chi/beta for every triad of the mode-appropriate set."""
    if m.n < 3:
        raise MeasureDomainError("triad measures need n >= 3")
    a = m.entries
    i, k, j = _triad_index_arrays(m.n, m.mode == RECIPROCAL)
    return a[i, k] * a[k, j] / a[i, j]


def enumerate_triads(m: PairwiseComparisonMatrix) -> TriadSet:
    """All triads: the i<k<j upper-triangle ones for reciprocal matrices,
    every ordered distinct triple otherwise."""
    if m.n < 3:
        raise MeasureDomainError("triad enumeration needs n >= 3")
    a = m.entries
    i, k, j = _triad_index_arrays(m.n, m.mode == RECIPROCAL)
    triads = tuple(
        Triad(float(a[ii, kk]), float(a[ii, jj]), float(a[kk, jj]), (int(ii), int(kk), int(jj)))
        for ii, kk, jj in zip(i, k, j)
    )
    return TriadSet(triads)


def triad_ti(t: Triad) -> float:
    """min(|1 - beta/(alpha*chi)|, |1 - alpha*chi/beta|); lies in [0, 1)."""
    r = t.alpha * t.chi / t.beta
    return float(min(abs(1.0 - 1.0 / r), abs(1.0 - r)))


def lti(t: Triad, order: int) -> float:
    """Log triad index: |ln(alpha*chi/beta)| for order 1, its square for order 2."""
    if order not in (1, 2):
        raise MeasureDomainError("lti order must be 1 or 2")
    val = abs(np.log(t.alpha * t.chi / t.beta))
    return float(val if order == 1 else val * val)


def _ti_values(m: PairwiseComparisonMatrix) -> np.ndarray:
    r = _triad_ratios(m)
    return np.minimum(np.abs(1.0 - 1.0 / r), np.abs(1.0 - r))


def koczkodaj_k(m: PairwiseComparisonMatrix) -> float:
    """Maximum triad index over the upper triangle; reciprocal matrices only."""
    if m.mode != RECIPROCAL:
        raise MeasureDomainError(
            "koczkodaj_k is defined for reciprocal matrices; "
            "use a_lti or cm_lti2 for arbitrary ones"
        )
    return float(np.max(_ti_values(m)))


def grzybowski_a(m: PairwiseComparisonMatrix) -> float:
    """Mean triad index over the mode-appropriate triad set."""
    return float(np.mean(_ti_values(m)))


def a_lti(m: PairwiseComparisonMatrix, order: int) -> float:
    """Mean log triad index of the given order over the mode-appropriate set."""
    if order not in (1, 2):
        raise MeasureDomainError("lti order must be 1 or 2")
    lv = np.abs(np.log(_triad_ratios(m)))
    return float(np.mean(lv if order == 1 else lv * lv))


def cm_lti2(m: PairwiseComparisonMatrix) -> float:
    """Corrected mean of the squared-log triad index: mean / (1 + max)."""
    lv = np.log(_triad_ratios(m))
    sq = lv * lv
    return float(np.mean(sq) / (1.0 + np.max(sq)))


def ci_rev(m: PairwiseComparisonMatrix) -> float:
    """(lambda_max - n) / (n - 1); may be negative for nonreciprocal input."""
    _, lam = rev_priority(m)
    return (lam - m.n) / (m.n - 1)


def ci_llsm(m: PairwiseComparisonMatrix) -> float:
    """Scaled sum over upper-triangle pairs of ln^2(a_ij * w_j / w_i) at the
    row-geometric-mean weights."""
    n = m.n
    if n < 3:
        raise MeasureDomainError("ci_llsm needs n >= 3")
    w = llsm_priority(m).values
    a = m.entries
    rows, cols = np.triu_indices(n, 1)
    terms = np.log(a[rows, cols] * w[cols] / w[rows]) ** 2
    return float(2.0 / ((n - 1) * (n - 2)) * terms.sum())


def ci_lua(m: PairwiseComparisonMatrix, opt: OptimizerSettings | None = None) -> float:
    """(1/n) * sqrt of the attained logarithmic utility objective."""
    _, objective = lua_priority(m, opt)
    return float(np.sqrt(max(objective, 0.0)) / m.n)


def ci_srdm(m: PairwiseComparisonMatrix, opt: OptimizerSettings | None = None) -> float:
    """sqrt of the attained squared-relative-differences objective over n."""
    _, objective = srdm_priority(m, opt)
    return float(np.sqrt(max(objective, 0.0) / m.n))


def a_lti1(m: PairwiseComparisonMatrix) -> float:
    return a_lti(m, 1)


def a_lti2(m: PairwiseComparisonMatrix) -> float:
    return a_lti(m, 2)


def k_ti(m: PairwiseComparisonMatrix) -> float:
    return koczkodaj_k(m)


def a_ti(m: PairwiseComparisonMatrix) -> float:
    return grzybowski_a(m)


# Registry used by the simulation engine and the CLI.
MEASURES = {
    "ci_rev": ci_rev,
    "ci_llsm": ci_llsm,
    "ci_lua": ci_lua,
    "ci_srdm": ci_srdm,
    "k_ti": k_ti,
    "a_ti": a_ti,
    "a_lti1": a_lti1,
    "a_lti2": a_lti2,
    "cm_lti2": cm_lti2,
}
