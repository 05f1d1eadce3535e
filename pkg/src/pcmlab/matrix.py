"""Pairwise comparison matrices, priority vectors, and judgment scales.

The value types here are immutable after construction; every operation
returns a new object and never mutates its input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import MatrixError

RECIPROCAL = "reciprocal"
ARBITRARY = "arbitrary"

REGION_UPPER = "upper-triangle"
REGION_OFFDIAG = "off-diagonal"

# Relative tolerance for the a_ji == 1/a_ij check; double precision leaves
# plenty of headroom below it.
RECIPROCITY_RTOL = 1e-12


class PriorityVector:
    """Vector of positive weights, normalized to unit sum on construction."""

    __slots__ = ("_values",)

    def __init__(self, values) -> None:
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise MatrixError("priority vector needs at least two entries")
        if not np.all(np.isfinite(v)):
            raise MatrixError("priority vector entries must be finite")
        if np.any(v <= 0.0):
            raise MatrixError("priority vector entries must be strictly positive")
        v = v / v.sum()
        v.flags.writeable = False
        self._values = v

    @property
    def values(self) -> np.ndarray:
        """Normalized weights as a read-only array."""
        return self._values

    @property
    def n(self) -> int:
        return self._values.size

    def __len__(self) -> int:
        return self._values.size

    def __getitem__(self, i):
        return self._values[i]

    def __iter__(self):
        return iter(self._values)

    def __repr__(self) -> str:
        inner = ", ".join(f"{x:.6f}" for x in self._values)
        return f"PriorityVector([{inner}])"


class PairwiseComparisonMatrix:
    """Square positive judgment matrix with unit diagonal.

    ``mode`` records whether the matrix is reciprocal (a_ji == 1/a_ij) or an
    arbitrary positive matrix. When not given it is inferred from the entries.
    """

    __slots__ = ("_entries", "_mode")

    def __init__(self, entries, mode: str | None = None) -> None:
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixError("matrix must be square")
        if a.shape[0] < 2:
            raise MatrixError("matrix must be at least 2x2")
        if not np.all(np.isfinite(a)):
            raise MatrixError("matrix entries must be finite")
        if np.any(a <= 0.0):
            raise MatrixError("matrix entries must be strictly positive")
        if np.any(np.abs(np.diag(a) - 1.0) > RECIPROCITY_RTOL):
            raise MatrixError("diagonal entries must equal 1")
        if mode is None:
            mode = RECIPROCAL if _is_reciprocal(a) else ARBITRARY
        elif mode == RECIPROCAL:
            if not _is_reciprocal(a):
                raise MatrixError("entries violate reciprocity but mode is reciprocal")
        elif mode != ARBITRARY:
            raise MatrixError(f"unknown mode {mode!r}")
        a.flags.writeable = False
        self._entries = a
        self._mode = mode

    @property
    def entries(self) -> np.ndarray:
        """Judgment entries as a read-only array."""
        return self._entries

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    def __repr__(self) -> str:
        return f"PairwiseComparisonMatrix(n={self.n}, mode={self._mode!r})"


def _is_reciprocal(a: np.ndarray) -> bool:
    return bool(np.all(np.abs(a * a.T - 1.0) <= RECIPROCITY_RTOL))


@lru_cache(maxsize=32)
def _scale_values(kind: str, limit: int | None) -> np.ndarray:
    if kind == "saaty":
        v = np.concatenate([1.0 / np.arange(9, 1, -1), np.arange(1, 10, dtype=float)])
    elif kind == "geometric":
        v = 2.0 ** (np.arange(-8, 9) / 2.0)
    elif kind == "numeric":
        if limit is None or limit < 1:
            raise MatrixError("numeric scale needs a positive limit")
        if limit > 10_000_000:
            raise MatrixError("numeric scale limit too large")
        v = np.concatenate([1.0 / np.arange(limit, 1, -1), np.arange(1, limit + 1, dtype=float)])
    else:
        raise MatrixError(f"unknown scale kind {kind!r}")
    v.flags.writeable = False
    return v


@dataclass(frozen=True)
class JudgmentScale:
    """Admissible judgment values; closed under reciprocal and containing 1."""

    kind: str
    limit: int | None = None

    @classmethod
    def saaty(cls) -> "JudgmentScale":
        """Integers 1..9 and their reciprocals."""
        return cls("saaty")

    @classmethod
    def geometric(cls) -> "JudgmentScale":
        """Powers 2^(k/2) for k in -8..8."""
        return cls("geometric")

    @classmethod
    def numeric(cls, limit: int) -> "JudgmentScale":
        """Integers 1..limit and their reciprocals."""
        return cls("numeric", int(limit))

    @property
    def values(self) -> np.ndarray:
        return _scale_values(self.kind, self.limit)

    def round_array(self, x) -> np.ndarray:
        """Round each element to the nearest scale value by absolute distance.

        Exact ties go to the scale value nearer to 1; a tie between a value
        and its reciprocal picks the smaller one.
        """
        vals = self.values
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(vals, x), 1, len(vals) - 1)
        lo = vals[idx - 1]
        hi = vals[idx]
        d_lo = x - lo
        d_hi = hi - x
        pick_hi = (d_hi < d_lo) | ((d_hi == d_lo) & (np.abs(np.log(hi)) < np.abs(np.log(lo))))
        return np.where(pick_hi, hi, lo)

    def round(self, v: float) -> float:
        return float(self.round_array(np.asarray([v]))[0])

    def __str__(self) -> str:
        return self.kind if self.limit is None else f"{self.kind}:{self.limit}"


def parse_scale(text: str) -> JudgmentScale:
    """Parse ``saaty``, ``geometric``, or ``numeric:N``."""
    t = text.strip().lower()
    if t == "saaty":
        return JudgmentScale.saaty()
    if t == "geometric":
        return JudgmentScale.geometric()
    if t.startswith("numeric:"):
        try:
            limit = int(t.split(":", 1)[1])
        except ValueError:
            raise MatrixError(f"bad numeric scale limit in {text!r}") from None
        return JudgmentScale.numeric(limit)
    raise MatrixError(f"unknown scale {text!r}")


def round_to_scale(v: float, scale: JudgmentScale) -> float:
    """Nearest scale value to ``v`` by linear absolute distance."""
    if v <= 0:
        raise MatrixError("can only round positive values")
    return scale.round(v)


def pcm_from_weights(w) -> PairwiseComparisonMatrix:
    """Ratio matrix a_ij = w_i / w_j; consistent and reciprocal by construction."""
    if not isinstance(w, PriorityVector):
        w = PriorityVector(w)
    v = w.values
    return PairwiseComparisonMatrix(v[:, None] / v[None, :], mode=RECIPROCAL)


def enforce_reciprocity(m: PairwiseComparisonMatrix) -> PairwiseComparisonMatrix:
    """Keep the upper triangle and mirror reciprocals into the lower one."""
    a = m.entries
    n = m.n
    out = np.eye(n)
    rows, cols = np.triu_indices(n, 1)
    out[rows, cols] = a[rows, cols]
    out[cols, rows] = 1.0 / a[rows, cols]
    return PairwiseComparisonMatrix(out, mode=RECIPROCAL)


def is_consistent(m: PairwiseComparisonMatrix, tol: float = 1e-9) -> bool:
    """Cardinal transitivity: a_ik * a_kj == a_ij for all triples.

    Evaluated over all index triples including repeats, which makes the
    reciprocity condition part of the check (take j == i).
    """
    a = m.entries
    prod = a[:, :, None] * a[None, :, :]  # [i, k, j] -> a_ik * a_kj
    target = a[:, None, :]
    return bool(np.all(np.abs(prod - target) <= tol * target))


def is_ordinally_transitive(m: PairwiseComparisonMatrix) -> bool:
    """Row-wise and column-wise preference orders agree across the matrix."""
    a = m.entries
    return _columns_order_consistent(a) and _columns_order_consistent(a.T)


def _columns_order_consistent(a: np.ndarray) -> bool:
    # For every column pair (j, k): no row may prefer j over k while another
    # row prefers k over j.
    diff = a[:, :, None] - a[:, None, :]
    any_pos = (diff > 0).any(axis=0)
    any_neg = (diff < 0).any(axis=0)
    return not bool((any_pos & any_neg).any())


def perturb_entries(
    m: PairwiseComparisonMatrix,
    model,
    region: str,
    rng: np.random.Generator,
) -> PairwiseComparisonMatrix:
    """Multiply each entry in ``region`` by a factor drawn from ``model``.

    Factors are consumed in row-major order over the region. The diagonal is
    untouched and the result is returned in arbitrary mode.
    """
    a = m.entries.copy()
    n = m.n
    if region == REGION_UPPER:
        rows, cols = np.triu_indices(n, 1)
    elif region == REGION_OFFDIAG:
        rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    else:
        raise MatrixError(f"unknown perturbation region {region!r}")
    a[rows, cols] *= model.sample(rng, size=rows.size)
    return PairwiseComparisonMatrix(a, mode=ARBITRARY)
