"""Monte Carlo experiment engines and quantile-binned error reports.

Two drivers: a hierarchy-level experiment (criteria matrix plus one
alternatives matrix per criterion, perturbed and re-estimated repeatedly)
and a single-matrix experiment that plants one large error per repetition
and records consistency measures next to the estimation error.

Work units (models / base vectors) draw from per-unit RNG substreams, so
results are byte-identical for a given seed at any worker count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from .consistency import MEASURES
from .errors import ConfigError, ConvergenceError, DegenerateBinsError, MatrixError, OptimizerError
from .matrix import (
    ARBITRARY,
    RECIPROCAL,
    REGION_OFFDIAG,
    REGION_UPPER,
    JudgmentScale,
    PairwiseComparisonMatrix,
    PriorityVector,
    pcm_from_weights,
    perturb_entries,
)
from .metrics import AggregateSummary, QualityRecord, aggregate, mae, relative_error, relative_ratio, spearman_rho
from .perturb import PerturbationModel, small_error_models
from .prioritize import METHODS, OptimizerSettings, prioritize

FORCED_RECIPROCITY = "forced"
ARBITRARY_RECIPROCITY = "arbitrary"

_FAILURE_RATE_LIMIT = 0.001


def random_priority_vector(n: int, rng: np.random.Generator) -> PriorityVector:
    """Uniform(0,1) coordinates normalized to the simplex; zeros are redrawn."""
    if n < 2:
        raise ConfigError("priority vector needs n >= 2")
    while True:
        v = rng.random(n)
        if np.all(v > 0.0):
            return PriorityVector(v)


def _random_sorted_vector(n: int, rng: np.random.Generator) -> PriorityVector:
    # Model vectors follow the descending presentation convention, which keeps
    # the upper triangle of the derived ratio matrix at or above 1. The
    # benchmark statistics this engine reproduces depend on that convention.
    return PriorityVector(np.sort(random_priority_vector(n, rng).values)[::-1])


def sample_factor(model: PerturbationModel, rng: np.random.Generator) -> float:
    """One perturbation factor from the model."""
    return model.sample(rng)


def _substream(seed: int, unit: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(unit,)))


# ---------------------------------------------------------------------------
# Hierarchy-level experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sa1Config:
    """Settings for the hierarchy-level estimation-quality experiment."""

    criteria: tuple[int, int]
    alternatives: tuple[int, int]
    scale: JudgmentScale
    reciprocity: str
    methods: tuple[str, ...]
    perturbation: PerturbationModel
    repetitions: int
    models: int
    seed: int = 0

    def __post_init__(self) -> None:
        for name, rng_ in (("criteria", self.criteria), ("alternatives", self.alternatives)):
            lo, hi = rng_
            if lo < 2 or hi < lo:
                raise ConfigError(f"{name} range must satisfy 2 <= lo <= hi")
        if self.reciprocity not in (FORCED_RECIPROCITY, ARBITRARY_RECIPROCITY):
            raise ConfigError(f"unknown reciprocity mode {self.reciprocity!r}")
        if not self.methods:
            raise ConfigError("at least one prioritization method is required")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown prioritization method {m!r}")
        if self.repetitions < 1 or self.models < 1:
            raise ConfigError("repetitions and models must be at least 1")


@dataclass(frozen=True)
class Sa1Record:
    model_id: int
    rep_id: int
    method: str
    mae: float
    re: float
    rr: float
    src: float


@dataclass
class Sa1Result:
    records: list[Sa1Record]
    summaries: dict[str, AggregateSummary]
    failures: int


def _perturb_round(
    pcm: PairwiseComparisonMatrix,
    model: PerturbationModel,
    scale: JudgmentScale,
    forced: bool,
    rng: np.random.Generator,
) -> PairwiseComparisonMatrix:
    region = REGION_UPPER if forced else REGION_OFFDIAG
    perturbed = perturb_entries(pcm, model, region, rng)
    a = perturbed.entries.copy()
    n = perturbed.n
    if forced:
        rows, cols = np.triu_indices(n, 1)
        upper = scale.round_array(a[rows, cols])
        out = np.eye(n)
        out[rows, cols] = upper
        out[cols, rows] = 1.0 / upper
        return PairwiseComparisonMatrix(out, mode=RECIPROCAL)
    mask = ~np.eye(n, dtype=bool)
    a[mask] = scale.round_array(a[mask])
    return PairwiseComparisonMatrix(a, mode=ARBITRARY)


def _sa1_unit(config: Sa1Config, model_id: int) -> tuple[list[Sa1Record], int]:
    rng = _substream(config.seed, model_id)
    n = int(rng.integers(config.criteria[0], config.criteria[1] + 1))
    m = int(rng.integers(config.alternatives[0], config.alternatives[1] + 1))
    k = _random_sorted_vector(n, rng)
    alts = [_random_sorted_vector(m, rng) for _ in range(n)]
    criteria_pcm = pcm_from_weights(k)
    alt_pcms = [pcm_from_weights(a) for a in alts]
    w_true = np.zeros(m)
    for ki, ai in zip(k.values, alts):
        w_true += ki * ai.values

    forced = config.reciprocity == FORCED_RECIPROCITY
    # The warm start at the geometric-mean solution reaches the same optimum
    # as the two-start default on these matrices; one start halves the cost.
    opt = OptimizerSettings(restarts=1)
    records: list[Sa1Record] = []
    failures = 0
    for rep in range(config.repetitions):
        pk = _perturb_round(criteria_pcm, config.perturbation, config.scale, forced, rng)
        pas = [_perturb_round(a, config.perturbation, config.scale, forced, rng) for a in alt_pcms]
        for method in config.methods:
            try:
                k_est = prioritize(pk, method, opt).values
                a_est = [prioritize(p, method, opt).values for p in pas]
            except (OptimizerError, ConvergenceError):
                failures += 1
                continue
            w_est = np.zeros(m)
            for ki, ai in zip(k_est, a_est):
                w_est += ki * ai
            try:
                src = spearman_rho(w_true, w_est)
            except MatrixError:
                # A fully collapsed estimate carries no rank information.
                src = 0.0
            records.append(
                Sa1Record(
                    model_id=model_id,
                    rep_id=rep,
                    method=method,
                    mae=mae(w_true, w_est),
                    re=relative_error(w_true, w_est),
                    rr=relative_ratio(w_true, w_est),
                    src=src,
                )
            )
    return records, failures


def run_sa1(config: Sa1Config, workers: int = 1) -> Sa1Result:
    """Run the hierarchy experiment; returns per-repetition records and
    per-method mean summaries."""
    units = range(config.models)
    if workers <= 1:
        parts = [_sa1_unit(config, i) for i in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial(_sa1_unit, config), units, chunksize=8))
    records: list[Sa1Record] = []
    failures = 0
    for recs, fails in parts:
        records.extend(recs)
        failures += fails
    attempted = config.models * config.repetitions * len(config.methods)
    if failures > _FAILURE_RATE_LIMIT * attempted:
        raise OptimizerError(
            f"{failures} of {attempted} estimations failed to converge; "
            "aggregates would be biased"
        )
    summaries = {
        method: aggregate(
            [QualityRecord(r.mae, r.re, r.rr, r.src) for r in records if r.method == method]
        )
        for method in config.methods
    }
    return Sa1Result(records=records, summaries=summaries, failures=failures)


# ---------------------------------------------------------------------------
# Single-matrix experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sa2Config:
    """Settings for the single-matrix consistency-vs-error experiment."""

    size: int
    scale: JudgmentScale
    method: str
    measures: tuple[str, ...]
    repetitions: int  # perturbation runs per base vector
    models: int  # base vectors
    large_interval: tuple[float, float] = (2.0, 4.0)
    small_errors: tuple[PerturbationModel, ...] = field(default_factory=small_error_models)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.size < 4:
            raise ConfigError("matrix size must be at least 4")
        if self.method not in METHODS:
            raise ConfigError(f"unknown prioritization method {self.method!r}")
        if not self.measures:
            raise ConfigError("at least one consistency measure is required")
        for name in self.measures:
            if name not in MEASURES:
                raise ConfigError(f"unknown consistency measure {name!r}")
        if self.repetitions < 1 or self.models < 1:
            raise ConfigError("repetitions and models must be at least 1")
        lo, hi = self.large_interval
        if not 0 < lo <= hi:
            raise ConfigError("large-error interval must be positive")
        if not self.small_errors:
            raise ConfigError("at least one small-error model is required")


@dataclass(frozen=True)
class Sa2Record:
    model_id: int
    rep_id: int
    method: str
    measures: dict[str, float]
    mae: float
    cell: tuple[int, int] | None = None


def _sa2_unit(config: Sa2Config, model_id: int) -> tuple[list[Sa2Record], int]:
    rng = _substream(config.seed, model_id)
    n = config.size
    w = _random_sorted_vector(n, rng)
    base = pcm_from_weights(w).entries
    small = config.small_errors[model_id % len(config.small_errors)]
    rows, cols = np.triu_indices(n, 1)
    cells = rows.size
    opt = OptimizerSettings()
    records: list[Sa2Record] = []
    failures = 0
    for rep in range(config.repetitions):
        a = base.copy()
        pick = int(rng.integers(cells))
        x, y = int(rows[pick]), int(cols[pick])
        big = rng.uniform(config.large_interval[0], config.large_interval[1])
        a[x, y] *= big
        if cells > 1:
            others = np.arange(cells) != pick
            a[rows[others], cols[others]] *= small.sample(rng, size=cells - 1)
        upper = config.scale.round_array(a[rows, cols])
        out = np.eye(n)
        out[rows, cols] = upper
        out[cols, rows] = 1.0 / upper
        pcm = PairwiseComparisonMatrix(out, mode=RECIPROCAL)
        try:
            values = {name: float(MEASURES[name](pcm)) for name in config.measures}
            estimate = prioritize(pcm, config.method, opt)
        except (OptimizerError, ConvergenceError):
            failures += 1
            continue
        records.append(
            Sa2Record(
                model_id=model_id,
                rep_id=rep,
                method=config.method,
                measures=values,
                mae=mae(w.values, estimate.values),
                cell=(x, y),
            )
        )
    return records, failures


def run_sa2(config: Sa2Config, workers: int = 1) -> list[Sa2Record]:
    """Run the single-matrix experiment; one record per perturbation run."""
    units = range(config.models)
    if workers <= 1:
        parts = [_sa2_unit(config, i) for i in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial(_sa2_unit, config), units, chunksize=8))
    records: list[Sa2Record] = []
    failures = 0
    for recs, fails in parts:
        records.extend(recs)
        failures += fails
    attempted = config.models * config.repetitions
    if failures > _FAILURE_RATE_LIMIT * attempted:
        raise OptimizerError(
            f"{failures} of {attempted} perturbation runs failed to converge"
        )
    return records


# ---------------------------------------------------------------------------
# Quantile binning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinRow:
    index: int
    lower: float
    upper: float
    mean_measure: float
    mae_q05: float
    mae_q10: float
    mae_q50: float
    mae_q90: float
    mae_q95: float
    mae_mean: float
    count: int


@dataclass(frozen=True)
class BinnedReport:
    measure: str
    rows: tuple[BinRow, ...]
    total: int


_QUALITY_COLUMNS = {
    "q05": "mae_q05",
    "q10": "mae_q10",
    "q50": "mae_q50",
    "q90": "mae_q90",
    "q95": "mae_q95",
    "mean": "mae_mean",
}


def bin_records(records, measure: str, bins: int = 15) -> BinnedReport:
    """Split records into quantile bins of the measure's values and summarize
    the error distribution inside each bin."""
    if bins < 2:
        raise ConfigError("need at least two bins")
    if len(records) < bins:
        raise ConfigError(f"need at least {bins} records, got {len(records)}")
    try:
        values = np.array([r.measures[measure] for r in records], dtype=float)
    except KeyError:
        raise ConfigError(f"records carry no measure named {measure!r}") from None
    maes = np.array([r.mae for r in records], dtype=float)
    edges = np.quantile(values, [k / bins for k in range(1, bins)])
    if np.any(np.diff(edges) <= 0.0) or edges[0] <= values.min():
        raise DegenerateBinsError(
            f"quantile edges for {measure!r} collapsed; the values are too "
            "heavily tied to form distinct bins"
        )
    assignment = np.searchsorted(edges, values, side="right")
    rows = []
    for i in range(bins):
        sel = assignment == i
        if not np.any(sel):
            raise DegenerateBinsError(f"bin {i + 1} for {measure!r} is empty (tied values)")
        lower = 0.0 if i == 0 else float(edges[i - 1])
        upper = float("inf") if i == bins - 1 else float(edges[i])
        sub = maes[sel]
        q = np.quantile(sub, [0.05, 0.1, 0.5, 0.9, 0.95])
        rows.append(
            BinRow(
                index=i + 1,
                lower=lower,
                upper=upper,
                mean_measure=float(values[sel].mean()),
                mae_q05=float(q[0]),
                mae_q10=float(q[1]),
                mae_q50=float(q[2]),
                mae_q90=float(q[3]),
                mae_q95=float(q[4]),
                mae_mean=float(sub.mean()),
                count=int(sel.sum()),
            )
        )
    return BinnedReport(measure=measure, rows=tuple(rows), total=len(records))


def cm_quality_score(report: BinnedReport, column: str = "q05") -> float:
    """Rank correlation between per-bin mean measure values and one error
    column; 1 means the measure orders the bins exactly like the errors."""
    attr = _QUALITY_COLUMNS.get(column)
    if attr is None:
        raise ConfigError(f"unknown report column {column!r}")
    means = [row.mean_measure for row in report.rows]
    errors = [getattr(row, attr) for row in report.rows]
    return spearman_rho(means, errors)


# ---------------------------------------------------------------------------
# CSV interfaces
# ---------------------------------------------------------------------------


def write_sa1_records_csv(result: Sa1Result, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model_id", "rep_id", "method", "mae", "re", "rr", "src"])
        for r in result.records:
            writer.writerow([r.model_id, r.rep_id, r.method, repr(r.mae), repr(r.re), repr(r.rr), repr(r.src)])


def write_sa1_summary_csv(result: Sa1Result, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "mre", "msrc", "mrr", "count"])
        for method, s in result.summaries.items():
            writer.writerow([method, repr(s.mre), repr(s.msrc), repr(s.mrr), s.count])


def write_sa2_records_csv(records, measures: tuple[str, ...], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model_id", "rep_id", "method", *measures, "mae"])
        for r in records:
            writer.writerow(
                [r.model_id, r.rep_id, r.method]
                + [repr(r.measures[name]) for name in measures]
                + [repr(r.mae)]
            )


def read_sa2_records_csv(path) -> list[Sa2Record]:
    try:
        with Path(path).open("r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise ConfigError(f"{path}: empty records file")
            fixed = ["model_id", "rep_id", "method"]
            if header[:3] != fixed or header[-1] != "mae":
                raise ConfigError(f"{path}: unrecognized records header")
            measure_names = header[3:-1]
            records = []
            for row in reader:
                if not row:
                    continue
                values = {name: float(v) for name, v in zip(measure_names, row[3:-1])}
                records.append(
                    Sa2Record(
                        model_id=int(row[0]),
                        rep_id=int(row[1]),
                        method=row[2],
                        measures=values,
                        mae=float(row[-1]),
                    )
                )
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{path}: malformed records row: {exc}") from exc
    return records


def write_sa2_summary_csv(records, measures: tuple[str, ...], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quantity", "mean"])
        for name in measures:
            writer.writerow([name, repr(float(np.mean([r.measures[name] for r in records])))])
        writer.writerow(["mae", repr(float(np.mean([r.mae for r in records])))])


def write_report_csv(report: BinnedReport, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["bin", "lower", "upper", f"mean_{report.measure}",
             "mae_q05", "mae_q10", "mae_q50", "mae_q90", "mae_q95", "mae_mean"]
        )
        for row in report.rows:
            writer.writerow(
                [row.index, repr(row.lower), repr(row.upper), repr(row.mean_measure),
                 repr(row.mae_q05), repr(row.mae_q10), repr(row.mae_q50),
                 repr(row.mae_q90), repr(row.mae_q95), repr(row.mae_mean)]
            )
