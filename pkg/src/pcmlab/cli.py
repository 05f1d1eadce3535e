"""Command-line front end.

Commands: prioritize, consistency, sa1, sa2, report, validate.
Exit codes: 0 success, 1 validation failure, 2 bad input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .consistency import MEASURES
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateBinsError,
    MatrixError,
    MeasureDomainError,
    OptimizerError,
)
from .io import read_matrix
from .matrix import (
    ARBITRARY,
    RECIPROCAL,
    JudgmentScale,
    PairwiseComparisonMatrix,
    enforce_reciprocity,
    parse_scale,
)
from .perturb import PerturbationModel, small_error_models
from .presets import SA1_PRESETS, SA2_PRESETS, sa1_preset, sa2_preset
from .prioritize import METHODS, prioritize, rev_priority
from .simulate import (
    Sa1Config,
    Sa2Config,
    bin_records,
    cm_quality_score,
    read_sa2_records_csv,
    run_sa1,
    run_sa2,
    write_report_csv,
    write_sa1_records_csv,
    write_sa1_summary_csv,
    write_sa2_records_csv,
    write_sa2_summary_csv,
)
from .validate import run_checks

_USER_ERRORS = (MatrixError, ConfigError, DegenerateBinsError, MeasureDomainError)
_NUMERIC_ERRORS = (ConvergenceError, OptimizerError)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# key=value configuration handling
# ---------------------------------------------------------------------------


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        out[key.strip().lower()] = value.strip()
    return out


def _parse_int(kv: dict, key: str) -> int:
    try:
        return int(kv[key])
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {kv[key]!r}") from None


def _parse_range(text: str, key: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        v = int(text)
        return v, v
    except ValueError:
        raise ConfigError(f"{key}: expected N or LO:HI, got {text!r}") from None


def _parse_interval(text: str, key: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":", 1)
        return float(lo), float(hi)
    except ValueError:
        raise ConfigError(f"{key}: expected LO:HI, got {text!r}") from None


def _parse_float(kv: dict, key: str) -> float:
    try:
        return float(kv[key])
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {kv[key]!r}") from None


def _build_perturbation(kv: dict[str, str]) -> PerturbationModel:
    family = kv.get("distribution", "uniform").lower()
    support = None
    if "support" in kv and kv["support"].lower() != "none":
        support = _parse_interval(kv["support"], "support")
    draw = kv.get("draw", "per-entry")
    match_mean = None
    if "match_mean" in kv and kv["match_mean"].lower() != "none":
        match_mean = _parse_float(kv, "match_mean")
    if family == "uniform":
        if "low" not in kv or "high" not in kv:
            raise ConfigError("uniform distribution needs low and high")
        return PerturbationModel.uniform(_parse_float(kv, "low"), _parse_float(kv, "high"), draw)
    if family == "constant":
        return PerturbationModel.constant(_parse_float(kv, "value"), draw)
    if family == "gamma":
        if "shape" not in kv:
            raise ConfigError("gamma distribution needs a shape")
        scale = _parse_float(kv, "dist_scale") if "dist_scale" in kv else None
        return PerturbationModel.gamma(
            _parse_float(kv, "shape"), scale, support, match_mean, draw
        )
    if family == "lognormal":
        if "sigma" not in kv:
            raise ConfigError("lognormal distribution needs sigma")
        return PerturbationModel.lognormal(
            _parse_float(kv, "sigma"), None, support, match_mean, draw
        )
    if family == "truncnorm":
        if "sd" not in kv or support is None:
            raise ConfigError("truncnorm distribution needs sd and support")
        return PerturbationModel.truncated_normal(
            _parse_float(kv, "sd"), support, match_mean if match_mean is not None else 1.0, draw
        )
    if family in ("fisher-snedecor", "fisher_snedecor", "fsnedecor"):
        if "d1" not in kv or "d2" not in kv:
            raise ConfigError("fisher-snedecor distribution needs d1 and d2")
        return PerturbationModel.fisher_snedecor(_parse_float(kv, "d1"), _parse_float(kv, "d2"), draw)
    raise ConfigError(f"distribution: unknown family {family!r}")


def _perturbation_kv(model: PerturbationModel) -> dict[str, str]:
    kv = {"distribution": model.family, "draw": model.draw_mode}
    if model.family == "uniform":
        kv["low"], kv["high"] = repr(model.params[0]), repr(model.params[1])
    elif model.family == "gamma":
        kv["shape"], kv["dist_scale"] = repr(model.params[0]), repr(model.params[1])
    elif model.family == "lognormal":
        kv["sigma"] = repr(model.params[1])
        kv["mu"] = repr(model.params[0])
    elif model.family == "truncnorm":
        kv["sd"] = repr(model.params[1])
        kv["loc"] = repr(model.params[0])
    else:
        kv["d1"], kv["d2"] = repr(model.params[0]), repr(model.params[1])
    if model.support is not None and model.family != "uniform":
        kv["support"] = f"{model.support[0]!r}:{model.support[1]!r}"
    return kv


def sa1_config_from_kv(kv: dict[str, str], base: Sa1Config | None = None) -> Sa1Config:
    merged = sa1_config_to_kv(base) if base is not None else {}
    merged.update(kv)
    kv = merged
    required = ("criteria", "alternatives", "scale", "reciprocity", "methods",
                "repetitions", "models")
    for key in required:
        if key not in kv:
            raise ConfigError(f"{key}: missing required key")
    methods = tuple(m.strip() for m in kv["methods"].split(",") if m.strip())
    return Sa1Config(
        criteria=_parse_range(kv["criteria"], "criteria"),
        alternatives=_parse_range(kv["alternatives"], "alternatives"),
        scale=parse_scale(kv["scale"]),
        reciprocity=kv["reciprocity"],
        methods=methods,
        perturbation=_build_perturbation(kv),
        repetitions=_parse_int(kv, "repetitions"),
        models=_parse_int(kv, "models"),
        seed=_parse_int(kv, "seed") if "seed" in kv else 0,
    )


def sa1_config_to_kv(config: Sa1Config) -> dict[str, str]:
    kv = {
        "criteria": f"{config.criteria[0]}:{config.criteria[1]}",
        "alternatives": f"{config.alternatives[0]}:{config.alternatives[1]}",
        "scale": str(config.scale),
        "reciprocity": config.reciprocity,
        "methods": ",".join(config.methods),
        "repetitions": str(config.repetitions),
        "models": str(config.models),
        "seed": str(config.seed),
    }
    kv.update(_perturbation_kv(config.perturbation))
    return kv


_SMALL_ERROR_CHOICES = {
    "cycle": small_error_models,
    "uniform": lambda: (PerturbationModel.uniform(0.5, 1.5),),
    "constant": lambda: (PerturbationModel.constant(1.0),),
}


def sa2_config_from_kv(kv: dict[str, str], base: Sa2Config | None = None) -> Sa2Config:
    merged = sa2_config_to_kv(base) if base is not None else {}
    merged.update(kv)
    kv = merged
    for key in ("size", "scale", "method", "measures", "repetitions", "models"):
        if key not in kv:
            raise ConfigError(f"{key}: missing required key")
    small_name = kv.get("small", "cycle").lower()
    if small_name not in _SMALL_ERROR_CHOICES:
        raise ConfigError(f"small: expected one of {sorted(_SMALL_ERROR_CHOICES)}")
    measures = tuple(m.strip() for m in kv["measures"].split(",") if m.strip())
    return Sa2Config(
        size=_parse_int(kv, "size"),
        scale=parse_scale(kv["scale"]),
        method=kv["method"],
        measures=measures,
        repetitions=_parse_int(kv, "repetitions"),
        models=_parse_int(kv, "models"),
        large_interval=_parse_interval(kv.get("large", "2:4"), "large"),
        small_errors=_SMALL_ERROR_CHOICES[small_name](),
        seed=_parse_int(kv, "seed") if "seed" in kv else 0,
    )


def sa2_config_to_kv(config: Sa2Config) -> dict[str, str]:
    if config.small_errors == small_error_models():
        small = "cycle"
    elif config.small_errors == (PerturbationModel.uniform(0.5, 1.5),):
        small = "uniform"
    elif config.small_errors == (PerturbationModel.constant(1.0),):
        small = "constant"
    else:
        small = "custom"
    return {
        "size": str(config.size),
        "scale": str(config.scale),
        "method": config.method,
        "measures": ",".join(config.measures),
        "repetitions": str(config.repetitions),
        "models": str(config.models),
        "large": f"{config.large_interval[0]!r}:{config.large_interval[1]!r}",
        "small": small,
        "seed": str(config.seed),
    }


def _resolve_seed(args, kv: dict[str, str]) -> int | None:
    """--seed beats config keys beats PCMLAB_SEED; None keeps preset default."""
    if args.seed is not None:
        return args.seed
    if "seed" in kv:
        return int(kv["seed"])
    env = os.environ.get("PCMLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"PCMLAB_SEED: expected an integer, got {env!r}") from None
    return None


def _gather_overrides(args) -> dict[str, str]:
    kv: dict[str, str] = {}
    if args.config:
        try:
            kv.update(parse_kv_text(Path(args.config).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        kv[key.strip().lower()] = value.strip()
    return kv


def _write_manifest(path: Path, command: str, config_kv: dict[str, str], seed: int,
                    outputs: list[str], started: float) -> None:
    manifest = {
        "command": command,
        "config": config_kv,
        "seed": seed,
        "version": __version__,
        "outputs": outputs,
        "duration_seconds": round(time.perf_counter() - started, 3),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _load_matrix(args) -> PairwiseComparisonMatrix:
    m = read_matrix(args.matrix, mode=None)
    if args.scale:
        scale = parse_scale(args.scale)
        a = m.entries.copy()
        mask = ~np.eye(m.n, dtype=bool)
        a[mask] = scale.round_array(a[mask])
        m = PairwiseComparisonMatrix(a)
    if args.mode == RECIPROCAL:
        m = enforce_reciprocity(m)
    elif args.mode == ARBITRARY:
        m = PairwiseComparisonMatrix(m.entries, mode=ARBITRARY)
    return m


def cmd_prioritize(args) -> int:
    m = _load_matrix(args)
    if args.method == "rev":
        vector, lam = rev_priority(m)
        print(" ".join(f"{x:.6f}" for x in vector.values))
        print(f"lambda_max {lam:.6f}")
    else:
        vector = prioritize(m, args.method)
        print(" ".join(f"{x:.6f}" for x in vector.values))
    return 0


def cmd_consistency(args) -> int:
    m = _load_matrix(args)
    names = list(MEASURES) if not args.measures else [
        s.strip() for s in args.measures.split(",") if s.strip()
    ]
    for name in names:
        if name not in MEASURES:
            raise ConfigError(f"unknown measure {name!r} (choose from {', '.join(MEASURES)})")
    for name in names:
        if name == "k_ti" and m.mode != RECIPROCAL:
            print(f"{name} not defined (reciprocal matrices only)")
            continue
        value = MEASURES[name](m)
        print(f"{name} {value:.6f}")
    return 0


def cmd_sa1(args) -> int:
    started = time.perf_counter()
    overrides = _gather_overrides(args)
    base = sa1_preset(args.preset) if args.preset else None
    if base is None and not overrides:
        raise ConfigError("sa1 needs --preset or --config")
    seed = _resolve_seed(args, overrides)
    if seed is not None:
        overrides["seed"] = str(seed)
    config = sa1_config_from_kv(overrides, base)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_sa1(config, workers=args.workers)
    records_path = out / "records.csv"
    summary_path = out / "summary.csv"
    write_sa1_records_csv(result, records_path)
    write_sa1_summary_csv(result, summary_path)
    _write_manifest(out / "manifest.json", "sa1", sa1_config_to_kv(config), config.seed,
                    [records_path.name, summary_path.name], started)
    for method, s in result.summaries.items():
        print(f"{method} mre={s.mre:.6f} msrc={s.msrc:.6f} mrr={s.mrr:.6f} n={s.count}")
    if result.failures:
        print(f"warning: {result.failures} estimations failed and were excluded", file=sys.stderr)
    return 0


def cmd_sa2(args) -> int:
    started = time.perf_counter()
    overrides = _gather_overrides(args)
    base = sa2_preset(args.preset) if args.preset else None
    if base is None and not overrides:
        raise ConfigError("sa2 needs --preset or --config")
    seed = _resolve_seed(args, overrides)
    if seed is not None:
        overrides["seed"] = str(seed)
    config = sa2_config_from_kv(overrides, base)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = run_sa2(config, workers=args.workers)
    records_path = out / "records.csv"
    summary_path = out / "summary.csv"
    write_sa2_records_csv(records, config.measures, records_path)
    write_sa2_summary_csv(records, config.measures, summary_path)
    _write_manifest(out / "manifest.json", "sa2", sa2_config_to_kv(config), config.seed,
                    [records_path.name, summary_path.name], started)
    print(f"wrote {len(records)} records to {records_path}")
    return 0


def cmd_report(args) -> int:
    started = time.perf_counter()
    records = read_sa2_records_csv(args.records)
    report = bin_records(records, args.measure, bins=args.bins)
    out = Path(args.out) if args.out else Path(args.records).parent / f"report_{args.measure}.csv"
    write_report_csv(report, out)
    for column in ("q05", "q10", "q50", "q90", "q95", "mean"):
        print(f"cm_quality_score {column} {cm_quality_score(report, column):.6f}")
    _write_manifest(Path(str(out) + ".manifest.json"), "report",
                    {"records": str(args.records), "measure": args.measure,
                     "bins": str(args.bins)},
                    0, [out.name], started)
    print(f"wrote {out}")
    return 0


def cmd_validate(args) -> int:
    results = run_checks()
    failed = [r for r in results if not r[1]]
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmlab",
        description="Pairwise-comparison-matrix laboratory",
    )
    parser.add_argument("--version", action="version", version=f"pcmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prioritize", help="derive a priority vector from a matrix file")
    p.add_argument("matrix", help="CSV matrix file (decimal or p/q entries)")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--scale", help="round entries to a scale first: saaty, geometric, numeric:N")
    p.add_argument("--mode", choices=(RECIPROCAL, ARBITRARY),
                   help="force reciprocity handling instead of inferring it")
    p.set_defaults(func=cmd_prioritize)

    p = sub.add_parser("consistency", help="print consistency measures for a matrix file")
    p.add_argument("matrix")
    p.add_argument("--measures", help=f"comma list from: {', '.join(MEASURES)} (default all)")
    p.add_argument("--scale", help="round entries to a scale first")
    p.add_argument("--mode", choices=(RECIPROCAL, ARBITRARY))
    p.set_defaults(func=cmd_consistency)

    for name, presets, fn in (("sa1", SA1_PRESETS, cmd_sa1), ("sa2", SA2_PRESETS, cmd_sa2)):
        p = sub.add_parser(name, help=f"run the {name} simulation")
        p.add_argument("--preset", choices=presets)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a single configuration key (repeatable)")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.set_defaults(func=fn)

    p = sub.add_parser("report", help="bin simulation records by a consistency measure")
    p.add_argument("records", help="records.csv produced by the sa2 command")
    p.add_argument("--measure", required=True)
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--out", help="report CSV path (default: records dir)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("validate", help="run the deterministic golden checks")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        return _fail(str(exc), 2)
    except _NUMERIC_ERRORS as exc:
        return _fail(str(exc), 3)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
