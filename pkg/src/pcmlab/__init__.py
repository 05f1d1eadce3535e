"""pcmlab: pairwise-comparison-matrix laboratory.

Priority vector estimation, consistency measurement, and Monte Carlo
experiments on the quality of the estimation.
"""

from .consistency import (
    MEASURES,
    Triad,
    TriadSet,
    a_lti,
    a_lti1,
    a_lti2,
    a_ti,
    ci_llsm,
    ci_lua,
    ci_rev,
    ci_srdm,
    cm_lti2,
    enumerate_triads,
    grzybowski_a,
    k_ti,
    koczkodaj_k,
    lti,
    triad_ti,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateBinsError,
    MatrixError,
    MeasureDomainError,
    OptimizerError,
    PcmLabError,
)
from .io import format_matrix, parse_matrix, read_matrix, write_matrix
from .matrix import (
    ARBITRARY,
    RECIPROCAL,
    REGION_OFFDIAG,
    REGION_UPPER,
    JudgmentScale,
    PairwiseComparisonMatrix,
    PriorityVector,
    enforce_reciprocity,
    is_consistent,
    is_ordinally_transitive,
    parse_scale,
    pcm_from_weights,
    perturb_entries,
    round_to_scale,
)
from .metrics import (
    T_CRITICAL,
    AggregateSummary,
    QualityRecord,
    aggregate,
    empirical_quantile,
    mae,
    rank_with_ties,
    relative_error,
    relative_ratio,
    significance_level,
    spearman_rho,
    t_statistic,
)
from .perturb import PerturbationModel, small_error_models
from .prioritize import (
    METHODS,
    OptimizerSettings,
    llsm_priority,
    lua_objective,
    lua_priority,
    prioritize,
    rev_priority,
    sncs_priority,
    srdm_objective,
    srdm_priority,
)
from .simulate import (
    BinnedReport,
    BinRow,
    Sa1Config,
    Sa1Record,
    Sa1Result,
    Sa2Config,
    Sa2Record,
    bin_records,
    cm_quality_score,
    random_priority_vector,
    run_sa1,
    run_sa2,
    sample_factor,
)

__version__ = "0.1.0"
