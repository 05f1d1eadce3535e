"""Named experiment configurations for one-flag reproduction runs."""

from __future__ import annotations

from .errors import ConfigError
from .matrix import JudgmentScale
from .perturb import PerturbationModel, small_error_models
from .prioritize import METHODS
from .simulate import FORCED_RECIPROCITY, Sa1Config, Sa2Config


def sa1_preset(name: str) -> Sa1Config:
    if name == "table2-uniform":
        return Sa1Config(
            criteria=(4, 4),
            alternatives=(4, 4),
            scale=JudgmentScale.geometric(),
            reciprocity=FORCED_RECIPROCITY,
            methods=METHODS,
            perturbation=PerturbationModel.uniform(0.01, 1.99),
            repetitions=15,
            models=2000,
            seed=0,
        )
    if name == "table2-gamma":
        return Sa1Config(
            criteria=(4, 4),
            alternatives=(4, 4),
            scale=JudgmentScale.geometric(),
            reciprocity=FORCED_RECIPROCITY,
            methods=METHODS,
            perturbation=PerturbationModel.gamma(1.0),
            repetitions=15,
            models=2000,
            seed=0,
        )
    if name == "table3-fsnedecor":
        return Sa1Config(
            criteria=(3, 7),
            alternatives=(3, 7),
            scale=JudgmentScale.geometric(),
            reciprocity=FORCED_RECIPROCITY,
            methods=METHODS,
            perturbation=PerturbationModel.fisher_snedecor(14, 40),
            repetitions=100,
            models=1000,
            seed=0,
        )
    raise ConfigError(f"unknown sa1 preset {name!r}")


def sa2_preset(name: str) -> Sa2Config:
    if name == "table8-default":
        return Sa2Config(
            size=4,
            scale=JudgmentScale.saaty(),
            method="llsm",
            measures=("ci_rev", "ci_llsm", "ci_lua", "ci_srdm", "k_ti", "a_ti",
                      "a_lti1", "a_lti2", "cm_lti2"),
            repetitions=20,
            models=500,
            large_interval=(2.0, 4.0),
            small_errors=small_error_models(),
            seed=0,
        )
    raise ConfigError(f"unknown sa2 preset {name!r}")


SA1_PRESETS = ("table2-uniform", "table2-gamma", "table3-fsnedecor")
SA2_PRESETS = ("table8-default",)
