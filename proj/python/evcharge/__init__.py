"""Online EV charging with optimistic mirror descent and regret accounting."""

from ._core import (
    BoundCheck,
    Error,
    Evaluation,
    FeasibleSet,
    InvalidSet,
    LengthMismatch,
    ParseError,
    ScenarioConfig,
    UnknownPreset,
    ValidationError,
    budget_multiplier,
    evaluate,
    figure_presets,
    load_config,
    parse_config,
    preset_dir,
    project,
    run,
)

__all__ = [
    "BoundCheck",
    "Error",
    "Evaluation",
    "FeasibleSet",
    "InvalidSet",
    "LengthMismatch",
    "ParseError",
    "ScenarioConfig",
    "UnknownPreset",
    "ValidationError",
    "budget_multiplier",
    "evaluate",
    "figure_presets",
    "load_config",
    "parse_config",
    "preset_dir",
    "project",
    "run",
]
