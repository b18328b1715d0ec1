"""Ideological sublations: a dialectic population-based optimizer.

The package bundles the optimizer, a DE/rand/1/bin baseline, the benchmark
functions it was evaluated on, two application problems (sparse
reconstruction and antenna selection) and a small experiment harness.
"""

from .metrics import MetricKind, distance, pairwise_distance
from .problem import ConfigurationError, ObjectiveProblem
from .optimizer import (
    ISConfig,
    Population,
    StepSizeParams,
    TargetKind,
    Thesis,
    ThinkingMode,
    TrialRecord,
    alternative_antithesis,
    assign_antitheses,
    practical_antithesis,
    resolution_moment,
    run,
    sample_step_vector,
    speculative_antithesis,
    understanding_moment,
)
from .de import DEConfig, de_run
from . import antenna, benchmarks, harness, sparse

__all__ = [
    "MetricKind",
    "distance",
    "pairwise_distance",
    "ConfigurationError",
    "ObjectiveProblem",
    "ISConfig",
    "Population",
    "StepSizeParams",
    "TargetKind",
    "Thesis",
    "ThinkingMode",
    "TrialRecord",
    "alternative_antithesis",
    "assign_antitheses",
    "practical_antithesis",
    "resolution_moment",
    "run",
    "sample_step_vector",
    "speculative_antithesis",
    "understanding_moment",
    "DEConfig",
    "de_run",
    "benchmarks",
    "sparse",
    "antenna",
    "harness",
]

__version__ = "0.1.0"
