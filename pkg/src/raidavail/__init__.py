"""Availability of backed-up RAID arrays in the presence of wrong disk
replacement: Markov models, a Monte-Carlo reference simulator, and
equal-capacity configuration comparison."""

from .capacity import ArrayGeometry, ComparisonPlan, plan_equivalent, subsystem_availability
from .ctmc import Ctmc, SteadyState, availability, build, downtime_minutes_per_year, steady_state
from .distributions import FailureDistribution
from .models import (
    RaidParameters,
    build_model,
    build_raid1,
    build_raid5_autofailover,
    build_raid5_conventional,
    classify_states,
)
from .montecarlo import SimConfig, SimulationResult, confidence_interval, run

__all__ = [
    "ArrayGeometry", "ComparisonPlan", "Ctmc", "FailureDistribution", "RaidParameters",
    "SimConfig", "SimulationResult", "SteadyState", "availability", "build", "build_model",
    "build_raid1", "build_raid5_autofailover", "build_raid5_conventional", "classify_states",
    "confidence_interval", "downtime_minutes_per_year", "plan_equivalent", "run",
    "steady_state", "subsystem_availability",
]
