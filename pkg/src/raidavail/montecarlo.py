"""Monte-Carlo availability of a single backed-up array.

One iteration walks an array from time 0 to ``mission_time``:

* every disk draws a time to failure;
* the first failure schedules a repair (exponential at ``mu_df`` or a fixed
  duration);
* a second failure before that repair completes is a data loss, and the
  array is unavailable while the backup is restored (rate ``mu_ddf``);
* otherwise, with probability ``hep`` the operator pulls a working disk. The
  array is unavailable until the error is undone (rate ``mu_he``). Every undo
  attempt can fail again with probability ``hep``. If the pulled disk
  crashes first (rate ``lambda_crash``), the data is restored from backup.

After a backup restore or an undone error every disk draws a fresh lifetime.
The availability estimate is total uptime over total simulated time, with a
Student-t confidence interval over the per-iteration uptime fractions.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import _kernel
from .distributions import FailureDistribution
from .models import RaidParameters

DEFAULT_MISSION_TIME = 87600.0
DEFAULT_ITERATIONS = 100_000
DEFAULT_SEED = 20190601
MAX_SEED = 2**64 - 1

CAUSES = ("double_failure", "human_error")


class InvalidSimConfig(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    """Run settings.

    ``repair_hours`` of ``None`` means exponential repair at ``mu_df``; a
    positive value fixes every repair at that many hours. ``ttf_model`` of
    ``None`` means exponential lifetimes at the parameters' ``lam``.
    """

    mission_time: float = DEFAULT_MISSION_TIME
    iterations: int = DEFAULT_ITERATIONS
    confidence_level: float = 0.99
    master_seed: int = DEFAULT_SEED
    repair_hours: float | None = None
    ttf_model: FailureDistribution | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mission_time", float(self.mission_time))
        if not (self.mission_time > 0 and math.isfinite(self.mission_time)):
            raise InvalidSimConfig(f"mission_time must be > 0, got {self.mission_time!r}")
        if int(self.iterations) != self.iterations or self.iterations < 2:
            raise InvalidSimConfig(f"iterations must be an integer >= 2, got {self.iterations!r}")
        if not 0.0 < self.confidence_level < 1.0:
            raise InvalidSimConfig(f"confidence_level must lie in (0, 1), got {self.confidence_level!r}")
        if int(self.master_seed) != self.master_seed or not 0 <= self.master_seed <= MAX_SEED:
            raise InvalidSimConfig(f"master_seed must be an integer in [0, 2**64), got {self.master_seed!r}")
        if self.repair_hours is not None and not self.repair_hours > 0:
            raise InvalidSimConfig(f"repair_hours must be > 0, got {self.repair_hours!r}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise InvalidSimConfig(f"workers must be an integer >= 1, got {self.workers!r}")


@dataclass(frozen=True)
class SimulationResult:
    availability_mean: float
    unavailability_mean: float
    ci_half_width: float
    downtime_by_cause: dict[str, float]
    iterations_run: int
    mission_time: float
    confidence_level: float
    per_iteration_unavailability: np.ndarray = field(repr=False, compare=False)

    @property
    def total_downtime(self) -> float:
        return math.fsum(self.downtime_by_cause.values())

    def __eq__(self, other):
        if not isinstance(other, SimulationResult):
            return NotImplemented
        return (
            self.availability_mean == other.availability_mean
            and self.unavailability_mean == other.unavailability_mean
            and self.ci_half_width == other.ci_half_width
            and self.downtime_by_cause == other.downtime_by_cause
            and self.iterations_run == other.iterations_run
            and np.array_equal(self.per_iteration_unavailability, other.per_iteration_unavailability)
        )


@dataclass(frozen=True)
class IterationOutcome:
    uptime_fraction: float
    downtime_by_cause: dict[str, float]


def confidence_interval(samples, level: float) -> float:
    """Half-width t(level, n-1) * s / sqrt(n) of a two-sided interval."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level!r}")
    if np.ptp(x) == 0.0:
        return 0.0
    sd = float(np.std(x, ddof=1))
    t = float(stats.t.ppf(0.5 + level / 2.0, n - 1))
    return t * sd / math.sqrt(n)


def _kernel_args(p: RaidParameters, cfg: SimConfig) -> tuple:
    if cfg.ttf_model is not None:
        dist = cfg.ttf_model
        kind, (a, b) = dist.kind_code, dist.params
    elif p.lam > 0:
        kind, a, b = 0, p.lam, 0.0
    else:
        kind, a, b = _kernel.NEVER_FAILS, 0.0, 0.0
    repair = cfg.repair_hours if cfg.repair_hours is not None else -1.0
    return (
        p.n_disks, p.parity_disks, kind, float(a), float(b), float(repair),
        p.mu_df, p.mu_ddf, p.mu_he, p.lambda_crash, p.hep, float(cfg.mission_time),
    )


def _simulate_chunk(master_seed: int, start: int, count: int, args: tuple):
    loss = np.zeros(count)
    human = np.zeros(count)
    _kernel.simulate_range(master_seed, start, count, *args, loss, human)
    return loss, human


def simulate_iteration(p: RaidParameters, cfg: SimConfig, index: int = 0) -> IterationOutcome:
    """Run one iteration; its random stream is fixed by (master_seed, index)."""
    loss, human = _simulate_chunk(cfg.master_seed, index, 1, _kernel_args(p, cfg))
    down = float(loss[0] + human[0])
    return IterationOutcome(
        uptime_fraction=1.0 - down / cfg.mission_time,
        downtime_by_cause={"double_failure": float(loss[0]), "human_error": float(human[0])},
    )


def _chunks(n: int, workers: int):
    size = max(1, -(-n // (workers * 4)))
    return [(start, min(size, n - start)) for start in range(0, n, size)]


def simulate_downtimes(p: RaidParameters, cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-iteration downtime hours (double_failure, human_error), in
    iteration order whatever the worker count."""
    args = _kernel_args(p, cfg)
    n = int(cfg.iterations)
    workers = min(int(cfg.workers), n)
    if workers <= 1:
        return _simulate_chunk(cfg.master_seed, 0, n, args)
    chunks = _chunks(n, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_simulate_chunk, cfg.master_seed, start, count, args) for start, count in chunks]
        parts = [f.result() for f in futures]
    return np.concatenate([a for a, _ in parts]), np.concatenate([b for _, b in parts])


def run(p: RaidParameters, cfg: SimConfig) -> SimulationResult:
    loss, human = simulate_downtimes(p, cfg)
    n = loss.size
    total_time = cfg.mission_time * n
    down_loss = math.fsum(loss)
    down_human = math.fsum(human)
    unavail = math.fsum((down_loss, down_human)) / total_time
    per_iter = (loss + human) / cfg.mission_time
    return SimulationResult(
        availability_mean=1.0 - unavail,
        unavailability_mean=unavail,
        ci_half_width=confidence_interval(per_iter, cfg.confidence_level),
        downtime_by_cause={"double_failure": down_loss, "human_error": down_human},
        iterations_run=n,
        mission_time=cfg.mission_time,
        confidence_level=cfg.confidence_level,
        per_iteration_unavailability=per_iter,
    )
