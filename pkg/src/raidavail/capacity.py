"""Equal-usable-capacity comparison of RAID geometries."""

from __future__ import annotations

import math
from dataclasses import dataclass

SERIES = "series"
WEIGHTED = "weighted"

DEFAULT_USABLE_UNITS = 21  # lcm(1, 3, 7)


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class ArrayGeometry:
    name: str
    data_disks: int
    parity_disks: int = 1

    @property
    def total_disks(self) -> int:
        return self.data_disks + self.parity_disks

    @property
    def model(self) -> str:
        return "raid1" if self.data_disks == 1 else "raid5-conventional"


STANDARD_GEOMETRIES = (
    ArrayGeometry("R1(1+1)", 1, 1),
    ArrayGeometry("R5(3+1)", 3, 1),
    ArrayGeometry("R5(7+1)", 7, 1),
)


@dataclass(frozen=True)
class PlanEntry:
    geometry: ArrayGeometry
    array_count: int

    @property
    def erf(self) -> float:
        """Physical over usable capacity."""
        return self.geometry.total_disks / self.geometry.data_disks

    @property
    def physical_disks(self) -> int:
        return self.array_count * self.geometry.total_disks


@dataclass(frozen=True)
class ComparisonPlan:
    usable_units: int
    entries: tuple[PlanEntry, ...]


def plan_equivalent(configs, usable_units: int = DEFAULT_USABLE_UNITS) -> ComparisonPlan:
    if usable_units < 1:
        raise PlanError(f"usable_units must be >= 1, got {usable_units}")
    entries = []
    for g in configs:
        if g.data_disks < 1:
            raise PlanError(f"{g.name}: data_disks must be >= 1")
        if usable_units % g.data_disks:
            raise PlanError(
                f"usable_units={usable_units} is not divisible by {g.name}'s {g.data_disks} data disks"
            )
        entries.append(PlanEntry(g, usable_units // g.data_disks))
    return ComparisonPlan(usable_units, tuple(entries))


def subsystem_availability(per_array: float, array_count: int, aggregation: str = SERIES) -> float:
    """Series: every array must be up (A ** count). Weighted: the mean over
    equally sized arrays, which is just ``per_array``."""
    if not 0.0 <= per_array <= 1.0:
        raise ValueError(f"availability must lie in [0, 1], got {per_array!r}")
    if array_count < 1:
        raise ValueError(f"array_count must be >= 1, got {array_count}")
    if aggregation == SERIES:
        return per_array**array_count
    if aggregation == WEIGHTED:
        return per_array
    raise ValueError(f"unknown aggregation {aggregation!r}")


def subsystem_unavailability(per_array_u: float, array_count: int, aggregation: str = SERIES) -> float:
    """``1 - subsystem_availability`` computed without cancellation."""
    if not 0.0 <= per_array_u <= 1.0:
        raise ValueError(f"unavailability must lie in [0, 1], got {per_array_u!r}")
    if array_count < 1:
        raise ValueError(f"array_count must be >= 1, got {array_count}")
    if aggregation == SERIES:
        if per_array_u == 1.0:
            return 1.0
        return -math.expm1(array_count * math.log1p(-per_array_u))
    if aggregation == WEIGHTED:
        return per_array_u
    raise ValueError(f"unknown aggregation {aggregation!r}")
