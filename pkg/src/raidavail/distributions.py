"""Time-to-event laws (exponential and Weibull) sampled by inverse CDF.

All durations are in hours and all rates are per hour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EXPONENTIAL = "exponential"
WEIBULL = "weibull"

# integer codes consumed by the compiled simulation kernel
KIND_CODES = {EXPONENTIAL: 0, WEIBULL: 1}

DEFAULT_WEIBULL_SHAPE = 0.71


class InvalidParameters(ValueError):
    pass


@dataclass(frozen=True)
class FailureDistribution:
    """An immutable exponential or Weibull law.

    Use the :meth:`exponential` and :meth:`weibull` constructors; the
    dataclass fields hold ``rate`` for the exponential law and ``shape`` /
    ``scale`` for the Weibull law.
    """

    kind: str
    rate: float | None = None
    shape: float | None = None
    scale: float | None = None

    def __post_init__(self):
        if self.kind == EXPONENTIAL:
            if self.rate is None or not (self.rate > 0 and math.isfinite(self.rate)):
                raise InvalidParameters(f"exponential rate must be > 0, got {self.rate!r}")
        elif self.kind == WEIBULL:
            for name in ("shape", "scale"):
                value = getattr(self, name)
                if value is None or not (value > 0 and math.isfinite(value)):
                    raise InvalidParameters(f"weibull {name} must be > 0, got {value!r}")
        else:
            raise InvalidParameters(f"unknown distribution kind {self.kind!r}")

    @classmethod
    def exponential(cls, rate: float) -> FailureDistribution:
        return cls(EXPONENTIAL, rate=float(rate))

    @classmethod
    def weibull(cls, shape: float, scale: float) -> FailureDistribution:
        return cls(WEIBULL, shape=float(shape), scale=float(scale))

    @classmethod
    def weibull_from_mean(cls, mean_hours: float, shape: float = DEFAULT_WEIBULL_SHAPE) -> FailureDistribution:
        """Weibull law with the given shape whose mean is ``mean_hours``."""
        if not mean_hours > 0:
            raise InvalidParameters(f"mean_hours must be > 0, got {mean_hours!r}")
        if not shape > 0:
            raise InvalidParameters(f"weibull shape must be > 0, got {shape!r}")
        return cls.weibull(shape, mean_hours / math.gamma(1.0 + 1.0 / shape))

    @classmethod
    def from_dict(cls, doc: dict) -> FailureDistribution:
        """Parse ``{"kind": "exponential", "rate": ...}`` or
        ``{"kind": "weibull", "shape": ..., "scale" | "mean_hours": ...}``."""
        kind = doc.get("kind")
        if kind == EXPONENTIAL:
            return cls.exponential(doc["rate"])
        if kind == WEIBULL:
            shape = doc.get("shape", DEFAULT_WEIBULL_SHAPE)
            if "mean_hours" in doc:
                return cls.weibull_from_mean(doc["mean_hours"], shape)
            return cls.weibull(shape, doc["scale"])
        raise InvalidParameters(f"unknown distribution kind {kind!r}")

    def to_dict(self) -> dict:
        if self.kind == EXPONENTIAL:
            return {"kind": EXPONENTIAL, "rate": self.rate}
        return {"kind": WEIBULL, "shape": self.shape, "scale": self.scale}

    @property
    def kind_code(self) -> int:
        return KIND_CODES[self.kind]

    @property
    def params(self) -> tuple[float, float]:
        """(a, b) pair understood by :func:`inverse_survival`."""
        if self.kind == EXPONENTIAL:
            return self.rate, 0.0
        return self.shape, self.scale

    def mean(self) -> float:
        return mean(self)

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == EXPONENTIAL:
            return -np.expm1(-self.rate * t)
        return -np.expm1(-((t / self.scale) ** self.shape))

    def sample(self, stream: np.random.Generator, size=None):
        return sample(self, stream, size)


def inverse_survival(kind_code: int, a: float, b: float, u: float) -> float:
    """Duration whose survival probability is ``u`` (0 < u <= 1).

    Shared by :func:`sample` and the compiled simulation kernel so both paths
    draw the same law from the same uniform.
    """
    if kind_code == 0:
        return -math.log(u) / a
    return b * (-math.log(u)) ** (1.0 / a)


def mean(dist: FailureDistribution) -> float:
    if dist.kind == EXPONENTIAL:
        return 1.0 / dist.rate
    return dist.scale * math.gamma(1.0 + 1.0 / dist.shape)


def sample(dist: FailureDistribution, stream: np.random.Generator, size=None):
    """Draw one duration (or an array of ``size``) from ``dist``.

    Uses the inverse survival function on ``1 - U`` with ``U`` uniform on
    [0, 1), so the uniform is never 0. The rare ``U == 0`` draw (zero
    duration) is redrawn to keep every duration strictly positive.
    """
    a, b = dist.params
    if size is None:
        while True:
            t = inverse_survival(dist.kind_code, a, b, 1.0 - stream.random())
            if t > 0.0:
                return t
    u = 1.0 - stream.random(size)
    while True:
        bad = u == 1.0
        if not bad.any():
            break
        u[bad] = 1.0 - stream.random(int(bad.sum()))
    if dist.kind == EXPONENTIAL:
        return -np.log(u) / a
    return b * (-np.log(u)) ** (1.0 / a)
