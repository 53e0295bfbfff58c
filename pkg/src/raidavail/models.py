"""RAID availability chains with human error in disk replacement.

Three builders share one parameter record:

* ``raid5-conventional`` -- 4 states, a human may replace the failed disk
  at any time and can pull a working disk instead.
* ``raid1`` -- the same topology for a 1+1 mirror.
* ``raid5-autofailover`` -- 12 states, one hot spare, replacement only after
  the on-line rebuild onto the spare has finished.

Every human action attempted at rate ``mu`` is split into a success edge at
``mu * (1 - hep)`` and an error edge at ``mu * hep``; an error that leaves the
array where it was is simply the missing share of the success edge.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from .ctmc import Ctmc, build

# rates in per hour
PRESETS = {
    "paper-sec5": {
        "data_disks": 3,
        "parity_disks": 1,
        "lam": 1e-5,
        "mu_df": 0.1,
        "mu_ddf": 0.03,
        "mu_s": 1.0,
        "mu_he": 1.0,
        "lambda_crash": 0.01,
        "hep": 0.0,
    },
}

# human error probability ranges reported by human reliability assessment
# studies: (low, high)
HEP_RANGES = {
    "general": (0.001, 0.1),
    "enterprise": (0.001, 0.01),
}


class InvalidRaidParameters(ValueError):
    pass


@dataclass(frozen=True)
class RaidParameters:
    """Rates and geometry of one array.

    ``lam`` is the per-disk failure rate. ``lam = 0`` is accepted so the
    simulator can run a failure-free array; the chain builders reject it.
    ``parity_disks = 0`` is accepted only by the simulator's degenerate
    single-disk mode.
    """

    data_disks: int = 3
    parity_disks: int = 1
    lam: float = 1e-5
    mu_df: float = 0.1
    mu_ddf: float = 0.03
    mu_s: float = 1.0
    mu_he: float = 1.0
    lambda_crash: float = 0.01
    hep: float = 0.0

    def __post_init__(self):
        for name in ("lam", "mu_df", "mu_ddf", "mu_s", "mu_he", "lambda_crash", "hep"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if int(self.data_disks) != self.data_disks or self.data_disks < 1:
            raise InvalidRaidParameters(f"data_disks must be an integer >= 1, got {self.data_disks!r}")
        if self.parity_disks not in (0, 1):
            raise InvalidRaidParameters(f"parity_disks must be 1 (or 0 for a bare disk), got {self.parity_disks!r}")
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise InvalidRaidParameters(f"lam must be >= 0, got {self.lam!r}")
        for name in ("mu_df", "mu_ddf", "mu_s", "mu_he", "lambda_crash"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidRaidParameters(f"{name} must be > 0, got {value!r}")
        if not 0.0 <= self.hep < 1.0:
            raise InvalidRaidParameters(f"hep must lie in [0, 1), got {self.hep!r}")

    @property
    def n_disks(self) -> int:
        return self.data_disks + self.parity_disks

    @classmethod
    def preset(cls, name: str = "paper-sec5", **overrides) -> RaidParameters:
        try:
            base = dict(PRESETS[name])
        except KeyError:
            raise InvalidRaidParameters(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
        base.update(overrides)
        return cls(**base)

    def with_(self, **changes) -> RaidParameters:
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _require_solvable(p: RaidParameters) -> None:
    if p.parity_disks != 1:
        raise InvalidRaidParameters("chains are defined for single-parity arrays only")
    if p.lam <= 0:
        raise InvalidRaidParameters("chains need lam > 0")


def _conventional(p: RaidParameters) -> Ctmc:
    n = p.n_disks
    hep = p.hep
    states = [("OP", True), ("EXP", True), ("DU", False), ("DL", False)]
    transitions = [
        ("OP", "EXP", n * p.lam, "N*lambda"),
        ("EXP", "DL", (n - 1) * p.lam, "(N-1)*lambda"),
        ("EXP", "OP", p.mu_df * (1 - hep), "mu_DF*(1-hep)"),
        ("EXP", "DU", p.mu_df * hep, "mu_DF*hep"),
        ("DU", "OP", p.mu_he * (1 - hep), "mu_he*(1-hep)"),
        ("DU", "DL", p.lambda_crash, "lambda_crash"),
        ("DL", "OP", p.mu_ddf, "mu_DDF"),
    ]
    return build(states, transitions)


def build_raid5_conventional(p: RaidParameters) -> Ctmc:
    _require_solvable(p)
    return _conventional(p)


def build_raid1(p: RaidParameters) -> Ctmc:
    """Mirror (1+1) on the conventional topology: first failure at 2*lam,
    second at lam."""
    _require_solvable(p)
    if p.data_disks != 1:
        raise InvalidRaidParameters(f"raid1 needs a 1+1 geometry, got {p.data_disks}+{p.parity_disks}")
    return _conventional(p)


AUTOFAILOVER_AVAILABLE = ("OP", "EXP1", "OPns", "EXPns1", "EXPns2", "EXP2")
AUTOFAILOVER_UNAVAILABLE = ("DL", "DLns", "DU1", "DU2", "DUns1", "DUns2")


def build_raid5_autofailover(p: RaidParameters) -> Ctmc:
    """RAID5 with one hot spare under the automatic fail-over policy.

    State suffix ``ns`` means no spare is installed. EXP2 and DU2 only feed
    each other, so from OP they are never entered and stay at probability 0.
    """
    _require_solvable(p)
    n = p.n_disks
    lam, hep = p.lam, p.hep
    ok, err = 1 - hep, hep
    states = [(s, True) for s in AUTOFAILOVER_AVAILABLE] + [(s, False) for s in AUTOFAILOVER_UNAVAILABLE]
    transitions = [
        ("OP", "EXP1", n * lam, "N*lambda"),
        # rebuild onto the spare; no human allowed in EXP1
        ("EXP1", "DL", (n - 1) * lam, "(N-1)*lambda"),
        ("EXP1", "OPns", p.mu_s, "mu_s"),
        # restock the spare
        ("OPns", "EXPns1", n * lam, "N*lambda"),
        ("OPns", "OP", p.mu_df * ok, "mu_DF*(1-hep)"),
        ("OPns", "EXPns2", p.mu_df * err, "mu_DF*hep"),
        ("EXPns1", "EXP1", p.mu_df * ok, "mu_DF*(1-hep)"),
        ("EXPns1", "OPns", p.mu_s * ok, "mu_s*(1-hep)"),
        ("EXPns1", "DUns1", (p.mu_df + p.mu_s) * err, "(mu_DF+mu_s)*hep"),
        ("EXPns1", "DLns", (n - 1) * lam, "(N-1)*lambda"),
        # a working disk was pulled while no spare is installed
        ("EXPns2", "OP", p.mu_he * ok, "mu_he*(1-hep)"),
        ("EXPns2", "DUns2", p.mu_he * err, "mu_he*hep"),
        ("EXPns2", "EXPns1", p.lambda_crash, "lambda_crash"),
        ("EXPns2", "DUns1", (n - 1) * lam, "(N-1)*lambda"),
        ("DL", "OP", p.mu_ddf, "mu_DDF"),
        ("DLns", "OPns", p.mu_ddf, "mu_DDF"),
        ("DLns", "DL", p.mu_df * ok, "mu_DF*(1-hep)"),
        ("DUns1", "EXPns1", p.mu_he * ok, "mu_he*(1-hep)"),
        ("DUns1", "DLns", p.lambda_crash, "lambda_crash"),
        ("DUns1", "OPns", p.mu_ddf, "mu_DDF"),
        ("DUns1", "DU1", p.mu_df * ok, "mu_DF*(1-hep)"),
        ("DUns2", "EXPns2", p.mu_he * ok, "mu_he*(1-hep)"),
        ("DUns2", "DUns1", 2 * p.lambda_crash, "2*lambda_crash"),
        # spare-present mirrors of EXPns2 / DUns1 / DUns2
        ("EXP2", "OP", p.mu_he * ok, "mu_he*(1-hep)"),
        ("EXP2", "DU2", p.mu_he * err, "mu_he*hep"),
        ("EXP2", "EXP1", p.lambda_crash, "lambda_crash"),
        ("EXP2", "DU1", (n - 1) * lam, "(N-1)*lambda"),
        ("DU1", "EXP1", p.mu_he * ok, "mu_he*(1-hep)"),
        ("DU1", "DL", p.lambda_crash, "lambda_crash"),
        ("DU1", "OP", p.mu_ddf, "mu_DDF"),
        ("DU2", "EXP2", p.mu_he * ok, "mu_he*(1-hep)"),
        ("DU2", "DU1", 2 * p.lambda_crash, "2*lambda_crash"),
    ]
    return build(states, transitions)


MODELS = {
    "raid5-conventional": build_raid5_conventional,
    "raid1": build_raid1,
    "raid5-autofailover": build_raid5_autofailover,
}


def build_model(name: str, p: RaidParameters) -> Ctmc:
    try:
        builder = MODELS[name]
    except KeyError:
        raise InvalidRaidParameters(f"unknown model {name!r}; known: {sorted(MODELS)}") from None
    return builder(p)


def classify_states(chain: Ctmc) -> dict[str, list[str]]:
    return {
        "available": [s.name for s in chain.states if s.available],
        "unavailable": [s.name for s in chain.states if not s.available],
    }
