"""Experiment config documents: loading, schema validation, object mapping."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .capacity import DEFAULT_USABLE_UNITS, SERIES, STANDARD_GEOMETRIES, ArrayGeometry
from .distributions import FailureDistribution, InvalidParameters
from .models import InvalidRaidParameters, RaidParameters
from .montecarlo import InvalidSimConfig, SimConfig

# JSON key -> RaidParameters field
_PARAM_KEYS = {"lambda": "lam"}

DEFAULT_LAMBDA_GRID = (1e-6, 1e-5, 1e-4)
DEFAULT_HEP_GRID = (0.0, 0.001, 0.01)


class ConfigError(ValueError):
    pass


def schema() -> dict:
    text = resources.files("raidavail").joinpath("config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class Perturbation:
    source: str
    target: str
    factor: float


@dataclass
class ExperimentConfig:
    params: RaidParameters
    models: list[str]
    lambdas: list[float] | None
    heps: list[float] | None
    sim: SimConfig
    geometries: tuple[ArrayGeometry, ...] = STANDARD_GEOMETRIES
    usable_units: int = DEFAULT_USABLE_UNITS
    aggregation: str = SERIES
    perturb: list[Perturbation] = field(default_factory=list)
    raw: dict = field(default_factory=dict)

    def lambda_grid(self, default=DEFAULT_LAMBDA_GRID) -> list[float]:
        return list(self.lambdas) if self.lambdas is not None else list(default)

    def hep_grid(self, default=DEFAULT_HEP_GRID) -> list[float]:
        return list(self.heps) if self.heps is not None else list(default)


def _path(error: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in error.absolute_path) or "<root>"


def parse(doc: dict, *, seed: int | None = None, iterations: int | None = None,
          workers: int | None = None) -> ExperimentConfig:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(f"config error at {_path(e)}: {e.message}")

    overrides = {_PARAM_KEYS.get(k, k): v for k, v in doc.get("parameters", {}).items()}
    try:
        params = RaidParameters.preset(doc.get("preset", "paper-sec5"), **overrides)
    except InvalidRaidParameters as exc:
        raise ConfigError(f"config error at parameters: {exc}") from exc

    if "models" in doc:
        models = list(doc["models"])
    else:
        models = [doc.get("model", "raid5-conventional")]

    grid = doc.get("grid", {})
    sim_doc = dict(doc.get("simulation", {}))
    if seed is not None:
        sim_doc["master_seed"] = seed
    if iterations is not None:
        sim_doc["iterations"] = iterations
    if workers is not None:
        sim_doc["workers"] = workers
    repair = sim_doc.pop("repair", {"kind": "exponential"})
    ttf = sim_doc.pop("ttf", None)
    try:
        sim = SimConfig(
            repair_hours=repair.get("hours") if repair["kind"] == "fixed" else None,
            ttf_model=FailureDistribution.from_dict(ttf) if ttf is not None else None,
            **sim_doc,
        )
    except (InvalidSimConfig, InvalidParameters) as exc:
        raise ConfigError(f"config error at simulation: {exc}") from exc

    plan = doc.get("plan", {})
    if "configs" in plan:
        geometries = tuple(
            ArrayGeometry(c["name"], c["data_disks"], c.get("parity_disks", 1)) for c in plan["configs"]
        )
    else:
        geometries = STANDARD_GEOMETRIES

    return ExperimentConfig(
        params=params,
        models=models,
        lambdas=grid.get("lambda"),
        heps=grid.get("hep"),
        sim=sim,
        geometries=geometries,
        usable_units=plan.get("usable_units", DEFAULT_USABLE_UNITS),
        aggregation=plan.get("aggregation", SERIES),
        perturb=[Perturbation(p["from"], p["to"], p["factor"]) for p in doc.get("perturb", [])],
        raw=doc,
    )


def load(path, **kwargs) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config error at <root>: expected a JSON object")
    return parse(doc, **kwargs)
