"""Batch experiments behind the command line tool.

Each ``cmd_*`` function takes an :class:`ExperimentConfig` and returns a
:class:`Table`; rows always come out in grid order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass

import numpy as np

from . import capacity, ctmc, montecarlo
from .config import ExperimentConfig
from .models import RaidParameters, build_model

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2

PARAM_COLUMNS = ["data_disks", "parity_disks", "lambda", "mu_df", "mu_ddf", "mu_s", "mu_he", "lambda_crash", "hep"]

SOLVE_COLUMNS = ["model", *PARAM_COLUMNS, "availability", "unavailability",
                 "downtime_min_per_year", "state_probabilities"]
SIMULATE_COLUMNS = ["model", *PARAM_COLUMNS, "mission_time", "iterations", "confidence_level",
                    "master_seed", "availability", "unavailability", "ci_half_width",
                    "downtime_double_failure_h", "downtime_human_error_h"]
VALIDATE_COLUMNS = ["lambda", "hep", "mc_availability", "mc_unavailability", "ci_half_width",
                    "markov_availability", "markov_unavailability", "abs_difference", "verdict"]
SWEEP_COLUMNS = ["model", "lambda", "hep", "availability", "unavailability",
                 "downtime_min_per_year", "unavailability_ratio_vs_hep0"]
COMPARE_COLUMNS = ["config", "data_disks", "total_disks_per_array", "array_count", "physical_disks",
                   "erf", "lambda", "hep", "per_array_availability", "per_array_unavailability",
                   "subsystem_availability", "subsystem_unavailability", "rank"]
POLICY_COLUMNS = ["lambda", "hep", "conventional_availability", "conventional_unavailability",
                  "autofailover_availability", "autofailover_unavailability", "improvement_factor"]


@dataclass
class Table:
    columns: list[str]
    rows: list[dict]
    status: int = EXIT_OK

    def column(self, name: str) -> list:
        return [r[name] for r in self.rows]


def fmt(value) -> str:
    """CSV cell text: floats as shortest round-trip scientific notation."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return np.format_float_scientific(float(value), unique=True, trim="0")
    return str(value)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([fmt(row[c]) for c in table.columns])
    return buf.getvalue()


def to_json(table: Table) -> str:
    return json.dumps([{c: row[c] for c in table.columns} for row in table.rows], indent=2) + "\n"


def _param_cells(p: RaidParameters) -> dict:
    return {
        "data_disks": p.data_disks, "parity_disks": p.parity_disks, "lambda": p.lam,
        "mu_df": p.mu_df, "mu_ddf": p.mu_ddf, "mu_s": p.mu_s, "mu_he": p.mu_he,
        "lambda_crash": p.lambda_crash, "hep": p.hep,
    }


def _grid_params(cfg: ExperimentConfig, lambdas=None, heps=None) -> list[RaidParameters]:
    lambdas = lambdas if lambdas is not None else (cfg.lambdas or [cfg.params.lam])
    heps = heps if heps is not None else (cfg.heps or [cfg.params.hep])
    return [cfg.params.with_(lam=lam, hep=hep) for lam in lambdas for hep in heps]


def _model_params(model: str, p: RaidParameters) -> RaidParameters:
    # a raid1 model always runs on a mirror
    if model == "raid1" and p.data_disks != 1:
        return p.with_(data_disks=1)
    return p


def perturbed(chain: ctmc.Ctmc, perturb) -> ctmc.Ctmc:
    """Chain with the rates of matching transitions multiplied; used to check
    that validation is sensitive to a wrong rate."""
    if not perturb:
        return chain
    transitions = []
    for t in chain.transitions:
        factor = 1.0
        for pt in perturb:
            if pt.source == t.source and pt.target == t.target:
                factor *= pt.factor
        transitions.append(ctmc.Transition(t.source, t.target, t.rate * factor, t.label))
    return ctmc.build(chain.states, transitions)


def solve_point(model: str, p: RaidParameters, perturb=()) -> tuple[ctmc.Ctmc, ctmc.SteadyState]:
    chain = perturbed(build_model(model, p), perturb)
    return chain, ctmc.steady_state(chain)


def cmd_solve(cfg: ExperimentConfig) -> Table:
    rows = []
    for model in cfg.models:
        for p in _grid_params(cfg):
            p = _model_params(model, p)
            chain, ss = solve_point(model, p, cfg.perturb)
            a = ctmc.availability(chain, ss)
            rows.append({
                "model": model, **_param_cells(p),
                "availability": a,
                "unavailability": ctmc.unavailability(chain, ss),
                "downtime_min_per_year": ctmc.downtime_minutes_per_year(a),
                "state_probabilities": ";".join(f"{n}={fmt(v)}" for n, v in ss.as_dict(chain).items()),
            })
    return Table(SOLVE_COLUMNS, rows)


def _simulated_model(p: RaidParameters) -> str:
    if p.parity_disks == 0:
        return "single-disk"
    return "raid1" if p.data_disks == 1 else "raid5-conventional"


def cmd_simulate(cfg: ExperimentConfig) -> Table:
    rows = []
    for p in _grid_params(cfg):
        res = montecarlo.run(p, cfg.sim)
        rows.append({
            "model": _simulated_model(p),
            **_param_cells(p),
            "mission_time": cfg.sim.mission_time,
            "iterations": res.iterations_run,
            "confidence_level": cfg.sim.confidence_level,
            "master_seed": cfg.sim.master_seed,
            "availability": res.availability_mean,
            "unavailability": res.unavailability_mean,
            "ci_half_width": res.ci_half_width,
            "downtime_double_failure_h": res.downtime_by_cause["double_failure"],
            "downtime_human_error_h": res.downtime_by_cause["human_error"],
        })
    return Table(SIMULATE_COLUMNS, rows)


def cmd_validate(cfg: ExperimentConfig) -> Table:
    """Monte-Carlo vs Markov at every grid point; a point passes when the
    Markov availability lies inside the simulation's confidence interval."""
    model = _simulated_model(cfg.params)
    rows = []
    failed = 0
    for p in _grid_params(cfg, cfg.lambda_grid(), cfg.hep_grid()):
        res = montecarlo.run(p, cfg.sim)
        chain, ss = solve_point(model, p, cfg.perturb)
        u_markov = ctmc.unavailability(chain, ss)
        diff = abs(res.unavailability_mean - u_markov)
        ok = diff <= res.ci_half_width
        failed += not ok
        rows.append({
            "lambda": p.lam, "hep": p.hep,
            "mc_availability": res.availability_mean,
            "mc_unavailability": res.unavailability_mean,
            "ci_half_width": res.ci_half_width,
            "markov_availability": ctmc.availability(chain, ss),
            "markov_unavailability": u_markov,
            "abs_difference": diff,
            "verdict": "pass" if ok else "fail",
        })
        log.info("validate lambda=%g hep=%g mc=%.4e markov=%.4e ci=%.2e %s",
                 p.lam, p.hep, res.unavailability_mean, u_markov, res.ci_half_width, rows[-1]["verdict"])
    return Table(VALIDATE_COLUMNS, rows, EXIT_VALIDATION_FAILED if failed else EXIT_OK)


SWEEP_LAMBDAS = tuple(float(x) for x in np.logspace(-7, -4, 7))


def cmd_sweep(cfg: ExperimentConfig) -> Table:
    model = cfg.models[0]
    heps = cfg.hep_grid()
    rows = []
    for lam in cfg.lambda_grid(SWEEP_LAMBDAS):
        base_u = None
        for hep in heps:
            p = _model_params(model, cfg.params.with_(lam=lam, hep=hep))
            chain, ss = solve_point(model, p, cfg.perturb)
            if base_u is None:
                chain0, ss0 = solve_point(model, p.with_(hep=0.0), cfg.perturb)
                base_u = ctmc.unavailability(chain0, ss0)
            a = ctmc.availability(chain, ss)
            u = ctmc.unavailability(chain, ss)
            rows.append({
                "model": model, "lambda": lam, "hep": hep,
                "availability": a, "unavailability": u,
                "downtime_min_per_year": ctmc.downtime_minutes_per_year(a),
                "unavailability_ratio_vs_hep0": u / base_u,
            })
    return Table(SWEEP_COLUMNS, rows)


def cmd_compare(cfg: ExperimentConfig) -> Table:
    plan = capacity.plan_equivalent(cfg.geometries, cfg.usable_units)
    rows = []
    for hep in cfg.hep_grid():
        block = []
        for entry in plan.entries:
            g = entry.geometry
            p = cfg.params.with_(data_disks=g.data_disks, parity_disks=g.parity_disks, hep=hep)
            chain, ss = solve_point(g.model, p, cfg.perturb)
            u = ctmc.unavailability(chain, ss)
            block.append({
                "config": g.name, "data_disks": g.data_disks,
                "total_disks_per_array": g.total_disks, "array_count": entry.array_count,
                "physical_disks": entry.physical_disks, "erf": entry.erf,
                "lambda": p.lam, "hep": hep,
                "per_array_availability": ctmc.availability(chain, ss),
                "per_array_unavailability": u,
                "subsystem_availability": capacity.subsystem_availability(
                    ctmc.availability(chain, ss), entry.array_count, cfg.aggregation),
                "subsystem_unavailability": capacity.subsystem_unavailability(
                    u, entry.array_count, cfg.aggregation),
            })
        order = sorted(range(len(block)), key=lambda i: (block[i]["subsystem_unavailability"], i))
        for rank, i in enumerate(order, start=1):
            block[i]["rank"] = rank
        log.info("ranking at hep=%g (most available first): %s",
                 hep, " > ".join(block[i]["config"] for i in order))
        rows.extend(block)
    return Table(COMPARE_COLUMNS, rows)


def cmd_compare_policy(cfg: ExperimentConfig) -> Table:
    rows = []
    for p in _grid_params(cfg, cfg.lambdas or [cfg.params.lam], cfg.hep_grid()):
        conv, ss_c = solve_point("raid5-conventional", p, cfg.perturb)
        auto, ss_a = solve_point("raid5-autofailover", p)
        u_c = ctmc.unavailability(conv, ss_c)
        u_a = ctmc.unavailability(auto, ss_a)
        rows.append({
            "lambda": p.lam, "hep": p.hep,
            "conventional_availability": ctmc.availability(conv, ss_c),
            "conventional_unavailability": u_c,
            "autofailover_availability": ctmc.availability(auto, ss_a),
            "autofailover_unavailability": u_a,
            "improvement_factor": u_c / u_a,
        })
    return Table(POLICY_COLUMNS, rows)


COMMANDS = {
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "compare-policy": cmd_compare_policy,
}
