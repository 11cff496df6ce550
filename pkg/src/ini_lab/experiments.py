"""Reproducible scenarios: per-subcarrier INI, Q sweep, power offset, cross-validation.

Each scenario returns a :class:`ScenarioResult` holding CSV rows and a
summary dict; :func:`write_result` serializes both.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from . import analytic, simulate
from .numerology import CpMode, Direction, MultiplexPair, Victim, db_to_linear, linear_to_db

CSV_HEADER = ["scenario", "sweep_param", "sweep_value", "cp_mode", "victim", "subcarrier", "ini_db", "sir_db", "source"]

FIG3_DEFAULT_Q = 4
Q_SWEEP = (2, 4, 8)
POWER_OFFSETS_DB = tuple(range(-12, 13))
XVAL_QS = (1, 2, 4, 8)
XVAL_PROBE = dict(n_fft=64, q=4, eta_nsn=0.25, eta_wsn=0.75, cp_ratio=1 / 8)


class Engine(str, Enum):
    ANALYTIC = "analytic"
    MONTECARLO = "montecarlo"
    BOTH = "both"

    @property
    def analytic(self) -> bool:
        return self is not Engine.MONTECARLO

    @property
    def montecarlo(self) -> bool:
        return self is not Engine.ANALYTIC


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    base_pair: MultiplexPair
    sweep_param: str = "none"
    sweep_values: tuple = ()
    engine: Engine = Engine.BOTH
    trials: int = 10_000
    seed: int = 1
    modulation: str = "bpsk"


@dataclass
class ScenarioResult:
    spec: ScenarioSpec
    rows: list[list[str]] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def fmt_db(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.8f}"


def _profile_rows(spec, sweep_value, profile: analytic.SirProfile, source: str) -> list[list[str]]:
    rows = []
    ini_db = np.where(profile.infinite, -np.inf, profile.ini_db)
    for sc, i_db, s_db in zip(profile.subcarriers, ini_db, profile.sir_db):
        rows.append([
            spec.name, spec.sweep_param, str(sweep_value), profile.cp_mode.value,
            profile.victim.value, str(int(sc)), fmt_db(float(i_db)), fmt_db(float(s_db)), source,
        ])
    return rows


def _average_rows(spec, sweep_value, cp_mode: CpMode, m: analytic.AverageMetrics, source: str):
    n_nsn_ini = linear_to_db(m.avg_ini_nsn)
    n_wsn_ini = linear_to_db(m.avg_ini_wsn)
    base = [spec.name, spec.sweep_param, str(sweep_value), cp_mode.value]
    return [
        base + ["NSN", "avg", fmt_db(float(n_nsn_ini)), fmt_db(m.avg_sir_nsn_db), source],
        base + ["WSN", "avg", fmt_db(float(n_wsn_ini)), fmt_db(m.avg_sir_wsn_db), source],
        base + ["SYSTEM", "avg", "", fmt_db(m.avg_sir_system_db), source],
    ]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _pair_meta(pair: MultiplexPair) -> dict:
    return {
        "n_fft": pair.n_fft, "q": pair.q, "eta_nsn": pair.eta_nsn, "eta_wsn": pair.eta_wsn,
        "cp_ratio": pair.cp_ratio, "power_nsn": pair.power_nsn, "power_wsn": pair.power_wsn,
        "delta_f1_khz": pair.delta_f1_khz, "delta_f2_khz": pair.delta_f2_khz,
    }


def _evaluate(spec: ScenarioSpec, result: ScenarioResult, pair: MultiplexPair, cp_mode: CpMode,
              sweep_value, workers=None, averages=False) -> dict:
    """Add per-subcarrier rows for both victims of one configuration; return its summary."""
    out = {}
    ana = {v: analytic.sir_profile(pair, v, cp_mode) for v in Victim}
    if spec.engine.analytic:
        for v in Victim:
            result.rows += _profile_rows(spec, sweep_value, ana[v], "analytic")
        metrics = analytic.summarize(ana[Victim.NSN], ana[Victim.WSN])
        out["analytic"] = metrics.as_dict()
        if averages:
            result.rows += _average_rows(spec, sweep_value, cp_mode, metrics, "analytic")
    if spec.engine.montecarlo:
        mc = simulate.measure_sir(
            pair, cp_mode, spec.trials, simulate.RngSpec(spec.seed), spec.modulation, workers=workers
        )
        for v in Victim:
            result.rows += _profile_rows(spec, sweep_value, mc[v], "mc")
        metrics = analytic.summarize(mc[Victim.NSN], mc[Victim.WSN])
        out["mc"] = metrics.as_dict()
        if averages:
            result.rows += _average_rows(spec, sweep_value, cp_mode, metrics, "mc")
        out["max_rel_err"] = max(
            float(np.max(simulate.relative_error(mc[v].ini, ana[v].ini, abs_floor=1e-12))) for v in Victim
        )
    return out


def scenario_per_subcarrier_ini(pair: MultiplexPair | None = None, engine=Engine.BOTH, trials=10_000,
                                seed=1, modulation="bpsk", workers=None) -> ScenarioResult:
    """Per-subcarrier INI of both numerologies under both CP framings."""
    pair = pair or MultiplexPair(q=FIG3_DEFAULT_Q)
    spec = ScenarioSpec("per_subcarrier_ini", pair, "cp_mode", tuple(m.value for m in CpMode),
                        Engine(engine), trials, seed, modulation)
    result = ScenarioResult(spec)
    result.summary["pair"] = _pair_meta(pair)
    result.summary["note"] = f"Q={pair.q} (default {FIG3_DEFAULT_Q} when not given)"
    for mode in CpMode:
        result.summary[mode.value] = _evaluate(spec, result, pair, mode, mode.value, workers)
    return result


def scenario_q_sweep(base: MultiplexPair | None = None, qs=Q_SWEEP, engine=Engine.BOTH, trials=10_000,
                     seed=1, modulation="bpsk", workers=None) -> ScenarioResult:
    """Per-subcarrier and average INI for each Q and each CP framing."""
    base = base or MultiplexPair()
    spec = ScenarioSpec("q_sweep", base, "q", tuple(qs), Engine(engine), trials, seed, modulation)
    result = ScenarioResult(spec)
    result.summary["pair"] = _pair_meta(base)
    for q in qs:
        pair = base.with_(q=q)
        cell = {}
        for mode in CpMode:
            cell[mode.value] = _evaluate(spec, result, pair, mode, q, workers, averages=True)
        result.summary[f"q={q}"] = cell
    return result


def offset_powers(offset_db: float) -> tuple[float, float]:
    """Linear (NSN, WSN) powers split symmetrically about unit power; positive favours NSN."""
    return db_to_linear(offset_db / 2), db_to_linear(-offset_db / 2)


def scenario_power_offset(base: MultiplexPair | None = None, offsets_db=POWER_OFFSETS_DB,
                          engine=Engine.BOTH, trials=10_000, seed=1, modulation="bpsk",
                          workers=None) -> ScenarioResult:
    """Average SIR per numerology and system-wide versus NSN-minus-WSN power offset (dB)."""
    base = base or MultiplexPair(q=2, cp_mode=CpMode.INDIVIDUAL)
    spec = ScenarioSpec("power_offset", base, "power_offset_db", tuple(offsets_db), Engine(engine),
                        trials, seed, modulation)
    result = ScenarioResult(spec)
    result.summary["pair"] = _pair_meta(base)
    for off in offsets_db:
        p_nsn, p_wsn = offset_powers(off)
        pair = base.with_(power_nsn=p_nsn, power_wsn=p_wsn)
        result.summary[f"offset_db={off}"] = _evaluate(
            spec, result, pair, base.cp_mode, off, workers, averages=True
        )
    return result


def scenario_cross_validation(engine=Engine.BOTH, trials=0, seed=1, modulation="bpsk",
                              workers=None) -> ScenarioResult:
    """Closed forms against the deterministic single-tone oracle over Q x CP mode x direction.

    Rows carry per-victim total INI from both sides; the ``mc`` source here is
    the single-tone oracle, which needs no random trials.
    """
    base = MultiplexPair()
    spec = ScenarioSpec("cross_validation", base, "q", XVAL_QS, Engine.BOTH, trials, seed, modulation)
    result = ScenarioResult(spec)
    cells = []
    probe = MultiplexPair(**XVAL_PROBE)
    for label, pair in [(f"q={q}", base.with_(q=q)) for q in XVAL_QS] + [("probe", probe)]:
        for mode in CpMode:
            for direction in Direction:
                model = analytic.ini_matrix(pair, direction, mode)
                oracle = simulate.oracle_ini_matrix(pair, mode, direction)
                err = float(np.max(simulate.relative_error(model.entries, oracle), initial=0.0))
                cell = {"cell": label, "n_fft": pair.n_fft, "q": pair.q, "eta_nsn": pair.eta_nsn,
                        "cp_ratio": pair.cp_ratio, "cp_mode": mode, "direction": direction,
                        "max_rel_err": err}
                if direction is Direction.WSN_TO_NSN and mode is CpMode.INDIVIDUAL:
                    lit = analytic.ini_matrix(pair, direction, mode, literal=True).entries
                    lit_err = float(np.max(simulate.relative_error(lit, oracle), initial=0.0))
                    cell["literal_max_rel_err"] = lit_err
                    cell["literal_deviates"] = bool(lit_err > 1e-9)
                cells.append(cell)
                victim = direction.victim
                subcarriers = model.victim_indices
                totals = {"analytic": analytic.total_ini_per_victim(model), "mc": oracle.sum(axis=0)}
                for source, tot in totals.items():
                    ini_db = linear_to_db(np.where(tot <= 1e-15, 0.0, tot))
                    for sc, i_db in zip(subcarriers, ini_db):
                        result.rows.append([spec.name, "cell", label, mode.value, victim.value, str(int(sc)),
                                            fmt_db(float(i_db)), "", source])
    result.summary["cells"] = cells
    result.summary["max_rel_err"] = max(c["max_rel_err"] for c in cells)
    return result


SCENARIOS = {
    "per_subcarrier_ini": scenario_per_subcarrier_ini,
    "q_sweep": scenario_q_sweep,
    "power_offset": scenario_power_offset,
    "cross_validation": scenario_cross_validation,
}


def write_csv(rows, path: Path, header=CSV_HEADER) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_result(result: ScenarioResult, out_dir) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{result.spec.name}.csv"
    summary_path = out_dir / f"{result.spec.name}_summary.json"
    write_csv(result.rows, csv_path)
    summary = {"scenario": result.spec.name, "engine": result.spec.engine, "trials": result.spec.trials,
               "seed": result.spec.seed, "modulation": result.spec.modulation, **result.summary}
    summary_path.write_text(json.dumps(_jsonable(summary), indent=2) + "\n", encoding="utf-8")
    return csv_path, summary_path
