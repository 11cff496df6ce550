"""Command-line front end.

    ini-lab analytic   [CONFIG] [flags]   closed-form INI/SIR for one pair
    ini-lab montecarlo [CONFIG] [flags]   ensemble simulation for one pair
    ini-lab compare    [CONFIG] [flags]   closed forms vs single-tone oracle
    ini-lab scenario   --name NAME [flags]

Exit codes: 0 ok, 1 I/O error, 2 configuration error, 3 tolerance breach.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analytic, experiments, simulate
from .channel import format_channel, parse_channel
from .config import RunConfig, load_config, _number
from .errors import IniLabError, UnsupportedChannel
from .numerology import CpMode, Victim

COMPARE_TOLERANCE = 1e-9

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_TOLERANCE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fail(code: int, kind: str, message: str) -> int:
    msg = " ".join(str(message).split())
    print(f"error: code={code} kind={kind} message={json.dumps(msg)}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ini-lab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("analytic", "montecarlo", "compare", "scenario"):
        p = sub.add_parser(name)
        if name != "scenario":
            p.add_argument("config", nargs="?", help="key = value configuration file")
        p.add_argument("--n", type=int, dest="n_fft")
        p.add_argument("--q", type=int)
        p.add_argument("--eta", type=_number, dest="eta_nsn", help="NSN share of the band; WSN gets the rest")
        p.add_argument("--cp-ratio", type=_number)
        p.add_argument("--cp-mode", choices=[m.value for m in CpMode])
        p.add_argument("--power-nsn-db", type=float)
        p.add_argument("--power-wsn-db", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--modulation", choices=["bpsk", "qpsk"])
        p.add_argument("--channel", type=parse_channel)
        p.add_argument("--out", default="results")
        if name == "scenario":
            p.add_argument("--name", required=True, choices=sorted(experiments.SCENARIOS))
            p.add_argument("--engine", choices=[e.value for e in experiments.Engine], default="both")
    return parser


def _resolve(args) -> tuple[RunConfig, set[str]]:
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {k: getattr(args, k) for k in (
        "n_fft", "q", "eta_nsn", "cp_ratio", "power_nsn_db", "power_wsn_db",
        "trials", "seed", "modulation", "channel")}
    if args.cp_mode is not None:
        overrides["cp_mode"] = CpMode(args.cp_mode)
    given = {k for k, v in overrides.items() if v is not None}
    if "eta_nsn" in given:
        overrides["eta_wsn"] = None
        cfg.eta_wsn = None
    return cfg.updated(**overrides).check(), given


def _require_identity(cfg: RunConfig, command: str) -> None:
    if not cfg.channel.is_identity:
        raise UnsupportedChannel(f"'{command}' models the identity channel only; use 'montecarlo' for multipath")


def _profiles_result(name, cfg, profiles, source) -> experiments.ScenarioResult:
    pair = cfg.pair()
    spec = experiments.ScenarioSpec(name, pair, "none", (), experiments.Engine.ANALYTIC, cfg.trials, cfg.seed,
                                    cfg.modulation)
    result = experiments.ScenarioResult(spec)
    for v in Victim:
        result.rows += experiments._profile_rows(spec, "", profiles[v], source)
    metrics = analytic.summarize(profiles[Victim.NSN], profiles[Victim.WSN])
    result.summary = {"pair": experiments._pair_meta(pair), "cp_mode": pair.cp_mode,
                      "channel": format_channel(cfg.channel), source: metrics.as_dict()}
    return result


def _cmd_analytic(cfg: RunConfig, args) -> int:
    _require_identity(cfg, "analytic")
    pair = cfg.pair()
    profiles = {v: analytic.sir_profile(pair, v) for v in Victim}
    result = _profiles_result("analytic", cfg, profiles, "analytic")
    experiments.write_result(result, args.out)
    print(json.dumps(experiments._jsonable(result.summary["analytic"])))
    return EXIT_OK


def _cmd_montecarlo(cfg: RunConfig, args) -> int:
    pair = cfg.pair()
    profiles = simulate.measure_sir(pair, pair.cp_mode, cfg.trials, simulate.RngSpec(cfg.seed), cfg.modulation,
                                    channel=cfg.channel)
    result = _profiles_result("montecarlo", cfg, profiles, "mc")
    experiments.write_result(result, args.out)
    print(json.dumps(experiments._jsonable(result.summary["mc"])))
    return EXIT_OK


def _cmd_compare(cfg: RunConfig, args) -> int:
    _require_identity(cfg, "compare")
    pair = cfg.pair()
    report = simulate.cross_validate_report(pair, pair.cp_mode)
    worst = max(report.values())
    summary = {"pair": experiments._pair_meta(pair), "cp_mode": pair.cp_mode,
               "max_rel_err_by_direction": {d.value: e for d, e in report.items()},
               "max_rel_err": worst, "tolerance": COMPARE_TOLERANCE}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare_summary.json").write_text(
        json.dumps(experiments._jsonable(summary), indent=2) + "\n", encoding="utf-8")
    print(f"max_rel_err={worst:.3e}")
    if not worst <= COMPARE_TOLERANCE:
        return _fail(EXIT_TOLERANCE, "ToleranceExceeded",
                     f"max_rel_err {worst:.3e} > {COMPARE_TOLERANCE:.0e}")
    return EXIT_OK


def _cmd_scenario(cfg: RunConfig, given: set[str], args) -> int:
    _require_identity(cfg, "scenario")
    fn = experiments.SCENARIOS[args.name]
    kwargs = dict(engine=args.engine, trials=cfg.trials, seed=cfg.seed, modulation=cfg.modulation)
    if args.name != "cross_validation":
        # Unset flags leave the scenario's own default pair in place.
        pair_keys = {"n_fft", "q", "eta_nsn", "cp_ratio", "power_nsn_db", "power_wsn_db", "cp_mode"}
        if given & pair_keys or getattr(args, "config", None):
            pair = cfg.pair()
            if "q" not in given and args.name == "per_subcarrier_ini":
                pair = pair.with_(q=experiments.FIG3_DEFAULT_Q)
            kwargs["pair" if args.name == "per_subcarrier_ini" else "base"] = pair
    result = fn(**kwargs)
    csv_path, summary_path = experiments.write_result(result, args.out)
    print(csv_path)
    print(summary_path)
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg, given = _resolve(args)
        if args.command == "analytic":
            return _cmd_analytic(cfg, args)
        if args.command == "montecarlo":
            return _cmd_montecarlo(cfg, args)
        if args.command == "compare":
            return _cmd_compare(cfg, args)
        return _cmd_scenario(cfg, given, args)
    except _UsageError as exc:
        return _fail(EXIT_CONFIG, "UsageError", exc)
    except IniLabError as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, exc)
    except OSError as exc:
        return _fail(EXIT_IO, type(exc).__name__, exc)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
