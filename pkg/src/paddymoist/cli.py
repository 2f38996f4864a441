"""Command-line interface.

Verbs mirror the pipeline stages: ``synth`` writes two synthetic seasons,
``ingest`` collapses half-hourly station files to daily, ``train-et0`` /
``train-moisture`` fit and save the two models, ``simulate`` runs a saved
moisture model over a season, ``evaluate`` scores two CSV columns,
``run`` executes the whole two-period experiment, and ``export-plots``
regenerates the tidy plot CSVs for a config.

Exit codes: 0 success, 2 usage, 3 invalid values or dimensions, 4 malformed
data or config, 5 unsupported artifact version, 6 I/O failure, 1 anything
unexpected.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import persist
from .ann import TrainConfig
from .crop import kc_at, validate_schedule
from .errors import (ArtifactParseError, ArtifactVersionError, DataFormatError,
                     PaddymoistError)
from .evapo import predict_et0, train_et0_model
from .experiment import (build_forcing, default_config, export_plot_data,
                         load_period, parse_config, run_experiment,
                         weather_params_for, write_report_files,
                         write_synth_periods, PeriodData)
from .ingest import daily_aggregate, read_daily_csv, read_half_hourly_csv, write_daily_csv
from .metrics import nash_sutcliffe, r_squared, rmse
from .moisture import SimMode, simulate_moisture, train_moisture_model

logger = logging.getLogger("paddymoist")


def _load_config(path: "str | None"):
    if path is None:
        return default_config()
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _replace_seed(cfg: TrainConfig, seed: "int | None") -> TrainConfig:
    if seed is None:
        return cfg
    return TrainConfig(seed=seed, epochs=cfg.epochs, learning_rate=cfg.learning_rate,
                       init_half_width=cfg.init_half_width)


def _period_days(cfg, which: str, data: "str | None"):
    """Resolve a daily series for a standalone verb: --data wins over config."""
    if data is not None:
        days, theta = read_daily_csv(data)
        if not days:
            raise DataFormatError(f"{data} holds no days")
        return days, theta
    spec = cfg.period1 if which == "period1" else cfg.period2
    period = load_period(cfg, spec, which)
    return period.days, period.theta_obs


def cmd_synth(args) -> int:
    cfg = _load_config(args.config)
    if args.seed1 is not None or args.seed2 is not None:
        from dataclasses import replace
        p1 = replace(cfg.period1, seed=args.seed1) if args.seed1 is not None else cfg.period1
        p2 = replace(cfg.period2, seed=args.seed2) if args.seed2 is not None else cfg.period2
        cfg = replace(cfg, period1=p1, period2=p2)
    for p in write_synth_periods(cfg, args.out):
        print(p)
    return 0


def cmd_ingest(args) -> int:
    records = read_half_hourly_csv(args.input)
    agg = daily_aggregate(records, min_coverage=args.min_coverage)
    write_daily_csv(args.output, agg.days, agg.theta)
    print(f"wrote {len(agg.days)} days to {args.output}")
    if agg.gaps:
        print(f"excluded {len(agg.gaps)} day(s) under {args.min_coverage}/48 coverage:")
        for gap in agg.gaps:
            print(f"  {gap.date}: {gap.n_records} intervals")
    return 0


def cmd_train_et0(args) -> int:
    cfg = _load_config(args.config)
    days, _ = _period_days(cfg, "period1", args.data)
    train_cfg = _replace_seed(cfg.et0_train, args.seed)
    model, losses = train_et0_model(days, cfg.site, train_cfg,
                                    temp_norm=cfg.temp_norm, et0_norm=cfg.et0_norm)
    digest = persist.data_digest([d.tmax for d in days], [d.tavg for d in days],
                                 [d.tmin for d in days])
    persist.save_model(persist.et0_artifact(model, {
        "seed": str(train_cfg.seed), "epochs": str(train_cfg.epochs),
        "data_digest": digest,
    }), args.out)
    print(f"trained et0 surrogate on {len(days)} days; "
          f"final epoch loss {losses[-1]!r}; saved to {args.out}")
    return 0


def cmd_train_moisture(args) -> int:
    cfg = _load_config(args.config)
    days, theta = _period_days(cfg, "period1", args.data)
    if any(v is None for v in theta):
        raise DataFormatError("training data must carry theta_vwc on every day")
    validate_schedule(cfg.kc, len(days))
    et0_model = persist.et0_from_artifact(persist.load_model(args.et0_model))
    period = PeriodData(name="train", days=days, theta_obs=theta)
    forcing = build_forcing(cfg, et0_model, period)
    train_cfg = _replace_seed(cfg.moisture_train, args.seed)
    model, losses = train_moisture_model(forcing, theta, train_cfg, lag=cfg.lag,
                                         norms=cfg.moisture_norms)
    digest = persist.data_digest([f.et0 for f in forcing], [f.precip for f in forcing],
                                 theta)
    persist.save_model(persist.moisture_artifact(model, {
        "seed": str(train_cfg.seed), "epochs": str(train_cfg.epochs),
        "data_digest": digest,
    }), args.out)
    print(f"trained moisture estimator on {len(days)} days; "
          f"final epoch loss {losses[-1]!r}; saved to {args.out}")
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    days, theta = _period_days(cfg, "period2", args.data)
    validate_schedule(cfg.kc, len(days))
    et0_model = persist.et0_from_artifact(persist.load_model(args.et0_model))
    moisture_model = persist.moisture_from_artifact(persist.load_model(args.model))
    mode = SimMode(args.mode) if args.mode else cfg.sim_mode
    period = PeriodData(name="simulate", days=days, theta_obs=theta)
    forcing = build_forcing(cfg, et0_model, period)
    theta_obs = None
    if mode is SimMode.TEACHER_FORCED:
        if any(v is None for v in theta):
            raise DataFormatError("teacher-forced simulation needs theta_vwc on every day")
        theta_obs = theta
    theta_init = [cfg.theta_init_sim] * moisture_model.lag
    estimates = simulate_moisture(moisture_model, forcing, theta_init, mode,
                                  theta_obs=theta_obs)
    has_obs = all(v is not None for v in theta)
    lines = ["date,estimated_theta_vwc" + (",observed_theta_vwc" if has_obs else "")]
    for i, d in enumerate(days):
        row = f"{d.date.isoformat()},{estimates[i]!r}"
        if has_obs:
            row += f",{theta[i]!r}"
        lines.append(row)
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"simulated {len(estimates)} days ({mode.value}); wrote {args.out}")
    if has_obs:
        print(f"r_squared {r_squared(theta, estimates)!r}  "
              f"rmse {rmse(theta, estimates)!r}")
    return 0


def cmd_evaluate(args) -> int:
    import csv as _csv

    with open(args.file, newline="", encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataFormatError(f"{args.file}: empty file")
        for col in (args.obs_col, args.est_col):
            if col not in reader.fieldnames:
                raise DataFormatError(
                    f"{args.file}: no column {col!r} (have {reader.fieldnames})"
                )
        obs, est = [], []
        for row in reader:
            obs.append(float(row[args.obs_col]))
            est.append(float(row[args.est_col]))
    print(f"n {len(obs)}")
    print(f"r_squared {r_squared(obs, est)!r}")
    print(f"nash_sutcliffe {nash_sutcliffe(obs, est)!r}")
    print(f"rmse {rmse(obs, est)!r}")
    return 0


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    report = run_experiment(cfg)
    written = write_report_files(report, args.out)
    written += export_plot_data(report, args.out)
    for p in written:
        print(p)
    for name in ("et0_train", "et0_val", "theta_train", "theta_val"):
        c = report.cells[name]
        print(f"{name}: r_squared {c.r_squared:.4f}  rmse {c.rmse:.4f}")
    return 0


def cmd_export_plots(args) -> int:
    cfg = _load_config(args.config)
    report = run_experiment(cfg)
    for p in export_plot_data(report, args.out):
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paddymoist",
        description="Paddy-field soil moisture estimation from limited weather data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--config", help="experiment config file (defaults built in)")
        return p

    p = add("synth", cmd_synth, "generate the two synthetic periods as daily CSVs")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed1", type=int, help="override period 1 weather seed")
    p.add_argument("--seed2", type=int, help="override period 2 weather seed")

    p = add("ingest", cmd_ingest, "aggregate a half-hourly CSV to daily")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--min-coverage", type=int, default=40,
                   help="min intervals of 48 to keep a day (default 40)")

    p = add("train-et0", cmd_train_et0, "train and save the ET0 surrogate")
    p.add_argument("--data", help="daily CSV (default: config period 1)")
    p.add_argument("--out", required=True, help="model artifact path")
    p.add_argument("--seed", type=int, help="override training seed")

    p = add("train-moisture", cmd_train_moisture, "train and save the moisture estimator")
    p.add_argument("--data", help="daily CSV with theta_vwc (default: config period 1)")
    p.add_argument("--et0-model", required=True, help="saved ET0 surrogate")
    p.add_argument("--out", required=True, help="model artifact path")
    p.add_argument("--seed", type=int, help="override training seed")

    p = add("simulate", cmd_simulate, "run a saved moisture model over a season")
    p.add_argument("--data", help="daily CSV (default: config period 2)")
    p.add_argument("--model", required=True, help="saved moisture estimator")
    p.add_argument("--et0-model", required=True, help="saved ET0 surrogate")
    p.add_argument("--mode", choices=[m.value for m in SimMode],
                   help="lag source (default: config sim mode)")
    p.add_argument("--out", required=True, help="estimates CSV path")

    p = add("evaluate", cmd_evaluate, "score two columns of a CSV against each other")
    p.add_argument("--file", required=True)
    p.add_argument("--obs-col", default="observed_theta_vwc")
    p.add_argument("--est-col", default="estimated_theta_vwc")

    p = add("run", cmd_run, "full two-period experiment: report, metrics, plot data")
    p.add_argument("--out", required=True, help="output directory")

    p = add("export-plots", cmd_export_plots, "write tidy plot CSVs for a config")
    p.add_argument("--out", required=True, help="output directory")

    return parser


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ArtifactVersionError):
        return 5
    if isinstance(exc, (DataFormatError, ArtifactParseError)):
        return 4
    if isinstance(exc, (PaddymoistError, ValueError)):
        return 3
    if isinstance(exc, OSError):
        return 6
    return 1


def main(argv: "list[str] | None" = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # mapped to stable exit codes for scripting
        code = exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
