"""Two-period experiment: train on season one, validate on season two.

The experiment mirrors a cross-period protocol: the ET0 surrogate is
trained against Hargreaves on the first cultivation period and validated on
the second; the moisture estimator is trained teacher-forced on the first
period (driven by the surrogate's ET0) and then simulated on the second in
the configured mode (closed loop by default).  Four metric cells come out:
ET0 train/validation and moisture train/validation, each carrying the
squared Pearson correlation, the 1 - SSE/SST variant, and the RMSE.

Everything is driven by a flat ``key = value`` config document.  Any key
left out falls back to the library default, and the report echoes every
effective value, so a written report never depends on hidden state.  With
fixed seeds the whole run, including the written files, is byte-for-byte
reproducible.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import date as Date

from .ann import Normalizer, TrainConfig
from .crop import KcSchedule, kc_at, validate_schedule
from .errors import DataFormatError
from .evapo import (DEFAULT_LATITUDE_RAD, DailyWeather, Et0Model, SiteLocation,
                    hargreaves_series, predict_et0, train_et0_model)
from .hydro import FieldParams, WeatherGenParams, generate_truth, generate_weather
from .ingest import read_daily_csv, write_daily_csv
from .metrics import nash_sutcliffe, r_squared, rmse
from .moisture import (ForcingDay, MoistureModel, MoistureNormalizers, SimMode,
                       simulate_moisture, train_moisture_model)


@dataclass(frozen=True)
class PeriodSpec:
    """Where one cultivation period's data comes from."""

    planting: Date
    n_days: int
    source: str = "synth"          # "synth" or "csv"
    seed: int = 0                  # used when source == "synth"
    data_path: str = ""            # used when source == "csv"

    def __post_init__(self):
        if self.source not in ("synth", "csv"):
            raise DataFormatError(f"period source must be synth or csv, got {self.source!r}")
        if self.n_days < 1:
            raise ValueError(f"period needs at least 1 day, got {self.n_days}")


@dataclass(frozen=True)
class ExperimentConfig:
    site: SiteLocation
    temp_norm: Normalizer
    et0_norm: Normalizer
    precip_norm: Normalizer
    kc_norm: Normalizer
    theta_norm: Normalizer
    kc: KcSchedule
    et0_train: TrainConfig
    moisture_train: TrainConfig
    lag: int
    sim_mode: SimMode
    theta_init_sim: float
    period1: PeriodSpec
    period2: PeriodSpec
    weather_tavg_mean: float
    weather_tavg_amplitude: float
    weather_diurnal_range: float
    weather_wet_day_prob: float
    weather_precip_mean_wet: float
    field: FieldParams

    @property
    def moisture_norms(self) -> MoistureNormalizers:
        return MoistureNormalizers(et0=self.et0_norm, precip=self.precip_norm,
                                   kc=self.kc_norm, theta=self.theta_norm)


# Canonical defaults: Table-like planting dates two cultivation periods
# apart, 118-day seasons, and generator/bucket values chosen so the
# synthetic analog lands near the protocol's expected agreement levels.
_DEFAULTS: "dict[str, str]" = {
    "site.latitude_deg": repr(math.degrees(DEFAULT_LATITUDE_RAD)),
    "site.altitude_m": "536.0",
    "normalizer.temp_c": "0 50",
    "normalizer.et0_mm": "0 10",
    "normalizer.precip_mm": "0 100",
    "normalizer.kc": "0 1.5",
    "normalizer.theta_vwc": "0 1",
    "kc.stage_lengths": "20 30 40 28",
    "kc.values": "1.05 1.2 0.9",
    "train.et0.epochs": "1000",
    "train.et0.learning_rate": "0.5",
    "train.et0.seed": "42",
    "train.et0.init_half_width": "0.5",
    "train.moisture.epochs": "1000",
    "train.moisture.learning_rate": "0.5",
    "train.moisture.seed": "7",
    "train.moisture.init_half_width": "0.5",
    "moisture.lag": "1",
    "moisture.sim_mode": "closed_loop",
    "moisture.theta_init": "0.45",
    "period1.planting": "2010-10-14",
    "period1.days": "118",
    "period1.source": "synth",
    "period1.seed": "101",
    "period1.data": "",
    "period2.planting": "2011-08-20",
    "period2.days": "118",
    "period2.source": "synth",
    "period2.seed": "202",
    "period2.data": "",
    "weather.tavg_mean_c": "24.0",
    "weather.tavg_amplitude_c": "0.5",
    "weather.diurnal_range_c": "10.0",
    "weather.wet_day_prob": "0.55",
    "weather.precip_mean_wet_mm": "15.0",
    "field.root_depth_m": "0.2",
    "field.theta_sat": "0.55",
    "field.theta_res": "0.15",
    "field.theta_init": "0.45",
    "field.runoff_threshold": "0.52",
    "field.percolation_mm_day": "3.0",
}


def _parse_pair(raw: str, key: str) -> Normalizer:
    parts = raw.split()
    if len(parts) != 2:
        raise DataFormatError(f"{key}: expected 'lo hi', got {raw!r}")
    return Normalizer(float(parts[0]), float(parts[1]))


def parse_config(text: str) -> ExperimentConfig:
    """Parse a config document; unknown keys are rejected, missing ones default."""
    values = dict(_DEFAULTS)
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise DataFormatError(f"config line {line_no}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        if key not in values:
            raise DataFormatError(f"config line {line_no}: unknown key {key!r}")
        values[key] = raw.strip()

    try:
        lengths = [int(v) for v in values["kc.stage_lengths"].split()]
        kc_vals = [float(v) for v in values["kc.values"].split()]
        if len(lengths) != 4 or len(kc_vals) != 3:
            raise DataFormatError(
                "kc.stage_lengths needs 4 integers and kc.values 3 numbers"
            )
        mode_raw = values["moisture.sim_mode"]
        try:
            sim_mode = SimMode(mode_raw)
        except ValueError:
            raise DataFormatError(
                f"moisture.sim_mode must be one of "
                f"{[m.value for m in SimMode]}, got {mode_raw!r}"
            ) from None

        def period(prefix: str) -> PeriodSpec:
            return PeriodSpec(
                planting=Date.fromisoformat(values[f"{prefix}.planting"]),
                n_days=int(values[f"{prefix}.days"]),
                source=values[f"{prefix}.source"],
                seed=int(values[f"{prefix}.seed"] or 0),
                data_path=values[f"{prefix}.data"],
            )

        def train_cfg(prefix: str) -> TrainConfig:
            return TrainConfig(
                seed=int(values[f"{prefix}.seed"]),
                epochs=int(values[f"{prefix}.epochs"]),
                learning_rate=float(values[f"{prefix}.learning_rate"]),
                init_half_width=float(values[f"{prefix}.init_half_width"]),
            )

        return ExperimentConfig(
            site=SiteLocation(latitude=math.radians(float(values["site.latitude_deg"])),
                              altitude_m=float(values["site.altitude_m"])),
            temp_norm=_parse_pair(values["normalizer.temp_c"], "normalizer.temp_c"),
            et0_norm=_parse_pair(values["normalizer.et0_mm"], "normalizer.et0_mm"),
            precip_norm=_parse_pair(values["normalizer.precip_mm"], "normalizer.precip_mm"),
            kc_norm=_parse_pair(values["normalizer.kc"], "normalizer.kc"),
            theta_norm=_parse_pair(values["normalizer.theta_vwc"], "normalizer.theta_vwc"),
            kc=KcSchedule(len_ini=lengths[0], len_dev=lengths[1], len_mid=lengths[2],
                          len_late=lengths[3], kc_ini=kc_vals[0], kc_mid=kc_vals[1],
                          kc_end=kc_vals[2]),
            et0_train=train_cfg("train.et0"),
            moisture_train=train_cfg("train.moisture"),
            lag=int(values["moisture.lag"]),
            sim_mode=sim_mode,
            theta_init_sim=float(values["moisture.theta_init"]),
            period1=period("period1"),
            period2=period("period2"),
            weather_tavg_mean=float(values["weather.tavg_mean_c"]),
            weather_tavg_amplitude=float(values["weather.tavg_amplitude_c"]),
            weather_diurnal_range=float(values["weather.diurnal_range_c"]),
            weather_wet_day_prob=float(values["weather.wet_day_prob"]),
            weather_precip_mean_wet=float(values["weather.precip_mean_wet_mm"]),
            field=FieldParams(
                root_depth=float(values["field.root_depth_m"]),
                theta_sat=float(values["field.theta_sat"]),
                theta_res=float(values["field.theta_res"]),
                theta_init=float(values["field.theta_init"]),
                runoff_threshold=float(values["field.runoff_threshold"]),
                perc_rate=float(values["field.percolation_mm_day"]),
            ),
        )
    except DataFormatError:
        raise
    except ValueError as exc:
        raise DataFormatError(f"config value error: {exc}") from exc


def default_config() -> ExperimentConfig:
    return parse_config("")


def format_config(cfg: ExperimentConfig) -> str:
    """Echo every effective setting as a canonical config document."""

    def norm(nz: Normalizer) -> str:
        return f"{nz.lo!r} {nz.hi!r}"

    pairs = [
        ("site.latitude_deg", repr(math.degrees(cfg.site.latitude))),
        ("site.altitude_m", repr(cfg.site.altitude_m)),
        ("normalizer.temp_c", norm(cfg.temp_norm)),
        ("normalizer.et0_mm", norm(cfg.et0_norm)),
        ("normalizer.precip_mm", norm(cfg.precip_norm)),
        ("normalizer.kc", norm(cfg.kc_norm)),
        ("normalizer.theta_vwc", norm(cfg.theta_norm)),
        ("kc.stage_lengths", f"{cfg.kc.len_ini} {cfg.kc.len_dev} {cfg.kc.len_mid} {cfg.kc.len_late}"),
        ("kc.values", f"{cfg.kc.kc_ini!r} {cfg.kc.kc_mid!r} {cfg.kc.kc_end!r}"),
        ("train.et0.epochs", str(cfg.et0_train.epochs)),
        ("train.et0.learning_rate", repr(cfg.et0_train.learning_rate)),
        ("train.et0.seed", str(cfg.et0_train.seed)),
        ("train.et0.init_half_width", repr(cfg.et0_train.init_half_width)),
        ("train.moisture.epochs", str(cfg.moisture_train.epochs)),
        ("train.moisture.learning_rate", repr(cfg.moisture_train.learning_rate)),
        ("train.moisture.seed", str(cfg.moisture_train.seed)),
        ("train.moisture.init_half_width", repr(cfg.moisture_train.init_half_width)),
        ("moisture.lag", str(cfg.lag)),
        ("moisture.sim_mode", cfg.sim_mode.value),
        ("moisture.theta_init", repr(cfg.theta_init_sim)),
        ("period1.planting", cfg.period1.planting.isoformat()),
        ("period1.days", str(cfg.period1.n_days)),
        ("period1.source", cfg.period1.source),
        ("period1.seed", str(cfg.period1.seed)),
        ("period1.data", cfg.period1.data_path),
        ("period2.planting", cfg.period2.planting.isoformat()),
        ("period2.days", str(cfg.period2.n_days)),
        ("period2.source", cfg.period2.source),
        ("period2.seed", str(cfg.period2.seed)),
        ("period2.data", cfg.period2.data_path),
        ("weather.tavg_mean_c", repr(cfg.weather_tavg_mean)),
        ("weather.tavg_amplitude_c", repr(cfg.weather_tavg_amplitude)),
        ("weather.diurnal_range_c", repr(cfg.weather_diurnal_range)),
        ("weather.wet_day_prob", repr(cfg.weather_wet_day_prob)),
        ("weather.precip_mean_wet_mm", repr(cfg.weather_precip_mean_wet)),
        ("field.root_depth_m", repr(cfg.field.root_depth)),
        ("field.theta_sat", repr(cfg.field.theta_sat)),
        ("field.theta_res", repr(cfg.field.theta_res)),
        ("field.theta_init", repr(cfg.field.theta_init)),
        ("field.runoff_threshold", repr(cfg.field.runoff_threshold)),
        ("field.percolation_mm_day", repr(cfg.field.perc_rate)),
    ]
    return "\n".join(f"{k} = {v}" for k, v in pairs) + "\n"


def weather_params_for(cfg: ExperimentConfig, spec: PeriodSpec) -> WeatherGenParams:
    return WeatherGenParams(
        seed=spec.seed,
        n_days=spec.n_days,
        start_date=spec.planting,
        tavg_mean=cfg.weather_tavg_mean,
        tavg_amplitude=cfg.weather_tavg_amplitude,
        diurnal_range_mean=cfg.weather_diurnal_range,
        wet_day_prob=cfg.weather_wet_day_prob,
        precip_mean_wet=cfg.weather_precip_mean_wet,
    )


@dataclass
class PeriodData:
    """One period's loaded series."""

    name: str
    days: list
    theta_obs: list


def load_period(cfg: ExperimentConfig, spec: PeriodSpec, name: str) -> PeriodData:
    """Generate a synthetic period or read a daily CSV with observed theta."""
    if spec.source == "synth":
        weather = generate_weather(weather_params_for(cfg, spec))
        theta, _ = generate_truth(weather, cfg.site, cfg.kc, cfg.field)
        return PeriodData(name=name, days=weather, theta_obs=theta)
    if not spec.data_path:
        raise DataFormatError(f"{name}: source is csv but no data path was given")
    days, theta = read_daily_csv(spec.data_path)
    if not days:
        raise DataFormatError(f"{name}: {spec.data_path} holds no days")
    if any(v is None for v in theta):
        raise DataFormatError(
            f"{name}: {spec.data_path} must carry theta_vwc on every day"
        )
    return PeriodData(name=name, days=days, theta_obs=theta)


@dataclass
class MetricCell:
    n: int
    r_squared: float
    nash_sutcliffe: float
    rmse: float


@dataclass
class PeriodResult:
    name: str
    days: list
    theta_obs: list
    hargreaves: list
    et0_pred: list
    theta_est: list
    kc_series: list


@dataclass
class ExperimentReport:
    config_text: str
    period1: PeriodResult
    period2: PeriodResult
    cells: "dict[str, MetricCell]"
    sim_mode: SimMode
    et0_final_loss: float
    moisture_final_loss: float
    et0_mean_residual: float
    et0_mean_residual_top_quartile: float
    et0_model: Et0Model
    moisture_model: MoistureModel


def _cell(obs, est) -> MetricCell:
    return MetricCell(n=len(obs), r_squared=r_squared(obs, est),
                      nash_sutcliffe=nash_sutcliffe(obs, est), rmse=rmse(obs, est))


def build_forcing(cfg: ExperimentConfig, model: Et0Model, period: PeriodData) -> list[ForcingDay]:
    """Moisture forcing with the surrogate's (not Hargreaves') ET0, as deployed."""
    forcing = []
    for d, day in enumerate(period.days):
        et0 = predict_et0(model, day.tmax, day.tavg, day.tmin)
        forcing.append(ForcingDay(et0=et0, precip=day.precip, kc=kc_at(cfg.kc, d)))
    return forcing


@contextmanager
def _stage(name: str):
    """Prefix any failure with the pipeline stage it came from."""
    try:
        yield
    except Exception as exc:
        try:
            tagged = type(exc)(f"[stage: {name}] {exc}")
        except Exception:
            raise exc from None
        raise tagged from exc


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Execute the full two-period pipeline; deterministic for a fixed config.

    Any stage failure aborts with the stage name prefixed to the error.
    """
    with _stage("load period1"):
        p1 = load_period(cfg, cfg.period1, "period1")
    with _stage("load period2"):
        p2 = load_period(cfg, cfg.period2, "period2")
    with _stage("crop schedule"):
        validate_schedule(cfg.kc, len(p1.days))
        validate_schedule(cfg.kc, len(p2.days))

    with _stage("train et0"):
        et0_model, et0_losses = train_et0_model(
            p1.days, cfg.site, cfg.et0_train,
            temp_norm=cfg.temp_norm, et0_norm=cfg.et0_norm,
        )
    with _stage("predict et0"):
        harg1 = hargreaves_series(p1.days, cfg.site)
        harg2 = hargreaves_series(p2.days, cfg.site)
        pred1 = [predict_et0(et0_model, d.tmax, d.tavg, d.tmin) for d in p1.days]
        pred2 = [predict_et0(et0_model, d.tmax, d.tavg, d.tmin) for d in p2.days]

    with _stage("train moisture"):
        forcing1 = build_forcing(cfg, et0_model, p1)
        forcing2 = build_forcing(cfg, et0_model, p2)
        moisture_model, m_losses = train_moisture_model(
            forcing1, p1.theta_obs, cfg.moisture_train, lag=cfg.lag,
            norms=cfg.moisture_norms,
        )
    with _stage("simulate moisture"):
        theta_init = [cfg.theta_init_sim] * cfg.lag
        theta_est1 = simulate_moisture(moisture_model, forcing1, theta_init,
                                       SimMode.TEACHER_FORCED, theta_obs=p1.theta_obs)
        theta_est2 = simulate_moisture(
            moisture_model, forcing2, theta_init, cfg.sim_mode,
            theta_obs=p2.theta_obs if cfg.sim_mode is SimMode.TEACHER_FORCED else None,
        )

    residuals = [p - h for p, h in zip(pred1, harg1)]
    order = sorted(range(len(harg1)), key=lambda i: harg1[i])
    top = order[-max(1, len(order) // 4):]
    cells = {
        "et0_train": _cell(harg1, pred1),
        "et0_val": _cell(harg2, pred2),
        "theta_train": _cell(p1.theta_obs, theta_est1),
        "theta_val": _cell(p2.theta_obs, theta_est2),
    }
    return ExperimentReport(
        config_text=format_config(cfg),
        period1=PeriodResult(name="period1", days=p1.days, theta_obs=p1.theta_obs,
                             hargreaves=harg1, et0_pred=pred1, theta_est=theta_est1,
                             kc_series=[f.kc for f in forcing1]),
        period2=PeriodResult(name="period2", days=p2.days, theta_obs=p2.theta_obs,
                             hargreaves=harg2, et0_pred=pred2, theta_est=theta_est2,
                             kc_series=[f.kc for f in forcing2]),
        cells=cells,
        sim_mode=cfg.sim_mode,
        et0_final_loss=et0_losses[-1],
        moisture_final_loss=m_losses[-1],
        et0_mean_residual=sum(residuals) / len(residuals),
        et0_mean_residual_top_quartile=sum(residuals[i] for i in top) / len(top),
        et0_model=et0_model,
        moisture_model=moisture_model,
    )


def format_report_text(report: ExperimentReport) -> str:
    lines = [
        "paddymoist experiment report",
        "============================",
        "",
        "Protocol: ET0 surrogate and moisture estimator trained on period 1;",
        f"period 2 held out for validation (moisture simulated {report.sim_mode.value}).",
        "",
        "Metric cells (observed vs estimated, daily):",
        "",
        f"{'cell':<14} {'n':>4} {'r_squared':>12} {'nash_sutcliffe':>15} {'rmse':>12}",
    ]
    for name in ("et0_train", "et0_val", "theta_train", "theta_val"):
        c = report.cells[name]
        lines.append(f"{name:<14} {c.n:>4} {c.r_squared:>12.6f} "
                     f"{c.nash_sutcliffe:>15.6f} {c.rmse:>12.6f}")
    lines += [
        "",
        "ET0 rows compare the surrogate to the Hargreaves reference (mm/day);",
        "theta rows compare estimates to observed soil moisture (m3/m3).",
        "",
        f"final training loss: et0 {report.et0_final_loss!r}, "
        f"moisture {report.moisture_final_loss!r}",
        f"et0 mean residual, training period: {report.et0_mean_residual!r} mm/day",
        f"et0 mean residual, top-quartile days: {report.et0_mean_residual_top_quartile!r} mm/day",
        "",
        "Effective configuration (every value explicit):",
        "",
    ]
    lines.append(report.config_text.rstrip("\n"))
    return "\n".join(lines) + "\n"


def format_metrics_csv(report: ExperimentReport) -> str:
    lines = ["cell,n,r_squared,nash_sutcliffe,rmse"]
    for name in ("et0_train", "et0_val", "theta_train", "theta_val"):
        c = report.cells[name]
        lines.append(f"{name},{c.n},{c.r_squared!r},{c.nash_sutcliffe!r},{c.rmse!r}")
    return "\n".join(lines) + "\n"


def write_report_files(report: ExperimentReport, out_dir) -> list:
    """Write report.txt and metrics.csv; returns the written paths."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in (("report.txt", format_report_text(report)),
                       ("metrics.csv", format_metrics_csv(report))):
        p = out / name
        p.write_text(text, encoding="utf-8")
        paths.append(p)
    return paths


def _monthly_rows(period: PeriodResult):
    by_month: dict = {}
    for d in period.days:
        by_month.setdefault(d.date.strftime("%Y-%m"), []).append(d)
    for month in sorted(by_month):
        yield month, by_month[month]


def export_plot_data(report: ExperimentReport, out_dir) -> list:
    """Write tidy per-figure CSVs; byte-identical for the same report."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []

    lines = ["period,month,tavg_mean_c,n_days"]
    for period in (report.period1, report.period2):
        for month, days in _monthly_rows(period):
            mean = sum(d.tavg for d in days) / len(days)
            lines.append(f"{period.name},{month},{mean!r},{len(days)}")
    files.append(("monthly_temperature.csv", lines))

    lines = ["period,month,precip_total_mm,n_days"]
    for period in (report.period1, report.period2):
        for month, days in _monthly_rows(period):
            total = sum(d.precip for d in days)
            lines.append(f"{period.name},{month},{total!r},{len(days)}")
    files.append(("monthly_precipitation.csv", lines))

    for period in (report.period1, report.period2):
        lines = ["date,hargreaves_et0_mm,estimated_et0_mm"]
        for d, h, e in zip(period.days, period.hargreaves, period.et0_pred):
            lines.append(f"{d.date.isoformat()},{h!r},{e!r}")
        files.append((f"scatter_et0_{period.name}.csv", lines))

        lines = ["date,observed_theta_vwc,estimated_theta_vwc"]
        for d, o, e in zip(period.days, period.theta_obs, period.theta_est):
            lines.append(f"{d.date.isoformat()},{o!r},{e!r}")
        files.append((f"scatter_theta_{period.name}.csv", lines))

    written = []
    for name, lines in files:
        p = out / name
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(p)
    return written


def write_synth_periods(cfg: ExperimentConfig, out_dir) -> list:
    """Generate both synthetic periods and write their daily CSVs."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for spec, name in ((cfg.period1, "period1"), (cfg.period2, "period2")):
        weather = generate_weather(weather_params_for(cfg, spec))
        theta, _ = generate_truth(weather, cfg.site, cfg.kc, cfg.field)
        p = out / f"{name}_daily.csv"
        write_daily_csv(p, weather, theta)
        written.append(p)
    return written
