"""Synthetic tropical weather and bucket water balance.

This module is the ground-truth side of the package: a seeded weather
generator shaped like a West-Java paddy season, and a single-bucket root
zone whose storage changes by

    precipitation + irrigation - crop ET - runoff - deep percolation

with crop ET taken first within a step, percolation capped at a fixed daily
rate, and runoff as the overflow above a ponding threshold.  Every step
reports the fluxes it actually took, so storage changes can be audited
against the ledger to floating-point precision.  All parameter defaults are
synthetic placeholders, not measurements of any real field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date as Date, timedelta

import numpy as np

from .crop import KcSchedule, kc_at, validate_schedule
from .evapo import DailyWeather, SiteLocation, extraterrestrial_radiation, hargreaves_et0
from .moisture import ForcingDay

# Generator constants: day-to-day scatter of the mean temperature (deg C),
# lognormal sigma of the diurnal-range jitter, and the day-of-year where the
# seasonal temperature cycle peaks (late November, matching the wet-season
# onset at the default site).
_TAVG_NOISE_SD = 0.5
_RANGE_JITTER_SIGMA = 0.55
_SEASON_PEAK_DOY = 330


@dataclass(frozen=True)
class FieldParams:
    """Bucket parameters for the synthetic paddy root zone.

    Volumetric contents are m3/m3; ``perc_rate`` is mm/day; ``irrigation``
    lists (day_index, mm) applications.
    """

    root_depth: float = 0.2
    theta_sat: float = 0.55
    theta_res: float = 0.15
    theta_init: float = 0.45
    runoff_threshold: float = 0.52
    perc_rate: float = 3.0
    irrigation: tuple = ()

    def __post_init__(self):
        if self.root_depth <= 0.0:
            raise ValueError(f"root_depth must be > 0, got {self.root_depth}")
        if not (self.theta_res < self.theta_init <= self.theta_sat):
            raise ValueError(
                f"need theta_res < theta_init <= theta_sat, got "
                f"{self.theta_res}/{self.theta_init}/{self.theta_sat}"
            )
        if not (self.theta_res < self.runoff_threshold <= self.theta_sat):
            raise ValueError(
                f"runoff_threshold must lie in (theta_res, theta_sat], got "
                f"{self.runoff_threshold}"
            )
        if self.perc_rate < 0.0:
            raise ValueError(f"perc_rate must be >= 0, got {self.perc_rate}")
        for ev in self.irrigation:
            if len(ev) != 2 or ev[1] < 0:
                raise ValueError(f"irrigation events must be (day_index, mm >= 0), got {ev}")


@dataclass(frozen=True)
class WaterFluxes:
    """Outflows actually taken during one water-balance step, in mm."""

    etc_mm: float
    runoff_mm: float
    perc_mm: float


@dataclass(frozen=True)
class WeatherGenParams:
    """Knobs for :func:`generate_weather`.

    Defaults give monthly mean temperatures near 24 deg C and wet-season
    monthly precipitation totals of roughly 250-450 mm.
    """

    seed: int
    n_days: int
    start_date: Date = Date(2010, 10, 14)
    tavg_mean: float = 24.0
    tavg_amplitude: float = 0.5
    diurnal_range_mean: float = 10.0
    wet_day_prob: float = 0.55
    precip_mean_wet: float = 15.0

    def __post_init__(self):
        if self.n_days < 1:
            raise ValueError(f"n_days must be >= 1, got {self.n_days}")
        if not 0.0 <= self.wet_day_prob <= 1.0:
            raise ValueError(f"wet_day_prob must be in [0, 1], got {self.wet_day_prob}")
        if self.diurnal_range_mean <= 0.0:
            raise ValueError(
                f"diurnal_range_mean must be > 0, got {self.diurnal_range_mean}"
            )
        if self.precip_mean_wet < 0.0:
            raise ValueError(f"precip_mean_wet must be >= 0, got {self.precip_mean_wet}")


def water_balance_step(theta: float, p: FieldParams, precip_mm: float,
                       irrig_mm: float, etc_mm: float) -> tuple[float, WaterFluxes]:
    """Advance the bucket one day; returns (new theta, fluxes taken).

    Crop ET is extracted first (never below residual), then percolation
    (capped at ``perc_rate``, never below residual), then runoff of any
    excess above the ponding threshold.
    """
    for name, v in (("precip_mm", precip_mm), ("irrig_mm", irrig_mm), ("etc_mm", etc_mm)):
        if v < 0.0:
            raise ValueError(f"{name} must be >= 0, got {v}")
    if not (p.theta_res <= theta <= p.theta_sat):
        raise ValueError(
            f"theta {theta} outside [{p.theta_res}, {p.theta_sat}]"
        )
    depth_mm = p.root_depth * 1000.0
    res_mm = p.theta_res * depth_mm
    thr_mm = p.runoff_threshold * depth_mm

    storage = theta * depth_mm + precip_mm + irrig_mm
    etc_taken = min(etc_mm, max(storage - res_mm, 0.0))
    storage -= etc_taken
    perc = min(p.perc_rate, max(storage - res_mm, 0.0))
    storage -= perc
    runoff = max(storage - thr_mm, 0.0)
    storage -= runoff

    theta_next = storage / depth_mm
    theta_next = min(max(theta_next, p.theta_res), p.theta_sat)
    return theta_next, WaterFluxes(etc_mm=etc_taken, runoff_mm=runoff, perc_mm=perc)


def generate_weather(g: WeatherGenParams) -> list[DailyWeather]:
    """Seeded synthetic daily weather; same seed, same series, bit for bit.

    Mean temperature follows a shallow seasonal sinusoid plus Gaussian
    scatter; the diurnal range is the configured mean scaled by independent
    mean-one lognormal jitters above and below, which keeps
    tmin < tavg < tmax by construction.  Precipitation is a Bernoulli
    wet/dry process with exponential wet-day amounts.
    """
    rng = np.random.default_rng(g.seed)
    mu = -0.5 * _RANGE_JITTER_SIGMA ** 2  # mean-one lognormal
    days = []
    for d in range(g.n_days):
        day_date = g.start_date + timedelta(days=d)
        doy = day_date.timetuple().tm_yday
        tavg = (g.tavg_mean
                + g.tavg_amplitude * math.cos(2.0 * math.pi * (doy - _SEASON_PEAK_DOY) / 365.0)
                + rng.normal(0.0, _TAVG_NOISE_SD))
        j_up = rng.lognormal(mu, _RANGE_JITTER_SIGMA)
        j_down = rng.lognormal(mu, _RANGE_JITTER_SIGMA)
        tmax = tavg + 0.5 * g.diurnal_range_mean * j_up
        tmin = tavg - 0.5 * g.diurnal_range_mean * j_down
        wet = rng.uniform() < g.wet_day_prob
        precip = float(rng.exponential(g.precip_mean_wet)) if wet else 0.0
        days.append(DailyWeather(day_index=d, date=day_date, tmax=tmax,
                                 tavg=tavg, tmin=tmin, precip=precip))
    return days


def generate_truth(weather: "list[DailyWeather]", site: SiteLocation,
                   kc: KcSchedule, p: FieldParams,
                   ) -> tuple[list[float], list[ForcingDay]]:
    """Run the water balance over a season of weather.

    Per day: Hargreaves ET0 from the day's temperatures and date, crop ET
    as Kc * ET0, then one bucket step.  Returns the end-of-day soil
    moisture trajectory and the matching forcing series for model training.
    """
    if not weather:
        raise ValueError("weather series is empty")
    validate_schedule(kc, len(weather))
    irrig = {}
    for day_index, mm in p.irrigation:
        irrig[day_index] = irrig.get(day_index, 0.0) + mm
    theta = p.theta_init
    theta_series: list[float] = []
    forcing: list[ForcingDay] = []
    for d, day in enumerate(weather):
        ra = extraterrestrial_radiation(site, day.date.timetuple().tm_yday)
        et0 = hargreaves_et0(day.tmax, day.tavg, day.tmin, ra)
        kc_d = kc_at(kc, d)
        theta, _ = water_balance_step(theta, p, day.precip, irrig.get(d, 0.0), kc_d * et0)
        theta_series.append(theta)
        forcing.append(ForcingDay(et0=et0, precip=day.precip, kc=kc_d))
    return theta_series, forcing
