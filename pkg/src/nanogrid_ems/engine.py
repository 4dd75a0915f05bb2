"""Fixed-step closed-loop simulation and trace summaries.

Each step the controller reads the battery state observed at the end of
the previous step (one-step measurement delay, which avoids the algebraic
loop between battery power and frequency), commands a bus frequency, the
units respond, and the battery SOC integrates the resulting slack power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import TYPE_CHECKING

import numpy as np

from .controller import BatteryState, NanogridParams, make_controller
from .errors import EmptyTrace, ProfileOutOfRange, ValidationError
from .model import battery_soc_update, grid_step

if TYPE_CHECKING:  # profiles imports this module; avoid the cycle at runtime
    from .profiles import Profile

# Limit excursions are tolerated up to 5% of the limit for at most this many
# consecutive steps, absorbing the one-step measurement delay; anything
# longer counts as a violation episode.
VIOLATION_BAND_FRACTION = 0.05
VIOLATION_MAX_RUN = 3
SOC_BAND_PCT = 0.1


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run; profiles are file references."""

    name: str
    params: NanogridParams
    soc_init_pct: float
    pv_profile: str
    load_profile: str
    load_multiplier: float = 1.0
    controller: str = "flc"
    dt_s: float = 1.0
    duration_s: float = 43200.0

    def __post_init__(self):
        if not self.dt_s > 0:
            raise ValidationError("dt must be positive")
        if self.duration_s < self.dt_s:
            raise ValidationError("duration must be at least one step")
        if not self.load_multiplier > 0:
            raise ValidationError("load multiplier must be positive")
        if not 0.0 <= self.soc_init_pct <= 100.0:
            raise ValidationError("initial soc outside [0, 100]")
        if self.controller not in ("flc", "proportional"):
            raise ValidationError(f"unknown controller kind {self.controller!r}")


@dataclass(frozen=True)
class TimeStepRecord:
    t_s: float
    p_pv_avail_w: float
    p_pv_w: float
    p_aux_w: float
    p_load_w: float
    p_bat_w: float
    soc_pct: float
    omega_rad_s: float
    d_omega_plus: float
    d_omega_minus: float


TRACE_FIELDS = tuple(f.name for f in fields(TimeStepRecord))


@dataclass(frozen=True)
class SummaryMetrics:
    max_charge_w: float
    max_discharge_w: float
    soc_min_pct: float
    soc_max_pct: float
    omega_min_rad_s: float
    omega_max_rad_s: float
    curtailed_energy_wh: float
    aux_energy_wh: float
    charging_fraction: float
    violations_charge: int
    violations_discharge: int
    violations_soc_high: int
    violations_soc_low: int


SUMMARY_FIELDS = tuple(f.name for f in fields(SummaryMetrics))


def _step_count(duration_s: float, dt_s: float) -> int:
    # Steps at t = 0, dt, ... strictly below duration; the epsilon guards
    # divisions like 1.0/0.1 that land a hair above an integer.
    return int(math.ceil(duration_s / dt_s - 1e-9))


def _sample_all(profile: Profile, ts: np.ndarray, duration_s: float) -> np.ndarray:
    if profile.t_s[0] > 0.0 or profile.t_s[-1] < duration_s:
        raise ProfileOutOfRange(
            f"profile {profile.name!r} spans [{profile.t_s[0]:g}, {profile.t_s[-1]:g}] s "
            f"but the scenario needs [0, {duration_s:g}] s"
        )
    return np.interp(ts, profile.t_s, profile.power_w)


def run_scenario(
    scenario: Scenario, pv: Profile, load: Profile
) -> list[TimeStepRecord]:
    """Run the closed loop; identical inputs give a bit-identical trace."""
    params = scenario.params
    controller = make_controller(scenario.controller, params)
    n = _step_count(scenario.duration_s, scenario.dt_s)
    ts = np.arange(n, dtype=float) * scenario.dt_s
    pv_avail = _sample_all(pv, ts, scenario.duration_s)
    load_w = _sample_all(load, ts, scenario.duration_s) * scenario.load_multiplier

    soc = scenario.soc_init_pct
    prev_p_bat = 0.0
    trace: list[TimeStepRecord] = []
    for k in range(n):
        cmd = controller.step(BatteryState(soc, prev_p_bat))
        bus = grid_step(cmd.omega_cmd, float(pv_avail[k]), float(load_w[k]), params)
        soc = battery_soc_update(BatteryState(soc, bus.p_bat_w), scenario.dt_s, params)
        trace.append(
            TimeStepRecord(
                t_s=float(ts[k]),
                p_pv_avail_w=bus.p_pv_avail_w,
                p_pv_w=bus.p_pv_w,
                p_aux_w=bus.p_aux_w,
                p_load_w=bus.p_load_w,
                p_bat_w=bus.p_bat_w,
                soc_pct=soc,
                omega_rad_s=bus.omega_rad_s,
                d_omega_plus=cmd.d_omega_plus,
                d_omega_minus=cmd.d_omega_minus,
            )
        )
        prev_p_bat = bus.p_bat_w
    return trace


def _count_episodes(flags) -> int:
    """Number of runs of consecutive True flags longer than the tolerated run."""
    episodes = 0
    run = 0
    for flag in flags:
        run = run + 1 if flag else 0
        if run == VIOLATION_MAX_RUN + 1:
            episodes += 1
    return episodes


def summarize(
    trace: list[TimeStepRecord], params: NanogridParams, dt_s: float
) -> SummaryMetrics:
    """Pure aggregation of one trace; idempotent."""
    if not trace:
        raise EmptyTrace("cannot summarize an empty trace")
    hours = dt_s / 3600.0
    charge_band = (1.0 + VIOLATION_BAND_FRACTION) * params.p_charge_max_w
    discharge_band = (1.0 + VIOLATION_BAND_FRACTION) * params.p_discharge_max_w

    p_bat = [r.p_bat_w for r in trace]
    soc = [r.soc_pct for r in trace]
    omega = [r.omega_rad_s for r in trace]
    return SummaryMetrics(
        max_charge_w=max(max(p, 0.0) for p in p_bat),
        max_discharge_w=max(max(-p, 0.0) for p in p_bat),
        soc_min_pct=min(soc),
        soc_max_pct=max(soc),
        omega_min_rad_s=min(omega),
        omega_max_rad_s=max(omega),
        curtailed_energy_wh=sum(r.p_pv_avail_w - r.p_pv_w for r in trace) * hours,
        aux_energy_wh=sum(r.p_aux_w for r in trace) * hours,
        charging_fraction=sum(1 for p in p_bat if p > 0.0) / len(trace),
        violations_charge=_count_episodes(p > charge_band for p in p_bat),
        violations_discharge=_count_episodes(-p > discharge_band for p in p_bat),
        violations_soc_high=_count_episodes(
            s > params.soc_max_pct + SOC_BAND_PCT for s in soc
        ),
        violations_soc_low=_count_episodes(
            s < params.soc_min_pct - SOC_BAND_PCT for s in soc
        ),
    )
