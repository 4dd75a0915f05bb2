"""Supervisory energy management for the EV-battery bus-forming inverter.

The controller watches only the local battery state (state of charge and
instantaneous power) and encodes its decisions as a shift of the AC bus
frequency: a positive shift makes the PV unit curtail, a negative shift
makes the auxiliary unit inject.  Two fuzzy guard subsystems produce the
two shifts; a proportional controller is provided as a baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError
from .fuzzy import FuzzySystem, LinguisticVariable, Rule, triangular


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class NanogridParams:
    """Plant ratings, battery limits and droop coefficients.

    Single source of truth for all limits; the frequency-shift bounds and
    battery energy are derived from it.
    """

    p_pv_rating_w: float = 2230.0
    p_aux_rating_w: float = 1000.0
    c_bat_ah: float = 100.0
    v_bat_v: float = 120.0
    soc_max_pct: float = 95.0
    soc_min_plus10_pct: float = 50.0
    soc_min_pct: float = 40.0
    p_charge_max_w: float = 1000.0
    p_discharge_max_w: float = 1000.0
    omega_nom_rad_s: float = 314.16
    m_pv_rad_s_per_w: float = 0.75e-4
    m_aux_rad_s_per_w: float = 0.75e-4
    # Reactive droop; kept for configuration completeness, not simulated.
    n_v_per_var: float = 0.75e-4

    def __post_init__(self):
        if not self.soc_min_pct < self.soc_min_plus10_pct < self.soc_max_pct:
            raise ValidationError("SOC thresholds must be ordered min < min+10 < max")
        positive = (
            self.p_pv_rating_w,
            self.p_aux_rating_w,
            self.c_bat_ah,
            self.v_bat_v,
            self.p_charge_max_w,
            self.p_discharge_max_w,
            self.omega_nom_rad_s,
            self.m_pv_rad_s_per_w,
            self.m_aux_rad_s_per_w,
        )
        if any(v <= 0 for v in positive):
            raise ValidationError("ratings, limits and droop slopes must be positive")

    @property
    def d_omega_plus_max(self) -> float:
        """Largest upward shift: saturates PV curtailment, rad/s."""
        return self.m_pv_rad_s_per_w * self.p_pv_rating_w

    @property
    def d_omega_minus_max(self) -> float:
        """Largest downward shift magnitude: saturates auxiliary dispatch, rad/s."""
        return self.m_aux_rad_s_per_w * self.p_aux_rating_w

    @property
    def e_bat_wh(self) -> float:
        return self.c_bat_ah * self.v_bat_v


@dataclass(frozen=True)
class BatteryState:
    """SOC in percent plus signed battery power (positive = charging)."""

    soc_pct: float
    p_bat_w: float

    def __post_init__(self):
        if not 0.0 <= self.soc_pct <= 100.0:
            raise ValidationError(f"soc {self.soc_pct} outside [0, 100]")

    @property
    def p_charge_w(self) -> float:
        return max(self.p_bat_w, 0.0)

    @property
    def p_discharge_w(self) -> float:
        return max(-self.p_bat_w, 0.0)


@dataclass(frozen=True)
class FrequencyCommand:
    d_omega_plus: float
    d_omega_minus: float
    omega_cmd: float


def normalize_soc_high(soc_pct: float, params: NanogridParams) -> float:
    """Normalized SOC headroom below the maximum limit, clamped to [0, 1]."""
    span = params.soc_max_pct - params.soc_min_pct
    return _clamp01((params.soc_max_pct - soc_pct) / span)


def normalize_charge(p_charge_w: float, params: NanogridParams) -> float:
    """Normalized charging-power reserve, clamped to [0, 1]."""
    return _clamp01((params.p_charge_max_w - p_charge_w) / params.p_charge_max_w)


def normalize_soc_low(soc_pct: float, params: NanogridParams) -> float:
    """Normalized SOC margin above the minimum limit, clamped to [0, 1]."""
    span = params.soc_min_plus10_pct - params.soc_min_pct
    return _clamp01((soc_pct - params.soc_min_pct) / span)


def normalize_discharge(p_discharge_w: float, params: NanogridParams) -> float:
    """Normalized discharging-power reserve, clamped to [0, 1]."""
    return _clamp01(
        (params.p_discharge_max_w - p_discharge_w) / params.p_discharge_max_w
    )


# Shared 3-term partition for both normalized inputs.
_INPUT_TERMS = (
    ("low", triangular(0.0, 0.0, 0.5)),
    ("med", triangular(0.0, 0.5, 1.0)),
    ("high", triangular(0.5, 1.0, 1.0)),
)

# Consequent for every (soc margin term, power margin term) cell.  Low margin
# on either axis must dominate: curtail hard or inject hard.
_RULE_TABLE = {
    ("low", "low"): "large",
    ("low", "med"): "large",
    ("low", "high"): "large",
    ("med", "low"): "large",
    ("high", "low"): "large",
    ("med", "med"): "small",
    ("med", "high"): "zero",
    ("high", "med"): "zero",
    ("high", "high"): "zero",
}


def build_guard_system(name: str, span: float, resolution: int = 1001) -> FuzzySystem:
    """One guard subsystem mapping two normalized margins to a shift magnitude."""
    soc_margin = LinguisticVariable("soc_margin", 0.0, 1.0, _INPUT_TERMS)
    power_margin = LinguisticVariable("power_margin", 0.0, 1.0, _INPUT_TERMS)
    output = LinguisticVariable(
        "shift",
        0.0,
        span,
        (
            ("zero", triangular(0.0, 0.0, 0.4 * span)),
            ("small", triangular(0.2 * span, 0.5 * span, 0.8 * span)),
            ("large", triangular(0.6 * span, span, span)),
        ),
    )
    rules = tuple(
        Rule(
            antecedent=(("soc_margin", soc_term), ("power_margin", power_term)),
            consequent=out_term,
        )
        for (soc_term, power_term), out_term in _RULE_TABLE.items()
    )
    return FuzzySystem(name, (soc_margin, power_margin), output, rules, resolution)


class FuzzyEms:
    """Fuzzy supervisory controller; stateless given (BatteryState, params).

    Raw centroids of a Mamdani system cannot reach the ends of the output
    universe, so each guard output is passed through an affine calibration
    that pins the all-zero aggregate to exactly 0 and the all-large
    aggregate to exactly the shift bound.
    """

    def __init__(self, params: NanogridParams):
        self.params = params
        self.overcharge_guard = build_guard_system(
            "overcharge_guard", params.d_omega_plus_max
        )
        self.depletion_guard = build_guard_system(
            "depletion_guard", params.d_omega_minus_max
        )
        self._plus_cal = (
            self.overcharge_guard.term_centroid("zero"),
            self.overcharge_guard.term_centroid("large"),
        )
        self._minus_cal = (
            self.depletion_guard.term_centroid("zero"),
            self.depletion_guard.term_centroid("large"),
        )

    @staticmethod
    def _calibrated(system, cal, bound, x1, x2):
        c0, c1 = cal
        raw = system.infer(x1, x2)
        return bound * _clamp01((raw - c0) / (c1 - c0))

    def shift_plus(self, d_soc_high: float, d_charge: float) -> float:
        """Upward shift in [0, d_omega_plus_max] driving PV curtailment."""
        return self._calibrated(
            self.overcharge_guard,
            self._plus_cal,
            self.params.d_omega_plus_max,
            d_soc_high,
            d_charge,
        )

    def shift_minus(self, d_soc_low: float, d_discharge: float) -> float:
        """Downward shift in [-d_omega_minus_max, 0] driving auxiliary dispatch."""
        magnitude = self._calibrated(
            self.depletion_guard,
            self._minus_cal,
            self.params.d_omega_minus_max,
            d_soc_low,
            d_discharge,
        )
        return -magnitude

    def step(self, state: BatteryState) -> FrequencyCommand:
        p = self.params
        plus = self.shift_plus(
            normalize_soc_high(state.soc_pct, p), normalize_charge(state.p_charge_w, p)
        )
        minus = self.shift_minus(
            normalize_soc_low(state.soc_pct, p),
            normalize_discharge(state.p_discharge_w, p),
        )
        return FrequencyCommand(plus, minus, p.omega_nom_rad_s + plus + minus)


class ProportionalEms:
    """Droop-style baseline: shifts scale with the SOC margins alone.

    Deliberately blind to the instantaneous battery power, which is what
    the comparison scenarios expose.
    """

    def __init__(self, params: NanogridParams):
        self.params = params

    def step(self, state: BatteryState) -> FrequencyCommand:
        p = self.params
        plus = p.d_omega_plus_max * (1.0 - normalize_soc_high(state.soc_pct, p))
        minus = -p.d_omega_minus_max * (1.0 - normalize_soc_low(state.soc_pct, p))
        return FrequencyCommand(plus, minus, p.omega_nom_rad_s + plus + minus)


CONTROLLER_KINDS = ("flc", "proportional")


def make_controller(kind: str, params: NanogridParams):
    if kind == "flc":
        return FuzzyEms(params)
    if kind == "proportional":
        return ProportionalEms(params)
    raise ValidationError(f"unknown controller kind {kind!r}")


@lru_cache(maxsize=8)
def _cached_fuzzy_ems(params: NanogridParams) -> FuzzyEms:
    return FuzzyEms(params)


def flc_shift_plus(d_soc_high: float, d_charge: float, params: NanogridParams) -> float:
    return _cached_fuzzy_ems(params).shift_plus(d_soc_high, d_charge)


def flc_shift_minus(
    d_soc_low: float, d_discharge: float, params: NanogridParams
) -> float:
    return _cached_fuzzy_ems(params).shift_minus(d_soc_low, d_discharge)


def ems_step(state: BatteryState, params: NanogridParams) -> FrequencyCommand:
    """One fuzzy supervisory step from a measured battery state."""
    return _cached_fuzzy_ems(params).step(state)


def proportional_step(state: BatteryState, params: NanogridParams) -> FrequencyCommand:
    """One baseline proportional step from a measured battery state."""
    return ProportionalEms(params).step(state)
