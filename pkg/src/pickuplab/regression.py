"""Turns/gauge design equations for single-coil pickups.

Per wire gauge, the resonant frequency falls exponentially with the number
of turns N and the resonant peak magnitude rises linearly with N:

    42 AWG:  f0 = 3.33e4 * exp(-1.14e-4 N)    |Z| = 121 N - 3.63e4
    44 AWG:  f0 = 2.54e4 * exp(-1.06e-4 N)    |Z| = 102 N - 1.84e5

The curves were regressed over 5000-12000 turns. Predictions outside that
range are returned with a low-confidence flag. Below roughly 2000 turns the
linear magnitude relation heads to zero and negative values, so a
non-positive magnitude is reported as not usable rather than as a number.

More turns induce more voltage for the same flux change, which is why peak
magnitude grows with N; flux itself never enters these relations.

The frequencies here sit well above the ~5 kHz often quoted for Strat
pickups elsewhere; test equipment and cabling differ between sources and
the table encodes these measurements as-is.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .circuit_model import LcrParams, parallel_peak
from .coil import (DEFAULT_BOBBIN, BobbinGeometry, DoesNotFit, REFERENCE_TEMP_C,
                   UnknownGauge,
                   bobbin_fill_check, dc_resistance, wire_gauge, wire_length)

TESTED_TURNS = (5000, 12000)


class DegenerateInput(ValueError):
    """Too few distinct points, or values a curve cannot represent."""


@dataclass(frozen=True)
class ExpCurve:
    """``prefactor * exp(rate * N)``"""

    prefactor: float
    rate: float

    def __post_init__(self):
        if not self.prefactor > 0:
            raise ValueError("prefactor must be > 0")

    def __call__(self, turns):
        if np.ndim(turns):
            return self.prefactor * np.exp(self.rate * np.asarray(turns, dtype=float))
        return self.prefactor * math.exp(self.rate * turns)


@dataclass(frozen=True)
class LinCurve:
    """``slope * N + intercept``"""

    slope: float
    intercept: float

    def __call__(self, turns):
        return self.slope * turns + self.intercept

    @property
    def root(self) -> float:
        return -self.intercept / self.slope


@dataclass(frozen=True)
class GaugeDesign:
    f_res_curve: ExpCurve
    z_max_curve: LinCurve
    usable_turns_min: int = 2000


BUILTIN_TABLE: dict[int, GaugeDesign] = {
    42: GaugeDesign(ExpCurve(3.33e4, -1.14e-4), LinCurve(121.0, -3.63e4), 2000),
    44: GaugeDesign(ExpCurve(2.54e4, -1.06e-4), LinCurve(102.0, -1.84e5), 2000),
}


def _design(gauge, table) -> GaugeDesign:
    table = BUILTIN_TABLE if table is None else table
    try:
        key = int(gauge)
    except (TypeError, ValueError):
        raise UnknownGauge(gauge) from None
    if key not in table or (isinstance(gauge, float) and gauge != key):
        raise UnknownGauge(gauge)
    return table[key]


def _low_confidence(turns, design: GaugeDesign) -> bool:
    return turns < design.usable_turns_min or turns > TESTED_TURNS[1]


@dataclass(frozen=True)
class FrequencyPrediction:
    value: float  # Hz
    low_confidence: bool


@dataclass(frozen=True)
class ImpedancePrediction:
    value: float  # ohm; raw value even when not usable
    usable: bool
    low_confidence: bool


def predict_resonant_frequency(gauge, turns, table=None) -> FrequencyPrediction:
    if turns < 0:
        raise ValueError("turns must be >= 0")
    design = _design(gauge, table)
    return FrequencyPrediction(design.f_res_curve(turns), _low_confidence(turns, design))


def predict_peak_impedance(gauge, turns, table=None) -> ImpedancePrediction:
    if turns < 0:
        raise ValueError("turns must be >= 0")
    design = _design(gauge, table)
    value = design.z_max_curve(turns)
    return ImpedancePrediction(value, value > 0, _low_confidence(turns, design))


def _distinct(n) -> int:
    return len(set(n.tolist()))


def fit_exp_curve(points) -> ExpCurve:
    """Log-linear least squares: ``ln f = ln a + b N``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n, f = pts[:, 0], pts[:, 1]
    if len(pts) < 2 or _distinct(n) < 2:
        raise DegenerateInput("exponential fit needs at least 2 distinct turn counts")
    if np.any(~(f > 0)):
        raise DegenerateInput("exponential fit needs strictly positive frequencies")
    line = fit_lin_curve(np.column_stack([n, np.log(f)]))
    return ExpCurve(math.exp(line.intercept), line.slope)


def fit_lin_curve(points) -> LinCurve:
    """Ordinary least-squares line through ``(N, value)`` points."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    if len(pts) < 2 or _distinct(x) < 2:
        raise DegenerateInput("line fit needs at least 2 distinct turn counts")
    # centered sums keep the normal equations well conditioned at N ~ 1e4
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    slope = float(dx @ (y - ym) / (dx @ dx))
    return LinCurve(slope, float(ym - slope * xm))


@dataclass(frozen=True)
class ToneBand:
    label: str
    f_low: float
    f_high: float


DEFAULT_TONE_BANDS = (
    ToneBand("dark", 0.0, 6_000.0),
    ToneBand("warm", 6_000.0, 9_500.0),
    ToneBand("bright", 9_500.0, 13_000.0),
    ToneBand("twang", 13_000.0, math.inf),
)


def classify_tone(f_res: float, bands=DEFAULT_TONE_BANDS) -> str:
    """Tone label for a resonant frequency; a boundary belongs to the upper band."""
    if not f_res > 0:
        raise ValueError("f_res must be > 0")
    for band in bands:
        if band.f_low <= f_res < band.f_high:
            return band.label
    raise ValueError(f"no tone band contains {f_res} Hz")


@dataclass
class DesignReport:
    gauge: int
    turns: int
    f_res_hz: float
    f_res_low_confidence: bool
    z_max_ohm: float
    z_max_usable: bool
    z_max_low_confidence: bool
    tone: str
    fits_bobbin: bool
    layers: int
    build_mm: float
    wire_length_m: float | None
    dc_resistance_ohm: float | None
    temperature_c: float = REFERENCE_TEMP_C
    flags: list[str] = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def design_report(gauge, turns, geometry: BobbinGeometry = DEFAULT_BOBBIN,
                  temperature_c: float = 20.0, table=None) -> DesignReport:
    """Everything the design curves and coil model say about one pickup.

    A winding that overflows the bobbin still gets electrical predictions;
    its wire length and resistance are left as ``None`` and flagged.
    """
    f = predict_resonant_frequency(gauge, turns, table)
    z = predict_peak_impedance(gauge, turns, table)
    wire = wire_gauge(gauge)
    fill = bobbin_fill_check(turns, geometry, wire)
    flags = []
    if f.low_confidence or z.low_confidence:
        flags.append("LOW_CONFIDENCE: turns outside the tested 5000-12000 range"
                     if turns >= _design(gauge, table).usable_turns_min
                     else "LOW_CONFIDENCE: below the usable turns floor")
    if not z.usable:
        flags.append("NOT_USABLE: predicted peak impedance is not positive")
    length = resistance = None
    try:
        length = wire_length(turns, geometry, wire)
        resistance = dc_resistance(length, wire, temperature_c)
    except DoesNotFit:
        flags.append(f"DOES_NOT_FIT: needs {fill.layers_used} layers, bobbin holds "
                     f"{fill.capacity} turns")
    return DesignReport(int(gauge), int(turns), f.value, f.low_confidence, z.value,
                        z.usable, z.low_confidence, classify_tone(f.value), fill.fits,
                        fill.layers_used, fill.build_used, length, resistance,
                        float(temperature_c), flags)


def equivalent_lcr(f_res: float, z_max: float, capacitance: float = 100e-12) -> LcrParams:
    """Parallel-resonant LCR whose exact magnitude peak is ``(f_res, z_max)``.

    C is held fixed; L and R are solved by Newton iteration in log space,
    starting from ``L = 1/(w^2 C)`` and ``R = L/(C z_max)``.
    """
    w = 2 * math.pi * f_res
    x = np.log([1.0 / (w * w * capacitance), 1.0 / (w * w * capacitance ** 2 * z_max)])
    target = np.log([f_res, z_max])

    def peak(v):
        fp, zp = parallel_peak(LcrParams(math.exp(v[1]), math.exp(v[0]), capacitance))
        return np.log([fp, zp]) - target

    for _ in range(50):
        g = peak(x)
        if np.max(np.abs(g)) < 1e-14:
            break
        h = 1e-7
        jac = np.column_stack([(peak(x + h * e) - g) / h for e in np.eye(2)])
        x = x - np.linalg.solve(jac, g)
    else:
        raise DegenerateInput(f"no parallel LCR peaks at {f_res} Hz with {z_max} ohm")
    return LcrParams(math.exp(x[1]), math.exp(x[0]), capacitance)


def pickup_circuit(gauge, turns, capacitance: float = 100e-12, table=None) -> LcrParams:
    """Equivalent circuit reproducing the design curves' peak for (gauge, N)."""
    f = predict_resonant_frequency(gauge, turns, table)
    z = predict_peak_impedance(gauge, turns, table)
    if not z.usable:
        raise DegenerateInput(f"{turns} turns of {gauge} AWG has no usable peak")
    return equivalent_lcr(f.value, z.value, capacitance)


__all__ = [
    "BUILTIN_TABLE", "DEFAULT_TONE_BANDS", "DegenerateInput",
    "DesignReport", "ExpCurve", "FrequencyPrediction", "GaugeDesign",
    "ImpedancePrediction", "LinCurve", "ToneBand", "UnknownGauge", "classify_tone",
    "design_report", "equivalent_lcr", "fit_exp_curve", "fit_lin_curve",
    "pickup_circuit", "predict_peak_impedance", "predict_resonant_frequency",
]
