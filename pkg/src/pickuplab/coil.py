"""Wire length, DC resistance and bobbin fill for layer-wound coils.

Coils are modeled as perfect layers on an obround (racetrack) core: two
straight sides of ``core_length`` joined by semicircular ends whose inner
diameter is ``core_width``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

COPPER_TEMPCO = 0.00393  # per degree C, referenced to 20 C
REFERENCE_TEMP_C = 20.0
ENAMEL_BUILD_MM = 0.008
_EPS = 1e-9


class UnknownGauge(ValueError):
    """Only 42 and 44 AWG have built-in wire data and design curves."""

    def __init__(self, gauge):
        super().__init__(f"unknown gauge {gauge!r}: supported gauges are 42 and 44 AWG")
        self.gauge = gauge


class DoesNotFit(ValueError):
    """The requested turns do not fit in the bobbin's winding envelope."""


@dataclass(frozen=True)
class WireGauge:
    awg: int
    bare_diameter: float  # mm
    resistance_per_meter: float  # ohm/m at 20 C
    overall_diameter: float | None = None  # mm, with insulation

    def __post_init__(self):
        if self.overall_diameter is None:
            object.__setattr__(self, "overall_diameter", self.bare_diameter + ENAMEL_BUILD_MM)
        if not self.bare_diameter > 0 or not self.resistance_per_meter > 0:
            raise ValueError("wire diameter and resistance must be positive")
        if self.overall_diameter < self.bare_diameter:
            raise ValueError("overall_diameter must be >= bare_diameter")


AWG42 = WireGauge(42, 0.063, 5.48)
AWG44 = WireGauge(44, 0.056, 6.94)
GAUGES = {42: AWG42, 44: AWG44}


def wire_gauge(awg) -> WireGauge:
    try:
        return GAUGES[int(awg)]
    except (KeyError, ValueError, TypeError):
        raise UnknownGauge(awg) from None


@dataclass(frozen=True)
class BobbinGeometry:
    """Winding envelope in millimeters.

    The default is a representative Stratocaster-style single-coil bobbin,
    not a measured one.
    """

    core_length: float = 63.0
    core_width: float = 6.0
    winding_height: float = 9.0
    max_build: float = 6.0

    def __post_init__(self):
        for name in ("core_length", "core_width", "winding_height", "max_build"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


DEFAULT_BOBBIN = BobbinGeometry()


@dataclass(frozen=True)
class FillResult:
    fits: bool
    layers_used: int
    build_used: float  # mm
    turns_per_layer: int
    capacity: int  # most turns that fit


def turns_per_layer(geometry: BobbinGeometry, gauge: WireGauge) -> int:
    return int(math.floor(geometry.winding_height / gauge.overall_diameter + _EPS))


def bobbin_fill_check(turns: int, geometry: BobbinGeometry = DEFAULT_BOBBIN,
                      gauge: WireGauge = AWG42) -> FillResult:
    """Layers needed for ``turns`` and whether their build fits ``max_build``."""
    if turns < 0:
        raise ValueError("turns must be >= 0")
    per_layer = turns_per_layer(geometry, gauge)
    max_layers = int(math.floor(geometry.max_build / gauge.overall_diameter + _EPS))
    if per_layer == 0:
        return FillResult(turns == 0, 0, 0.0, 0, 0)
    layers = -(-int(turns) // per_layer)
    build = layers * gauge.overall_diameter
    return FillResult(build <= geometry.max_build + _EPS, layers, build, per_layer,
                      per_layer * max_layers)


def wire_length(turns: int, geometry: BobbinGeometry = DEFAULT_BOBBIN,
                gauge: WireGauge = AWG42) -> float:
    """Total wire length in meters.

    Layer ``k`` (1-based) has mean perimeter
    ``2 * core_length + pi * (core_width + (2k - 1) * d)`` for overall wire
    diameter ``d``; full layers are summed in closed form and the last
    layer contributes its partial turn count.

    Raises:
        DoesNotFit: when the turns need more build than the bobbin allows.
    """
    fill = bobbin_fill_check(turns, geometry, gauge)
    if not fill.fits:
        raise DoesNotFit(
            f"{turns} turns of {gauge.awg} AWG need {fill.layers_used} layers "
            f"({fill.build_used:.3f} mm) but max_build is {geometry.max_build} mm")
    if turns == 0:
        return 0.0
    d = gauge.overall_diameter
    full, rest = divmod(int(turns), fill.turns_per_layer)
    straight = 2 * geometry.core_length + math.pi * geometry.core_width
    # sum_{k=1..full} (2k - 1) = full^2
    total = fill.turns_per_layer * (full * straight + math.pi * d * full * full)
    if rest:
        total += rest * (straight + math.pi * d * (2 * full + 1))
    return total / 1000.0


def dc_resistance(length: float, gauge: WireGauge = AWG42,
                  temperature_c: float = REFERENCE_TEMP_C) -> float:
    """Copper resistance in ohms with a linear temperature correction."""
    if length < 0:
        raise ValueError("length must be >= 0")
    return length * gauge.resistance_per_meter * (1 + COPPER_TEMPCO * (temperature_c - REFERENCE_TEMP_C))
