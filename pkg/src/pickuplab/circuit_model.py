"""Equivalent-circuit impedance of a pickup coil.

A pickup is approximated by a winding resistance R, an inductance L and a
distributed capacitance C, optionally with a loss resistance R_v across the
whole network. Two arrangements are offered:

``SERIES``
    R, L and C in series. Its resonance is an impedance *minimum* equal to R.
``PARALLEL``
    R in series with L, that branch shunted by C. Its resonance is the
    impedance *peak* seen on measured pickups.

Both resonate at ``1 / (2 pi sqrt(L C))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels

TWO_PI = 2.0 * math.pi


class DivergentReactance(ValueError):
    """Raised when a capacitive reactance is requested at zero frequency."""


class CircuitTopology(enum.Enum):
    SERIES = 0
    PARALLEL = 1

    @classmethod
    def parse(cls, value: "str | CircuitTopology") -> "CircuitTopology":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"series": cls.SERIES, "serieslcr": cls.SERIES,
                   "parallel": cls.PARALLEL, "parallelresonant": cls.PARALLEL}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown topology {value!r}") from None


@dataclass(frozen=True)
class LcrParams:
    """Winding resistance (ohm), inductance (H), capacitance (F), optional loss (ohm)."""

    resistance: float
    inductance: float
    capacitance: float
    loss_resistance: float | None = None

    def __post_init__(self):
        if not (self.resistance >= 0 and math.isfinite(self.resistance)):
            raise ValueError(f"resistance must be >= 0, got {self.resistance}")
        if not (self.inductance > 0 and math.isfinite(self.inductance)):
            raise ValueError(f"inductance must be > 0, got {self.inductance}")
        if not (self.capacitance > 0 and math.isfinite(self.capacitance)):
            raise ValueError(f"capacitance must be > 0, got {self.capacitance}")
        if self.loss_resistance is not None and not self.loss_resistance > 0:
            raise ValueError(f"loss_resistance must be > 0, got {self.loss_resistance}")

    @property
    def resonant_frequency(self) -> float:
        return resonant_frequency(self.inductance, self.capacitance)

    @property
    def quality_factor(self) -> float:
        """``sqrt(L/C) / R``; infinite for a lossless winding."""
        if self.resistance == 0:
            return math.inf
        return math.sqrt(self.inductance / self.capacitance) / self.resistance


def inductive_reactance(inductance, frequency):
    """Return ``2 pi f L`` in ohms. Accepts scalars or arrays."""
    return TWO_PI * frequency * inductance


def capacitive_reactance(capacitance, frequency):
    """Return ``1 / (2 pi f C)`` in ohms.

    Raises:
        DivergentReactance: if any frequency is zero (open circuit at DC).
    """
    if np.any(np.asarray(frequency) == 0):
        raise DivergentReactance("capacitive reactance diverges at 0 Hz")
    return 1.0 / (TWO_PI * frequency * capacitance)


def resonant_frequency(inductance: float, capacitance: float) -> float:
    """Frequency in Hz at which inductive and capacitive reactances are equal."""
    if not (inductance > 0 and capacitance > 0):
        raise ValueError("inductance and capacitance must be positive")
    return 1.0 / (TWO_PI * math.sqrt(inductance * capacitance))


def impedance(params: LcrParams, topology: CircuitTopology, frequency):
    """Complex impedance at one frequency or an array of frequencies.

    The parallel arrangement at 0 Hz reduces to R (plus any loss resistance
    in parallel); the series arrangement raises :class:`DivergentReactance`.
    """
    topology = CircuitTopology.parse(topology)
    scalar = np.ndim(frequency) == 0
    f = np.atleast_1d(np.asarray(frequency, dtype=np.float64))
    if np.any(f < 0):
        raise ValueError("frequency must be non-negative")
    dc = f == 0
    if np.any(dc) and topology is CircuitTopology.SERIES:
        raise DivergentReactance("series LCR impedance diverges at 0 Hz")
    z = kernels.impedance(topology.value, params.resistance, params.inductance,
                          params.capacitance, np.ascontiguousarray(f))
    z = np.asarray(z, dtype=np.complex128)
    if np.any(dc):
        z[dc] = params.resistance
    if params.loss_resistance is not None:
        rv = params.loss_resistance
        z = z * rv / (z + rv)
    return complex(z[0]) if scalar else z


def impedance_magnitude(params: LcrParams, topology: CircuitTopology, frequency):
    """``|Z|`` in ohms; for ``SERIES`` this is ``sqrt(R^2 + (wL - 1/(wC))^2)``."""
    z = impedance(params, topology, frequency)
    return abs(z) if np.ndim(z) == 0 else np.abs(z)


def parallel_peak(params: LcrParams) -> tuple[float, float]:
    """Exact location and height of the ``PARALLEL`` magnitude maximum.

    Solves ``d|Z|^2/d(w^2) = 0`` in closed form. The loss resistance is
    ignored. Returns ``(frequency_hz, magnitude_ohm)``.
    """
    R, L, C = params.resistance, params.inductance, params.capacitance
    # |Z|^2 = (R^2 + L^2 x) / ((1 - LCx)^2 + R^2 C^2 x) with x = w^2; the
    # stationarity condition (divided through by L^2) is a x^2 + b x + c = 0
    a = (L * C) ** 2
    b = 2 * (R * C) ** 2
    c = ((R * R * C) ** 2 - 2 * R * R * L * C) / (L * L) - 1.0
    if c >= 0:
        raise ValueError("network has no interior magnitude peak")
    # c < 0 guarantees one positive root; this form avoids cancellation
    x = 2 * c / (-b - math.sqrt(b * b - 4 * a * c))
    if x <= 0:
        raise ValueError("network has no interior magnitude peak")
    w = math.sqrt(x)
    mag = abs(kernels.impedance(CircuitTopology.PARALLEL.value, R, L, C,
                                np.array([w / TWO_PI]))[0])
    return w / TWO_PI, float(mag)
