"""Synthetic swept-sine impedance spectra.

Spectra are generated either straight from the circuit model or through a
simulated measurement chain: a series load resistor feeding the pickup,
with cable capacitance and analyzer input resistance across it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit_model import CircuitTopology, LcrParams, impedance

TWO_PI = 2.0 * math.pi


class Spacing(enum.Enum):
    LINEAR = "linear"
    LOGARITHMIC = "log"


@dataclass(frozen=True)
class FrequencySweep:
    f_start: float = 10.0
    f_stop: float = 25_000.0
    n_points: int = 1024
    spacing: Spacing = Spacing.LOGARITHMIC

    def __post_init__(self):
        if not (0 < self.f_start < self.f_stop):
            raise ValueError("sweep needs 0 < f_start < f_stop")
        if self.n_points < 2:
            raise ValueError("sweep needs at least 2 points")
        object.__setattr__(self, "spacing", Spacing(self.spacing))


@dataclass(frozen=True)
class MeasurementChain:
    """Series load resistor, cable capacitance and analyzer input resistance."""

    load_resistor: float = 200_000.0
    cable_capacitance: float = 0.0
    input_resistance: float | None = None

    def __post_init__(self):
        if not self.load_resistor > 0:
            raise ValueError("load_resistor must be > 0")
        if not self.cable_capacitance >= 0:
            raise ValueError("cable_capacitance must be >= 0")
        if self.input_resistance is not None and not self.input_resistance > 0:
            raise ValueError("input_resistance must be > 0")


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative lognormal noise on magnitude: ``|Z| * exp(N(0, sigma))``."""

    relative_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.relative_sigma >= 0:
            raise ValueError("relative_sigma must be >= 0")


@dataclass(eq=False)
class ImpedanceSpectrum:
    """Frequencies (Hz, strictly increasing) with complex impedance samples (ohm)."""

    frequency: np.ndarray
    z: np.ndarray
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.frequency = np.asarray(self.frequency, dtype=np.float64)
        self.z = np.asarray(self.z, dtype=np.complex128)
        if self.frequency.ndim != 1 or self.frequency.shape != self.z.shape:
            raise ValueError("frequency and z must be 1-D arrays of equal length")
        if len(self.frequency) < 2:
            raise ValueError("a spectrum needs at least 2 samples")
        if not np.all(np.diff(self.frequency) > 0):
            raise ValueError("frequencies must be strictly increasing")
        self.metadata = {str(k): str(v) for k, v in self.metadata.items()}

    @classmethod
    def from_samples(cls, samples, metadata=None):
        """Build from ``(frequency, z_real, z_imag)`` triples."""
        arr = np.asarray(samples, dtype=np.float64).reshape(-1, 3)
        return cls(arr[:, 0], arr[:, 1] + 1j * arr[:, 2], dict(metadata or {}))

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.frequency.tolist(), self.z.real.tolist(), self.z.imag.tolist()))

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.z)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.z)

    def __len__(self):
        return len(self.frequency)

    def __eq__(self, other):
        if not isinstance(other, ImpedanceSpectrum):
            return NotImplemented
        return (np.array_equal(self.frequency, other.frequency)
                and np.array_equal(self.z, other.z)
                and self.metadata == other.metadata)

    def scaled(self, factor: float) -> "ImpedanceSpectrum":
        return ImpedanceSpectrum(self.frequency, self.z * factor, dict(self.metadata))


def sweep_frequencies(sweep: FrequencySweep) -> np.ndarray:
    """Sweep frequencies with both endpoints exact."""
    if sweep.spacing is Spacing.LINEAR:
        f = np.linspace(sweep.f_start, sweep.f_stop, sweep.n_points)
    else:
        f = np.geomspace(sweep.f_start, sweep.f_stop, sweep.n_points)
    f[0], f[-1] = sweep.f_start, sweep.f_stop
    return f


def _apply_noise(z: np.ndarray, noise: NoiseSpec | None) -> np.ndarray:
    if noise is None or noise.relative_sigma == 0:
        return z
    rng = np.random.default_rng(noise.seed)
    return z * np.exp(rng.normal(0.0, noise.relative_sigma, size=z.shape))


def _describe(params: LcrParams, topology: CircuitTopology, sweep: FrequencySweep,
              noise: NoiseSpec | None) -> dict[str, str]:
    meta = {
        "topology": topology.name.lower(),
        "R": repr(params.resistance),
        "L": repr(params.inductance),
        "C": repr(params.capacitance),
        "f_start": repr(sweep.f_start),
        "f_stop": repr(sweep.f_stop),
        "n_points": str(sweep.n_points),
        "spacing": sweep.spacing.value,
    }
    if params.loss_resistance is not None:
        meta["R_v"] = repr(params.loss_resistance)
    if noise is not None and noise.relative_sigma > 0:
        meta["noise_sigma"] = repr(noise.relative_sigma)
        meta["noise_seed"] = str(noise.seed)
    return meta


def synth_spectrum(params: LcrParams, topology=CircuitTopology.PARALLEL,
                   sweep: FrequencySweep | None = None,
                   noise: NoiseSpec | None = None) -> ImpedanceSpectrum:
    """Ideal pickup impedance over a sweep, optionally with magnitude noise."""
    topology = CircuitTopology.parse(topology)
    sweep = sweep or FrequencySweep()
    f = sweep_frequencies(sweep)
    z = _apply_noise(impedance(params, topology, f), noise)
    meta = {"kind": "ideal", **_describe(params, topology, sweep, noise)}
    return ImpedanceSpectrum(f, z, meta)


def measured_ratio(z_pickup: np.ndarray, frequency: np.ndarray,
                   chain: MeasurementChain) -> np.ndarray:
    """Divider output ``Z_eff / (Z_eff + R_load)``, rescaled by ``R_load``.

    ``Z_eff`` is the pickup impedance shunted by the cable capacitance and,
    when given, the analyzer input resistance.
    """
    shunt = 1j * TWO_PI * np.asarray(frequency) * chain.cable_capacitance
    if chain.input_resistance is not None:
        shunt = shunt + 1.0 / chain.input_resistance
    z_eff = z_pickup / (1.0 + z_pickup * shunt)
    return z_eff / (z_eff + chain.load_resistor) * chain.load_resistor


def synth_measured_ratio(params: LcrParams, topology=CircuitTopology.PARALLEL,
                         chain: MeasurementChain | None = None,
                         sweep: FrequencySweep | None = None,
                         noise: NoiseSpec | None = None) -> ImpedanceSpectrum:
    """Spectrum as recorded through a load resistor and cable."""
    topology = CircuitTopology.parse(topology)
    chain = chain or MeasurementChain()
    sweep = sweep or FrequencySweep()
    f = sweep_frequencies(sweep)
    z = measured_ratio(impedance(params, topology, f), f, chain)
    z = _apply_noise(z, noise)
    meta = {"kind": "measured", **_describe(params, topology, sweep, noise),
            "load_resistor": repr(chain.load_resistor),
            "cable_capacitance": repr(chain.cable_capacitance)}
    if chain.input_resistance is not None:
        meta["input_resistance"] = repr(chain.input_resistance)
    return ImpedanceSpectrum(f, z, meta)
