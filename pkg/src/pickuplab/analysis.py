"""Resonance extraction and equivalent-circuit fitting for impedance spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .circuit_model import CircuitTopology, LcrParams, impedance_magnitude
from .synth import ImpedanceSpectrum

C_PRIOR = 100e-12  # farads; initializer only
MAX_ITERATIONS = 200
STEP_TOL = 1e-10
COST_TOL = 1e-12


class PeakAtEdge(ValueError):
    """The largest magnitude sample is the first or last one."""


@dataclass(frozen=True)
class ResonanceSummary:
    f_res: float
    z_max: float
    width_3db: float | None = None
    q_estimate: float | None = None

    def to_dict(self):
        return {"f_res_hz": self.f_res, "z_max_ohm": self.z_max,
                "width_3db_hz": self.width_3db, "q_estimate": self.q_estimate}


@dataclass(frozen=True)
class FitReport:
    params: LcrParams
    residual_rms: float
    relative_rms: float
    iterations: int
    converged: bool
    initial: LcrParams
    initial_relative_rms: float

    def to_dict(self):
        return {"R_ohm": self.params.resistance, "L_h": self.params.inductance,
                "C_f": self.params.capacitance, "residual_rms_ohm": self.residual_rms,
                "relative_rms": self.relative_rms, "iterations": self.iterations,
                "converged": self.converged}


def _vertex(x, y):
    """Vertex of the parabola through three points (arbitrary spacing)."""
    (x1, x2, x3), (y1, y2, y3) = x, y
    d1, d3 = x2 - x1, x2 - x3
    num = d1 * d1 * (y2 - y3) - d3 * d3 * (y2 - y1)
    den = d1 * (y2 - y3) - d3 * (y2 - y1)
    if den == 0:
        return x2, y2
    xv = x2 - 0.5 * num / den
    # Lagrange form evaluated at the vertex
    yv = (y1 * (xv - x2) * (xv - x3) / ((x1 - x2) * (x1 - x3))
          + y2 * (xv - x1) * (xv - x3) / ((x2 - x1) * (x2 - x3))
          + y3 * (xv - x1) * (xv - x2) / ((x3 - x1) * (x3 - x2)))
    return xv, max(yv, y2)


def _uniform(a, b, c, rtol=1e-9):
    return abs((b - a) - (c - b)) <= rtol * abs(c - a)


def _crossing(f, mag, i, j, level):
    """Frequency where the segment between samples i and j meets ``level``."""
    t = (level - mag[i]) / (mag[j] - mag[i])
    return f[i] + t * (f[j] - f[i])


def find_resonant_peak(spectrum: ImpedanceSpectrum) -> ResonanceSummary:
    """Locate the impedance peak with three-point parabolic refinement.

    The parabola is fitted against log-frequency unless the three samples
    around the maximum are equally spaced in linear frequency. Ties go to
    the lowest-frequency sample. The -3 dB width is reported only when the
    magnitude falls below ``z_max / sqrt(2)`` on both sides inside the sweep.

    Raises:
        PeakAtEdge: when the maximum is the first or last sample.
    """
    f = spectrum.frequency
    mag = spectrum.magnitude
    if len(f) < 3:
        raise ValueError("peak search needs at least 3 samples")
    k = int(np.argmax(mag))
    if k == 0 or k == len(f) - 1:
        raise PeakAtEdge(
            f"peak at edge: maximum magnitude is at {f[k]:g} Hz, the "
            f"{'first' if k == 0 else 'last'} sample; the sweep does not bracket a resonance")
    fs = f[k - 1:k + 2]
    ys = mag[k - 1:k + 2]
    if _uniform(*fs):
        f_res, z_max = _vertex(fs, ys)
    else:
        u, z_max = _vertex(np.log(fs), ys)
        f_res = math.exp(u)
    f_res = min(max(f_res, fs[0]), fs[2])

    level = z_max / math.sqrt(2.0)
    below = np.flatnonzero(mag < level)
    left = below[below < k]
    right = below[below > k]
    width = q = None
    if left.size and right.size and mag[k] >= level:
        i, j = left[-1], right[0]
        lo = _crossing(f, mag, i, i + 1, level)
        hi = _crossing(f, mag, j - 1, j, level)
        if hi > lo:
            width = float(hi - lo)
            q = float(f_res / width)
    return ResonanceSummary(float(f_res), float(z_max), width, q)


def _seed(spectrum: ImpedanceSpectrum, topology: CircuitTopology) -> LcrParams:
    mag = spectrum.magnitude
    if topology is CircuitTopology.SERIES:
        k = int(np.argmin(mag))
        f_res, r0 = spectrum.frequency[k], mag[k]
    else:
        f_res = find_resonant_peak(spectrum).f_res
        r0 = mag[0]
    r0 = max(float(r0), 1e-3)
    inductance = 1.0 / ((2 * math.pi * f_res) ** 2 * C_PRIOR)
    return LcrParams(r0, inductance, C_PRIOR)


def fit_lcr(spectrum: ImpedanceSpectrum, topology=CircuitTopology.PARALLEL,
            init: LcrParams | None = None) -> FitReport:
    """Fit (R, L, C) to the spectrum magnitude by damped least squares.

    Minimizes ``sum((|Z_model| / |Z_measured| - 1)^2)`` over log-parameters
    with a Levenberg-Marquardt iteration (Marquardt diagonal scaling). The
    run is marked converged when a step changes every parameter by less
    than 1e-10 relative, or an accepted step lowers the cost by less than
    1e-12 relative, within 200 iterations.

    Without ``init`` the start point takes R from the lowest-frequency
    magnitude, C = 100 pF, and L from the peak frequency via
    ``L = 1 / ((2 pi f_res)^2 C)``.
    """
    topology = CircuitTopology.parse(topology)
    if len(spectrum) < 8:
        raise ValueError("fit needs at least 8 samples")
    f = np.ascontiguousarray(spectrum.frequency)
    target = np.ascontiguousarray(spectrum.magnitude)
    if np.any(target <= 0):
        raise ValueError("fit needs strictly positive magnitudes")
    init = init or _seed(spectrum, topology)
    code = topology.value

    def evaluate(theta):
        R, L, C = np.exp(theta)
        with np.errstate(all="ignore"):
            return kernels.normal_equations(code, R, L, C, f, target)

    theta = np.log([max(init.resistance, 1e-3), init.inductance, init.capacitance])
    cost, jtj, jtr = evaluate(theta)
    initial_cost = cost
    lam = 1e-3
    converged = cost == 0.0
    iterations = 0
    while not converged and iterations < MAX_ITERATIONS:
        iterations += 1
        damping = np.diag(np.maximum(np.diag(jtj), 1e-300))
        try:
            step = np.linalg.solve(jtj + lam * damping, -jtr)
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        small = np.max(np.abs(step)) < STEP_TOL
        trial = evaluate(theta + step)
        if math.isfinite(trial[0]) and trial[0] < cost:
            rel_drop = (cost - trial[0]) / cost
            theta = theta + step
            cost, jtj, jtr = trial
            lam = max(lam / 10.0, 1e-15)
            converged = small or rel_drop < COST_TOL or cost == 0.0
        else:
            lam *= 10.0
            converged = small
    R, L, C = np.exp(theta)
    params = LcrParams(float(R), float(L), float(C))
    model = impedance_magnitude(params, topology, f)
    residual_rms = float(np.sqrt(np.mean((model - target) ** 2)))
    n = len(f)
    return FitReport(params, residual_rms, math.sqrt(cost / n), iterations,
                     bool(converged and math.isfinite(cost)), init,
                     math.sqrt(initial_cost / n))


@dataclass(frozen=True)
class BatchRow:
    turns: int
    gauge: int
    summary: ResonanceSummary


@dataclass
class BatchResult:
    rows: list[BatchRow] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)


def batch_summaries(spectra) -> BatchResult:
    """Peak summaries for spectra tagged with ``turns`` and ``gauge`` metadata.

    Rows are ordered by (gauge, turns). Spectra without tags or without an
    interior peak go to ``skipped`` as ``(label, reason)`` pairs.
    """
    result = BatchResult()
    for index, spectrum in enumerate(spectra):
        meta = spectrum.metadata
        label = meta.get("source", f"spectrum[{index}]")
        try:
            turns = int(float(meta["turns"]))
            gauge = int(float(meta["gauge"]))
        except (KeyError, ValueError):
            result.skipped.append((label, "missing or invalid turns/gauge metadata"))
            continue
        try:
            summary = find_resonant_peak(spectrum)
        except (PeakAtEdge, ValueError) as exc:
            result.skipped.append((label, str(exc)))
            continue
        result.rows.append(BatchRow(turns, gauge, summary))
    result.rows.sort(key=lambda row: (row.gauge, row.turns))
    return result
