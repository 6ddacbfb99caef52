"""Guitar pickup impedance modeling, resonance analysis and design curves.

Modules
-------
circuit_model
    Equivalent-circuit impedance and resonant frequency.
synth
    Synthetic swept-sine spectra, ideal or through a measurement chain.
analysis
    Peak extraction, -3 dB width, and (R, L, C) fitting.
regression
    Turns/gauge design equations, curve fitting and tone bands.
coil
    Wire length, DC resistance and bobbin fill.
files, svgplot, cli
    CSV/INI formats, SVG plots and the ``pickuplab`` command.

The sweep kernels run compiled when the Cython extension is built and fall
back to numpy otherwise; ``pickuplab.BACKEND`` names the one in use.
"""

__version__ = "0.1.0"

from ._backend import NAME as BACKEND
from .analysis import (FitReport, PeakAtEdge, ResonanceSummary, batch_summaries,
                       find_resonant_peak, fit_lcr)
from .circuit_model import (CircuitTopology, DivergentReactance, LcrParams,
                            capacitive_reactance, impedance, impedance_magnitude,
                            inductive_reactance, resonant_frequency)
from .coil import (AWG42, AWG44, BobbinGeometry, DoesNotFit, UnknownGauge, WireGauge,
                   bobbin_fill_check, dc_resistance, wire_length)
from .regression import (BUILTIN_TABLE, DegenerateInput, ExpCurve, LinCurve,
                         classify_tone, design_report, fit_exp_curve, fit_lin_curve,
                         predict_peak_impedance, predict_resonant_frequency)
from .synth import (FrequencySweep, ImpedanceSpectrum, MeasurementChain, NoiseSpec,
                    Spacing, synth_measured_ratio, synth_spectrum, sweep_frequencies)
