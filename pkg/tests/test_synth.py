import math

import numpy as np
import pytest

from pickuplab.analysis import find_resonant_peak
from pickuplab.circuit_model import CircuitTopology, LcrParams, impedance, impedance_magnitude
from pickuplab.synth import (FrequencySweep, ImpedanceSpectrum, MeasurementChain, NoiseSpec,
                             Spacing, measured_ratio, sweep_frequencies, synth_measured_ratio,
                             synth_spectrum)

from conftest import dense_argmax

PICKUP = LcrParams(6000.0, 2.2, 110e-12)
LIN, LOG = Spacing.LINEAR, Spacing.LOGARITHMIC


def test_sweep_examples():
    assert sweep_frequencies(FrequencySweep(1, 10, 2, LIN)).tolist() == [1, 10]
    # arithmetic progression: 10 + k * (25000 - 10) / 3
    expect = [10 + k * 24990 / 3 for k in range(4)]
    assert expect == [10, 8340, 16670, 25000]
    np.testing.assert_allclose(sweep_frequencies(FrequencySweep(10, 25000, 4, LIN)), expect, rtol=1e-15)
    np.testing.assert_allclose(sweep_frequencies(FrequencySweep(1, 1000, 4, LOG)), [1, 10, 100, 1000],
                               rtol=1e-14)


@pytest.mark.parametrize("spacing", [LIN, LOG])
def test_sweep_shape(spacing):
    f = sweep_frequencies(FrequencySweep(3.0, 7777.0, 101, spacing))
    assert len(f) == 101 and f[0] == 3.0 and f[-1] == 7777.0
    assert np.all(np.diff(f) > 0)
    steps = np.diff(f) if spacing is LIN else np.diff(np.log(f))
    np.testing.assert_allclose(steps, steps[0], rtol=1e-9)


def test_default_sweep():
    s = FrequencySweep()
    assert (s.f_start, s.f_stop, s.n_points, s.spacing) == (10.0, 25000.0, 1024, LOG)


@pytest.mark.parametrize("bad", [(0, 10, 5), (10, 10, 5), (10, 5, 5), (1, 10, 1)])
def test_sweep_invariants(bad):
    with pytest.raises(ValueError):
        FrequencySweep(*bad)


@pytest.mark.parametrize("topology", list(CircuitTopology))
def test_noiseless_spectrum_is_the_model(topology, backend):
    s = synth_spectrum(PICKUP, topology)
    np.testing.assert_array_equal(s.z, impedance(PICKUP, topology, s.frequency))
    np.testing.assert_array_equal(s.magnitude, impedance_magnitude(PICKUP, topology, s.frequency))
    assert s.metadata["kind"] == "ideal"


def test_zero_sigma_equals_no_noise():
    assert synth_spectrum(PICKUP, noise=NoiseSpec(0.0, 99)) == synth_spectrum(PICKUP)


def test_noise_is_deterministic_and_phase_preserving():
    a = synth_spectrum(PICKUP, noise=NoiseSpec(0.05, 7))
    b = synth_spectrum(PICKUP, noise=NoiseSpec(0.05, 7))
    c = synth_spectrum(PICKUP, noise=NoiseSpec(0.05, 8))
    clean = synth_spectrum(PICKUP)
    assert a == b
    assert a != c
    np.testing.assert_allclose(a.phase, clean.phase, atol=1e-12)
    log_ratio = np.log(a.magnitude / clean.magnitude)
    assert abs(log_ratio.std() - 0.05) < 0.005


def test_measured_ratio_approaches_pickup_for_huge_load():
    # the divider's relative deviation from Z_p is |Z_p| / R_load to first order
    chain = MeasurementChain(load_resistor=1e12)
    low_peak = LcrParams(40_000.0, 2.2, 110e-12)  # peaks below 1 Mohm
    measured = synth_measured_ratio(low_peak, CircuitTopology.PARALLEL, chain)
    ideal = synth_spectrum(low_peak)
    assert ideal.magnitude.max() < 1e6
    np.testing.assert_allclose(measured.z, ideal.z, rtol=1e-6)
    assert measured.metadata["kind"] == "measured"

    measured = synth_measured_ratio(PICKUP, CircuitTopology.PARALLEL, chain)
    ideal = synth_spectrum(PICKUP)
    deviation = np.abs(measured.z / ideal.z - 1)
    assert np.all(deviation <= 1.001 * ideal.magnitude / 1e12)


def test_pure_resistor_divider_is_flat():
    f = np.geomspace(10, 25_000, 50)
    chain = MeasurementChain(load_resistor=200_000.0)
    out = measured_ratio(np.full(f.shape, 6000.0 + 0j), f, chain)
    np.testing.assert_allclose(out, 6000.0 / (6000.0 + 200_000.0) * 200_000.0, rtol=1e-15)


def test_input_resistance_loads_the_peak():
    loaded = synth_measured_ratio(PICKUP, chain=MeasurementChain(1e12, 0.0, 1e6))
    free = synth_measured_ratio(PICKUP, chain=MeasurementChain(1e12, 0.0, None))
    assert find_resonant_peak(loaded).z_max < find_resonant_peak(free).z_max


def test_cable_capacitance_lowers_peak_frequency():
    sweep = FrequencySweep(1000, 25_000, 4000)
    bare = synth_measured_ratio(PICKUP, chain=MeasurementChain(cable_capacitance=0.0), sweep=sweep)
    cabled = synth_measured_ratio(PICKUP, chain=MeasurementChain(cable_capacitance=300e-12), sweep=sweep)
    assert find_resonant_peak(cabled).f_res < find_resonant_peak(bare).f_res


@pytest.mark.parametrize("c_cable", [50e-12, 200e-12, 700e-12])
def test_cable_capacitance_adds_to_coil_capacitance(c_cable):
    chain = MeasurementChain(load_resistor=1e12, cable_capacitance=c_cable)
    sweep = FrequencySweep(500, 25_000, 200_000)
    s = synth_measured_ratio(PICKUP, chain=chain, sweep=sweep)
    f_peak = s.frequency[np.argmax(s.magnitude)]
    expect = 1 / (2 * math.pi * math.sqrt(PICKUP.inductance * (PICKUP.capacitance + c_cable)))
    assert abs(f_peak / expect - 1) < 0.005


def test_ideal_chain_argmax_converges_to_resonance():
    sweep = FrequencySweep(5000, 20_000, 200_000)
    s = synth_measured_ratio(PICKUP, chain=MeasurementChain(1e12, 0.0), sweep=sweep)
    f_dense, _ = dense_argmax(PICKUP.resistance, PICKUP.inductance, PICKUP.capacitance, 5000, 20000)
    f_peak = s.frequency[np.argmax(s.magnitude)]
    assert abs(f_peak / PICKUP.resonant_frequency - 1) < 0.005
    assert f_peak == pytest.approx(f_dense, rel=1e-4)


def test_spectrum_invariants():
    with pytest.raises(ValueError):
        ImpedanceSpectrum([1.0], [1.0])
    with pytest.raises(ValueError):
        ImpedanceSpectrum([1.0, 1.0], [1.0, 2.0])
    s = ImpedanceSpectrum.from_samples([(1, 2, 3), (4, 5, 6)], {"a": 1})
    assert s.samples == [(1.0, 2.0, 3.0), (4.0, 5.0, 6.0)]
    assert s.metadata == {"a": "1"}


@pytest.mark.parametrize("kwargs", [dict(load_resistor=0), dict(cable_capacitance=-1e-12),
                                    dict(input_resistance=0)])
def test_chain_invariants(kwargs):
    with pytest.raises(ValueError):
        MeasurementChain(**kwargs)


def test_noise_invariant():
    with pytest.raises(ValueError):
        NoiseSpec(-0.1, 1)
