"""Acceptance checks, one per criterion.

Each check prints a single ``criterion N: PASS|FAIL  detail`` line (shown
even under pytest capture) and then asserts. Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""

import json
import math
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from conftest import dense_argmax, random_parallel_params  # noqa: E402
from pickuplab.analysis import find_resonant_peak, fit_lcr  # noqa: E402
from pickuplab.circuit_model import LcrParams, resonant_frequency  # noqa: E402
from pickuplab.coil import AWG42, AWG44, dc_resistance  # noqa: E402
from pickuplab.files import dumps_spectrum, loads_spectrum  # noqa: E402
from pickuplab.regression import (BUILTIN_TABLE, classify_tone, fit_exp_curve,  # noqa: E402
                                  fit_lin_curve, pickup_circuit, predict_peak_impedance,
                                  predict_resonant_frequency)
from pickuplab.svgplot import render_svg  # noqa: E402
from pickuplab.synth import ImpedanceSpectrum, NoiseSpec, synth_spectrum  # noqa: E402

TURNS_GRID = list(range(5000, 12001, 500))


def report(n, ok, detail, capsys=None):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def check_1():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pickuplab", "predict", "--gauge", "42",
                           "--turns", "8350", "--json"], capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    f = json.loads(proc.stdout)["f_res_hz"] if proc.returncode == 0 else math.nan
    ok = proc.returncode == 0 and abs(f - 12_900) <= 50 and elapsed < 1.0
    return ok, f"f_res={f:.2f} Hz (12900 +/- 50), {elapsed:.3f} s (< 1 s)"


def check_2():
    mpmath.mp.dps = 50
    coeffs = {42: ("3.33e4", "-1.14e-4", "121", "-3.63e4"),
              44: ("2.54e4", "-1.06e-4", "102", "-1.84e5")}
    worst = 0.0
    for gauge, (a, b, m, c) in coeffs.items():
        for n in (0, 2000, 5000, 8350, 12000, 35000):
            f_ref = mpmath.mpf(a) * mpmath.exp(mpmath.mpf(b) * n)
            z_ref = mpmath.mpf(m) * n + mpmath.mpf(c)
            f = predict_resonant_frequency(gauge, n).value
            z = predict_peak_impedance(gauge, n).value
            worst = max(worst, float(abs(f - f_ref) / f_ref), float(abs(z - z_ref) / abs(z_ref)))
    return worst <= 1e-12, f"max relative error {worst:.2e} (<= 1e-12)"


def check_3():
    rng = np.random.default_rng(20_261_015)
    t0 = time.perf_counter()
    worst_rel, worst_steps = 0.0, 0.0
    for _ in range(100):
        p = random_parallel_params(rng)
        assert p.quality_factor > 10
        s = synth_spectrum(p)
        peak = find_resonant_peak(s)
        worst_rel = max(worst_rel, abs(peak.f_res / resonant_frequency(p.inductance, p.capacitance) - 1))
        f_dense, _ = dense_argmax(p.resistance, p.inductance, p.capacitance, 10, 25_000)
        step = math.log(s.frequency[1] / s.frequency[0])
        worst_steps = max(worst_steps, abs(math.log(peak.f_res / f_dense)) / step)
    elapsed = time.perf_counter() - t0
    ok = worst_rel < 0.005 and worst_steps <= 1.0 and elapsed < 30
    return ok, (f"100 cases: max |f/f_res-1|={worst_rel:.2e} (< 5e-3), "
                f"max dense-grid offset {worst_steps:.3f} steps (<= 1), {elapsed:.1f} s (< 30 s)")


def check_4():
    rng = np.random.default_rng(4)
    worst, all_converged = 0.0, True
    for _ in range(100):
        p = LcrParams(rng.uniform(1e3, 2e4), rng.uniform(1, 10), rng.uniform(50e-12, 500e-12))
        fit = fit_lcr(synth_spectrum(p))
        all_converged &= fit.converged
        got = np.array([fit.params.resistance, fit.params.inductance, fit.params.capacitance])
        want = np.array([p.resistance, p.inductance, p.capacitance])
        worst = max(worst, float(np.max(np.abs(got / want - 1))))
    p = LcrParams(6000.0, 2.2, 110e-12)
    noisy = fit_lcr(synth_spectrum(p, noise=NoiseSpec(0.01, 2024)))
    err_l = abs(noisy.params.inductance / p.inductance - 1)
    err_c = abs(noisy.params.capacitance / p.capacitance - 1)
    ok = all_converged and worst <= 1e-6 and err_l <= 0.02 and err_c <= 0.02
    return ok, (f"noiseless max rel error {worst:.2e} (<= 1e-6); 1% noise: "
                f"L {err_l:.2%}, C {err_c:.2%} (<= 2%)")


def check_5():
    worst = 0.0
    for gauge, design in BUILTIN_TABLE.items():
        exp_fit = fit_exp_curve([(n, design.f_res_curve(n)) for n in TURNS_GRID])
        lin_fit = fit_lin_curve([(n, design.z_max_curve(n)) for n in TURNS_GRID])
        pairs = [(exp_fit.prefactor, design.f_res_curve.prefactor), (exp_fit.rate, design.f_res_curve.rate),
                 (lin_fit.slope, design.z_max_curve.slope), (lin_fit.intercept, design.z_max_curve.intercept)]
        worst = max(worst, max(abs(got / want - 1) for got, want in pairs))
    return worst <= 1e-9, f"max coefficient rel error {worst:.2e} (<= 1e-9)"


def check_6():
    extracted = {}
    for gauge in (42, 44):
        rows = []
        for n in TURNS_GRID:
            peak = find_resonant_peak(synth_spectrum(pickup_circuit(gauge, n)))
            rows.append((peak.f_res, peak.z_max))
        extracted[gauge] = np.array(rows)
    trends = all(np.all(np.diff(extracted[g][:, 0]) < 0) and np.all(np.diff(extracted[g][:, 1]) > 0)
                 for g in (42, 44))
    ordering = bool(np.all(extracted[42] > extracted[44]))
    return trends and ordering, (f"f_res falls and z_max rises with N: {trends}; "
                                 f"42 AWG above 44 AWG in both at every N: {ordering}")


def check_7():
    pins = {5200: "dark", 8000: "warm", 12900: "bright", 20000: "twang"}
    got = {f: classify_tone(f) for f in pins}
    return got == pins, ", ".join(f"{f} Hz -> {label}" for f, label in got.items())


def check_8():
    r42, r44 = dc_resistance(1.0, AWG42, 20.0), dc_resistance(1.0, AWG44, 20.0)
    return r42 == 5.48 and r44 == 6.94, f"42 AWG {r42!r} ohm, 44 AWG {r44!r} ohm per metre at 20 C"


finite = st.floats(allow_nan=False, allow_infinity=False)


@st.composite
def random_spectra(draw):
    n = draw(st.integers(3, 60))
    freqs = sorted(draw(st.lists(st.floats(1e-2, 1e6), min_size=n, max_size=n, unique=True)))
    z = np.empty(n, dtype=np.complex128)
    z.real = draw(st.lists(finite, min_size=n, max_size=n))
    z.imag = draw(st.lists(finite, min_size=n, max_size=n))
    return ImpedanceSpectrum(freqs, z, {"seed": str(draw(st.integers(0, 10**6)))})


def check_9():
    counts = {"csv": 0, "svg": 0}

    @settings(max_examples=200, deadline=None, database=None)
    @given(random_spectra())
    def csv_round_trip(s):
        text = dumps_spectrum(s)
        back = loads_spectrum(text)
        assert back.frequency.tobytes() == s.frequency.tobytes()
        assert back.z.tobytes() == s.z.tobytes()
        assert back.metadata == s.metadata
        assert dumps_spectrum(back) == text
        counts["csv"] += 1

    @settings(max_examples=40, deadline=None, database=None)
    @given(st.lists(st.tuples(st.floats(500, 2e4), st.floats(1, 10), st.floats(50e-12, 500e-12)),
                    min_size=1, max_size=3), st.booleans(), st.integers(0, 2**31))
    def svg_and_csv_repeatable(params, log_x, seed):
        spectra = [synth_spectrum(LcrParams(*p), noise=NoiseSpec(0.01, seed)) for p in params]
        assert render_svg(spectra, log_x=log_x, mark_peaks=True) == \
            render_svg([loads_spectrum(dumps_spectrum(s)) for s in spectra], log_x=log_x, mark_peaks=True)
        again = [synth_spectrum(LcrParams(*p), noise=NoiseSpec(0.01, seed)) for p in params]
        assert [dumps_spectrum(s) for s in spectra] == [dumps_spectrum(s) for s in again]
        counts["svg"] += 1

    csv_round_trip()
    svg_and_csv_repeatable()

    outputs = []
    for _ in range(2):  # same file names each time: the legend shows the file stem
        with tempfile.TemporaryDirectory() as tmp:
            csv, svg = Path(tmp, "s.csv"), Path(tmp, "p.svg")
            for argv in (["synth", "--r", "7000", "--l", "3", "--c", "1.2e-10", "--noise", "0.01",
                          "--seed", "3", "-o", str(csv)],
                         ["plot", str(csv), "--log-x", "--mark-peaks", "-o", str(svg)]):
                subprocess.run([sys.executable, "-m", "pickuplab", *argv], check=True)
            outputs.append((csv.read_bytes(), svg.read_bytes()))
    cli_identical = outputs[0] == outputs[1]
    return cli_identical, (f"{counts['csv']} randomized CSV round trips exact, "
                           f"{counts['svg']} randomized SVG/CSV repeats identical, "
                           f"CLI reruns byte-identical: {cli_identical}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


@pytest.mark.parametrize("n", range(1, 10), ids=[f"criterion_{n}" for n in range(1, 10)])
def test_criterion(n, capsys):
    ok, detail = CHECKS[n - 1]()
    report(n, ok, detail, capsys)


if __name__ == "__main__":
    failed = 0
    for n, check in enumerate(CHECKS, 1):
        try:
            ok, detail = check()
        except Exception as exc:  # a crash counts as a failure of that criterion
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        failed += not ok
    sys.exit(1 if failed else 0)
