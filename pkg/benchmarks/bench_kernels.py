"""Time the compiled and pure-Python kernels side by side.

    python3 benchmarks/bench_kernels.py [--points 1024] [--repeat 200]

Reports the best-of-five mean per call for the impedance sweep, the
fused normal-equation build and a full ``fit_lcr`` on each backend.
"""

import argparse
import timeit

import numpy as np

from pickuplab import _backend, analysis, circuit_model
from pickuplab.circuit_model import LcrParams
from pickuplab.synth import FrequencySweep, NoiseSpec, synth_spectrum

PICKUP = LcrParams(6000.0, 2.2, 110e-12)


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=repeat, repeat=5)) / repeat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()

    spectrum = synth_spectrum(PICKUP, sweep=FrequencySweep(10, 25_000, args.points),
                              noise=NoiseSpec(0.01, 1))
    f, target = spectrum.frequency, spectrum.magnitude
    backends = _backend.available()
    results = {}
    for name, mod in sorted(backends.items()):
        circuit_model.kernels = analysis.kernels = mod
        results[name] = {
            "impedance": bench(lambda: mod.impedance(1, 6000.0, 2.2, 110e-12, f), args.repeat),
            "normal_equations": bench(
                lambda: mod.normal_equations(1, 5000.0, 2.0, 100e-12, f, target), args.repeat),
            "fit_lcr": bench(lambda: analysis.fit_lcr(spectrum), max(1, args.repeat // 20)),
        }
    circuit_model.kernels = analysis.kernels = backends[_backend.NAME]

    print(f"{args.points} frequency points, default backend: {_backend.NAME}")
    names = sorted(results)
    print(f"{'kernel':<18}" + "".join(f"{n:>14}" for n in names)
          + ("    speedup" if len(names) == 2 else ""))
    for kernel in ("impedance", "normal_equations", "fit_lcr"):
        row = [results[n][kernel] for n in names]
        line = f"{kernel:<18}" + "".join(f"{t * 1e6:>11.1f} us" for t in row)
        if len(names) == 2:
            line += f"   {row[1] / row[0]:>7.2f}x"  # python / cython
        print(line)
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    np.seterr(all="raise")
    main()
