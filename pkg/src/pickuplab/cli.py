"""Command-line interface: ``pickuplab <command> ...``.

Exit codes: 0 on success (including "not usable" design outcomes), 1 when
analysis fails (no interior peak, no gauge could be fitted), 2 for invalid
arguments or unreadable input files.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import PeakAtEdge, batch_summaries, find_resonant_peak, fit_lcr
from .circuit_model import CircuitTopology, LcrParams
from .coil import DEFAULT_BOBBIN
from .files import (atomic_write, load_coefficients, load_geometry,
                    load_spectrum, save_coefficients, save_spectrum)
from .regression import (BUILTIN_TABLE, DegenerateInput, GaugeDesign, design_report,
                         fit_exp_curve, fit_lin_curve, pickup_circuit)
from .svgplot import render_svg
from .synth import (FrequencySweep, MeasurementChain, NoiseSpec, Spacing,
                    synth_measured_ratio, synth_spectrum)

log = logging.getLogger("pickuplab")

EXIT_ANALYSIS = 1
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _print_rows(rows):
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        print(f"{key:<{width}}  {value}")


def _json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_predict(args):
    geometry = load_geometry(args.geometry) if args.geometry else DEFAULT_BOBBIN
    table = load_coefficients(args.coefficients) if args.coefficients else None
    report = design_report(args.gauge, args.turns, geometry, args.temperature, table)
    if args.json:
        _json(report.to_dict())
        return 0
    z_text = f"{report.z_max_ohm:.0f} ohm"
    if not report.z_max_usable:
        z_text += "  ** NOT USABLE **"
    rows = [
        ("gauge", f"{report.gauge} AWG"),
        ("turns", str(report.turns)),
        ("resonant frequency", f"{report.f_res_hz:.1f} Hz ({report.f_res_hz / 1000:.2f} kHz)"),
        ("peak impedance", z_text),
        ("tone", report.tone),
        ("fits bobbin", "yes" if report.fits_bobbin else "NO"),
        ("layers", str(report.layers)),
        ("build", f"{report.build_mm:.3f} mm"),
        ("wire length", "n/a" if report.wire_length_m is None else f"{report.wire_length_m:.1f} m"),
        ("dc resistance", "n/a" if report.dc_resistance_ohm is None
         else f"{report.dc_resistance_ohm:.0f} ohm at {report.temperature_c:g} C"),
    ]
    _print_rows(rows)
    for flag in report.flags:
        print(f"!! {flag}")
    return 0


def _params_from_args(args):
    given = [args.r, args.l, args.c]
    if all(v is not None for v in given):
        return LcrParams(args.r, args.l, args.c, args.rv)
    if any(v is not None for v in given):
        raise CliError("--r, --l and --c must be given together")
    if args.gauge is None or args.turns is None:
        raise CliError("give --r/--l/--c, or --gauge and --turns to use the design curves")
    table = load_coefficients(args.coefficients) if args.coefficients else None
    params = pickup_circuit(args.gauge, args.turns, args.c_prior, table)
    return LcrParams(params.resistance, params.inductance, params.capacitance, args.rv)


def cmd_synth(args):
    params = _params_from_args(args)
    topology = CircuitTopology.parse(args.topology)
    sweep = FrequencySweep(args.f_start, args.f_stop, args.points, Spacing(args.spacing))
    noise = NoiseSpec(args.noise, args.seed) if args.noise is not None else None
    chained = args.chain or any(v is not None for v in
                                (args.load_resistor, args.cable_capacitance, args.input_resistance))
    if chained:
        defaults = MeasurementChain()
        chain = MeasurementChain(
            defaults.load_resistor if args.load_resistor is None else args.load_resistor,
            defaults.cable_capacitance if args.cable_capacitance is None else args.cable_capacitance,
            args.input_resistance)
        spectrum = synth_measured_ratio(params, topology, chain, sweep, noise)
    else:
        spectrum = synth_spectrum(params, topology, sweep, noise)
    if args.gauge is not None:
        spectrum.metadata["gauge"] = str(args.gauge)
    if args.turns is not None:
        spectrum.metadata["turns"] = str(args.turns)
    save_spectrum(spectrum, args.output)
    log.info("wrote %d samples to %s", len(spectrum), args.output)
    return 0


def cmd_analyze(args):
    spectrum = load_spectrum(args.file)
    try:
        summary = find_resonant_peak(spectrum)
    except PeakAtEdge as exc:
        raise CliError(str(exc), EXIT_ANALYSIS) from None
    result = {"summary": summary.to_dict()}
    fit = None
    if args.fit:
        fit = fit_lcr(spectrum, CircuitTopology.parse(args.topology))
        result["fit"] = fit.to_dict()
    if args.json:
        _json(result)
        return 0
    rows = [
        ("resonant frequency", f"{summary.f_res:.2f} Hz"),
        ("peak impedance", f"{summary.z_max:.1f} ohm"),
        ("-3 dB width", "n/a" if summary.width_3db is None else f"{summary.width_3db:.2f} Hz"),
        ("Q", "n/a" if summary.q_estimate is None else f"{summary.q_estimate:.3f}"),
    ]
    if fit is not None:
        p = fit.params
        rows += [
            ("fit R", f"{p.resistance:.6g} ohm"),
            ("fit L", f"{p.inductance:.6g} H"),
            ("fit C", f"{p.capacitance:.6g} F"),
            ("fit residual rms", f"{fit.residual_rms:.6g} ohm ({fit.relative_rms:.3g} relative)"),
            ("fit iterations", str(fit.iterations)),
            ("fit converged", "yes" if fit.converged else "NO"),
        ]
    _print_rows(rows)
    return 0


def _batch_inputs(source: Path) -> list[Path]:
    if source.is_dir():
        return sorted(source.glob("*.csv"))
    if source.is_file():
        base = source.parent
        paths = []
        for line in source.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                p = Path(line)
                paths.append(p if p.is_absolute() else base / p)
        return paths
    raise CliError(f"{source}: no such directory or manifest")


def cmd_fit_batch(args):
    paths = _batch_inputs(Path(args.source))
    if not paths:
        raise CliError(f"{args.source}: no spectra found", EXIT_ANALYSIS)
    spectra = []
    for path in paths:
        spectrum = load_spectrum(path)
        spectrum.metadata.setdefault("source", str(path))
        spectra.append(spectrum)
    batch = batch_summaries(spectra)
    for label, reason in batch.skipped:
        log.warning("skipped %s: %s", label, reason)

    table: dict[int, GaugeDesign] = {}
    report = {}
    for gauge in sorted({row.gauge for row in batch.rows}):
        rows = [row for row in batch.rows if row.gauge == gauge]
        try:
            if len(rows) < 3:
                raise DegenerateInput(f"only {len(rows)} usable spectra (need 3)")
            n = np.array([row.turns for row in rows], dtype=float)
            f = np.array([row.summary.f_res for row in rows])
            z = np.array([row.summary.z_max for row in rows])
            exp_curve = fit_exp_curve(np.column_stack([n, f]))
            lin_curve = fit_lin_curve(np.column_stack([n, z]))
        except DegenerateInput as exc:
            log.warning("gauge %d omitted: %s", gauge, exc)
            continue
        floor = BUILTIN_TABLE[gauge].usable_turns_min if gauge in BUILTIN_TABLE else 2000
        table[gauge] = GaugeDesign(exp_curve, lin_curve, floor)
        report[gauge] = {
            "spectra": len(rows),
            "f_res_prefactor_hz": exp_curve.prefactor,
            "f_res_rate_per_turn": exp_curve.rate,
            "f_res_rms_log_residual": float(np.sqrt(np.mean((np.log(f) - np.log(exp_curve(n))) ** 2))),
            "z_max_slope_ohm_per_turn": lin_curve.slope,
            "z_max_intercept_ohm": lin_curve.intercept,
            "z_max_rms_residual_ohm": float(np.sqrt(np.mean((z - lin_curve(n)) ** 2))),
        }
    if not table:
        raise CliError("no gauge had enough usable spectra to fit", EXIT_ANALYSIS)
    save_coefficients(table, args.output)
    if args.json:
        _json({"gauges": {str(k): v for k, v in report.items()},
               "skipped": [list(s) for s in batch.skipped]})
        return 0
    for gauge, info in report.items():
        print(f"{gauge} AWG ({info['spectra']} spectra)")
        print(f"  f_res = {info['f_res_prefactor_hz']:.6g} * exp({info['f_res_rate_per_turn']:.6g} N)"
              f"   rms log residual {info['f_res_rms_log_residual']:.3g}")
        print(f"  |Z|max = {info['z_max_slope_ohm_per_turn']:.6g} N + {info['z_max_intercept_ohm']:.6g}"
              f"   rms residual {info['z_max_rms_residual_ohm']:.3g} ohm")
    return 0


def cmd_plot(args):
    spectra = [load_spectrum(p) for p in args.files]
    labels = [s.metadata.get("label") or Path(p).stem for s, p in zip(spectra, args.files)]
    svg = render_svg(spectra, labels, log_x=args.log_x, mark_peaks=args.mark_peaks,
                     title=args.title)
    atomic_write(args.output, svg)
    return 0


def cmd_coefficients(args):
    save_coefficients(BUILTIN_TABLE, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pickuplab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="design report for a gauge and number of turns")
    p.add_argument("--gauge", type=int, required=True)
    p.add_argument("--turns", type=int, required=True)
    p.add_argument("--geometry", help="INI file with a [bobbin] section")
    p.add_argument("--coefficients", help="replacement coefficient file")
    p.add_argument("--temperature", type=float, default=20.0, help="wire temperature, C")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth", help="write a synthetic spectrum CSV")
    p.add_argument("--r", type=float, help="winding resistance, ohm")
    p.add_argument("--l", type=float, help="inductance, H")
    p.add_argument("--c", type=float, help="capacitance, F")
    p.add_argument("--rv", type=float, help="loss resistance across the coil, ohm")
    p.add_argument("--gauge", type=int, help="gauge tag; with --turns and no R/L/C, use design curves")
    p.add_argument("--turns", type=int, help="turns tag")
    p.add_argument("--c-prior", type=float, default=100e-12,
                   help="capacitance used when building a circuit from the design curves")
    p.add_argument("--coefficients", help="replacement coefficient file")
    p.add_argument("--topology", choices=["series", "parallel"], default="parallel")
    p.add_argument("--f-start", type=float, default=10.0)
    p.add_argument("--f-stop", type=float, default=25_000.0)
    p.add_argument("--points", type=int, default=1024)
    p.add_argument("--spacing", choices=["log", "linear"], default="log")
    p.add_argument("--noise", type=float, help="relative magnitude noise sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chain", action="store_true", help="simulate the measurement chain")
    p.add_argument("--load-resistor", type=float, help="series load resistor, ohm (default 200k)")
    p.add_argument("--cable-capacitance", type=float, help="cable capacitance, F")
    p.add_argument("--input-resistance", type=float, help="analyzer input resistance, ohm")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("analyze", help="resonance summary of a spectrum CSV")
    p.add_argument("file")
    p.add_argument("--fit", action="store_true", help="also fit R, L, C")
    p.add_argument("--topology", choices=["series", "parallel"], default="parallel")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit-batch", help="fit design curves to tagged spectra")
    p.add_argument("source", help="directory of CSV files, or a manifest listing them")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit_batch)

    p = sub.add_parser("plot", help="overlay spectra in an SVG")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--log-x", action="store_true")
    p.add_argument("--mark-peaks", action="store_true")
    p.add_argument("--title", default="Impedance magnitude")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("coefficients", help="write the built-in coefficient file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_coefficients)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, OSError) as exc:
        # UnknownGauge, FormatError, DegenerateInput and bad physics values
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
