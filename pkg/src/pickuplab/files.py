"""Spectrum CSV, coefficient and bobbin geometry files.

Spectrum CSV::

    # key=value            (optional metadata lines)
    frequency_hz,z_real_ohm,z_imag_ohm
    10,1234.5,67.8
    ...

Numbers are written with 17 significant digits so a save/load round trip
is exact. Coefficient and geometry files are INI text with explicit keys.
"""

from __future__ import annotations

import configparser
import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .coil import BobbinGeometry
from .regression import BUILTIN_TABLE, ExpCurve, GaugeDesign, LinCurve
from .synth import ImpedanceSpectrum

HEADER = "frequency_hz,z_real_ohm,z_imag_ohm"


class FormatError(ValueError):
    """A file does not follow the expected layout."""


def atomic_write(path, data: str | bytes) -> None:
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": "\n"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x: float) -> str:
    return f"{x:.17g}"


def dumps_spectrum(spectrum: ImpedanceSpectrum) -> str:
    out = io.StringIO()
    for key, value in spectrum.metadata.items():
        if not key or "=" in key or any(c in key + value for c in "\r\n"):
            raise ValueError(f"metadata entry {key!r} cannot be stored in a CSV comment")
        out.write(f"# {key}={value}\n")
    out.write(HEADER + "\n")
    for f, z in zip(spectrum.frequency.tolist(), spectrum.z.tolist()):
        out.write(f"{_num(f)},{_num(z.real)},{_num(z.imag)}\n")
    return out.getvalue()


def loads_spectrum(text: str) -> ImpedanceSpectrum:
    metadata: dict[str, str] = {}
    rows = []
    header_seen = False
    for lineno, raw in enumerate(text.split("\n"), 1):
        raw = raw.removesuffix("\r")
        line = raw.strip()
        if not line:
            continue
        if not header_seen:
            if line.startswith("#"):
                body = raw.split("#", 1)[1]
                body = body[1:] if body.startswith(" ") else body
                if "=" in body:
                    key, value = body.split("=", 1)
                    metadata[key] = value
                continue
            if line.replace(" ", "") != HEADER:
                raise FormatError(f"line {lineno}: expected header {HEADER!r}, got {line!r}")
            header_seen = True
            continue
        if line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 3 columns, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric value in {line!r}") from None
    if not header_seen:
        raise FormatError(f"missing header {HEADER!r}")
    arr = np.array(rows, dtype=np.float64).reshape(-1, 3)
    if not np.all(np.isfinite(arr)):
        raise FormatError("non-finite values in spectrum")
    z = np.empty(len(arr), dtype=np.complex128)
    z.real, z.imag = arr[:, 1], arr[:, 2]  # re + 1j*im would turn -0.0 into 0.0
    try:
        return ImpedanceSpectrum(arr[:, 0], z, metadata)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def save_spectrum(spectrum: ImpedanceSpectrum, path) -> None:
    atomic_write(path, dumps_spectrum(spectrum))


def load_spectrum(path) -> ImpedanceSpectrum:
    return loads_spectrum(Path(path).read_text(encoding="utf-8"))


_COEFF_KEYS = ("f_res_prefactor_hz", "f_res_rate_per_turn", "z_max_slope_ohm_per_turn",
               "z_max_intercept_ohm", "usable_turns_min")


def dumps_coefficients(table: dict[int, GaugeDesign]) -> str:
    lines = ["# Pickup design coefficients per wire gauge.",
             "#   f_res = f_res_prefactor_hz * exp(f_res_rate_per_turn * N)",
             "#   |Z|max = z_max_slope_ohm_per_turn * N + z_max_intercept_ohm"]
    for gauge in sorted(table):
        d = table[gauge]
        values = (d.f_res_curve.prefactor, d.f_res_curve.rate, d.z_max_curve.slope,
                  d.z_max_curve.intercept)
        lines.append("")
        lines.append(f"[awg{gauge}]")
        lines += [f"{k} = {float(v)!r}" for k, v in zip(_COEFF_KEYS, values)]
        lines.append(f"usable_turns_min = {int(d.usable_turns_min)}")
    return "\n".join(lines) + "\n"


def loads_coefficients(text: str) -> dict[int, GaugeDesign]:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise FormatError(str(exc)) from None
    table = {}
    for section in parser.sections():
        if not section.lower().startswith("awg"):
            raise FormatError(f"unexpected section [{section}]")
        try:
            gauge = int(section[3:])
            s = parser[section]
            missing = [k for k in _COEFF_KEYS if k not in s]
            if missing:
                raise FormatError(f"[{section}] missing keys: {', '.join(missing)}")
            table[gauge] = GaugeDesign(
                ExpCurve(float(s["f_res_prefactor_hz"]), float(s["f_res_rate_per_turn"])),
                LinCurve(float(s["z_max_slope_ohm_per_turn"]), float(s["z_max_intercept_ohm"])),
                int(s["usable_turns_min"]))
        except ValueError as exc:
            raise FormatError(f"[{section}]: {exc}") from None
    if not table:
        raise FormatError("no [awgNN] sections found")
    return table


def save_coefficients(table, path) -> None:
    atomic_write(path, dumps_coefficients(table))


def load_coefficients(path) -> dict[int, GaugeDesign]:
    return loads_coefficients(Path(path).read_text(encoding="utf-8"))


def default_coefficients_text() -> str:
    return dumps_coefficients(BUILTIN_TABLE)


_GEOMETRY_KEYS = {"core_length_mm": "core_length", "core_width_mm": "core_width",
                  "winding_height_mm": "winding_height", "max_build_mm": "max_build"}


def load_geometry(path) -> BobbinGeometry:
    """Read a ``[bobbin]`` section; absent keys keep their defaults."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string(Path(path).read_text(encoding="utf-8"))
    except configparser.Error as exc:
        raise FormatError(str(exc)) from None
    if "bobbin" not in parser:
        raise FormatError("geometry file needs a [bobbin] section")
    s = parser["bobbin"]
    unknown = set(s) - set(_GEOMETRY_KEYS)
    if unknown:
        raise FormatError(f"unknown geometry keys: {', '.join(sorted(unknown))}")
    try:
        return BobbinGeometry(**{_GEOMETRY_KEYS[k]: float(v) for k, v in s.items()})
    except ValueError as exc:
        raise FormatError(str(exc)) from None
