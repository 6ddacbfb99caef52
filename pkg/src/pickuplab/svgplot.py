"""Self-contained SVG plots of impedance magnitude against frequency.

Output depends only on the input data and options, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .analysis import PeakAtEdge, find_resonant_peak

WIDTH, HEIGHT = 820, 500
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 90, 180, 40, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _si(x: float) -> str:
    for scale, suffix in ((1e6, "M"), (1e3, "k")):
        if abs(x) >= scale:
            return f"{x / scale:g}{suffix}"
    return f"{x:g}"


def render_svg(spectra, labels=None, log_x: bool = False, mark_peaks: bool = False,
               title: str = "Impedance magnitude") -> str:
    """Overlay ``|Z|`` traces of several spectra in one SVG document."""
    if not spectra:
        raise ValueError("nothing to plot")
    labels = list(labels) if labels is not None else [f"trace {i + 1}" for i in range(len(spectra))]
    f_all = np.concatenate([s.frequency for s in spectra])
    m_all = np.concatenate([s.magnitude for s in spectra])
    if log_x and np.any(f_all <= 0):
        raise ValueError("log frequency axis needs positive frequencies")
    fx = np.log10 if log_x else (lambda v: np.asarray(v, dtype=float))
    x_lo, x_hi = float(fx(f_all.min())), float(fx(f_all.max()))
    y_lo, y_hi = 0.0, float(m_all.max()) * 1.05 or 1.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(f):
        return MARGIN_LEFT + (fx(f) - x_lo) / (x_hi - x_lo) * plot_w

    def py(m):
        return MARGIN_TOP + plot_h - (np.asarray(m) - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2 - MARGIN_RIGHT / 2:.0f}" y="24" text-anchor="middle" '
        f'font-size="15">{escape(title)}</text>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
    ]

    if log_x:
        xticks = [10.0 ** k for k in range(math.ceil(x_lo - 1e-9), math.floor(x_hi + 1e-9) + 1)]
    else:
        xticks = _nice_ticks(x_lo, x_hi)
    for t in xticks:
        x = _fmt(float(px(t)))
        out.append(f'<line x1="{x}" y1="{MARGIN_TOP}" x2="{x}" y2="{MARGIN_TOP + plot_h}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{x}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle">'
                   f'{_si(t)}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        y = _fmt(float(py(t)))
        out.append(f'<line x1="{MARGIN_LEFT}" y1="{y}" x2="{MARGIN_LEFT + plot_w}" y2="{y}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{y}" text-anchor="end" '
                   f'dominant-baseline="middle">{_si(t)}</text>')
    out.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.0f}" y="{HEIGHT - 15}" '
               'text-anchor="middle">Frequency (Hz)</text>')
    out.append(f'<text x="20" y="{MARGIN_TOP + plot_h / 2:.0f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2:.0f})">|Z| (ohm)</text>')

    for i, (spectrum, label) in enumerate(zip(spectra, labels)):
        color = PALETTE[i % len(PALETTE)]
        xs, ys = px(spectrum.frequency), py(spectrum.magnitude)
        d = "M" + " L".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
        out.append(f'<path class="trace" d="{d}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"><title>{escape(label)}</title></path>')
        ly = MARGIN_TOP + 10 + 20 * i
        lx = WIDTH - MARGIN_RIGHT + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" '
                   'stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}" dominant-baseline="middle">{escape(label)}</text>')
        if mark_peaks:
            try:
                peak = find_resonant_peak(spectrum)
            except PeakAtEdge:
                continue
            out.append(
                f'<circle class="peak" cx="{_fmt(float(px(peak.f_res)))}" '
                f'cy="{_fmt(float(py(peak.z_max)))}" r="4" fill="{color}" '
                f'data-label={quoteattr(label)} data-f-res={quoteattr(repr(peak.f_res))} '
                f'data-z-max={quoteattr(repr(peak.z_max))}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
