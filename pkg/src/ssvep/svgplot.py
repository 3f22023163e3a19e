"""Minimal self-contained SVG renderers for the report CLI.

The CSV outputs are the real data contract; these renderings exist so a
result can be eyeballed without firing up a plotting stack. Output is a
pure function of the input data (no timestamps, random ids, or library
version strings), so reruns are byte-identical.
"""

from __future__ import annotations

import numpy as np

W, H = 640, 420
MARGIN = 54


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str,
                 xlim: tuple[float, float], ylim: tuple[float, float]):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}">',
            f'<rect width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14" '
            f'font-family="sans-serif">{title}</text>',
        ]
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0
        self._axes(xlabel, ylabel)

    def px(self, x: float) -> float:
        return MARGIN + (x - self.x0) / (self.x1 - self.x0) * (W - 2 * MARGIN)

    def py(self, y: float) -> float:
        return H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (H - 2 * MARGIN)

    def _axes(self, xlabel, ylabel):
        self.parts.append(
            f'<rect x="{MARGIN}" y="{MARGIN}" width="{W - 2 * MARGIN}" '
            f'height="{H - 2 * MARGIN}" fill="none" stroke="black"/>'
        )
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            xv = self.x0 + frac * (self.x1 - self.x0)
            yv = self.y0 + frac * (self.y1 - self.y0)
            self.parts.append(
                f'<text x="{_fmt(self.px(xv))}" y="{H - MARGIN + 16}" text-anchor="middle" '
                f'font-size="10" font-family="sans-serif">{_fmt(xv)}</text>'
            )
            self.parts.append(
                f'<text x="{MARGIN - 6}" y="{_fmt(self.py(yv) + 3)}" text-anchor="end" '
                f'font-size="10" font-family="sans-serif">{_fmt(yv)}</text>'
            )
        self.parts.append(
            f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif">{xlabel}</text>'
        )
        self.parts.append(
            f'<text x="16" y="{H / 2}" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif" transform="rotate(-90 16 {H / 2})">{ylabel}</text>'
        )

    def line(self, x0, y0, x1, y1, color="black", width=1.0):
        self.parts.append(
            f'<line x1="{_fmt(self.px(x0))}" y1="{_fmt(self.py(y0))}" '
            f'x2="{_fmt(self.px(x1))}" y2="{_fmt(self.py(y1))}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def polyline(self, xs, ys, color="black", width=1.0):
        pts = " ".join(f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys))
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>'
        )

    def circle(self, x, y, r=2.0, color="steelblue"):
        self.parts.append(
            f'<circle cx="{_fmt(self.px(x))}" cy="{_fmt(self.py(y))}" r="{r}" '
            f'fill="{color}" fill-opacity="0.6"/>'
        )

    def rect(self, x0, y0, x1, y1, fill="none", stroke="black"):
        xa, xb = self.px(x0), self.px(x1)
        ya, yb = self.py(y1), self.py(y0)
        self.parts.append(
            f'<rect x="{_fmt(xa)}" y="{_fmt(ya)}" width="{_fmt(xb - xa)}" '
            f'height="{_fmt(yb - ya)}" fill="{fill}" stroke="{stroke}"/>'
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def scatter_svg(rows, title="Occipital vs in-ear amplitude") -> str:
    """rows: (stimulus_hz, occ, ear) triples."""
    occ = np.array([r[1] for r in rows])
    ear = np.array([r[2] for r in rows])
    c = _Canvas(title, "occipital amplitude (normalised)", "in-ear amplitude (normalised)",
                (float(occ.min()), float(occ.max())), (float(ear.min()), float(ear.max())))
    for _, o, e in rows:
        c.circle(o, e)
    return c.render()


def boxplot_svg(entries, title="Normalised FFT amplitude by frequency") -> str:
    """entries: (stimulus_hz, role, BoxStats) triples."""
    labels = [f"{f:g} {role[:3]}" for f, role, _ in entries]
    lo = min(b.min for _, _, b in entries)
    hi = max(b.max for _, _, b in entries)
    c = _Canvas(title, "stimulus (Hz) / site", "amplitude",
                (-0.5, len(entries) - 0.5), (lo, hi))
    for i, (f, role, b) in enumerate(entries):
        color = "steelblue" if role == "occipital" else "darkorange"
        # whiskers reach the data extremes unless those are outliers
        wlo = b.min if b.min not in b.outliers else b.q1
        whi = b.max if b.max not in b.outliers else b.q3
        c.rect(i - 0.3, b.q1, i + 0.3, b.q3, fill="none", stroke=color)
        c.line(i - 0.3, b.median, i + 0.3, b.median, color=color, width=2)
        c.line(i, b.q1, i, wlo, color=color)
        c.line(i, b.q3, i, whi, color=color)
        for o in b.outliers:
            c.circle(i, o, r=1.5, color=color)
        c.parts.append(
            f'<text x="{_fmt(c.px(i))}" y="{H - MARGIN + 28}" text-anchor="middle" '
            f'font-size="9" font-family="sans-serif">{labels[i]}</text>'
        )
    return c.render()


def waveform_svg(t, series, title="Filtered EEG excerpt") -> str:
    """series: {channel_id: sample array} over the same time base."""
    lo = min(float(np.min(v)) for v in series.values())
    hi = max(float(np.max(v)) for v in series.values())
    c = _Canvas(title, "time (s)", "amplitude (uV)",
                (float(t[0]), float(t[-1])), (lo, hi))
    colors = ["steelblue", "darkorange", "seagreen", "crimson"]
    for i, (name, v) in enumerate(series.items()):
        c.polyline(t, v, color=colors[i % len(colors)])
        c.parts.append(
            f'<text x="{W - MARGIN + 4}" y="{MARGIN + 14 * (i + 1)}" font-size="10" '
            f'font-family="sans-serif" fill="{colors[i % len(colors)]}">{name}</text>'
        )
    return c.render()


def spectrogram_svg(grid, title="Spectrogram") -> str:
    """Heat map of a SpectrogramGrid, log-scaled power."""
    power = np.asarray(grid.power)
    logp = np.log10(np.maximum(power, power.max() * 1e-8 if power.max() > 0 else 1e-30))
    lo, hi = float(logp.min()), float(logp.max())
    span = hi - lo if hi > lo else 1.0
    c = _Canvas(title, "time (s)", "frequency (Hz)",
                (float(grid.times[0]), float(grid.times[-1])),
                (float(grid.freqs[0]), float(grid.freqs[-1])))
    dt = float(grid.times[1] - grid.times[0]) if len(grid.times) > 1 else 1.0
    df = float(grid.freqs[1] - grid.freqs[0]) if len(grid.freqs) > 1 else 1.0
    for i, tv in enumerate(grid.times):
        for j, fv in enumerate(grid.freqs):
            z = (logp[i, j] - lo) / span
            r = int(255 * z)
            b = int(255 * (1 - z))
            g = int(64 + 128 * z * (1 - z))
            c.rect(tv - dt / 2, fv - df / 2, tv + dt / 2, fv + df / 2,
                   fill=f"rgb({r},{g},{b})", stroke="none")
    return c.render()
