"""Figures for the reproduction runs.

``curves_svg`` writes SVG by hand so its structure is fixed (one polyline per
curve) and testable.  The PNG renderers use matplotlib's Agg backend.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

_COLORS = ("#1f4fd1", "#c21fb8", "#13a7b8", "#2a9d3c", "#d62728", "#8c564b", "#7f7f7f")

_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 150, 30, 55


def _nice_ticks(lo, hi, count=5):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def curves_svg(curves, title="Average inseparability", bound_db=0.0):
    """SVG of ``{label: (ns, values)}`` with values plotted in dB.

    The dB scale is relative to the separability bound, so 0 dB is the bound
    and entangled states lie below it.  A dashed line marks the bound.
    """
    if not curves:
        raise ValueError("need at least one curve")
    db = {k: (list(ns), [10.0 * math.log10(v) for v in vs]) for k, (ns, vs) in curves.items()}
    all_n = [n for ns, _ in db.values() for n in ns]
    all_y = [y for _, ys in db.values() for y in ys] + [bound_db]
    x0, x1 = min(all_n), max(all_n)
    if x0 == x1:
        x1 = x0 + 1
    y0, y1 = min(all_y), max(all_y)
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def sx(n):
        return _LEFT + (n - x0) / (x1 - x0) * pw

    def sy(y):
        return _TOP + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_LEFT + pw / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        out.append(
            f'<text x="{sx(t):.1f}" y="{_TOP + ph + 16}" text-anchor="middle" font-size="11">{t:g}</text>'
        )
    for t in _nice_ticks(y0, y1):
        out.append(
            f'<text x="{_LEFT - 6}" y="{sy(t) + 4:.1f}" text-anchor="end" font-size="11">{t:g} dB</text>'
        )
    out.append(
        f'<line x1="{_LEFT}" y1="{sy(bound_db):.1f}" x2="{_LEFT + pw}" y2="{sy(bound_db):.1f}" '
        'stroke="black" stroke-dasharray="4 3"/>'
    )
    for i, (label, (ns, ys)) in enumerate(db.items()):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{sx(n):.2f},{sy(y):.2f}" for n, y in zip(ns, ys))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{pts}">'
            f"<title>{escape(label)}</title></polyline>"
        )
        ly = _TOP + 14 + 18 * i
        out.append(
            f'<line x1="{_W - _RIGHT + 12}" y1="{ly - 4}" x2="{_W - _RIGHT + 32}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        out.append(f'<text x="{_W - _RIGHT + 36}" y="{ly}" font-size="11">{escape(label)}</text>')
    out.append(
        f'<text x="{_LEFT + pw / 2:.1f}" y="{_H - 14}" text-anchor="middle" font-size="12">'
        "number of modes N</text>"
    )
    out.append(
        f'<text x="16" y="{_TOP + ph / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_TOP + ph / 2:.1f})">inseparability (dB relative to bound)</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def curves_png(curves, path, title="Average inseparability"):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i, (label, (ns, vs)) in enumerate(curves.items()):
        ax.plot(ns, 10 * np.log10(vs), color=_COLORS[i % len(_COLORS)], label=label)
    ax.axhline(0.0, color="black", lw=0.8, ls="--")
    ax.set_xlabel("number of modes N")
    ax.set_ylabel("inseparability (dB relative to bound)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def table_png(table, value_columns, path, title):
    """Scatter of per-inequality values against N, one marker column per row."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    n_idx = table.columns.index("N")
    for row in table.rows:
        vals = [row[table.columns.index(c)] for c in value_columns]
        vals = [v for v in vals if v is not None]
        ax.plot([row[n_idx]] * len(vals), vals, "o", color=_COLORS[0], ms=4)
    ax.axhline(1.0, color="black", lw=0.8, ls="--")
    ax.set_xlabel("number of modes N")
    ax.set_ylabel("inequality value (bound 1)")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def patterns_png(basis, path):
    from .detector import render_mode_pattern

    plt = _pyplot()
    n = basis.n_modes
    fig, axes = plt.subplots(n, 1, figsize=(4.0, 1.1 * n + 0.6), sharex=True, squeeze=False)
    for i, row in enumerate(basis.rows):
        pat = render_mode_pattern(row)
        ax = axes[i, 0]
        ax.bar(pat.positions, pat.amplitudes, width=0.45, color=_COLORS[i % len(_COLORS)])
        ax.axhline(0.0, color="black", lw=0.5)
        ax.set_ylabel(f"mode {i + 1}", fontsize=8)
        ax.set_yticks([])
    axes[-1, 0].set_xlabel("position (waists)")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
