"""Minimal SVG writer: one closed polyline per curve plus scatter circles."""

from __future__ import annotations

from xml.sax.saxutils import escape

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


def plot_svg(curves=(), points=(), title: str = "", size: int = 480, pad: int = 24) -> str:
    """``curves``: sequences of complex numbers (drawn closed).
    ``points``: (complex, color) pairs."""
    curves = [list(map(complex, c)) for c in curves]
    points = [(complex(z), col) for z, col in points]
    allz = [z for c in curves for z in c] + [z for z, _ in points] or [0j]
    xs = [z.real for z in allz]
    ys = [z.imag for z in allz]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    s = (size - 2 * pad) / span

    def tx(z):
        return size / 2 + (z.real - cx) * s, size / 2 - (z.imag - cy) * s

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{pad}" y="{pad - 8}" font-family="sans-serif" font-size="12">{escape(title)}</text>')
    for i, c in enumerate(curves):
        pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(tx, c + c[:1]))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{PALETTE[i % len(PALETTE)]}" stroke-width="1"/>')
    for z, col in points:
        x, y = tx(z)
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{col}" fill-opacity="0.7"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
