"""Minimal deterministic SVG plots of branches and profiles.

Output depends only on the input numbers: no timestamps, ids or random
colours, so equal input gives byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["branch_svg", "profiles_svg", "emit_svg", "select_by_waveheight"]

WIDTH, HEIGHT = 640, 420
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return list(np.linspace(lo, hi, n))


class _Frame:
    def __init__(self, xlim, ylim):
        (self.x0, self.x1), (self.y0, self.y1) = xlim, ylim
        if self.x1 <= self.x0:
            self.x0, self.x1 = self.x0 - 0.5, self.x0 + 0.5
        if self.y1 <= self.y0:
            pad = max(abs(self.y0) * 0.1, 0.5)
            self.y0, self.y1 = self.y0 - pad, self.y0 + pad

    def px(self, x):
        return MARGIN + (np.asarray(x) - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def py(self, y):
        return HEIGHT - MARGIN - (np.asarray(y) - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)


def _polyline(frame: _Frame, x, y, colour: str) -> str:
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(frame.px(x), frame.py(y)))
    return f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>'


def _axes(frame: _Frame, xlabel: str, ylabel: str, title: str) -> list[str]:
    left, right = MARGIN, WIDTH - MARGIN
    top, bottom = MARGIN, HEIGHT - MARGIN
    out = [
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{xlabel}</text>',
        f'<text x="18" y="{HEIGHT / 2:.1f}" text-anchor="middle" transform="rotate(-90 18 {HEIGHT / 2:.1f})">{ylabel}</text>',
        f'<text x="{WIDTH / 2:.1f}" y="30" text-anchor="middle">{title}</text>',
    ]
    for t in _ticks(frame.x0, frame.x1):
        x = float(frame.px(t))
        out.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{bottom + 18}" text-anchor="middle" font-size="11">{t:.4g}</text>')
    for t in _ticks(frame.y0, frame.y1):
        y = float(frame.py(t))
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11">{t:.4g}</text>')
    return out


def _document(body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def branch_svg(c, waveheight) -> str:
    """Bifurcation diagram: waveheight against wavespeed."""
    c = np.asarray(c, dtype=float)
    wh = np.asarray(waveheight, dtype=float)
    if c.size == 0:
        raise ValueError("empty branch")
    frame = _Frame((c.min(), c.max()), (min(0.0, wh.min()), wh.max()))
    body = _axes(frame, "wavespeed c", "waveheight", "bifurcation branch")
    body.append(_polyline(frame, c, wh, PALETTE[0]))
    return _document(body)


def profiles_svg(nodes, profiles, labels=None) -> str:
    """Overlay of even profiles mirrored from ``[0, pi]`` to ``[-pi, pi]``."""
    nodes = np.asarray(nodes, dtype=float)
    profiles = [np.asarray(p, dtype=float) for p in profiles]
    if not profiles:
        raise ValueError("no profiles to plot")
    x = np.concatenate([-nodes[::-1], nodes])
    lo = min(p.min() for p in profiles)
    hi = max(p.max() for p in profiles)
    frame = _Frame((-np.pi, np.pi), (lo, hi))
    body = _axes(frame, "x", "phi", "profiles along the branch")
    for i, p in enumerate(profiles):
        body.append(_polyline(frame, x, np.concatenate([p[::-1], p]), PALETTE[i % len(PALETTE)]))
        if labels:
            body.append(
                f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 * (i + 1)}" text-anchor="end" '
                f'font-size="11" fill="{PALETTE[i % len(PALETTE)]}">{labels[i]}</text>'
            )
    return _document(body)


def select_by_waveheight(waveheights, count: int = 4) -> list[int]:
    """Indices of ``count`` points spread evenly in waveheight, ending at the last one."""
    wh = np.asarray(waveheights, dtype=float)
    targets = np.linspace(wh.max() / count, wh.max(), count)
    idx = [int(np.argmin(np.abs(wh - t))) for t in targets]
    return sorted(set(idx))


def emit_svg(path, kind: str, **data) -> None:
    """Write a plot; ``kind`` is ``"branch"`` (``c``, ``waveheight``) or ``"profiles"`` (``nodes``, ``profiles``)."""
    if kind == "branch":
        text = branch_svg(data["c"], data["waveheight"])
    elif kind == "profiles":
        text = profiles_svg(data["nodes"], data["profiles"], data.get("labels"))
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write SVG {path}: {exc.strerror}") from exc
