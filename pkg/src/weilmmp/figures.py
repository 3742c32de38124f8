"""SVG pictures of cones in a two-dimensional class space.

Output is deterministic: the SVG hash salt is fixed, text is kept as text
and the date metadata is dropped, so identical input gives identical bytes.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .errors import NotPlanarError
from .polyhedra import PolyhedralCone

RADIUS = 1.0
_COLORS = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3"]


def _angle(v) -> float:
    return math.atan2(float(v[1]), float(v[0]))


def _unit(v) -> tuple[float, float]:
    x, y = float(v[0]), float(v[1])
    r = math.hypot(x, y)
    return x / r, y / r


def _arc(a0: float, a1: float, steps: int = 48) -> list[tuple[float, float]]:
    """Counter-clockwise arc from angle a0 to a1."""
    while a1 <= a0:
        a1 += 2 * math.pi
    return [(RADIUS * math.cos(a0 + (a1 - a0) * k / steps), RADIUS * math.sin(a0 + (a1 - a0) * k / steps))
            for k in range(steps + 1)]


def cone_outline(C: PolyhedralCone) -> list[tuple[float, float]]:
    """Polygon (clipped to the unit disk) covering a planar cone."""
    lin, rays = C.lineality, C.rays
    if len(lin) == 2:
        return _arc(0.0, 2 * math.pi)[:-1]
    if len(lin) == 1:
        l = lin[0]
        if not rays:
            x, y = _unit(l)
            return [(-RADIUS * x, -RADIUS * y), (RADIUS * x, RADIUS * y)]
        r = rays[0]
        a = _angle(l)
        # the half plane lies on the side of r
        start = a if l[0] * r[1] - l[1] * r[0] > 0 else a + math.pi
        return [(0.0, 0.0)] + _arc(start, start + math.pi)
    if len(rays) == 1:
        return [(0.0, 0.0), _unit(rays[0])]
    if not rays:
        return [(0.0, 0.0)]
    r1, r2 = rays
    if r1[0] * r2[1] - r1[1] * r2[0] < 0:
        r1, r2 = r2, r1
    return [(0.0, 0.0)] + _arc(_angle(r1), _angle(r2))


def emit_cone_figure(cones: Sequence[PolyhedralCone], labels: Sequence[tuple[Sequence[int], str]],
                     path, title: str | None = None, names: Sequence[str] | None = None) -> None:
    """Write an SVG of the given planar cones with labelled rays to ``path``."""
    for C in cones:
        if C.dim != 2:
            raise NotPlanarError(f"NotPlanar: cone lives in dimension {C.dim}, expected 2")
    for v, _ in labels:
        if len(v) != 2:
            raise NotPlanarError("NotPlanar: label vector is not planar")
    with matplotlib.rc_context({"svg.hashsalt": "weilmmp", "svg.fonttype": "none"}):
        fig = Figure(figsize=(4, 4))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        ax.axhline(0, color="0.6", lw=0.8)
        ax.axvline(0, color="0.6", lw=0.8)
        for i, C in enumerate(cones):
            color = _COLORS[i % len(_COLORS)]
            pts = cone_outline(C)
            name = names[i] if names and i < len(names) else None
            xs, ys = zip(*pts)
            if len(pts) > 2:
                ax.fill(xs, ys, color=color, alpha=0.3, lw=0, label=name)
            else:
                ax.plot(xs, ys, color=color, lw=2, label=name)
            for r in C.rays:
                x, y = _unit(r)
                ax.plot([0, RADIUS * x], [0, RADIUS * y], color=color, lw=2)
        for v, text in labels:
            x, y = _unit(v)
            ax.annotate(text, (RADIUS * x, RADIUS * y), xytext=(1.12 * x, 1.12 * y),
                        ha="center", va="center", fontsize=11)
        lim = 1.35 * RADIUS
        ax.set_xlim(-lim, lim)
        ax.set_ylim(-lim, lim)
        ax.set_aspect("equal")
        if title:
            ax.set_title(title)
        if names:
            ax.legend(loc="lower left", fontsize=8)
        fig.savefig(path, format="svg", metadata={"Date": None})


def class_label(prefix: str, v: Sequence[int]) -> str:
    """E.g. class_label("C", (1, 0)) == "C_(1,0)"."""
    return f"{prefix}_({','.join(str(x) for x in v)})"
