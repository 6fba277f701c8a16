"""
SVG overlays of a target and its interpolants, drawn with matplotlib.
"""
import io
from typing import Mapping, Sequence

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import PathPatch
from matplotlib.path import Path

from apbez.interpolator import Segment
from apbez.targets import Target

MARGIN = 0.05
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
TARGET_COLOR = "#000000"
HASH_SALT = "apbez"

RC = {
    "svg.hashsalt": HASH_SALT,
    "svg.fonttype": "none",
    "lines.linewidth": 0.8,
    "font.size": 8,
}


def bezier_path(segments: Sequence[Segment]) -> Path:
    """
    One matplotlib path with a native cubic (`CURVE4`) per segment.
    """
    vertices = [tuple(segments[0].bezier.p0)]
    codes = [Path.MOVETO]
    for segment in segments:
        _, c1, c2, p3 = segment.bezier
        vertices += [tuple(c1), tuple(c2), tuple(p3)]
        codes += [Path.CURVE4] * 3
    return Path(np.array(vertices), codes)


def render_svg(target: Target, s0: float, s1: float, curves: Mapping[str, Sequence[Segment]],
               samples: int = 512) -> str:
    """
    Draws the target over `[s0, s1]` and each named interpolant (sampled polyline plus native cubic path) with
    its dashed control polygons, on equal axes with a 5% margin. Artists carry ids: `target`,
    `<label>-sampled`, `<label>` for the cubic path and `<label>-control-<i>` per segment.

    :param target: The reference curve.
    :param s0: First target parameter.
    :param s1: Last target parameter.
    :param curves: Interpolants by label, drawn in insertion order.
    :param samples: Points per sampled polyline.
    :return: The SVG document, byte-identical for identical input.
    """
    with matplotlib.rc_context(RC):
        fig = Figure(figsize=(6.0, 6.0))
        ax = fig.add_subplot()
        ax.set_title(f"{target.name} on [{s0!r}, {s1!r}]")
        ax.set_aspect("equal")
        ax.margins(MARGIN)

        points = target.position(np.linspace(s0, s1, samples))
        ax.plot(points[:, 0], points[:, 1], color=TARGET_COLOR, gid="target")

        for index, (label, segments) in enumerate(curves.items()):
            color = PALETTE[index % len(PALETTE)]
            sampled = np.concatenate([s.bezier.points(np.linspace(0.0, 1.0, samples)) for s in segments])
            ax.plot(sampled[:, 0], sampled[:, 1], color=color, gid=f"{label}-sampled")
            ax.add_patch(PathPatch(bezier_path(segments), facecolor="none", edgecolor=color, alpha=0.5,
                                   gid=label))
            for i, segment in enumerate(segments):
                controls = segment.bezier.control_array()
                ax.plot(controls[:, 0], controls[:, 1], color=color, linestyle="--", linewidth=0.5, marker="o",
                        markersize=2.0, gid=f"{label}-control-{i}")

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
