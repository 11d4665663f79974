
import io
from itertools import groupby
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from src.entity.reeb_graph import CRITICAL, CUT, END, ReebGraph
from src.entity.region import StripRegion
from src.logger import logging
from src.utils.main_utils import dump_json

EXPORT_FORMATS = ("dot", "json", "svg")

_KIND_STYLE = {
    CRITICAL: {"shape": "circle", "color": "#1f77b4"},
    CUT: {"shape": "box", "color": "#7f7f7f"},
    END: {"shape": "diamond", "color": "#d62728"},
}


def _g(value: float) -> str:
    return f"{value:.12g}"


def to_dot(g: ReebGraph, provenance: Optional[str] = None) -> str:
    """DOT digraph drawn bottom to top; vertices of equal height share a rank."""
    lines = ["digraph reeb {", "  rankdir=BT;"]
    if provenance:
        lines.append(f"  // {provenance}")
    for v in g.vertices:
        style = _KIND_STYLE[v.kind]
        label = f"{v.id}\\nh={_g(v.height)}\\ndeg={v.degree}"
        lines.append(f'  v{v.id} [label="{label}", height_value="{_g(v.height)}", kind="{v.kind}", '
                     f'shape={style["shape"]}, color="{style["color"]}"];')
    for _, same_height in groupby(g.vertices, key=lambda v: v.height):
        members = [f"v{v.id}" for v in same_height]
        if len(members) > 1:
            lines.append("  { rank=same; " + "; ".join(members) + "; }")
    for e in g.edges:
        lines.append(f"  v{e.lo} -> v{e.hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(g: ReebGraph, region: Optional[StripRegion] = None, provenance: Optional[str] = None) -> str:
    """Strip between the two graphs with the Reeb graph drawn over it (vertices at footprint centre, height)."""
    matplotlib.rcParams["svg.hashsalt"] = "reebstrip"
    fig, ax = plt.subplots(figsize=(8, 5))
    try:
        if region is not None:
            s = np.linspace(region.window[0], region.window[1], 1024)
            lower, upper = region.c1.value(s), region.c2.value(s)
            ax.fill_between(s, lower, upper, color="#c6dbef", alpha=0.6, linewidth=0)
            ax.plot(s, lower, color="#08519c", linewidth=0.8, label="c1")
            ax.plot(s, upper, color="#6baed6", linewidth=0.8, label="c2")
        position = {v.id: (0.5 * (v.footprint[0] + v.footprint[1]), v.height) for v in g.vertices}
        for e in g.edges:
            (x0, y0), (x1, y1) = position[e.lo], position[e.hi]
            ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                        arrowprops={"arrowstyle": "->", "color": "#333333", "linewidth": 0.8})
        for kind, style in _KIND_STYLE.items():
            points = [position[v.id] for v in g.vertices if v.kind == kind]
            if points:
                xs, ys = zip(*points)
                ax.scatter(xs, ys, s=18, color=style["color"], zorder=3, label=kind)
        ax.set_xlabel("s")
        ax.set_ylabel("height")
        if g.vertices or region is not None:
            ax.legend(loc="best", fontsize=7)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        text = buffer.getvalue()
        if provenance:
            # "--" may not appear inside an XML comment
            while "--" in provenance:
                provenance = provenance.replace("--", "- -")
            comment = "<!-- " + provenance + " -->\n"
            head, _, body = text.partition("\n")
            text = head + "\n" + comment + body
        return text
    finally:
        plt.close(fig)


def export(g: ReebGraph, fmt: str = "json", region: Optional[StripRegion] = None,
           provenance: Optional[str] = None) -> bytes:
    """
    Method Name :   export
    Description :   Serialises a Reeb graph as DOT, JSON or SVG.

    Output      :   UTF-8 encoded document
    On Failure  :   ValueError for an unknown format
    """
    logging.info(f"Exporting graph with {len(g.vertices)} vertices as {fmt}")
    if fmt == "dot":
        text = to_dot(g, provenance)
    elif fmt == "json":
        text = dump_json(g.to_json())
    elif fmt == "svg":
        text = to_svg(g, region, provenance)
    else:
        raise ValueError(f"unknown export format '{fmt}', expected one of {EXPORT_FORMATS}")
    return text.encode("utf-8")
