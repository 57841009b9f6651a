"""Standalone SVG rendering of membership bar graphs and centroid diagrams."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .centroid import centroid_of_normalized, reference_points
from .fuzzy_core import LABELS
from .report import AssessmentReport, format_decimal

SVG_NS = "http://www.w3.org/2000/svg"

PANEL_W, PANEL_H = 360, 240
LEFT, RIGHT, TOP, BOTTOM = 45, 20, 30, 35
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class _Frame:
    """Maps chart coordinates (x in [0, 5], y in [0, y_max]) into one panel."""

    def __init__(self, ox: float, oy: float, y_max: float):
        self.ox, self.oy, self.y_max = ox, oy, y_max
        self.w = PANEL_W - LEFT - RIGHT
        self.h = PANEL_H - TOP - BOTTOM

    def px(self, x) -> float:
        return round(self.ox + LEFT + float(x) / 5 * self.w, 3)

    def py(self, y) -> float:
        return round(self.oy + TOP + self.h - float(y) / self.y_max * self.h, 3)


def _fmt(v: float) -> str:
    return f"{v:g}"


def _sub(parent, tag, text=None, **attrs):
    el = ET.SubElement(parent, tag, {k.rstrip("_").replace("_", "-"): str(v) for k, v in attrs.items()})
    if text is not None:
        el.text = text
    return el


def _axes(g, frame: _Frame, y_ticks):
    _sub(g, "line", x1=frame.px(0), y1=frame.py(0), x2=frame.px(5), y2=frame.py(0), stroke="#000")
    _sub(g, "line", x1=frame.px(0), y1=frame.py(0), x2=frame.px(0), y2=frame.py(frame.y_max), stroke="#000")
    for x in range(6):
        _sub(g, "text", str(x), x=frame.px(x), y=frame.py(0) + 14, font_size=10, text_anchor="middle")
    for y in y_ticks:
        _sub(g, "text", _fmt(y), x=frame.px(0) - 4, y=frame.py(y) + 3, font_size=10, text_anchor="end")


def _marker(g, frame, point, color, group_name, precision):
    return _sub(
        g,
        "circle",
        class_="centroid",
        cx=frame.px(point.x),
        cy=frame.py(point.y),
        r=4,
        fill=color,
        data_group=group_name,
        data_xc=format_decimal(point.x, precision),
        data_yc=format_decimal(point.y, precision),
    )


def _bar_chart(root, ox, oy, title, dist, color, group_name, precision):
    frame = _Frame(ox, oy, 1.0)
    g = _sub(root, "g", class_="bar-chart", data_group=group_name)
    _sub(g, "text", title, x=ox + PANEL_W / 2, y=oy + 18, font_size=12, text_anchor="middle")
    _axes(g, frame, (0, 0.5, 1))
    for lab, y in zip(LABELS, dist.y):
        r = lab.rank
        _sub(
            g,
            "rect",
            class_="bar",
            x=frame.px(r),
            y=frame.py(y),
            width=round(frame.px(r + 1) - frame.px(r), 3),
            height=round(frame.py(0) - frame.py(y), 3),
            fill=color,
            fill_opacity="0.5",
            stroke=color,
            data_label=lab.symbol,
            data_height=format_decimal(y, precision),
        )
    _marker(g, frame, centroid_of_normalized(dist.y), "#000", group_name, precision)


def _triangle_diagram(root, ox, oy, title, names, points, precision):
    frame = _Frame(ox, oy, 0.6)
    g = _sub(root, "g", class_="centroid-diagram")
    _sub(g, "text", title, x=ox + PANEL_W / 2, y=oy + 18, font_size=12, text_anchor="middle")
    _axes(g, frame, (0, 0.2, 0.4, 0.6))
    ref = reference_points()
    corners = [ref.worst, ref.center, ref.ideal]
    _sub(
        g,
        "polygon",
        class_="reference-triangle",
        points=" ".join(f"{_fmt(frame.px(p.x))},{_fmt(frame.py(p.y))}" for p in corners),
        fill="none",
        stroke="#888",
        stroke_dasharray="4 3",
    )
    for label, p in zip(("F_w", "F_m", "F_i"), corners):
        _sub(g, "text", label, class_="reference-point", x=frame.px(p.x) + 4, y=frame.py(p.y) - 4, font_size=10)
    legend = _sub(g, "g", class_="legend")
    for i, (name, point) in enumerate(zip(names, points)):
        color = PALETTE[i % len(PALETTE)]
        _marker(g, frame, point, color, name, precision)
        ly = oy + TOP + 4 + 14 * i
        _sub(legend, "rect", x=ox + PANEL_W - 110, y=ly - 8, width=8, height=8, fill=color)
        _sub(legend, "text", name, x=ox + PANEL_W - 98, y=ly, font_size=10)


def render_svg(report: AssessmentReport) -> str:
    """One bar chart per stage distribution and one centroid diagram per stage comparison."""
    charts = [(g, i) for g in report.groups for i in range(len(g.stage_names))]
    if not charts and not report.comparisons:
        raise ValueError("report contains no distribution to plot")
    cols = max((len(g.stage_names) for g in report.groups), default=len(report.comparisons)) or 1
    n_rows = len(report.groups) + (1 if report.comparisons else 0)
    width, height = cols * PANEL_W, n_rows * PANEL_H

    root = ET.Element(
        "svg",
        {"xmlns": SVG_NS, "viewBox": f"0 0 {width} {height}", "width": str(width), "height": str(height)},
    )
    _sub(root, "rect", x=0, y=0, width=width, height=height, fill="#fff")
    for row, g in enumerate(report.groups):
        color = PALETTE[row % len(PALETTE)]
        for i, stage in enumerate(g.stage_names):
            _bar_chart(root, i * PANEL_W, row * PANEL_H, f"{g.name}: {stage}", g.distributions[i], color, g.name, report.precision)
    row = len(report.groups)
    for col, rec in enumerate(report.comparisons):
        _triangle_diagram(
            root, col * PANEL_W, row * PANEL_H, f"centroids: {rec.stage_name}", rec.groups, rec.result.centroids, report.precision
        )
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"

