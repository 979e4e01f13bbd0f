"""
渲染：森林 / 区域 → SVG 1.1 与 Graphviz DOT

输出是确定的：森林用 fold_layout 的精确坐标，区域按比例绘制；
黑点实心、白点空心，每条边标注权重。
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

import graphviz

from lwbp.combing import Region
from lwbp.exception import SchemaError
from lwbp.planetree import (
    FoldLayout,
    PlaneForest,
    TwiceMarkedForest,
    fold_layout,
    rooted_markings,
)
from lwbp.schema import RegionModel, TreeModel

X_SCALE = 120
Y_SCALE = 40
MARGIN = 30
COMPONENT_GAP = Fraction(1, 2)
VERTEX_RADIUS = 5


def _num(value: Fraction | float) -> str:
    return f"{float(value):.3f}"


class _Canvas:
    """把 (x, y) 数学坐标换算到 SVG 像素，y 轴向上"""

    def __init__(self, x_max: Fraction, y_min: Fraction, y_max: Fraction):
        self.y_max = y_max
        self.width = MARGIN * 2 + float(x_max) * X_SCALE
        self.height = MARGIN * 2 + float(y_max - y_min) * Y_SCALE
        self.lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_num(self.width)}" height="{_num(self.height)}" '
            f'viewBox="0 0 {_num(self.width)} {_num(self.height)}">',
        ]

    def px(self, x: Fraction) -> str:
        return _num(MARGIN + x * X_SCALE)

    def py(self, y: Fraction) -> str:
        return _num(MARGIN + (self.y_max - y) * Y_SCALE)

    def rect(self, cls: str, x0: Fraction, x1: Fraction, y0: Fraction, y1: Fraction, fill: str) -> None:
        self.lines.append(
            f'<rect class="{cls}" x="{self.px(x0)}" y="{self.py(y1)}" '
            f'width="{_num((x1 - x0) * X_SCALE)}" height="{_num((y1 - y0) * Y_SCALE)}" '
            f'fill="{fill}" stroke="#555555" stroke-width="1"/>'
        )

    def line(self, cls: str, x0: Fraction, y0: Fraction, x1: Fraction, y1: Fraction, width: int = 1) -> None:
        self.lines.append(
            f'<line class="{cls}" x1="{self.px(x0)}" y1="{self.py(y0)}" '
            f'x2="{self.px(x1)}" y2="{self.py(y1)}" stroke="black" stroke-width="{width}"/>'
        )

    def text(self, cls: str, x: Fraction, y: Fraction, content: str, dy: int = 0) -> None:
        self.lines.append(
            f'<text class="{cls}" x="{self.px(x)}" y="{_num(float(self.py(y)) + dy)}" '
            f'font-family="sans-serif" font-size="11" text-anchor="middle">{escape(content)}</text>'
        )

    def circle(self, x: Fraction, y: Fraction, black: bool) -> None:
        fill = "black" if black else "white"
        color = "black" if black else "white"
        self.lines.append(
            f'<circle class="vertex {color}" cx="{self.px(x)}" cy="{self.py(y)}" '
            f'r="{VERTEX_RADIUS}" fill="{fill}" stroke="black" stroke-width="1.5"/>'
        )

    def close(self) -> str:
        self.lines.append("</svg>")
        return "\n".join(self.lines) + "\n"


# ============================================================
# 森林
# ============================================================


@dataclass(frozen=True)
class _Placed:
    layout: FoldLayout
    offset: Fraction
    width: Fraction


def _component_layouts(forest: PlaneForest | TwiceMarkedForest) -> list[_Placed]:
    """已标记的连通树直接折叠；否则每个分支取第一个有根标记"""
    if isinstance(forest, TwiceMarkedForest):
        if forest.forest.is_connected:
            layouts = [fold_layout(forest)]
        else:
            layouts = [fold_layout(next(rooted_markings(c))) for c in forest.forest.component_forests()]
    else:
        layouts = [fold_layout(next(rooted_markings(c))) for c in forest.component_forests()]

    placed, offset = [], Fraction(0)
    for layout in layouts:
        width = max(seg.x for seg in layout.segments)
        placed.append(_Placed(layout, offset, width))
        offset += width + COMPONENT_GAP
    return placed


def forest_to_svg(forest: PlaneForest | TwiceMarkedForest) -> str:
    """森林的折叠区域图：矩形、边、顶点线段与顶点"""
    placed = _component_layouts(forest)
    rects = [(p.offset, r) for p in placed for r in p.layout.rects]
    y_min = min((r.y0 for _, r in rects), default=Fraction(0))
    y_max = max((r.y1 for _, r in rects), default=Fraction(0))
    x_max = placed[-1].offset + placed[-1].width if placed else Fraction(1)
    canvas = _Canvas(x_max, min(y_min, Fraction(0)), max(y_max, Fraction(0)))

    canvas.line("axis", Fraction(0), Fraction(0), x_max, Fraction(0))
    for offset, r in rects:
        fill = "#dce9ed" if r.above else "#f4e5ad"
        canvas.rect("edge-rect", offset + r.x0, offset + r.x1, r.y0, r.y1, fill)

    for p in placed:
        forest_ = p.layout.marked.forest
        points = {
            seg.label: (p.offset + seg.x, (seg.y0 + seg.y1) / 2) for seg in p.layout.segments
        }
        for seg in p.layout.segments:
            canvas.line("segment", p.offset + seg.x, seg.y0, p.offset + seg.x, seg.y1, width=2)
        for edge in sorted(forest_.edges, key=lambda e: e.id):
            (x0, y0), (x1, y1) = points[edge.black], points[edge.white]
            canvas.line("edge", x0, y0, x1, y1)
            canvas.text("weight", (x0 + x1) / 2, (y0 + y1) / 2, str(edge.weight), dy=-4)
        for label, (x, y) in sorted(points.items(), key=lambda item: item[1]):
            canvas.circle(x, y, label.is_black)
            canvas.text("label", x, y, str(label), dy=-8)
    return canvas.close()


def forest_to_dot(forest: PlaneForest | TwiceMarkedForest) -> str:
    """Graphviz 无向图源码；标记点画双圈"""
    marks: Iterable = ()
    if isinstance(forest, TwiceMarkedForest):
        marks, forest = forest.marks, forest.forest
    dot = graphviz.Graph(
        name="forest",
        graph_attr={"layout": "neato", "overlap": "false"},
        node_attr={"shape": "circle", "fontname": "Arial", "fontsize": "10"},
    )
    for label in forest.passport.labels:
        attrs = {"style": "filled", "fillcolor": "black", "fontcolor": "white"} if label.is_black else {}
        if label in marks:
            attrs["peripheries"] = "2"
        dot.node(str(label), label=str(label), **attrs)
    for edge in sorted(forest.edges, key=lambda e: e.id):
        dot.edge(str(edge.black), str(edge.white), label=str(edge.weight))
    return dot.source


# ============================================================
# 区域
# ============================================================


def region_to_svg(region: Region | RegionModel) -> str:
    """直方图区域：各列轮廓加水平矩形分解"""
    model = region if isinstance(region, RegionModel) else RegionModel.from_region(region)
    n = len(model.vertical)
    y_min = min((col.y_min for col in model.vertical), default=Fraction(0))
    y_max = max((col.y_max for col in model.vertical), default=Fraction(0))
    canvas = _Canvas(Fraction(n + 1), y_min, y_max)

    canvas.line("axis", Fraction(0), Fraction(0), Fraction(n + 1), Fraction(0))
    for col in model.vertical:
        if col.y_max > col.y_min:
            canvas.rect("column", Fraction(col.i), Fraction(col.i + 1), col.y_min, col.y_max, "none")
    for rect in model.horizontal:
        fill = "#dce9ed" if rect.side == "above" else "#f4e5ad"
        canvas.rect("horizontal", Fraction(rect.k), Fraction(rect.l), rect.lo, rect.hi, fill)
        canvas.text("weight", Fraction(rect.k + rect.l, 2), (rect.lo + rect.hi) / 2, str(rect.hi - rect.lo), dy=4)
    labels = model.permutation.split(",")
    for i, label in enumerate(labels, start=1):
        canvas.text("label", Fraction(i), y_min, label, dy=14)
    return canvas.close()


def render(document: TreeModel | RegionModel, to: str = "svg") -> str:
    """
    把 JSON 文档渲染成 SVG 或 DOT

    Raises:
        SchemaError: 区域要求 DOT 输出，或格式未知
    """
    if to not in ("svg", "dot"):
        raise SchemaError(f"Unknown render target {to!r}")
    if isinstance(document, RegionModel):
        if to == "dot":
            raise SchemaError("DOT output needs a forest, got a region")
        return region_to_svg(document)
    forest = document.to_marked() if document.marks else document.to_forest()
    return forest_to_svg(forest) if to == "svg" else forest_to_dot(forest)
