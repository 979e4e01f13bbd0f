"""
梳理映射（combing）

排列 → 直方图区域 → 水平矩形分解 → 二次标记平面森林 G(P)。

第 i 列是 [i, i+1] × [min(0, H_i), max(0, H_i)]；每个列顶高度 H_j 处的水平线
向两侧延伸，直到碰到不严格包含该高度的列。切出来的格子在相邻列之间合并成
极大的水平矩形，矩形 (k, l) 就是连接 s_k 与 s_l 的边。
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal

from lwbp.exception import InvariantViolation, PermutationError
from lwbp.permutation import Permutation
from lwbp.planetree import Edge, PlaneForest, TwiceMarkedForest
from lwbp.utils.logging import logger

Side = Literal["above", "below"]


@dataclass(frozen=True, slots=True)
class VerticalRect:
    """第 i 列，高度 |H_i|（H_i = 0 时退化为线段）"""

    i: int
    y_min: Fraction
    y_max: Fraction


@dataclass(frozen=True, slots=True)
class HorizontalRect:
    """连接位置 k < l 的水平矩形"""

    k: int
    l: int
    lo: Fraction
    hi: Fraction
    side: Side

    @property
    def weight(self) -> Fraction:
        return self.hi - self.lo

    @property
    def length(self) -> int:
        return self.l - self.k


@dataclass(frozen=True)
class Region:
    permutation: Permutation
    columns: tuple[VerticalRect, ...]

    @cached_property
    def cuts(self) -> tuple[tuple[Fraction, ...], ...]:
        """每一列上的水平切割高度（升序）"""
        heights = self.permutation.heights
        cols = self.columns
        n = len(cols)
        cuts = [{col.y_min, col.y_max} for col in cols]
        for j in range(n):
            y = heights[j + 1]
            if y == 0:
                continue
            for step in (-1, 1):
                c = j + step
                while 0 <= c < n and cols[c].y_min < y < cols[c].y_max:
                    cuts[c].add(y)
                    c += step
        return tuple(tuple(sorted(s)) for s in cuts)

    def cells(self, i: int) -> tuple[tuple[Fraction, Fraction], ...]:
        """第 i 列（1 起）被切出的格子"""
        cuts = self.cuts[i - 1]
        return tuple(zip(cuts, cuts[1:]))


def build_region(permutation: Permutation) -> Region:
    columns = tuple(
        VerticalRect(i, min(Fraction(0), h), max(Fraction(0), h))
        for i, h in enumerate(permutation.heights[1:], start=1)
    )
    return Region(permutation, columns)


def _edge_bounds(h: Sequence[int], k: int, l: int) -> tuple[int, int, Side] | None:
    inner = h[k:l]
    low, high = min(inner), max(inner)
    floor = max(h[k - 1], h[l], 0)
    if low > floor:
        return floor, low, "above"
    ceiling = min(h[k - 1], h[l], 0)
    if high < ceiling:
        return high, ceiling, "below"
    return None


def edge_exists(permutation: Permutation, k: int, l: int) -> tuple[Fraction, Side] | None:
    """
    位置 k, l 之间是否有边

    上方：min{H_k..H_{l−1}} > max{H_{k−1}, H_l, 0}；下方对称。

    Returns:
        (边权, 上/下)，没有边时为 None
    """
    if not 1 <= k < l <= permutation.n:
        raise PermutationError(f"Positions must satisfy 1 ≤ k < l ≤ {permutation.n}, got ({k}, {l})")
    bounds = _edge_bounds(permutation.scaled_heights, k, l)
    if bounds is None:
        return None
    lo, hi, side = bounds
    return Fraction(hi - lo, permutation.passport.scale), side


def _check_monotone(rects: Sequence[HorizontalRect], n: int) -> None:
    """每条竖线两侧的矩形，离 x 轴越远长度严格越短"""
    for i in range(1, n + 1):
        for attached in (
            [r for r in rects if r.k == i],
            [r for r in rects if r.l == i],
        ):
            attached.sort(key=lambda r: r.lo if r.side == "above" else -r.hi)
            lengths = [r.length for r in attached]
            if any(a <= b for a, b in zip(lengths, lengths[1:])):
                raise InvariantViolation(f"Rectangle lengths at vertical line {i} are not monotone")


def _cross_check(region: Region, rects: Sequence[HorizontalRect]) -> None:
    permutation = region.permutation
    h = permutation.scaled_heights
    scale = permutation.passport.scale
    found = {(r.k, r.l): r for r in rects}
    n = permutation.n
    for k in range(1, n):
        for l in range(k + 1, n + 1):
            bounds = _edge_bounds(h, k, l)
            rect = found.get((k, l))
            if bounds is None and rect is None:
                continue
            if bounds is None or rect is None:
                raise InvariantViolation(f"Edge predicate and decomposition disagree at ({k}, {l})")
            lo, hi, side = bounds
            if (Fraction(lo, scale), Fraction(hi, scale), side) != (rect.lo, rect.hi, rect.side):
                raise InvariantViolation(f"Edge predicate and decomposition disagree at ({k}, {l})")


def horizontal_decomposition(region: Region, cross_check: bool = True) -> tuple[HorizontalRect, ...]:
    """
    把区域切成极大水平矩形

    结果按 (k, l) 排序；长度单调性每次都检查，cross_check 时再与
    edge_exists 逐对比对。

    Raises:
        InvariantViolation: 自检失败
    """
    n = len(region.columns)
    rects: list[HorizontalRect] = []
    active: dict[tuple[Fraction, Fraction], int] = {}
    for col in range(1, n + 2):
        cells = set(region.cells(col)) if col <= n else set()
        for cell in [c for c in active if c not in cells]:
            start = active.pop(cell)
            lo, hi = cell
            rects.append(HorizontalRect(start, col, lo, hi, "above" if lo >= 0 else "below"))
        for cell in cells:
            active.setdefault(cell, col)

    rects.sort(key=lambda r: (r.k, r.l))
    _check_monotone(rects, n)
    if cross_check:
        _cross_check(region, rects)
    return tuple(rects)


def check_nesting(rects: Sequence[HorizontalRect]) -> bool:
    """边 (k, l) 存在时，{k+1..l−1} 与外部之间没有边"""
    for outer in rects:
        for rect in rects:
            inside = [outer.k < end < outer.l for end in (rect.k, rect.l)]
            outside = [end < outer.k or end > outer.l for end in (rect.k, rect.l)]
            if (inside[0] and outside[1]) or (inside[1] and outside[0]):
                return False
    return True


def comb(permutation: Permutation, cross_check: bool = True) -> TwiceMarkedForest:
    """
    梳理映射 P ↦ (G(P); s₁, s_N)

    竖线 i 处的逆时针循环序：右侧矩形自下而上，然后左侧矩形自上而下。
    """
    region = build_region(permutation)
    rects = horizontal_decomposition(region, cross_check=cross_check)

    edges: list[Edge] = []
    right: dict[int, list[HorizontalRect]] = {}
    left: dict[int, list[HorizontalRect]] = {}
    ids: dict[tuple[int, int], int] = {}
    for edge_id, rect in enumerate(rects):
        u, v = permutation.label_at(rect.k), permutation.label_at(rect.l)
        if u.is_black != (rect.side == "above") or u.is_black == v.is_black:
            raise InvariantViolation(f"Rectangle ({rect.k}, {rect.l}) lies on the wrong side")
        black, white = (u, v) if u.is_black else (v, u)
        edges.append(Edge(edge_id, black, white, rect.weight))
        ids[rect.k, rect.l] = edge_id
        right.setdefault(rect.k, []).append(rect)
        left.setdefault(rect.l, []).append(rect)

    rotation = {}
    for i, label in enumerate(permutation.order, start=1):
        up = sorted(right.get(i, []), key=lambda r: r.lo)
        down = sorted(left.get(i, []), key=lambda r: r.lo, reverse=True)
        rotation[label] = tuple(ids[r.k, r.l] for r in up + down)

    forest = PlaneForest.from_rotation(permutation.passport, edges, rotation)
    logger.trace("Combed {perm} into {n} edges", perm=permutation, n=len(edges))
    return TwiceMarkedForest(forest, (permutation.label_at(1), permutation.label_at(permutation.n)))


def region_to_dict(region: Region, rects: Sequence[HorizontalRect] | None = None) -> dict:
    """区域的调试转储：竖直列与水平矩形，有理数写成 "a/b" 字符串"""
    if rects is None:
        rects = horizontal_decomposition(region)
    return {
        "passport": str(region.permutation.passport),
        "permutation": str(region.permutation),
        "vertical": [
            {"i": col.i, "y_min": str(col.y_min), "y_max": str(col.y_max)} for col in region.columns
        ],
        "horizontal": [
            {"k": r.k, "l": r.l, "lo": str(r.lo), "hi": str(r.hi), "side": r.side} for r in rects
        ],
    }
