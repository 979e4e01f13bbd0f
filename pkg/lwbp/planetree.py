"""
平面森林（ribbon graph）

职责：
1. 带标号加权双色平面森林：顶点、带权边、每个顶点处的逆时针循环序
2. 二次标记森林与有根树
3. 规范形式与同构判定
4. 折叠映射：二次标记树 → 排列（组合遍历 + 精确坐标布局）
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx

from lwbp.exception import (
    ColorError,
    CycleError,
    DisconnectedError,
    ForestValidationError,
    InvariantViolation,
    MarkError,
    ParallelEdgeError,
    PassportMismatchError,
    RotationError,
    WeightMismatchError,
)
from lwbp.passport import FullPassport, IndexLabel, swap_colors as swap_passport_colors
from lwbp.permutation import Permutation


@dataclass(frozen=True, slots=True)
class Edge:
    """连接一个黑点和一个白点的带权边；id 在森林内唯一"""

    id: int
    black: IndexLabel
    white: IndexLabel
    weight: Fraction

    def other(self, label: IndexLabel) -> IndexLabel:
        if label == self.black:
            return self.white
        if label == self.white:
            return self.black
        raise ForestValidationError(f"{label} is not an end of edge {self.id}")


@dataclass(frozen=True)
class PlaneForest:
    """
    平面森林

    rotation 与 passport.labels 对齐：rotation[i] 是 labels[i] 处关联边 id 的逆时针循环序。
    构造时完整校验；每种失败对应一个独立的异常类型。
    """

    passport: FullPassport
    edges: tuple[Edge, ...]
    rotation: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "rotation", tuple(tuple(r) for r in self.rotation))
        self._validate()

    @classmethod
    def from_rotation(
        cls,
        fp: FullPassport,
        edges: Sequence[Edge],
        rotation: Mapping[IndexLabel, Sequence[int]],
    ) -> PlaneForest:
        return cls(fp, tuple(edges), tuple(tuple(rotation.get(label, ())) for label in fp.labels))

    def _validate(self) -> None:
        fp = self.passport
        ids = Counter(edge.id for edge in self.edges)
        if any(n > 1 for n in ids.values()):
            raise ForestValidationError("Edge ids must be unique")

        for edge in self.edges:
            if edge.black not in fp or edge.white not in fp:
                raise ForestValidationError(f"Edge {edge.id} has an end outside passport {fp}")
            if not edge.black.is_black or edge.white.is_black:
                raise ColorError(f"Edge {edge.id} must join a black vertex to a white vertex")
            if edge.weight <= 0:
                raise WeightMismatchError(f"Edge {edge.id} has non-positive weight {edge.weight}")

        pairs = Counter((edge.black, edge.white) for edge in self.edges)
        parallel = [pair for pair, n in pairs.items() if n > 1]
        if parallel:
            black, white = parallel[0]
            raise ParallelEdgeError(f"Parallel edges between {black} and {white}")

        if len(self.rotation) != fp.n:
            raise RotationError("Rotation must list every vertex")
        for label, rot in zip(fp.labels, self.rotation):
            incident = [edge for edge in self.edges if label in (edge.black, edge.white)]
            if sorted(rot) != sorted(edge.id for edge in incident):
                raise RotationError(f"Rotation at {label} must list its incident edges exactly once")
            total = sum((edge.weight for edge in incident), Fraction(0))
            if total != abs(label.weight):
                raise WeightMismatchError(
                    f"Edges at {label} carry {total}, vertex weight is {abs(label.weight)}"
                )

        if not nx.is_forest(self.graph):
            raise CycleError("Graph contains a closed path")

    # ------------------------------------------------------------
    # 查询
    # ------------------------------------------------------------

    @cached_property
    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.passport.labels)
        for edge in self.edges:
            graph.add_edge(edge.black, edge.white, id=edge.id, weight=edge.weight)
        return graph

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {edge.id: edge for edge in self.edges}

    def rotation_at(self, label: IndexLabel) -> tuple[int, ...]:
        return self.rotation[self.passport.position(label)]

    def edge_between(self, u: IndexLabel, v: IndexLabel) -> Edge | None:
        data = self.graph.get_edge_data(u, v)
        return None if data is None else self.edge_by_id[data["id"]]

    def cyclic_from(self, label: IndexLabel, start: int, anticlockwise: bool = True) -> list[int]:
        """从边 start 开始读 label 处的循环序（逆时针或顺时针）"""
        rot = self.rotation_at(label)
        i = rot.index(start)
        seq = list(rot[i:] + rot[:i])
        return seq if anticlockwise else seq[:1] + seq[:0:-1]

    @property
    def is_connected(self) -> bool:
        return nx.is_connected(self.graph)

    def components(self) -> list[tuple[IndexLabel, ...]]:
        """连通分支，分支内与分支间都按规范顺序排列"""
        order = self.passport.index
        parts = [tuple(sorted(c, key=order.__getitem__)) for c in nx.connected_components(self.graph)]
        return sorted(parts, key=lambda part: order[part[0]])

    def component_forests(self) -> list[PlaneForest]:
        """每个连通分支作为其子护照上的树"""
        forests = []
        for part in self.components():
            sub = self.passport.sub(self.passport.mask_of(part))
            members = set(part)
            edges = [edge for edge in self.edges if edge.black in members]
            forests.append(
                PlaneForest.from_rotation(sub, edges, {label: self.rotation_at(label) for label in part})
            )
        return forests


@dataclass(frozen=True)
class TwiceMarkedForest:
    """森林加有序标记点对 (a, b)，a ≠ b"""

    forest: PlaneForest
    marks: tuple[IndexLabel, IndexLabel]

    def __post_init__(self) -> None:
        a, b = self.marks
        if a == b:
            raise MarkError(f"Marks must differ, got {a} twice")
        for label in (a, b):
            if label not in self.forest.passport:
                raise MarkError(f"Mark {label} is not a vertex")

    @property
    def a(self) -> IndexLabel:
        return self.marks[0]

    @property
    def b(self) -> IndexLabel:
        return self.marks[1]


TwiceMarkedTree = TwiceMarkedForest


@dataclass(frozen=True)
class RootedTree(TwiceMarkedForest):
    """连通，且 (a, b) 是同一条边的黑端和白端"""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.forest.is_connected:
            raise DisconnectedError("A rooted tree must be connected")
        a, b = self.marks
        if not a.is_black or b.is_black or self.forest.edge_between(a, b) is None:
            raise MarkError(f"({a}, {b}) are not the black and white ends of one edge")


# ============================================================
# 规范形式与同构
# ============================================================


def _vertex_word(forest: PlaneForest, label: IndexLabel) -> str:
    pairs = []
    for edge_id in forest.rotation_at(label):
        edge = forest.edge_by_id[edge_id]
        pairs.append((edge.other(label), edge.weight))
    if pairs:
        start = min(range(len(pairs)), key=lambda i: (pairs[i][0].sort_key, pairs[i][1]))
        pairs = pairs[start:] + pairs[:start]
    return f"{label}:" + ",".join(f"{nbr}({weight})" for nbr, weight in pairs)


def canonical_form(forest: PlaneForest | TwiceMarkedForest) -> str:
    """
    规范形式字符串

    每个顶点的循环序旋转到以最小的 (邻点, 边权) 开头，顶点按规范顺序排列；
    二次标记森林在末尾附上标记点。
    """
    marks = None
    if isinstance(forest, TwiceMarkedForest):
        forest, marks = forest.forest, forest.marks
    body = ";".join(_vertex_word(forest, label) for label in forest.passport.labels)
    return body if marks is None else f"{body}|{marks[0]},{marks[1]}"


def is_isomorphic(
    first: PlaneForest | TwiceMarkedForest, second: PlaneForest | TwiceMarkedForest
) -> bool:
    def passport_of(f: PlaneForest | TwiceMarkedForest) -> FullPassport:
        return f.forest.passport if isinstance(f, TwiceMarkedForest) else f.passport

    if passport_of(first) != passport_of(second):
        raise PassportMismatchError("Forests belong to different passports")
    return canonical_form(first) == canonical_form(second)


def path_between(forest: PlaneForest, a: IndexLabel, b: IndexLabel) -> tuple[IndexLabel, ...]:
    """树上从 a 到 b 的唯一简单路径"""
    if a == b:
        raise MarkError(f"Path ends must differ, got {a} twice")
    for label in (a, b):
        if label not in forest.passport:
            raise PassportMismatchError(f"Label {label} is not a vertex")
    if not forest.is_connected:
        raise DisconnectedError("path_between needs a connected tree")
    return tuple(nx.shortest_path(forest.graph, a, b))


# ============================================================
# 折叠映射
# ============================================================


def _spine(marked: TwiceMarkedForest) -> tuple[tuple[IndexLabel, ...], list[int]]:
    forest = marked.forest
    if not forest.is_connected:
        raise DisconnectedError("Folding needs a connected tree")
    path = path_between(forest, *marked.marks)
    edges = [forest.edge_between(u, v).id for u, v in zip(path, path[1:])]
    return path, edges


def _split_groups(
    forest: PlaneForest, path: Sequence[IndexLabel], path_edges: Sequence[int], k: int
) -> tuple[list[int], list[int]]:
    """
    路径顶点 ℓ(k) 处的两组边（黑点逆时针、白点顺时针读）

    Returns:
        (forward, backward)：forward 以 e_k^0 开头，backward 以 e_{k-1}^0 开头
    """
    v = path[k]
    last = len(path) - 1
    start = path_edges[k] if k < last else path_edges[k - 1]
    cyc = forest.cyclic_from(v, start, anticlockwise=v.is_black)
    if k == last:
        return [], cyc
    if k == 0:
        return cyc, []
    j = cyc.index(path_edges[k - 1])
    return cyc[:j], cyc[j:]


def _subtree(forest: PlaneForest, parent: IndexLabel, edge_id: int, above: bool) -> list[IndexLabel]:
    w = forest.edge_by_id[edge_id].other(parent)
    children = forest.cyclic_from(w, edge_id, anticlockwise=above)[1:]
    out: list[IndexLabel] = []
    for child in reversed(children):
        out.extend(_subtree(forest, w, child, above))
    # 近端顶点在子树之前，远端顶点在子树之后
    return [w, *out] if w.is_black == above else [*out, w]


def fold(marked: TwiceMarkedForest) -> Permutation:
    """
    折叠映射 (T; a, b) ↦ P

    沿标记路径逐个顶点输出：先是挂在左侧的子树，再是顶点本身，再是右侧子树；
    子树内部按循环序和所在半平面递归交错。结果与 fold_layout 的 x 坐标排序一致。

    Raises:
        DisconnectedError: 输入不连通
    """
    forest = marked.forest
    path, path_edges = _spine(marked)
    order: list[IndexLabel] = []
    for k, v in enumerate(path):
        forward, backward = _split_groups(forest, path, path_edges, k)
        for edge_id in backward[1:]:
            order.extend(_subtree(forest, v, edge_id, above=not v.is_black))
        order.append(v)
        for edge_id in reversed(forward[1:]):
            order.extend(_subtree(forest, v, edge_id, above=v.is_black))
    return Permutation(forest.passport, tuple(order))


@dataclass(frozen=True, slots=True)
class LayoutRect:
    """一条边对应的水平矩形"""

    edge: int
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    @property
    def above(self) -> bool:
        return self.y0 >= 0


@dataclass(frozen=True, slots=True)
class VertexSegment:
    """一个顶点对应的边界竖直线段"""

    label: IndexLabel
    x: Fraction
    y0: Fraction
    y1: Fraction


@dataclass(frozen=True)
class FoldLayout:
    marked: TwiceMarkedForest
    rects: tuple[LayoutRect, ...]
    segments: tuple[VertexSegment, ...]

    @property
    def order(self) -> tuple[IndexLabel, ...]:
        return tuple(seg.label for seg in sorted(self.segments, key=lambda seg: seg.x))


def _stack(
    forest: PlaneForest,
    edges: Sequence[int],
    anchor: Fraction,
    width: Fraction,
    align_left: bool,
    above: bool,
    level: Fraction,
) -> list[LayoutRect]:
    rects = []
    for i, edge_id in enumerate(edges, start=1):
        w = forest.edge_by_id[edge_id].weight
        span = width / 3**i
        x0, x1 = (anchor, anchor + span) if align_left else (anchor - span, anchor)
        y0, y1 = (level, level + w) if above else (level - w, level)
        level = y1 if above else y0
        rects.append(LayoutRect(edge_id, x0, x1, y0, y1))
    return rects


def _vertex_x(rect: LayoutRect, label: IndexLabel) -> Fraction:
    # 上半平面黑点在左端，下半平面白点在左端
    return rect.x0 if label.is_black == rect.above else rect.x1


def fold_layout(marked: TwiceMarkedForest) -> FoldLayout:
    """
    折叠区域的精确坐标：每条边一个水平矩形（宽度按 3^{-i} 递缩），
    每个顶点一条边界竖直线段；按 x 排序即为 fold 的结果。
    """
    forest = marked.forest
    path, path_edges = _spine(marked)
    rects: dict[int, LayoutRect] = {}
    one = Fraction(1)

    for i, edge_id in enumerate(path_edges):
        w = forest.edge_by_id[edge_id].weight
        y0, y1 = (Fraction(0), w) if path[i].is_black else (-w, Fraction(0))
        rects[edge_id] = LayoutRect(edge_id, Fraction(i), Fraction(i + 1), y0, y1)

    pending: deque[tuple[int, IndexLabel]] = deque()
    for k, v in enumerate(path):
        forward, backward = _split_groups(forest, path, path_edges, k)
        black = v.is_black
        x = Fraction(k)
        if forward:
            base = rects[forward[0]]
            level = base.y1 if black else base.y0
            for rect in _stack(forest, forward[1:], x, one, True, black, level):
                rects[rect.edge] = rect
                pending.append((rect.edge, forest.edge_by_id[rect.edge].other(v)))
        if backward:
            base = rects[backward[0]]
            level = base.y1 if not black else base.y0
            for rect in _stack(forest, backward[1:], x, one, False, not black, level):
                rects[rect.edge] = rect
                pending.append((rect.edge, forest.edge_by_id[rect.edge].other(v)))

    while pending:
        edge_id, w = pending.popleft()
        base = rects[edge_id]
        above = base.above
        children = forest.cyclic_from(w, edge_id, anticlockwise=above)[1:]
        align_left = w.is_black == above
        if not align_left:
            children = children[::-1]
        anchor = base.x0 if align_left else base.x1
        level = base.y1 if above else base.y0
        for rect in _stack(forest, children, anchor, base.x1 - base.x0, align_left, above, level):
            rects[rect.edge] = rect
            pending.append((rect.edge, forest.edge_by_id[rect.edge].other(w)))

    segments = []
    for label in forest.passport.labels:
        incident = [rects[edge_id] for edge_id in forest.rotation_at(label)]
        xs = {_vertex_x(rect, label) for rect in incident}
        if len(xs) != 1:
            raise InvariantViolation(f"Rectangles at {label} do not share a boundary segment")
        segments.append(
            VertexSegment(
                label,
                xs.pop(),
                min(rect.y0 for rect in incident),
                max(rect.y1 for rect in incident),
            )
        )
    ordered = tuple(sorted(rects.values(), key=lambda rect: rect.edge))
    return FoldLayout(marked, ordered, tuple(segments))


# ============================================================
# 标记
# ============================================================


def all_markings(forest: PlaneForest) -> Iterator[TwiceMarkedForest]:
    """N(N−1) 个二次标记"""
    if not forest.is_connected:
        raise DisconnectedError("Markings are enumerated for connected trees only")
    labels = forest.passport.labels
    for a in labels:
        for b in labels:
            if a != b:
                yield TwiceMarkedForest(forest, (a, b))


def rooted_markings(forest: PlaneForest) -> Iterator[RootedTree]:
    """每条边一个有根标记（黑端, 白端）"""
    if not forest.is_connected:
        raise DisconnectedError("Markings are enumerated for connected trees only")
    for edge in sorted(forest.edges, key=lambda e: e.id):
        yield RootedTree(forest, (edge.black, edge.white))


def swap_colors(forest: PlaneForest, mirror: bool = True) -> PlaneForest:
    """
    交换颜色：所有权重取反；mirror 为 True 时同时把每个循环序反向（镜像）

    这是 Tree(Ξ_F) → Tree(−Ξ_F) 的双射。
    """
    fp = swap_passport_colors(forest.passport)
    edges = [
        Edge(edge.id, edge.white.negated(), edge.black.negated(), edge.weight)
        for edge in forest.edges
    ]
    rotation = {
        label.negated(): tuple(reversed(rot)) if mirror else rot
        for label, rot in zip(forest.passport.labels, forest.rotation)
    }
    return PlaneForest.from_rotation(fp, edges, rotation)
