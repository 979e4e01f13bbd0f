"""
JSON 交换格式

每种输出一个 pydantic 模型：树、区域、树目录、计数报告、验证报告、排列分类、计数表。
有理数写成 "a/b" 字符串，大整数写成十进制字符串。
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, Field, PlainSerializer, PlainValidator, ValidationError

from lwbp.combing import Region, region_to_dict
from lwbp.engine import PassportTable, TreeCatalog, VerifyReport
from lwbp.exception import PassportError, SchemaError
from lwbp.formula import CountReport, PartitionTerm
from lwbp.passport import FullPassport, parse_label, parse_passport
from lwbp.permutation import Permutation, classify
from lwbp.planetree import Edge, PlaneForest, TwiceMarkedForest, canonical_form


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Invalid rational {value!r}") from e
    raise ValueError(f"Rational must be an int or an 'a/b' string, got {type(value).__name__}")


def _to_bigint(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("Booleans are not integers here")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.lstrip("-").isdigit():
        return int(value)
    raise ValueError(f"Expected a decimal integer, got {value!r}")


Rational = Annotated[Fraction, PlainValidator(_to_fraction), PlainSerializer(str, return_type=str)]
BigInt = Annotated[int, PlainValidator(_to_bigint), PlainSerializer(str, return_type=str)]


def _passport(text: str) -> FullPassport:
    try:
        return parse_passport(text).expand_full()
    except PassportError as e:
        raise SchemaError(f"Bad passport {text!r}: {e}") from e


# ============================================================
# 树
# ============================================================


class VertexModel(BaseModel):
    label: str
    color: Literal["black", "white"]
    weight: Rational
    """顶点权重 |wt(s)|，即关联边权之和"""


class EdgeModel(BaseModel):
    id: int
    black: str
    white: str
    weight: Rational


class TreeModel(BaseModel):
    """平面森林（可带标记）"""

    kind: Literal["forest"] = "forest"
    passport: str
    """幂记号护照，展开后给出全部顶点"""
    vertices: list[VertexModel]
    edges: list[EdgeModel]
    rotation: dict[str, list[int]]
    """顶点 → 关联边 id 的逆时针循环序"""
    marks: tuple[str, str] | None = None
    canonical: str | None = None

    @classmethod
    def from_forest(cls, forest: PlaneForest | TwiceMarkedForest) -> TreeModel:
        marks = None
        if isinstance(forest, TwiceMarkedForest):
            marks = (str(forest.a), str(forest.b))
            plain = forest.forest
        else:
            plain = forest
        return cls(
            passport=plain.passport.power_notation,
            vertices=[
                VertexModel(label=str(label), color=label.color, weight=abs(label.weight))
                for label in plain.passport.labels
            ],
            edges=[
                EdgeModel(id=e.id, black=str(e.black), white=str(e.white), weight=e.weight)
                for e in sorted(plain.edges, key=lambda e: e.id)
            ],
            rotation={str(label): list(rot) for label, rot in zip(plain.passport.labels, plain.rotation)},
            marks=marks,
            canonical=canonical_form(forest),
        )

    def to_forest(self) -> PlaneForest:
        """
        Raises:
            SchemaError: 护照或标号不合法
            ForestValidationError: 森林本身不合法
        """
        fp = _passport(self.passport)
        try:
            edges = [Edge(e.id, parse_label(e.black), parse_label(e.white), e.weight) for e in self.edges]
            rotation = {parse_label(label): tuple(rot) for label, rot in self.rotation.items()}
        except PassportError as e:
            raise SchemaError(f"Bad label in tree JSON: {e}") from e
        for label in rotation:
            if label not in fp:
                raise SchemaError(f"Rotation names {label}, which is not in {fp}")
        self._check_vertices(fp)
        return PlaneForest.from_rotation(fp, edges, rotation)

    def _check_vertices(self, fp: FullPassport) -> None:
        try:
            vertices = {parse_label(v.label): v for v in self.vertices}
        except PassportError as e:
            raise SchemaError(f"Bad vertex label: {e}") from e
        if len(vertices) != len(self.vertices) or set(vertices) != set(fp.labels):
            raise SchemaError(f"Vertices do not match passport {self.passport}")
        for label, vertex in vertices.items():
            if vertex.color != label.color:
                raise SchemaError(f"Vertex {label} is {label.color}, JSON says {vertex.color}")
            if vertex.weight != abs(label.weight):
                raise SchemaError(
                    f"Vertex {label} has weight {abs(label.weight)}, JSON says {vertex.weight}"
                )

    def to_marked(self, a: str | None = None, b: str | None = None) -> TwiceMarkedForest:
        """用给定标记（否则用 JSON 里的 marks）构造二次标记森林"""
        if a is None or b is None:
            if self.marks is None:
                raise SchemaError("Tree JSON carries no marks and none were given")
            a, b = self.marks
        try:
            marks = (parse_label(a), parse_label(b))
        except PassportError as e:
            raise SchemaError(f"Bad mark: {e}") from e
        return TwiceMarkedForest(self.to_forest(), marks)


# ============================================================
# 区域
# ============================================================


class VerticalModel(BaseModel):
    i: int
    y_min: Rational
    y_max: Rational


class HorizontalModel(BaseModel):
    k: int
    l: int
    lo: Rational
    hi: Rational
    side: Literal["above", "below"]


class RegionModel(BaseModel):
    """梳理区域的调试转储"""

    kind: Literal["region"] = "region"
    passport: str
    permutation: str
    vertical: list[VerticalModel]
    horizontal: list[HorizontalModel]

    @classmethod
    def from_region(cls, region: Region) -> RegionModel:
        return cls.model_validate(region_to_dict(region))


class CombModel(BaseModel):
    """comb 命令的输出：森林加区域"""

    forest: TreeModel
    region: RegionModel


# ============================================================
# 报告
# ============================================================


class CatalogTreeModel(BaseModel):
    canonical: str
    tree: TreeModel
    witnesses: list[str]


class CatalogModel(BaseModel):
    passport: str
    source: str
    count: int
    trees: list[CatalogTreeModel]

    @classmethod
    def from_catalog(cls, catalog: TreeCatalog) -> CatalogModel:
        return cls(
            passport=str(catalog.passport),
            source=catalog.source,
            count=len(catalog),
            trees=[
                CatalogTreeModel(
                    canonical=entry.canonical,
                    tree=TreeModel.from_forest(entry.forest),
                    witnesses=[str(p) for p in entry.witnesses],
                )
                for entry in catalog
            ],
        )


class TermModel(BaseModel):
    blocks: list[list[str]]
    size: int
    x: BigInt
    sign: int
    power: int
    term: BigInt


class CountReportModel(BaseModel):
    passport: str
    counts: dict[str, BigInt]
    terms: list[TermModel] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report: CountReport, terms: list[PartitionTerm] | None = None) -> CountReportModel:
        return cls(
            passport=str(report.passport),
            counts=dict(report.counts),
            terms=[
                TermModel(
                    blocks=[[str(label) for label in block] for block in term.blocks],
                    size=term.size,
                    x=term.x,
                    sign=term.sign,
                    power=term.power,
                    term=term.term,
                )
                for term in terms or []
            ],
        )


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str
    seconds: float
    skipped: bool = False


class VerifyReportModel(BaseModel):
    passport: str
    passed: bool
    checks: list[CheckModel]

    @classmethod
    def from_report(cls, report: VerifyReport) -> VerifyReportModel:
        return cls(
            passport=str(report.passport),
            passed=report.passed,
            checks=[
                CheckModel(
                    name=c.name, passed=c.passed, detail=c.detail, seconds=c.seconds, skipped=c.skipped
                )
                for c in report.checks
            ],
        )


class PermClassModel(BaseModel):
    passport: str
    permutation: str
    heights: list[Rational]
    positive: bool
    nonnegative: bool
    tree: bool
    positive_tree: bool
    sign_changes: list[int] | None = None

    @classmethod
    def from_permutation(cls, permutation: Permutation) -> PermClassModel:
        cls_ = classify(permutation)
        return cls(
            passport=str(permutation.passport),
            permutation=str(permutation),
            heights=list(permutation.heights),
            positive=cls_.positive,
            nonnegative=cls_.nonnegative,
            tree=cls_.tree,
            positive_tree=cls_.positive_tree,
            sign_changes=None if cls_.sign_changes is None else list(cls_.sign_changes),
        )


class TableModel(BaseModel):
    n: int
    labels: list[str]
    lower_triangle: list[list[BigInt]]
    symmetric: bool

    @classmethod
    def from_table(cls, table: PassportTable) -> TableModel:
        return cls(
            n=table.n,
            labels=table.labels,
            lower_triangle=table.lower_triangle(),
            symmetric=table.is_symmetric,
        )


# ============================================================
# 读取
# ============================================================


def load_document(path: Path) -> TreeModel | RegionModel:
    """
    读取树或区域 JSON（按 kind 字段区分；comb 的输出取其中的 forest）

    Raises:
        SchemaError: 文件不是合法 JSON 或不符合模型
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(f"Cannot read {path}: {e}") from e
    if isinstance(data, dict) and "forest" in data and "region" in data:
        data = data["forest"]
    try:
        if isinstance(data, dict) and data.get("kind") == "region":
            return RegionModel.model_validate(data)
        return TreeModel.model_validate(data)
    except ValidationError as e:
        raise SchemaError(f"{path} does not match the tree/region schema: {e}") from e


class FoldModel(BaseModel):
    """fold 命令的输出"""

    passport: str
    marks: tuple[str, str]
    permutation: str
