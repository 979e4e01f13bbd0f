"""
输出打印器

命令把结果（pydantic 模型或纯文本）交给 Printer；--format 决定用哪一个：
text 用 rich 表格，json 输出模型的 JSON，csv 输出逗号分隔的行。
"""

from __future__ import annotations

import csv
from typing import IO, Protocol

from pydantic import BaseModel
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from lwbp.config import OutputFormat
from lwbp.schema import (
    CatalogModel,
    CombModel,
    CountReportModel,
    PermClassModel,
    TableModel,
    VerifyReportModel,
)

Result = BaseModel | str


class Printer(Protocol):
    """打印器协议"""

    def feed(self, result: Result) -> None: ...
    def flush(self) -> None: ...


def _terms_table(model: CountReportModel) -> Table:
    table = Table(title=f"Partition terms of {model.passport}")
    for column in ("partition", "|p|", "X(p)", "sign", "term"):
        table.add_column(column, justify="left" if column == "partition" else "right")
    for term in model.terms:
        blocks = "".join("{" + ",".join(block) + "}" for block in term.blocks)
        table.add_row(blocks, str(term.size), str(term.x), "+" if term.sign > 0 else "-", str(term.term))
    return table


class TextPrinter(Printer):
    """文本打印器 - 使用 rich 显示结果"""

    def __init__(self, file: IO[str] | None = None) -> None:
        self._console = Console(file=file, highlight=False, soft_wrap=True)

    def feed(self, result: Result) -> None:
        console = self._console
        match result:
            case str():
                console.out(result, end="" if result.endswith("\n") else "\n")
            case CountReportModel() as model:
                if model.terms:
                    console.print(_terms_table(model))
                for name, value in model.counts.items():
                    if name != "trees":
                        console.print(f"{name}: {value}")
                console.print(f"|Tree({model.passport})| = {model.counts['trees']}")
            case CatalogModel() as model:
                console.print(f"{model.count} tree(s) for {model.passport}")
                for i, entry in enumerate(model.trees, start=1):
                    console.print(f"[bold]T{i}[/bold] {escape(entry.canonical)}")
                    for witness in entry.witnesses:
                        console.print(f"    {witness}")
            case CombModel() as model:
                forest = model.forest
                table = Table(title=f"G({model.region.permutation})")
                for column in ("edge", "black", "white", "weight"):
                    table.add_column(column)
                for edge in forest.edges:
                    table.add_row(str(edge.id), edge.black, edge.white, str(edge.weight))
                console.print(table)
                console.print(f"marks: {forest.marks[0]}, {forest.marks[1]}" if forest.marks else "")
                console.out(f"canonical: {forest.canonical}")
            case PermClassModel() as model:
                console.print(f"H = ({', '.join(str(h) for h in model.heights)})")
                for name in ("positive", "nonnegative", "tree", "positive_tree"):
                    console.print(f"{name}: {getattr(model, name)}")
                if model.sign_changes is not None:
                    console.print(f"sign changes: {', '.join(map(str, model.sign_changes)) or '-'}")
            case VerifyReportModel() as model:
                table = Table(title=f"verify {model.passport}")
                for column in ("check", "status", "seconds", "detail"):
                    table.add_column(column)
                for check in model.checks:
                    status = "skip" if check.skipped else ("[green]pass[/green]" if check.passed else "[red]FAIL[/red]")
                    table.add_row(check.name, status, f"{check.seconds:.3f}", escape(check.detail))
                console.print(table)
                console.print("PASS" if model.passed else "FAIL")
            case TableModel() as model:
                table = Table(title=f"n = {model.n}")
                table.add_column("")
                for label in model.labels:
                    table.add_column(label, justify="right")
                for label, row in zip(model.labels, model.lower_triangle):
                    table.add_row(label, *map(str, row))
                console.print(table)
            case BaseModel():
                console.print_json(result.model_dump_json())

    def flush(self) -> None:
        self._console.file.flush()


class JsonPrinter(Printer):
    """JSON 打印器 - 每个结果一个 JSON 文档"""

    def __init__(self, file: IO[str] | None = None) -> None:
        self._console = Console(file=file, highlight=False, soft_wrap=True)

    def feed(self, result: Result) -> None:
        if isinstance(result, str):
            self._console.out(result, end="" if result.endswith("\n") else "\n")
            return
        self._console.out(result.model_dump_json(indent=2))

    def flush(self) -> None:
        self._console.file.flush()


class CsvPrinter(Printer):
    """CSV 打印器 - 计数表、逐项展开和验证报告按行输出，其余为 key,value"""

    def __init__(self, file: IO[str] | None = None) -> None:
        self._console = Console(file=file, highlight=False, soft_wrap=True)
        self._rows: list[list[str]] = []

    def feed(self, result: Result) -> None:
        rows = self._rows
        match result:
            case str():
                rows.append([result.rstrip("\n")])
            case TableModel() as model:
                rows.append(["", *model.labels])
                for label, row in zip(model.labels, model.lower_triangle):
                    rows.append([label, *map(str, row)])
            case CountReportModel() as model:
                rows.append(["partition", "size", "x", "sign", "term"])
                for term in model.terms:
                    blocks = "".join("{" + " ".join(block) + "}" for block in term.blocks)
                    rows.append([blocks, str(term.size), str(term.x), str(term.sign), str(term.term)])
                rows.extend([name, str(value)] for name, value in model.counts.items())
            case VerifyReportModel() as model:
                rows.append(["check", "passed", "skipped", "seconds", "detail"])
                for check in model.checks:
                    rows.append(
                        [check.name, str(check.passed), str(check.skipped), f"{check.seconds:.3f}", check.detail]
                    )
            case BaseModel():
                for key, value in result.model_dump(mode="json").items():
                    if not isinstance(value, (dict, list)):
                        rows.append([key, str(value)])

    def flush(self) -> None:
        if not self._rows:
            return
        writer = csv.writer(self._console.file, lineterminator="\n")
        writer.writerows(self._rows)
        self._rows.clear()
        self._console.file.flush()


def make_printer(output_format: OutputFormat, file: IO[str] | None = None) -> Printer:
    match output_format:
        case "json":
            return JsonPrinter(file)
        case "csv":
            return CsvPrinter(file)
        case _:
            return TextPrinter(file)
