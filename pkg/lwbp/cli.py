"""
CLI - 命令行入口

子命令：count / enumerate / comb / fold / classify / verify / table / render。
退出码：0 成功，1 输入或校验错误，2 verify 有检查未通过。
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, NoReturn, get_args

import typer

from lwbp.constant import VERSION
from lwbp.app import RunContext, prepare
from lwbp.combing import build_region, comb
from lwbp.config import OutputFormat
from lwbp.engine import brute_force_trees, enumerate_trees, table as build_table, verify as run_verify
from lwbp.exception import LWBPError, SchemaError
from lwbp.formula import count_report, partition_terms
from lwbp.passport import parse_full_passport
from lwbp.permutation import parse_permutation
from lwbp.planetree import fold as fold_tree
from lwbp.render import render as render_document
from lwbp.schema import (
    CatalogModel,
    CombModel,
    CountReportModel,
    FoldModel,
    PermClassModel,
    RegionModel,
    TableModel,
    TreeModel,
    VerifyReportModel,
    load_document,
)
from lwbp.ui import Printer, make_printer
from lwbp.utils.logging import logger

cli = typer.Typer(
    add_completion=False,
    context_settings={"help_option_names": ["-h", "--help"]},
    help="Enumerate and count labeled weighted bicolored plane trees.",
)

# 标号可能以 `-` 开头（白点），不能被当成选项
LABEL_ARGS = {"ignore_unknown_options": True}


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(f"lwbp, version {VERSION}")
        raise typer.Exit()


@cli.callback()
def main(
    version: Annotated[
        bool,
        typer.Option(
            "--version",
            "-V",
            help="显示版本并退出",
            callback=_version_callback,
            is_eager=True,
        ),
    ] = False,
) -> None:
    """LWBP-tree 枚举与计数工具"""


# ============================================================
# 公共选项
# ============================================================

PassportArg = Annotated[str, typer.Argument(help='护照，如 "3 1_1 1_2 -4 -1" 或 "2^3 -3^2"')]
FormatOpt = Annotated[
    str | None, typer.Option("--format", "-f", help="输出格式：text / json / csv。默认：配置文件")
]
OutOpt = Annotated[
    Path | None, typer.Option("--out", "-o", dir_okay=False, help="写入文件而不是标准输出")
]
MaxNOpt = Annotated[int | None, typer.Option("--max-n", help="穷举规模上限。默认：配置文件")]
SeedOpt = Annotated[int | None, typer.Option("--seed", help="采样检查的随机种子。默认：配置文件")]
DebugOpt = Annotated[bool, typer.Option("--debug", help="记录调试日志。默认：否")]
ConfigOpt = Annotated[
    Path | None,
    typer.Option("--config", exists=True, dir_okay=False, readable=True, help="配置文件路径"),
]
AllowLargeOpt = Annotated[
    bool, typer.Option("--allow-large", help="允许超过规模上限（最多到硬上限）")
]


def _fail(message: str) -> NoReturn:
    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(1)


def _format(value: str | None) -> OutputFormat | None:
    if value is not None and value not in get_args(OutputFormat):
        _fail(f"Unknown output format {value!r}; choose one of text, json, csv")
    return value  # type: ignore[return-value]


@contextmanager
def _reporting_errors() -> Iterator[None]:
    """把 LWBPError 转成标准错误上的一行消息和退出码 1"""
    try:
        yield
    except LWBPError as e:
        logger.error("{kind}: {error}", kind=type(e).__name__, error=e)
        _fail(str(e))


@contextmanager
def _printer(run: RunContext, out: Path | None) -> Iterator[Printer]:
    if out is None:
        printer = make_printer(run.output_format)
        yield printer
        printer.flush()
        return
    with out.open("w", encoding="utf-8") as f:
        printer = make_printer(run.output_format, f)
        yield printer
        printer.flush()


def _prepare(
    config_file: Path | None,
    debug: bool,
    output_format: str | None = None,
    max_n: int | None = None,
    seed: int | None = None,
) -> RunContext:
    return prepare(
        config_file=config_file,
        debug=debug,
        max_n=max_n,
        output_format=_format(output_format),
        seed=seed,
    )


# ============================================================
# 子命令
# ============================================================


@cli.command(context_settings=LABEL_ARGS)
def count(
    passport: PassportArg,
    terms: Annotated[bool, typer.Option("--terms/--no-terms", help="打印逐项展开。默认：是")] = True,
    output_format: FormatOpt = None,
    out: OutOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """按公式计数：树的个数以及逐项的划分求和"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format)
        fp = parse_full_passport(passport)
        model = CountReportModel.from_report(count_report(fp), partition_terms(fp) if terms else None)
        with _printer(run, out) as printer:
            printer.feed(model)


@cli.command("enumerate", context_settings=LABEL_ARGS)
def enumerate_(
    passport: PassportArg,
    brute_force: Annotated[
        bool, typer.Option("--brute-force", help="从全部树排列分组（对照用）。默认：否")
    ] = False,
    allow_large: AllowLargeOpt = False,
    output_format: FormatOpt = None,
    out: OutOpt = None,
    max_n: MaxNOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """枚举 Tree(Ξ)，附带每棵树的见证排列"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format, max_n)
        fp = parse_full_passport(passport)
        limit = run.guard.hard_max_n if allow_large else run.guard.max_n
        enumerate_fn = brute_force_trees if brute_force else enumerate_trees
        catalog = enumerate_fn(fp, max_n=limit, allow_large=allow_large)
        with _printer(run, out) as printer:
            printer.feed(CatalogModel.from_catalog(catalog))


@cli.command("comb", context_settings=LABEL_ARGS)
def comb_(
    passport: PassportArg,
    permutation: Annotated[str, typer.Argument(help='逗号分隔的排列，如 "2_2,2_3,-3_2,-3_1,2_1"')],
    output_format: FormatOpt = None,
    out: OutOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """梳理一个排列：输出森林 JSON 与区域转储"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format)
        perm = parse_permutation(parse_full_passport(passport), permutation)
        region = build_region(perm)
        model = CombModel(forest=TreeModel.from_forest(comb(perm)), region=RegionModel.from_region(region))
        with _printer(run, out) as printer:
            printer.feed(model)


@cli.command("fold", context_settings=LABEL_ARGS)
def fold_(
    tree_file: Annotated[
        Path, typer.Argument(exists=True, dir_okay=False, readable=True, help="树 JSON 文件")
    ],
    a: Annotated[str, typer.Argument(help="第一个标记点")],
    b: Annotated[str, typer.Argument(help="第二个标记点")],
    output_format: FormatOpt = None,
    out: OutOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """折叠二次标记树，打印得到的排列"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format)
        document = load_document(tree_file)
        if not isinstance(document, TreeModel):
            raise SchemaError(f"{tree_file} holds a region, fold needs a tree")
        marked = document.to_marked(a, b)
        permutation = fold_tree(marked)
        with _printer(run, out) as printer:
            if run.output_format == "text":
                printer.feed(str(permutation))
            else:
                printer.feed(
                    FoldModel(
                        passport=str(permutation.passport),
                        marks=(str(marked.a), str(marked.b)),
                        permutation=str(permutation),
                    )
                )


@cli.command(context_settings=LABEL_ARGS)
def classify(
    passport: PassportArg,
    permutation: Annotated[str, typer.Argument(help="逗号分隔的排列")],
    output_format: FormatOpt = None,
    out: OutOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """排列的类别、累积和 H 与变号点"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format)
        perm = parse_permutation(parse_full_passport(passport), permutation)
        with _printer(run, out) as printer:
            printer.feed(PermClassModel.from_permutation(perm))


@cli.command(context_settings=LABEL_ARGS)
def verify(
    passport: PassportArg,
    allow_large: AllowLargeOpt = False,
    output_format: FormatOpt = None,
    out: OutOpt = None,
    max_n: MaxNOpt = None,
    seed: SeedOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """端到端验证；有检查失败时退出码为 2"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format, max_n, seed)
        options = run.config.verify.model_copy(update={"seed": run.seed})
        report = run_verify(parse_full_passport(passport), options, run.guard, allow_large)
        with _printer(run, out) as printer:
            printer.feed(VerifyReportModel.from_report(report))
    if not report.passed:
        raise typer.Exit(2)


@cli.command()
def table(
    n: Annotated[int, typer.Argument(min=2, help="总权重")],
    workers: Annotated[int | None, typer.Option("--workers", min=1, help="进程数。默认：配置文件")] = None,
    output_format: FormatOpt = None,
    out: OutOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """总权重 n 的树个数表（下三角）"""
    with _reporting_errors():
        run = _prepare(config_file, debug, output_format)
        result = build_table(n, workers=workers or run.config.output.workers)
        with _printer(run, out) as printer:
            printer.feed(TableModel.from_table(result))


@cli.command()
def render(
    input_file: Annotated[
        Path, typer.Argument(exists=True, dir_okay=False, readable=True, help="森林或区域 JSON")
    ],
    kind: Annotated[str, typer.Option("--kind", help="auto / forest / region")] = "auto",
    to: Annotated[str, typer.Option("--to", help="svg / dot")] = "svg",
    out: OutOpt = None,
    debug: DebugOpt = False,
    config_file: ConfigOpt = None,
) -> None:
    """把森林 / 区域 JSON 渲染成 SVG 或 DOT"""
    with _reporting_errors():
        if kind not in ("auto", "forest", "region"):
            _fail(f"Unknown kind {kind!r}; choose one of auto, forest, region")
        run = _prepare(config_file, debug, "text")
        document = load_document(input_file)
        actual = "region" if isinstance(document, RegionModel) else "forest"
        if kind != "auto" and kind != actual:
            raise SchemaError(f"{input_file} holds a {actual}, not a {kind}")
        with _printer(run, out) as printer:
            printer.feed(render_document(document, to))


if __name__ == "__main__":
    cli()
