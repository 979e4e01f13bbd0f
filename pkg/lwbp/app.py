"""
应用层：日志、配置与规模上限的解析

CLI 的每个子命令先调用 `prepare`，拿到本次运行生效的配置。
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from lwbp.config import Config, OutputFormat, SizeGuard, load_config
from lwbp.exception import ConfigError
from lwbp.share import get_share_dir
from lwbp.utils.logging import logger


def enable_logging(debug: bool = False) -> None:
    """启用日志系统

    Args:
        debug: 是否启用调试模式（TRACE 级别）
    """
    # 只写日志文件，不输出到 stderr
    logger.add(
        get_share_dir() / "logs" / "lwbp.log",
        level="TRACE" if debug else "INFO",
        rotation="06:00",
        retention="10 days",
    )


def resolve_guard(config: Config, max_n: int | None) -> SizeGuard:
    """命令行的 --max-n 覆盖配置文件里的穷举上限

    Raises:
        ConfigError: 覆盖后的上限不合法
    """
    if max_n is None:
        return config.guard
    try:
        return SizeGuard(max_n=max_n, hard_max_n=max(config.guard.hard_max_n, max_n))
    except ValidationError as e:
        raise ConfigError(f"Invalid --max-n {max_n}: {e.errors()[0]['msg']}") from e


@dataclass(frozen=True, slots=True)
class RunContext:
    """一次命令运行生效的设置"""

    config: Config
    guard: SizeGuard
    output_format: OutputFormat
    seed: int


def prepare(
    *,
    config_file: Path | None,
    debug: bool,
    max_n: int | None = None,
    output_format: OutputFormat | None = None,
    seed: int | None = None,
) -> RunContext:
    enable_logging(debug)
    config = load_config(config_file)
    logger.debug("Loaded config: {config}", config=config)
    return RunContext(
        config=config,
        guard=resolve_guard(config, max_n),
        output_format=output_format or config.output.default_format,
        seed=config.verify.seed if seed is None else seed,
    )
