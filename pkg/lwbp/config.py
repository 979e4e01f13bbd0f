"""
配置管理模块

配置以 JSON 形式保存在共享目录下，用 pydantic 做验证：
1. 规模上限（穷举验证上限 / 排列流硬上限）
2. verify 的采样参数（x 样本、随机种子、采样数）
3. 输出参数（默认格式、table 的 worker 数）
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel, Field, ValidationError, model_validator

from lwbp.constant import DEFAULT_CONFIG_FILE, DEFAULT_MAX_N, HARD_MAX_N
from lwbp.exception import ConfigError
from lwbp.share import get_share_dir
from lwbp.utils.logging import logger

OutputFormat = Literal["text", "json", "csv"]


class SizeGuard(BaseModel):
    """规模上限配置"""

    max_n: int = DEFAULT_MAX_N
    """穷举验证的上限（N ≤ max_n 时 verify 走穷举）"""
    hard_max_n: int = HARD_MAX_N
    """排列流的硬上限，超过需要 --allow-large"""

    @model_validator(mode="after")
    def validate_bounds(self) -> Self:
        if not 2 <= self.max_n <= self.hard_max_n:
            raise ValueError(
                f"max_n must lie in [2, hard_max_n={self.hard_max_n}], got {self.max_n}"
            )
        return self


class VerifyOptions(BaseModel):
    """verify 的参数"""

    x_samples: list[int] = Field(default_factory=lambda: list(range(7)))
    """恒等式检查用的整数样本点"""
    seed: int = 0
    """采样检查的随机种子"""
    sample_count: int = Field(default=200, ge=1)
    """超过穷举上限时的采样次数"""
    subset_sum_max_m: int = Field(default=5, ge=1)
    """子集和幂次引理检查的最大 m"""


class OutputOptions(BaseModel):
    """输出参数"""

    default_format: OutputFormat = "text"
    """默认输出格式"""
    workers: int = Field(default=1, ge=1)
    """table 使用的进程数（1 表示在当前进程中计算）"""


class Config(BaseModel):
    """主配置结构"""

    guard: SizeGuard = Field(default_factory=SizeGuard, description="规模上限")
    verify: VerifyOptions = Field(default_factory=VerifyOptions, description="verify 参数")
    output: OutputOptions = Field(default_factory=OutputOptions, description="输出参数")

    @model_validator(mode="after")
    def validate_model(self) -> Self:
        if not self.verify.x_samples:
            raise ValueError("verify.x_samples must not be empty")
        return self


# ============================================================
# 配置文件管理
# ============================================================


def get_config_file() -> Path:
    """获取默认配置文件路径（<share>/config.json）"""
    return get_share_dir() / DEFAULT_CONFIG_FILE


def get_default_config() -> Config:
    return Config()


def load_config(config_file: Path | None = None) -> Config:
    """
    加载配置文件

    如果配置文件不存在，写出一份默认配置。

    Args:
        config_file: 配置文件路径（None 则使用默认路径）

    Returns:
        验证后的 Config 对象

    Raises:
        ConfigError: 如果配置文件无效
    """
    config_file = config_file or get_config_file()
    logger.debug("Loading config from file: {file}", file=config_file)

    if not config_file.exists():
        config = get_default_config()
        logger.debug("No config file found, creating default config: {config}", config=config)
        save_config(config, config_file)
        return config

    try:
        with open(config_file, encoding="utf-8") as f:
            data = json.load(f)
        return Config(**data)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in configuration file: {e}") from e
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration file: {e}") from e


def save_config(config: Config, config_file: Path | None = None) -> None:
    """
    保存配置到文件

    Args:
        config: 配置对象
        config_file: 配置文件路径（None 则使用默认路径）
    """
    config_file = config_file or get_config_file()
    logger.debug("Saving config to file: {file}", file=config_file)
    config_file.parent.mkdir(parents=True, exist_ok=True)
    with open(config_file, "w", encoding="utf-8") as f:
        f.write(config.model_dump_json(indent=2, exclude_none=True))
