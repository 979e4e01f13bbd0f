"""
常量定义

包含版本信息、默认文件名以及各类规模上限。
"""

from __future__ import annotations

import importlib.metadata

try:
    VERSION = importlib.metadata.version("lwbp-trees")
except importlib.metadata.PackageNotFoundError:
    VERSION = "0.1.0"  # 开发模式降级

# 默认配置文件名（位于共享目录下）
DEFAULT_CONFIG_FILE = "config.json"

# 共享目录环境变量
SHARE_DIR_ENV = "LWBP_SHARE_DIR"

# 穷举验证默认上限：8! = 40320 个排列
DEFAULT_MAX_N = 8

# 排列流的硬上限：12! ≈ 4.8e8，超过需要显式 override
HARD_MAX_N = 12

# 扰动护照 / 子集检查只在这个规模内穷举
SUBSET_CHECK_MAX_N = 12
