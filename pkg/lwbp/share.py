"""
共享目录管理

配置文件和日志都放在共享目录下。
"""

from __future__ import annotations

import os
from pathlib import Path

from lwbp.constant import SHARE_DIR_ENV


def get_share_dir() -> Path:
    """获取共享目录路径

    Returns:
        Path: 共享目录路径（默认 ~/.lwbp，可用 LWBP_SHARE_DIR 覆盖）
    """
    override = os.getenv(SHARE_DIR_ENV)
    share_dir = Path(override) if override else Path.home() / ".lwbp"
    share_dir.mkdir(parents=True, exist_ok=True)
    return share_dir
