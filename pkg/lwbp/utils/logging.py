"""
日志工具

所有模块都从这里导入 logger；默认处理器在导入时移除，
由 lwbp.app.enable_logging 决定日志写到哪里。
"""

from __future__ import annotations

from loguru import logger

# 移除默认的日志处理器
logger.remove()

__all__ = ["logger"]
