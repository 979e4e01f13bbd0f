"""
异常定义

所有自定义异常都继承 LWBPError，CLI 层统一捕获后以退出码 1 报告。
"""

from __future__ import annotations


class LWBPError(Exception):
    """lwbp 异常基类"""

    pass


# ============================================================
# 护照
# ============================================================


class PassportError(LWBPError):
    """护照相关错误"""

    pass


class PassportParseError(PassportError):
    """护照文本不符合幂记号语法（坏 token）"""

    pass


class PassportValidationError(PassportError):
    """护照语义错误：零权重、权重和不为零、缺少正/负权重、标号重复等"""

    pass


class PassportMismatchError(PassportError):
    """两个对象属于不同的护照"""

    pass


# ============================================================
# 排列
# ============================================================


class PermutationError(LWBPError):
    """排列不是指标集上的双射，或者把非树排列交给只接受树排列的操作"""

    pass


# ============================================================
# 森林校验（每种失败一个独立类型）
# ============================================================


class ForestValidationError(LWBPError):
    """平面森林结构错误"""

    pass


class ParallelEdgeError(ForestValidationError):
    """同一对顶点之间出现多条边"""

    pass


class CycleError(ForestValidationError):
    """图中存在闭路"""

    pass


class ColorError(ForestValidationError):
    """边没有连接一个黑点和一个白点"""

    pass


class WeightMismatchError(ForestValidationError):
    """顶点权重与关联边权重之和不一致，或者边权不为正"""

    pass


class RotationError(ForestValidationError):
    """某个顶点的循环序没有恰好列出它的关联边各一次"""

    pass


class DisconnectedError(ForestValidationError):
    """操作要求连通的树，但输入不连通"""

    pass


class MarkError(ForestValidationError):
    """标记点不合法（不存在、重合，或者有根树的标记不是一条边的黑白两端）"""

    pass


# ============================================================
# 计算与自检
# ============================================================


class SizeGuardError(LWBPError):
    """规模超过上限且没有 override"""

    pass


class FormulaDomainError(LWBPError):
    """计数函数的参数越界"""

    pass


class DivisibilityError(LWBPError):
    """应当整除的精确除法失败，说明实现有 bug"""

    pass


class InvariantViolation(LWBPError):
    """内部自检失败"""

    pass


# ============================================================
# 配置与序列化
# ============================================================


class ConfigError(LWBPError):
    """配置文件格式错误、验证失败等"""

    pass


class SchemaError(LWBPError):
    """树 / 区域 JSON 不符合 schema"""

    pass
