"""lwbp - 带标号加权双色平面树的精确枚举引擎."""

__version__ = "0.1.0"
