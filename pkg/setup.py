"""
lwbp - 安装配置文件

pyproject.toml 是主配置；这个文件保留给只认 setup.py 的旧工具链。
运行 `pip install -e .` 后会在 bin/ 下生成 `lwbp` 命令。
"""

from pathlib import Path

from setuptools import setup

readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

# 读取版本号
version_file = Path(__file__).parent / "lwbp" / "__init__.py"
version = "0.1.0"
if version_file.exists():
    for line in version_file.read_text(encoding="utf-8").splitlines():
        if line.startswith("__version__"):
            version = line.split("=")[1].strip().strip('"').strip("'")
            break

setup(
    name="lwbp-trees",
    version=version,
    description="Enumerate, count and verify labeled weighted bicolored plane trees",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=["lwbp", "lwbp.ui", "lwbp.utils"],
    python_requires=">=3.10",
    install_requires=[
        "typer>=0.9.0",
        "pydantic>=2.0.0",
        "loguru>=0.7.0",
        "rich>=13.0.0",
        "networkx>=3.0",
        "graphviz>=0.20",
    ],
    extras_require={
        "dev": ["pytest>=7.0.0", "black>=23.0.0", "ruff>=0.1.0"],
    },
    entry_points={
        "console_scripts": [
            "lwbp=lwbp.cli:cli",
        ],
    },
)
