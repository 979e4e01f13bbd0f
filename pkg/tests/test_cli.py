"""
CLI 测试

测试内容：
1. --version / --help
2. count / enumerate / classify 的文本与 JSON 输出
3. comb → fold → render 的文件流水线
4. verify 与 table
5. 错误输入的退出码
"""

import json

import pytest
from typer.testing import CliRunner

from lwbp import __version__
from lwbp.cli import cli

TWO_TREES = "3 1_1 1_2 -4 -1"

runner = CliRunner()


def invoke(*args):
    return runner.invoke(cli, list(args))


# ============================================================
# 基本
# ============================================================


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


def test_help_lists_commands():
    """测试帮助中列出所有子命令"""
    result = invoke("-h")
    assert result.exit_code == 0
    for name in ("count", "enumerate", "comb", "fold", "classify", "verify", "table", "render"):
        assert name in result.output


# ============================================================
# 计数与枚举
# ============================================================


def test_count_text():
    """测试最后一行是树的个数"""
    result = invoke("count", TWO_TREES)
    assert result.exit_code == 0, result.output
    assert result.output.strip().splitlines()[-1] == f"|Tree({TWO_TREES})| = 2"


def test_count_json():
    result = invoke("count", TWO_TREES, "--format", "json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["counts"]["trees"] == "2"
    assert data["counts"]["pos_perms"] == "20"
    assert len(data["terms"]) == 3


def test_count_power_notation():
    result = invoke("count", "2^3 -3^2", "--no-terms")
    assert result.exit_code == 0, result.output
    assert result.output.strip().endswith("= 6")


def test_enumerate_json():
    """测试枚举输出两棵树及其见证排列"""
    result = invoke("enumerate", TWO_TREES, "-f", "json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["count"] == 2
    assert all(len(tree["witnesses"]) == 4 for tree in data["trees"])


def test_enumerate_brute_force():
    result = invoke("enumerate", TWO_TREES, "--brute-force", "-f", "json")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["source"] == "tree"


def test_enumerate_size_guard():
    """测试规模上限与 --allow-large"""
    result = invoke("enumerate", TWO_TREES, "--max-n", "4")
    assert result.exit_code == 1
    result = invoke("enumerate", TWO_TREES, "--max-n", "4", "--allow-large")
    assert result.exit_code == 0, result.output


def test_classify():
    result = invoke("classify", "2^3 -3^2", "2_2,2_3,-3_2,-3_1,2_1", "-f", "json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["heights"] == ["0", "2", "4", "1", "-2", "0"]
    assert data["tree"] is True
    assert data["sign_changes"] == [4]


def test_classify_negative_first_label():
    """测试以 `-` 开头的参数按位置参数处理"""
    result = invoke("classify", "1 -1", "-1,1")
    assert result.exit_code == 0, result.output
    assert "tree: True" in result.output


# ============================================================
# 文件流水线
# ============================================================


def test_comb_fold_render(tmp_path):
    """测试 comb 写出 JSON，fold 折回原排列，render 输出 SVG"""
    perm = "-3_2,2_1,3_1,2_2,-3_1,2_3,-3_3"
    comb_file = tmp_path / "comb.json"
    result = invoke("comb", "3_1 2^3 -3^3", "-f", "json", "-o", str(comb_file), "--", perm)
    assert result.exit_code == 0, result.output
    data = json.loads(comb_file.read_text(encoding="utf-8"))
    assert data["forest"]["marks"] == ["-3_2", "-3_3"]

    result = invoke("fold", str(comb_file), "--", "-3_2", "-3_3")
    assert result.exit_code == 0, result.output
    assert result.output.strip() == perm

    result = invoke("fold", str(comb_file), "3_1", "-3_3", "-f", "json")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["marks"] == ["3_1", "-3_3"]

    result = invoke("render", str(comb_file), "--to", "svg")
    assert result.exit_code == 0, result.output
    assert "<svg" in result.output

    result = invoke("render", str(comb_file), "--to", "dot")
    assert result.exit_code == 0, result.output
    assert "graph forest" in result.output


def test_render_region(tmp_path):
    """测试区域只能输出 SVG"""
    comb_file = tmp_path / "comb.json"
    invoke("comb", "2^3 -3^2", "2_2,2_3,-3_2,-3_1,2_1", "-f", "json", "-o", str(comb_file))
    region_file = tmp_path / "region.json"
    region = json.loads(comb_file.read_text(encoding="utf-8"))["region"]
    region_file.write_text(json.dumps(region), encoding="utf-8")

    result = invoke("render", str(region_file), "--kind", "region")
    assert result.exit_code == 0, result.output
    assert 'class="horizontal"' in result.output
    assert invoke("render", str(region_file), "--to", "dot").exit_code == 1
    assert invoke("render", str(region_file), "--kind", "forest").exit_code == 1


# ============================================================
# 验证与计数表
# ============================================================


def test_verify_passes():
    result = invoke("verify", TWO_TREES)
    assert result.exit_code == 0, result.output
    assert result.output.strip().splitlines()[-1] == "PASS"


def test_verify_sampled():
    """测试超过上限时的采样验证"""
    assert invoke("verify", TWO_TREES, "--max-n", "4").exit_code == 1
    result = invoke("verify", TWO_TREES, "--max-n", "4", "--allow-large", "--seed", "3", "-f", "json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["passed"] is True
    assert sum(check["skipped"] for check in data["checks"]) == 3


def test_table_csv():
    """测试 CSV：表头加每个划分一行"""
    result = invoke("table", "5", "--format", "csv")
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    assert len(lines) == 8
    assert lines[0] == ",5,4 1,3 2,3 1^2,2^2 1,2 1^3,1^5"
    assert lines[-1] == "1^5,24,0,0,0,0,0,0"


@pytest.mark.slow
def test_table_7_csv():
    result = invoke("table", "7", "--format", "csv", "--workers", "2")
    assert result.exit_code == 0, result.output
    assert len(result.output.strip().splitlines()) == 16


# ============================================================
# 错误输入
# ============================================================


@pytest.mark.parametrize(
    "args",
    [
        ("count", "1 1"),
        ("count", "1 -1 x"),
        ("classify", TWO_TREES, "3,1_1,1_2,-4"),
        ("count", TWO_TREES, "--format", "xml"),
        ("fold", "missing.json", "3", "-4"),
    ],
)
def test_errors_exit_nonzero(args):
    result = invoke(*args)
    assert result.exit_code != 0


def test_error_message_on_stderr():
    """测试错误信息以 Error: 开头"""
    result = invoke("count", "1 1")
    assert result.exit_code == 1
    assert "Error:" in result.output
