"""
配置测试

测试内容：
1. 默认配置的写出与读取
2. 无效配置文件
3. 规模上限的校验与命令行覆盖
"""

import json

import pytest

from lwbp.app import prepare, resolve_guard
from lwbp.config import Config, SizeGuard, get_config_file, load_config, save_config
from lwbp.exception import ConfigError
from lwbp.share import get_share_dir


def test_share_dir_override(share_dir):
    """测试 LWBP_SHARE_DIR 覆盖共享目录"""
    assert get_share_dir() == share_dir
    assert share_dir.is_dir()


def test_load_creates_default():
    """测试配置文件不存在时写出默认配置"""
    config = load_config()
    assert config == Config()
    assert get_config_file().exists()
    data = json.loads(get_config_file().read_text(encoding="utf-8"))
    assert data["guard"]["max_n"] == 8


def test_save_and_load(tmp_path):
    path = tmp_path / "custom.json"
    config = Config()
    config.verify.seed = 42
    save_config(config, path)
    assert load_config(path).verify.seed == 42


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


@pytest.mark.parametrize(
    "data",
    [
        {"guard": {"max_n": 20}},
        {"guard": {"max_n": 1}},
        {"verify": {"x_samples": []}},
        {"output": {"default_format": "xml"}},
        {"output": {"workers": 0}},
    ],
)
def test_invalid_values(tmp_path, data):
    """测试 pydantic 校验失败转成 ConfigError"""
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


def test_resolve_guard():
    """测试 --max-n 覆盖穷举上限"""
    config = Config()
    assert resolve_guard(config, None) == config.guard
    assert resolve_guard(config, 5) == SizeGuard(max_n=5)
    assert resolve_guard(config, 14).hard_max_n == 14
    with pytest.raises(ConfigError):
        resolve_guard(config, 1)


def test_prepare(share_dir):
    """测试运行设置与日志文件"""
    run = prepare(config_file=None, debug=True, output_format="json", seed=9)
    assert run.output_format == "json"
    assert run.seed == 9
    assert run.guard.max_n == 8
    assert (share_dir / "logs").is_dir()
