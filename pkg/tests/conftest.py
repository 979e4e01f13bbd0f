"""
公共 fixture：几个小护照与排列
"""

import pytest

from lwbp.constant import SHARE_DIR_ENV
from lwbp.passport import parse_full_passport
from lwbp.permutation import parse_permutation


@pytest.fixture(autouse=True)
def share_dir(tmp_path, monkeypatch):
    """配置和日志写到临时目录"""
    path = tmp_path / "share"
    monkeypatch.setenv(SHARE_DIR_ENV, str(path))
    return path


@pytest.fixture
def two_tree_fp():
    """(3 1₁ 1₂ 4̄ 1̄)"""
    return parse_full_passport("3 1_1 1_2 -4 -1")


@pytest.fixture
def sign_change_perm():
    return parse_permutation(parse_full_passport("2^3 -3^2"), "2_2,2_3,-3_2,-3_1,2_1")


@pytest.fixture
def two_change_perm():
    return parse_permutation(
        parse_full_passport("3_1 2^3 -3^3"), "-3_2,2_1,3_1,2_2,-3_1,2_3,-3_3"
    )


@pytest.fixture
def split_perm():
    return parse_permutation(
        parse_full_passport("1^4 -1^2 -2_1"), "1_1,1_2,1_3,-1_1,-1_2,1_4,-2_1"
    )


@pytest.fixture
def p1(two_tree_fp):
    return parse_permutation(two_tree_fp, "3,1_1,1_2,-4,-1")
