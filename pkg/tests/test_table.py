"""
计数表测试

测试内容：
1. n = 4, 5, 6 的下三角
2. 黑白交换对称
3. 多进程与单进程结果一致
4. n = 7（较慢，标记为 slow）
"""

import pytest

from lwbp.engine import table

ROWS = {
    4: [[1], [1, 1], [1, 2, 0], [2, 2, 2, 0], [6, 0, 0, 0, 0]],
    5: [
        [1],
        [1, 1],
        [1, 2, 1],
        [2, 2, 4, 4],
        [2, 4, 2, 4, 4],
        [6, 6, 6, 0, 0, 0],
        [24, 0, 0, 0, 0, 0, 0],
    ],
    6: [
        [1],
        [1, 1],
        [1, 2, 1],
        [2, 2, 4, 4],
        [1, 2, 2, 6, 0],
        [2, 4, 4, 8, 2, 7],
        [6, 6, 12, 12, 12, 12, 0],
        [2, 6, 0, 12, 6, 6, 12, 0],
        [6, 12, 8, 12, 8, 12, 0, 12, 0],
        [24, 24, 24, 0, 24, 0, 0, 0, 0, 0],
        [120] + [0] * 10,
    ],
}

ROWS_7 = [
    [1],
    [1, 1],
    [1, 2, 1],
    [2, 2, 4, 4],
    [1, 2, 2, 6, 1],
    [2, 4, 4, 8, 4, 11],
    [6, 6, 12, 12, 18, 24, 36],
    [2, 4, 6, 12, 2, 10, 24, 4],
    [2, 6, 2, 16, 4, 8, 36, 12, 4],
    [6, 12, 14, 24, 10, 24, 36, 24, 24, 36],
    [24, 24, 48, 48, 48, 48, 0, 48, 48, 0, 0],
    [6, 18, 6, 36, 12, 24, 36, 24, 12, 36, 0, 36],
    [24, 48, 36, 48, 36, 48, 0, 48, 48, 0, 0, 0, 0],
    [120, 120, 120, 0, 120] + [0] * 9,
    [720] + [0] * 14,
]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_lower_triangle(n):
    """测试各行与已知表一致"""
    result = table(n)
    assert result.lower_triangle() == ROWS[n]
    assert result.is_symmetric


def test_table_lookup():
    """测试按划分取值"""
    result = table(4)
    assert result.labels == ["4", "3 1", "2^2", "2 1^2", "1^4"]
    assert result.value((2, 1, 1), (2, 2)) == 2
    assert result.value((1, 1, 1, 1), (4,)) == 6
    assert result.value((4,), (1, 1, 1, 1)) == 6
    assert result.value((2, 2), (2, 2)) == 0


def test_table_small():
    assert table(2).lower_triangle() == [[1], [1, 0]]
    with pytest.raises(ValueError):
        table(1)


def test_table_workers():
    """测试进程池与当前进程结果一致"""
    assert table(5, workers=2).values == table(5).values


def test_table_without_symmetry_check():
    """测试只算下三角再镜像"""
    assert table(5, check_symmetry=False).values == table(5).values


@pytest.mark.slow
def test_lower_triangle_7():
    """测试 n = 7 的完整表"""
    result = table(7)
    assert result.lower_triangle() == ROWS_7
    assert result.value((4, 2, 1), (4, 2, 1)) == 11
    assert result.value((1,) * 7, (7,)) == 720
