"""
计数公式测试

测试内容：
1. Stirling 数与阶乘幂
2. NP₊、非负排列数、正树排列数、树的个数
3. 零权边树的个数
4. 逐项展开与计数报告
5. 递推与恒等式
"""

import random
from math import factorial, prod

import pytest

from lwbp.exception import FormulaDomainError
from lwbp.formula import (
    count_nonneg,
    count_pos_tree,
    count_report,
    count_zero_edge_trees,
    falling_factorial,
    identity_suite,
    kochetkov_count,
    np_plus,
    ordered_block_count,
    partition_terms,
    recursive_pos_count,
    rising_factorial,
    stirling2,
    subset_sum_power,
)
from lwbp.passport import parse_full_passport
from lwbp.permutation import count


@pytest.fixture
def matching():
    """(1₁1₂1̄₁1̄₂)"""
    return parse_full_passport("1^2 -1^2")


@pytest.fixture
def nondecomposable():
    """(2₁2₂2₃3̄₁3̄₂)"""
    return parse_full_passport("2^3 -3^2")


# ============================================================
# 基本组合数
# ============================================================


def test_stirling2():
    """测试 S(n, k) 的小值与边界"""
    assert stirling2(3, 2) == 3
    assert stirling2(5, 3) == 25
    assert stirling2(0, 0) == 1
    assert stirling2(4, 0) == 0


@pytest.mark.parametrize("n, k", [(3, 5), (-1, 0), (2, -1)])
def test_stirling2_domain(n, k):
    with pytest.raises(FormulaDomainError):
        stirling2(n, k)


@pytest.mark.parametrize("x", range(-3, 8))
@pytest.mark.parametrize("n", range(9))
def test_stirling_inversion(n, x):
    """测试 Σ_k S(n,k)(x)_k = xⁿ 与 Σ_k S(n,k)(−1)^k x^(k) = (−x)ⁿ"""
    assert sum(stirling2(n, k) * falling_factorial(x, k) for k in range(n + 1)) == x**n
    rising = sum(stirling2(n, k) * (-1) ** k * rising_factorial(x, k) for k in range(n + 1))
    assert rising == (-x) ** n


def test_factorial_powers():
    assert falling_factorial(5, 3) == 60
    assert rising_factorial(5, 3) == 210
    assert rising_factorial(-2, 3) == 0
    with pytest.raises(FormulaDomainError):
        falling_factorial(3, -1)


@pytest.mark.parametrize("m", range(1, 6))
def test_subset_sum_power_random(m):
    """测试随机整数上 k < m 时交错和为零，k = m 时为 (−1)^m m! ∏x"""
    rng = random.Random(m)
    for _ in range(20):
        xs = [rng.randint(-20, 20) for _ in range(m)]
        y = rng.randint(-20, 20)
        for k in range(m):
            assert subset_sum_power(xs, y, k) == 0
        assert subset_sum_power(xs, y, m) == (-1) ** m * factorial(m) * prod(xs)


def test_subset_sum_power():
    """测试 k < m 时子集和幂次的交错和为零"""
    assert subset_sum_power((2, 3, 4), -1, 2) == 0
    assert subset_sum_power((2, 3, 4), 5, 0) == 0
    assert subset_sum_power((2, 3), 1, 2) != 0


# ============================================================
# 计数
# ============================================================


def test_counts_two_trees(two_tree_fp):
    """测试 (3 1₁ 1₂ 4̄ 1̄)：20 个正排列，28 个非负排列，8 个正树排列，2 棵树"""
    assert np_plus(two_tree_fp) == 20
    assert count_nonneg(two_tree_fp) == 28
    assert count_pos_tree(two_tree_fp) == 8
    assert kochetkov_count(two_tree_fp) == 2


def test_counts_nondecomposable(nondecomposable):
    """测试不可分解护照：(N−1)! 个正排列，(N−2)! 棵树"""
    assert np_plus(nondecomposable) == 24
    assert count_pos_tree(nondecomposable) == 24
    assert kochetkov_count(nondecomposable) == 6


def test_counts_matching(matching):
    """测试 (1₁1₂1̄₁1̄₂)：没有树"""
    assert np_plus(matching) == 4
    assert count_nonneg(matching) == 8
    assert count_pos_tree(matching) == 0
    assert kochetkov_count(matching) == 0


def test_counts_match_enumeration(two_tree_fp, matching, sign_change_perm):
    """测试公式与暴力计数一致"""
    for fp in (two_tree_fp, matching, sign_change_perm.passport):
        assert np_plus(fp) == count(fp, "positive")
        assert count_nonneg(fp) == count(fp, "nonnegative")
        assert count_pos_tree(fp) == count(fp, "positive_tree")


def test_zero_edge_trees(two_tree_fp, matching):
    """测试允许零权边时的树个数"""
    assert count_zero_edge_trees(matching) == 4
    assert count_zero_edge_trees(two_tree_fp) == 10


def test_rational_weights_scale_free():
    """测试计数只依赖零和结构，与权重缩放无关"""
    assert kochetkov_count(parse_full_passport("3/2 1/2^2 -2 -1/2")) == 2


# ============================================================
# 展开与报告
# ============================================================


def test_partition_terms(two_tree_fp):
    """测试逐项之和除以 N−1 即树的个数"""
    terms = partition_terms(two_tree_fp)
    assert len(terms) == 3
    assert sorted(t.term for t in terms) == [-8, -8, 24]
    assert sum(t.term for t in terms) // (two_tree_fp.n - 1) == 2
    assert {t.power for t in terms} == {0, 1}


def test_count_report(two_tree_fp):
    """测试报告中的各项计数"""
    report = count_report(two_tree_fp)
    assert report["trees"] == 2
    assert report["pos_tree_perms"] == 8
    assert report["pos_perms"] == 20
    assert report["nonneg_perms"] == 28
    assert report["tree_perms"] == 40
    assert report["partitions"] == 3
    assert report["zero_edge_trees"] == 10


# ============================================================
# 递推与恒等式
# ============================================================


@pytest.mark.parametrize("text", ["3 1_1 1_2 -4 -1", "1^2 -1^2", "2^3 -3^2", "1^3 -1^3", "2 1^2 -2^2"])
def test_recursive_pos_count(text):
    """测试按正树排列递推的 |𝐏₊| 与 NP₊ 一致"""
    fp = parse_full_passport(text)
    assert recursive_pos_count(fp) == np_plus(fp)


def test_ordered_block_count(two_tree_fp, matching):
    """测试 Σ (|𝔭|−1)! ∏ NP₊(Ξᵢ) = (N−1)!"""
    assert ordered_block_count(two_tree_fp, np_plus) == 24
    assert ordered_block_count(matching, np_plus) == 6


def test_identity_suite(two_tree_fp):
    """测试恒等式全部通过"""
    report = identity_suite(two_tree_fp, range(4), pos_counter=lambda fp: count(fp, "positive"))
    assert report.passed
    assert not report.failures()
    names = {check.name for check in report.checks}
    assert names == {
        "rising_factorial_sum",
        "stirling_falling",
        "stirling_rising",
        "ordered_block_count",
        "recursive_pos_count",
        "subset_sum_power",
    }
