"""
枚举引擎测试

测试内容：
1. enumerate_trees / brute_force_trees
2. verify 的穷举与采样模式
3. 护照生成
4. 小规模全护照验收（较慢的标记为 slow）
"""

import random
from math import factorial

import pytest

from lwbp.combing import comb
from lwbp.config import SizeGuard, VerifyOptions
from lwbp.engine import (
    brute_force_trees,
    enumerate_trees,
    format_partition,
    integer_partitions,
    passport_from_partitions,
    passports_of_weight,
    random_nondecomposable_passport,
    verify,
)
from lwbp.exception import SizeGuardError
from lwbp.formula import (
    count_nonneg,
    count_pos_tree,
    kochetkov_count,
    np_plus,
    ordered_block_count,
)
from lwbp.passport import is_decomposable, parse_full_passport, perturb
from lwbp.permutation import count, iterate
from lwbp.planetree import all_markings, canonical_form, fold

T1 = "3:-4(2),-1(1);1_1:-4(1);1_2:-4(1);-4:3(2),1_2(1),1_1(1);-1:3(1)"
T2 = "3:-4(2),-1(1);1_1:-4(1);1_2:-4(1);-4:3(2),1_1(1),1_2(1);-1:3(1)"

T1_ROOTED_FOLDS = {
    "3,1_1,1_2,-4,-1",
    "3,-1,1_1,1_2,-4",
    "1_2,3,-1,1_1,-4",
    "1_1,1_2,3,-1,-4",
}

FAST = VerifyOptions(x_samples=[0, 1, 2], sample_count=20)


# ============================================================
# 枚举
# ============================================================


def test_enumerate_two_trees(two_tree_fp):
    """测试 (3 1₁ 1₂ 4̄ 1̄) 的两棵树，每棵 4 个见证排列"""
    catalog = enumerate_trees(two_tree_fp)
    assert len(catalog) == 2
    assert catalog.canonical_forms == {T1, T2}
    assert all(len(entry.witnesses) == 4 for entry in catalog)
    entry = next(e for e in catalog if e.canonical == T1)
    assert {str(w) for w in entry.witnesses} == T1_ROOTED_FOLDS


def test_brute_force_two_trees(two_tree_fp):
    """测试全部树排列分组：每棵树 N(N−1) = 20 个"""
    catalog = brute_force_trees(two_tree_fp)
    assert catalog.canonical_forms == enumerate_trees(two_tree_fp).canonical_forms
    assert all(len(entry.witnesses) == 20 for entry in catalog)
    assert catalog.source == "tree"


@pytest.mark.parametrize(
    "text, trees",
    [("1^3 -3", 2), ("2^3 -3^2", 6), ("1 -1", 1), ("1^2 -1^2", 0), ("2 -1^2", 1)],
)
def test_enumerate_counts(text, trees):
    """测试枚举个数与公式一致"""
    fp = parse_full_passport(text)
    catalog = enumerate_trees(fp)
    assert len(catalog) == trees == kochetkov_count(fp)


def test_enumerate_size_guard(two_tree_fp):
    with pytest.raises(SizeGuardError):
        enumerate_trees(two_tree_fp, max_n=4)


# ============================================================
# 验证
# ============================================================


def test_verify_exhaustive(two_tree_fp):
    """测试穷举验证全部通过"""
    report = verify(two_tree_fp, FAST)
    assert report.passed, report.failures()
    assert [c.name for c in report.checks] == [
        "formula_vs_enumeration",
        "bijection_roundtrip",
        "forest_invariants",
        "identity_suite",
        "perturbation_checks",
    ]
    assert not any(c.skipped for c in report.checks)


def test_verify_nondecomposable():
    """测试不可分解护照上的扰动检查退化为恒等"""
    report = verify(parse_full_passport("2^3 -3^2"), FAST)
    assert report.passed, report.failures()


def test_verify_size_guard(two_tree_fp):
    """测试超过上限需要 allow_large，此时跳过穷举检查"""
    guard = SizeGuard(max_n=4)
    with pytest.raises(SizeGuardError):
        verify(two_tree_fp, FAST, guard)
    report = verify(two_tree_fp, FAST, guard, allow_large=True)
    assert report.passed
    skipped = {c.name for c in report.checks if c.skipped}
    assert skipped == {"formula_vs_enumeration", "forest_invariants", "perturbation_checks"}


# ============================================================
# 护照生成
# ============================================================


def test_integer_partitions():
    """测试降序字典序"""
    assert list(integer_partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert len(list(integer_partitions(7))) == 15


def test_format_partition():
    assert format_partition((2, 1, 1)) == "2 1^2"
    assert format_partition((3, 2, 1)) == "3 2 1"


def test_passport_from_partitions():
    fp = passport_from_partitions((2, 1, 1), (2, 2))
    assert str(fp) == "2 1_1 1_2 -2_1 -2_2"


def test_passports_of_weight():
    assert len(list(passports_of_weight(4))) == 25


def test_random_nondecomposable_passport():
    """测试拒绝采样给出不可分解护照，树的个数是 (N−2)!"""
    rng = random.Random(3)
    for n in (3, 4, 5):
        fp = random_nondecomposable_passport(rng, n)
        assert fp.n == n
        assert not is_decomposable(fp)
        assert len(enumerate_trees(fp)) == kochetkov_count(fp) == [1, 2, 6][n - 3]



@pytest.mark.slow
def test_nondecomposable_law():
    """测试 25 个随机不可分解护照（N = 3..8）：(N−2)! 棵树，N! 个树排列，(N−1)! 个正排列"""
    rng = random.Random(2024)
    for i in range(25):
        n = 3 + i % 6
        fp = random_nondecomposable_passport(rng, n)
        assert kochetkov_count(fp) == factorial(n - 2)
        assert count(fp, "tree") == factorial(n)
        assert count(fp, "positive") == np_plus(fp) == factorial(n - 1)


# ============================================================
# 验收
# ============================================================


def _small_passports(max_weight):
    for n in range(2, max_weight + 1):
        for _, _, fp in passports_of_weight(n):
            yield fp


@pytest.mark.parametrize("fp", list(_small_passports(3)), ids=str)
def test_acceptance_small(fp):
    """测试总权重 ≤ 3 的所有护照：枚举、暴力分组与公式一致"""
    catalog = enumerate_trees(fp)
    assert len(catalog) == kochetkov_count(fp)
    assert brute_force_trees(fp).canonical_forms == catalog.canonical_forms


@pytest.mark.slow
@pytest.mark.parametrize("fp", list(_small_passports(4)), ids=str)
def test_acceptance_verify(fp):
    """测试总权重 ≤ 4 的所有护照通过完整验证"""
    report = verify(fp, FAST)
    assert report.passed, report.failures()


@pytest.mark.slow
@pytest.mark.parametrize("fp", [fp for fp in _small_passports(5) if fp.n <= 8], ids=str)
def test_acceptance_weight_five(fp):
    """测试总权重 ≤ 5（N ≤ 8）：双向往返、公式与暴力计数一致、扰动检查"""
    for permutation in iterate(fp, "tree"):
        assert fold(comb(permutation)).order == permutation.order

    catalog = brute_force_trees(fp)
    assert catalog.canonical_forms == enumerate_trees(fp).canonical_forms
    assert len(catalog) == kochetkov_count(fp)
    for entry in catalog:
        for marked in all_markings(entry.forest):
            assert canonical_form(comb(fold(marked))) == canonical_form(marked)

    assert np_plus(fp) == count(fp, "positive")
    assert count_nonneg(fp) == count(fp, "nonnegative")
    assert count_pos_tree(fp) == count(fp, "positive_tree")

    target = factorial(fp.n - 1)
    perturbed = perturb(fp)
    assert not is_decomposable(perturbed.perturbed)
    assert count(perturbed.perturbed, "positive") == target
    if not perturbed.trivial:
        assert perturbed.satisfies_subset_bounds()
        assert ordered_block_count(fp, lambda sub: count(sub, "positive")) == target
