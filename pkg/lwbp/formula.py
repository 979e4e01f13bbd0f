"""
计数公式

所有划分求和都从 `iter_partition_masks` 流式得到；同一护照只遍历一次，
得到 (|𝔭|, X(𝔭)) 的分布后各个公式都在分布上求值。
整数全部是任意精度，除法一律精确并带整除检查。
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache, lru_cache
from itertools import combinations
from math import factorial, prod

from lwbp.exception import DivisibilityError, FormulaDomainError, InvariantViolation
from lwbp.passport import (
    FullPassport,
    IndexLabel,
    expand_mask,
    is_decomposable,
    iter_partition_masks,
    x_of_masks,
)
from lwbp.utils.logging import logger

Number = int | Fraction
PassportCounter = Callable[[FullPassport], int]


# ============================================================
# 基本组合数
# ============================================================


@cache
def stirling2(n: int, k: int) -> int:
    """
    第二类 Stirling 数 S(n, k)（三角递推）

    Raises:
        FormulaDomainError: n < 0 或 k 不在 [0, n]
    """
    if n < 0 or not 0 <= k <= n:
        raise FormulaDomainError(f"S({n}, {k}) needs 0 ≤ k ≤ n")
    if n == k:
        return 1
    if k == 0:
        return 0
    if k == 1:
        return 1
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def _check_order(n: int) -> None:
    if n < 0:
        raise FormulaDomainError(f"Factorial power order must be nonnegative, got {n}")


def falling_factorial(x: Number, n: int) -> Number:
    """(x)_n = x(x−1)…(x−n+1)"""
    _check_order(n)
    return prod((x - i for i in range(n)), start=1)


def rising_factorial(x: Number, n: int) -> Number:
    """x^{(n)} = x(x+1)…(x+n−1)"""
    _check_order(n)
    return prod((x + i for i in range(n)), start=1)


def _exact_div(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise DivisibilityError(f"{what}: {numerator} is not divisible by {denominator}")
    return quotient


# ============================================================
# 划分分布
# ============================================================


@lru_cache(maxsize=512)
def partition_profile(fp: FullPassport) -> Counter[tuple[int, int]]:
    """(|𝔭|, X(𝔭)) → 划分个数"""
    profile: Counter[tuple[int, int]] = Counter()
    for masks in iter_partition_masks(fp):
        profile[len(masks), x_of_masks(masks)] += 1
    logger.debug(
        "Partition profile of {fp}: {total} partitions",
        fp=fp,
        total=sum(profile.values()),
    )
    return profile


def _signed_sum(fp: FullPassport, base: int) -> int:
    """Σ (−1)^{|𝔭|−1} base^{|𝔭|−1} X(𝔭)"""
    return sum(
        (-base) ** (length - 1) * x * n for (length, x), n in partition_profile(fp).items()
    )


def np_plus(fp: FullPassport) -> int:
    """正排列个数 NP₊ = Σ (−1)^{|𝔭|−1} X(𝔭)"""
    if not is_decomposable(fp):
        return factorial(fp.n - 1)
    return _signed_sum(fp, 1)


def count_nonneg(fp: FullPassport) -> int:
    """非负排列个数 Σ X(𝔭)"""
    return sum(x * n for (_, x), n in partition_profile(fp).items())


def count_pos_tree(fp: FullPassport) -> int:
    """正树排列个数 Σ (−1)^{|𝔭|−1}(N−1)^{|𝔭|−1} X(𝔭)"""
    if not is_decomposable(fp):
        return factorial(fp.n - 1)
    return _signed_sum(fp, fp.n - 1)


def kochetkov_count(fp: FullPassport) -> int:
    """
    |Tree(Ξ_F)| = count_pos_tree / (N−1)

    不可分解时直接是 (N−2)!。

    Raises:
        DivisibilityError: 整除失败（实现错误）
    """
    if not is_decomposable(fp):
        return factorial(fp.n - 2)
    trees = _exact_div(count_pos_tree(fp), fp.n - 1, f"tree count of {fp}")
    if trees < 0:
        raise InvariantViolation(f"Negative tree count {trees} for {fp}")
    return trees


def count_zero_edge_trees(fp: FullPassport) -> int:
    """允许零权边时的树个数 Σ (N−1)^{|𝔭|−2} X(𝔭)"""
    n = fp.n - 1
    total = sum(n ** (length - 1) * x * k for (length, x), k in partition_profile(fp).items())
    return _exact_div(total, n, f"zero-edge tree count of {fp}")


# ============================================================
# 逐项展开
# ============================================================


@dataclass(frozen=True, slots=True)
class PartitionTerm:
    """公式里一个划分的贡献：sign · (N−1)^power · X"""

    blocks: tuple[tuple[IndexLabel, ...], ...]
    size: int
    x: int
    sign: int
    power: int
    term: int


def partition_terms(fp: FullPassport) -> list[PartitionTerm]:
    """count_pos_tree 的逐项展开；各项之和除以 N−1 即树的个数"""
    base = fp.n - 1
    terms = []
    for masks in iter_partition_masks(fp):
        size = len(masks)
        x = x_of_masks(masks)
        sign = -1 if size % 2 == 0 else 1
        terms.append(
            PartitionTerm(
                blocks=tuple(fp.labels_of(mask) for mask in masks),
                size=size,
                x=x,
                sign=sign,
                power=size - 1,
                term=sign * base ** (size - 1) * x,
            )
        )
    return terms


@dataclass(frozen=True)
class CountReport:
    passport: FullPassport
    counts: dict[str, int] = field(default_factory=dict)

    def __getitem__(self, name: str) -> int:
        return self.counts[name]


def count_report(fp: FullPassport) -> CountReport:
    """
    一个护照的全部计数

    Raises:
        InvariantViolation: trees·(N−1) 与正树排列数不一致
    """
    n = fp.n
    trees = kochetkov_count(fp)
    pos_tree = count_pos_tree(fp)
    if trees * (n - 1) != pos_tree:
        raise InvariantViolation(f"trees·(N−1) = {trees * (n - 1)} but |PT+| = {pos_tree}")
    counts = {
        "trees": trees,
        "pos_tree_perms": pos_tree,
        "pos_perms": np_plus(fp),
        "nonneg_perms": count_nonneg(fp),
        "tree_perms": trees * n * (n - 1),
        "partitions": sum(partition_profile(fp).values()),
        "zero_edge_trees": count_zero_edge_trees(fp),
    }
    return CountReport(fp, counts)


# ============================================================
# 递推
# ============================================================


def _sub_partitions(fp: FullPassport, mask: int) -> Iterable[tuple[int, ...]]:
    """mask 诱导子护照的零和划分，block 用 fp 的位置表示"""
    for local in iter_partition_masks(fp.sub(mask)):
        yield tuple(expand_mask(block, mask) for block in local)


def recursive_pos_count(fp: FullPassport) -> int:
    """
    按正树排列递推 |𝐏₊|

    |𝐏₊(Ξ)| = |𝐏T₊(Ξ)| + Σ_{(Ξ₀, Ξ₊)} |𝐏T₊(Ξ₀)| Σ_{𝔭₊ ∈ 𝔓(Ξ₊)}
    (|Ξ₀|+|𝔭₊|−2)!/(|Ξ₀|−2)! ∏ |𝐏₊(Ξ_i)|，
    Ξ₀ 取遍零和非空真子集，Ξ₊ 是其补集。
    """
    sums = fp.subset_sums

    @cache
    def pos_tree(mask: int) -> int:
        return count_pos_tree(fp.sub(mask))

    @cache
    def pos(mask: int) -> int:
        size = mask.bit_count()
        if not is_decomposable(fp.sub(mask)):
            return factorial(size - 1)
        total = pos_tree(mask)
        sub = (mask - 1) & mask
        while sub:
            if sums[sub] == 0:
                head = pos_tree(sub)
                if head:
                    s0 = sub.bit_count()
                    inner = sum(
                        factorial(s0 + len(blocks) - 2)
                        // factorial(s0 - 2)
                        * prod(pos(block) for block in blocks)
                        for blocks in _sub_partitions(fp, mask ^ sub)
                    )
                    total += head * inner
            sub = (sub - 1) & mask
        return total

    return pos(fp.full_mask)


# ============================================================
# 恒等式
# ============================================================


def subset_sum_power(xs: Sequence[Number], y: Number, k: int) -> Number:
    """Σ_{A ⊆ [m]} (−1)^{|A|} (y + Σ_A x)^k；k < m 时为零"""
    total: Number = 0
    for r in range(len(xs) + 1):
        for chosen in combinations(xs, r):
            total += (-1) ** r * (y + sum(chosen)) ** k
    return total


def ordered_block_count(fp: FullPassport, counter: PassportCounter) -> int:
    """Σ_𝔭 (|𝔭|−1)! ∏ counter(Ξ_i)"""
    return sum(
        factorial(len(masks) - 1) * prod(counter(fp.sub(mask)) for mask in masks)
        for masks in iter_partition_masks(fp)
    )


@dataclass(frozen=True, slots=True)
class IdentityCheck:
    name: str
    sample: str
    lhs: Number
    rhs: Number

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class IdentityReport:
    passport: FullPassport
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.ok for check in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [check for check in self.checks if not check.ok]


def _rising_identity(fp: FullPassport, x: int) -> IdentityCheck:
    block_counts: dict[int, int] = {}

    def pos(mask: int) -> int:
        if mask not in block_counts:
            block_counts[mask] = np_plus(fp.sub(mask))
        return block_counts[mask]

    lhs = rhs = 0
    for masks in iter_partition_masks(fp):
        lhs += rising_factorial(x, len(masks)) * prod(pos(mask) for mask in masks)
        rhs += x ** len(masks) * x_of_masks(masks)
    return IdentityCheck("rising_factorial_sum", f"x={x}", lhs, rhs)


def _stirling_checks(n_max: int, x: int) -> list[IdentityCheck]:
    checks = []
    for n in range(n_max + 1):
        falling = sum(stirling2(n, k) * falling_factorial(x, k) for k in range(n + 1))
        rising = sum(stirling2(n, k) * (-1) ** k * rising_factorial(x, k) for k in range(n + 1))
        checks.append(IdentityCheck("stirling_falling", f"n={n},x={x}", falling, x**n))
        checks.append(IdentityCheck("stirling_rising", f"n={n},x={x}", rising, (-x) ** n))
    return checks


def identity_suite(
    fp: FullPassport,
    x_samples: Iterable[int],
    pos_counter: PassportCounter | None = None,
    subset_sum_max_m: int = 5,
) -> IdentityReport:
    """
    在给定样本点上精确检验各恒等式，失败只记录不抛出

    Args:
        fp: 完全护照
        x_samples: 整数样本点
        pos_counter: 可选的 |𝐏₊| 独立计数（如暴力枚举），用于有序划分恒等式
        subset_sum_max_m: 子集和引理使用的最多权重个数
    """
    samples = list(x_samples)
    checks: list[IdentityCheck] = []
    n = fp.n

    for x in samples:
        checks.append(_rising_identity(fp, x))
        checks.extend(_stirling_checks(n, x))

    target = factorial(n - 1)
    checks.append(IdentityCheck("ordered_block_count", "np_plus", ordered_block_count(fp, np_plus), target))
    if pos_counter is not None:
        checks.append(
            IdentityCheck("ordered_block_count", "brute_force", ordered_block_count(fp, pos_counter), target)
        )
    checks.append(IdentityCheck("recursive_pos_count", "np_plus", recursive_pos_count(fp), np_plus(fp)))

    xs = fp.scaled[: min(n, subset_sum_max_m)]
    for y in samples:
        for k in range(len(xs)):
            checks.append(
                IdentityCheck("subset_sum_power", f"m={len(xs)},k={k},y={y}", subset_sum_power(xs, y, k), 0)
            )

    report = IdentityReport(fp, tuple(checks))
    if not report.passed:
        logger.warning(
            "{n} identity checks failed for {fp}", n=len(report.failures()), fp=fp
        )
    return report
