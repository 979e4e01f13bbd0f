"""
排列（permutation）

职责：
1. 指标集上的排列及其累积和 H₀..H_N
2. 分类：正 / 非负 / 树 / 正树排列，以及变号点与标记路径
3. 按类别以字典序流式枚举（带规模上限）
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal, get_args

from lwbp.constant import HARD_MAX_N
from lwbp.exception import InvariantViolation, PermutationError, SizeGuardError
from lwbp.passport import FullPassport, IndexLabel, OrderedPartition, parse_label
from lwbp.utils.logging import logger

PermKind = Literal["all", "positive", "nonnegative", "tree", "positive_tree"]
PERM_KINDS: tuple[PermKind, ...] = get_args(PermKind)


@dataclass(frozen=True)
class Permutation:
    """完全护照指标集的一个排列 (s₁, …, s_N)"""

    passport: FullPassport
    order: tuple[IndexLabel, ...]

    def __post_init__(self) -> None:
        order = tuple(self.order)
        if len(order) != self.passport.n or set(order) != set(self.passport.labels):
            raise PermutationError(
                f"({', '.join(map(str, order))}) is not a permutation of ({self.passport})"
            )
        object.__setattr__(self, "order", order)

    @classmethod
    def from_positions(cls, fp: FullPassport, positions: Sequence[int]) -> Permutation:
        return cls(fp, tuple(fp.labels[i] for i in positions))

    @property
    def n(self) -> int:
        return len(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[IndexLabel]:
        return iter(self.order)

    def label_at(self, i: int) -> IndexLabel:
        """第 i 个元素（1 起）"""
        return self.order[i - 1]

    @cached_property
    def positions(self) -> tuple[int, ...]:
        return tuple(self.passport.position(label) for label in self.order)

    @cached_property
    def scaled_heights(self) -> tuple[int, ...]:
        """缩放为整数的累积和，H₀ = 0"""
        heights = [0]
        for i in self.positions:
            heights.append(heights[-1] + self.passport.scaled[i])
        if heights[-1] != 0:
            raise InvariantViolation(f"H_N = {heights[-1]} for {self}")
        return tuple(heights)

    @cached_property
    def heights(self) -> tuple[Fraction, ...]:
        scale = self.passport.scale
        return tuple(Fraction(h, scale) for h in self.scaled_heights)

    def __str__(self) -> str:
        return ",".join(map(str, self.order))


def parse_permutation(fp: FullPassport, text: str) -> Permutation:
    """解析逗号分隔的标号 token，如 `2_2,2_3,-3_2,-3_1,2_1`"""
    tokens = [token.strip() for token in text.split(",")]
    if not all(tokens):
        raise PermutationError(f"Empty token in permutation {text!r}")
    order = tuple(parse_label(token) for token in tokens)
    for label in order:
        if label not in fp:
            raise PermutationError(f"Label {label} is not in passport {fp}")
    return Permutation(fp, order)


def cumulative_sums(permutation: Permutation) -> tuple[Fraction, ...]:
    """H₀..H_N（精确前缀和，H_N = 0）"""
    return permutation.heights


# ============================================================
# 分类
# ============================================================


@dataclass(frozen=True, slots=True)
class PermClass:
    """排列所属的类别；sign_changes 只对树排列给出"""

    positive: bool
    nonnegative: bool
    tree: bool
    sign_changes: tuple[int, ...] | None = None

    @property
    def positive_tree(self) -> bool:
        return self.positive and self.tree

    def matches(self, kind: PermKind) -> bool:
        match kind:
            case "all":
                return True
            case "positive":
                return self.positive
            case "nonnegative":
                return self.nonnegative
            case "tree":
                return self.tree
            case "positive_tree":
                return self.positive_tree
        raise ValueError(f"Unknown permutation kind: {kind}")


def _has_flat_return(heights: Sequence[int]) -> bool:
    """是否存在 k < l 使 H_{k−1} = H_l ≠ 0，且中间各项都不越过 H_{k−1} 回到零那一侧"""
    n = len(heights) - 1
    for k in range(1, n + 1):
        start = heights[k - 1]
        if start == 0:
            continue
        for l in range(k + 1, n + 1):
            value = heights[l - 1]
            if (value < start) if start > 0 else (value > start):
                break
            if heights[l] == start:
                return True
    return False


def is_tree_heights(heights: Sequence[int]) -> bool:
    """树排列判据：内部 H_i 全不为零，且没有正/负两侧的平台回归"""
    n = len(heights) - 1
    if any(heights[i] == 0 for i in range(1, n)):
        return False
    return not _has_flat_return(heights)


def _sign_changes(heights: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i in range(1, len(heights)) if heights[i - 1] * heights[i] < 0)


def classify(permutation: Permutation) -> PermClass:
    h = permutation.scaled_heights
    interior = h[1:-1]
    tree = is_tree_heights(h)
    return PermClass(
        positive=all(x > 0 for x in interior),
        nonnegative=all(x >= 0 for x in interior),
        tree=tree,
        sign_changes=_sign_changes(h) if tree else None,
    )


def sign_changing_points(permutation: Permutation) -> tuple[int, ...]:
    """H_{i−1}·H_i < 0 的位置 i（1 起）

    Raises:
        PermutationError: 不是树排列
    """
    h = permutation.scaled_heights
    if not is_tree_heights(h):
        raise PermutationError(f"{permutation} is not a tree permutation")
    return _sign_changes(h)


def mark_path(permutation: Permutation) -> tuple[IndexLabel, ...]:
    """位置 (1, 变号点…, N) 上的标号，即两个标记点之间的路径"""
    points = sign_changing_points(permutation)
    return tuple(permutation.label_at(i) for i in (1, *points, permutation.n))


def horizontal_pairs(permutation: Permutation) -> tuple[tuple[int, int], ...]:
    """k < l ∈ [N−1]，min{H_k..H_{l−1}} > H_{k−1} = H_l > 0"""
    h = permutation.scaled_heights
    n = permutation.n
    pairs: list[tuple[int, int]] = []
    for k in range(1, n):
        start = h[k - 1]
        if start <= 0:
            continue
        low = None
        for l in range(k + 1, n):
            low = h[l - 1] if low is None else min(low, h[l - 1])
            if low <= start:
                break
            if h[l] == start:
                pairs.append((k, l))
    return tuple(pairs)


def zero_split(permutation: Permutation) -> tuple[Permutation, ...]:
    """
    在内部零点处切开非负排列

    Returns:
        有序的 block 排列；每个都是其子护照上的正排列

    Raises:
        PermutationError: 排列不是非负的
    """
    h = permutation.scaled_heights
    n = permutation.n
    if any(x < 0 for x in h[1:-1]):
        raise PermutationError(f"{permutation} is not nonnegative")
    cuts = [0, *(i for i in range(1, n) if h[i] == 0), n]
    fp = permutation.passport
    blocks: list[Permutation] = []
    for start, end in zip(cuts, cuts[1:]):
        segment = permutation.order[start:end]
        blocks.append(Permutation(fp.sub(fp.mask_of(segment)), segment))
    return tuple(blocks)


def block_partition(permutation: Permutation) -> OrderedPartition:
    """非负排列切分出的有序零和划分"""
    fp = permutation.passport
    return OrderedPartition(fp, tuple(fp.mask_of(block.order) for block in zero_split(permutation)))


# ============================================================
# 枚举
# ============================================================


def _admissible(kind: PermKind):
    match kind:
        case "positive" | "positive_tree":
            return lambda h: h > 0
        case "nonnegative":
            return lambda h: h >= 0
        case "tree":
            return lambda h: h != 0
        case "all":
            return lambda h: True
    raise ValueError(f"Unknown permutation kind: {kind}")


def check_size(fp: FullPassport, max_n: int = HARD_MAX_N, allow_large: bool = False) -> None:
    if fp.n > max_n and not allow_large:
        raise SizeGuardError(
            f"N = {fp.n} exceeds the permutation guard {max_n}; pass the override flag to proceed"
        )


def iterate(
    fp: FullPassport,
    kind: PermKind = "all",
    *,
    max_n: int = HARD_MAX_N,
    allow_large: bool = False,
) -> Iterator[Permutation]:
    """
    按规范标号顺序的字典序流式产出某一类排列

    深度优先构造前缀，内部累积和不满足类别条件时剪枝；
    树条件中的平台回归在叶子处检查。

    Raises:
        SizeGuardError: N 超过上限且没有 allow_large
    """
    check_size(fp, max_n, allow_large)
    admissible = _admissible(kind)
    needs_tree = kind in ("tree", "positive_tree")
    n = fp.n
    weights = fp.scaled
    used = [False] * n
    prefix: list[int] = []
    heights = [0]

    def extend(depth: int) -> Iterator[Permutation]:
        if depth == n:
            if needs_tree and _has_flat_return(heights):
                return
            yield Permutation.from_positions(fp, prefix)
            return
        for i in range(n):
            if used[i]:
                continue
            h = heights[-1] + weights[i]
            if depth < n - 1 and not admissible(h):
                continue
            used[i] = True
            prefix.append(i)
            heights.append(h)
            yield from extend(depth + 1)
            heights.pop()
            prefix.pop()
            used[i] = False

    logger.debug("Streaming {kind} permutations of {fp}", kind=kind, fp=fp)
    yield from extend(0)


def count(
    fp: FullPassport,
    kind: PermKind = "all",
    *,
    max_n: int = HARD_MAX_N,
    allow_large: bool = False,
) -> int:
    return sum(1 for _ in iterate(fp, kind, max_n=max_n, allow_large=allow_large))


def sample(fp: FullPassport, size: int, rng: random.Random) -> Iterator[Permutation]:
    """均匀随机排列（可重复）"""
    for _ in range(size):
        yield Permutation(fp, tuple(rng.sample(fp.labels, fp.n)))

