"""
护照（passport）

职责：
1. 解析幂记号文本（`w[_k][^m]`）并校验护照
2. 展开为完全护照：每个标号重数为 1，固定 标号 ↔ 位置 的对应
3. 枚举零和划分（block 用位掩码表示），计算 X(𝔭)、判断加细关系
4. 存在性判据与扰动护照

所有权重都是 Fraction，零和判定必须精确。
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import islice
from math import factorial, gcd, lcm, prod
from typing import Literal

from lwbp.constant import SUBSET_CHECK_MAX_N
from lwbp.exception import (
    InvariantViolation,
    PassportMismatchError,
    PassportParseError,
    PassportValidationError,
    SizeGuardError,
)
from lwbp.utils.logging import logger

Color = Literal["black", "white"]

# 子集和表的规模上限（2^24 个整数）
PARTITION_MAX_N = 24

_WEIGHT = r"-?(?:\d+/\d+|\d+(?:\.\d+)?)"
_TOKEN = re.compile(rf"^(?P<weight>{_WEIGHT})(?:_(?P<sub>\d+))?(?:\^(?P<mult>\d+))?$")
_LABEL = re.compile(rf"^(?P<weight>{_WEIGHT})(?:_(?P<sub>\d+))?$")
_ASCII_WS = re.compile(r"[ \t\r\n\f\v]+")


def parse_weight(text: str) -> Fraction:
    """把 `a`、`a/b`、`a.b`（可带前导 `-`）解析为 Fraction"""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise PassportParseError(f"Invalid weight: {text!r}") from e


def format_weight(weight: Fraction) -> str:
    return str(weight)


# ============================================================
# 标号
# ============================================================


@dataclass(frozen=True, slots=True)
class IndexLabel:
    """
    指标集中的一个元素：权重 + 可选下标

    权重的符号决定顶点颜色（正 = 黑，负 = 白）。
    没有下标的标号 subscript 为 None。
    """

    weight: Fraction
    subscript: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.weight == 0:
            raise PassportValidationError("Zero weight is not allowed")
        if self.subscript is not None and self.subscript < 1:
            raise PassportValidationError(f"Subscript must be positive, got {self.subscript}")

    @property
    def color(self) -> Color:
        return "black" if self.weight > 0 else "white"

    @property
    def is_black(self) -> bool:
        return self.weight > 0

    @property
    def sort_key(self) -> tuple[bool, Fraction, bool, int]:
        """正权重在前按权重降序，负权重在后按绝对值降序；下标升序，无下标最先"""
        return (
            self.weight < 0,
            -abs(self.weight),
            self.subscript is not None,
            self.subscript or 0,
        )

    def negated(self) -> IndexLabel:
        return IndexLabel(-self.weight, self.subscript)

    def __str__(self) -> str:
        token = format_weight(self.weight)
        return token if self.subscript is None else f"{token}_{self.subscript}"


def parse_label(token: str) -> IndexLabel:
    """解析单个标号 token（不允许 `^m`）"""
    match = _LABEL.match(token.strip())
    if match is None:
        raise PassportParseError(f"Bad label token: {token!r}")
    sub = match["sub"]
    return IndexLabel(parse_weight(match["weight"]), int(sub) if sub else None)


def _check_zero_sum(entries: Sequence[tuple[IndexLabel, int]]) -> None:
    total = sum((label.weight * mult for label, mult in entries), Fraction(0))
    if total != 0:
        raise PassportValidationError(f"Weighted sum must be zero, got {total}")
    if not any(label.is_black for label, _ in entries):
        raise PassportValidationError("Passport needs at least one positive weight")
    if all(label.is_black for label, _ in entries):
        raise PassportValidationError("Passport needs at least one negative weight")
    duplicated = [label for label, n in Counter(label for label, _ in entries).items() if n > 1]
    if duplicated:
        raise PassportValidationError(
            f"Duplicate labels: {', '.join(str(label) for label in duplicated)}"
        )


def weight_gcd(weights: Iterable[Fraction]) -> Fraction:
    """有理数 gcd：gcd{L·|w|} / L，L 为分母的最小公倍数"""
    weights = list(weights)
    scale = lcm(*(w.denominator for w in weights))
    return Fraction(gcd(*(int(abs(w) * scale) for w in weights)), scale)


# ============================================================
# 护照
# ============================================================


@dataclass(frozen=True)
class Passport:
    """(标号, 重数) 的有序列表，按规范顺序排序"""

    entries: tuple[tuple[IndexLabel, int], ...]

    def __post_init__(self) -> None:
        entries = tuple(
            sorted(((label, int(mult)) for label, mult in self.entries), key=lambda e: e[0].sort_key)
        )
        for label, mult in entries:
            if mult < 1:
                raise PassportValidationError(f"Multiplicity of {label} must be positive")
            if mult > 1 and label.subscript is not None:
                raise PassportValidationError(
                    f"Subscripted label {label} names a single vertex, multiplicity {mult} given"
                )
        _check_zero_sum(entries)
        object.__setattr__(self, "entries", entries)

    @property
    def labels(self) -> tuple[IndexLabel, ...]:
        return tuple(label for label, _ in self.entries)

    @property
    def p(self) -> int:
        """黑点个数"""
        return sum(mult for label, mult in self.entries if label.is_black)

    @property
    def q(self) -> int:
        """白点个数"""
        return sum(mult for label, mult in self.entries if not label.is_black)

    @property
    def size(self) -> int:
        """|Ξ| = p + q"""
        return self.p + self.q

    @property
    def total_weight(self) -> Fraction:
        """‖Ξ‖ = ½ Σ λ(s)|wt(s)|"""
        return sum((label.weight * mult for label, mult in self.entries if label.is_black), Fraction(0))

    @property
    def weight_gcd(self) -> Fraction:
        return weight_gcd(label.weight for label in self.labels)

    @property
    def is_full(self) -> bool:
        return all(mult == 1 for _, mult in self.entries)

    def expand_full(self) -> FullPassport:
        """展开为完全护照：重复的权重依次分配下标 1..m，跳过已显式使用的下标"""
        taken: dict[Fraction, set[int]] = {}
        for label, mult in self.entries:
            if mult == 1 and label.subscript is not None:
                taken.setdefault(label.weight, set()).add(label.subscript)

        labels: list[IndexLabel] = []
        for label, mult in self.entries:
            if mult == 1:
                labels.append(label)
                continue
            used = taken.setdefault(label.weight, set())
            k = 1
            for _ in range(mult):
                while k in used:
                    k += 1
                used.add(k)
                labels.append(IndexLabel(label.weight, k))
        return FullPassport(tuple(labels))

    def __str__(self) -> str:
        return " ".join(
            str(label) if mult == 1 else f"{label}^{mult}" for label, mult in self.entries
        )


def parse_passport(text: str) -> Passport:
    """
    解析幂记号文本

    Args:
        text: 以 ASCII 空白分隔的 `w[_k][^m]` token 序列

    Returns:
        校验后的 Passport

    Raises:
        PassportParseError: token 不合法
        PassportValidationError: 零权重、和不为零、缺少正/负权重、标号重复
    """
    stripped = text.strip(" \t\r\n\f\v")
    if not stripped:
        raise PassportParseError("Empty passport")

    entries: list[tuple[IndexLabel, int]] = []
    for token in _ASCII_WS.split(stripped):
        match = _TOKEN.match(token)
        if match is None:
            raise PassportParseError(f"Bad token: {token!r}")
        sub, mult = match["sub"], match["mult"]
        multiplicity = int(mult) if mult else 1
        if multiplicity < 1:
            raise PassportParseError(f"Multiplicity must be positive in {token!r}")
        entries.append((IndexLabel(parse_weight(match["weight"]), int(sub) if sub else None), multiplicity))

    passport = Passport(tuple(entries))
    logger.debug("Parsed passport {passport} (p={p}, q={q})", passport=passport, p=passport.p, q=passport.q)
    return passport


def parse_full_passport(text: str) -> FullPassport:
    return parse_passport(text).expand_full()


# ============================================================
# 完全护照
# ============================================================


@dataclass(frozen=True)
class FullPassport:
    """
    所有重数为 1 的护照

    labels 按规范顺序排列，位置 0..N-1 就是 S ≅ [N] 的固定对应；
    子集用位掩码表示，第 i 位对应 labels[i]。
    """

    labels: tuple[IndexLabel, ...]

    def __post_init__(self) -> None:
        labels = tuple(sorted(self.labels, key=lambda label: label.sort_key))
        _check_zero_sum([(label, 1) for label in labels])
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[IndexLabel]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.index

    @cached_property
    def index(self) -> dict[IndexLabel, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def position(self, label: IndexLabel) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise PassportMismatchError(f"Label {label} is not in passport {self}") from None

    @cached_property
    def scale(self) -> int:
        """权重分母的最小公倍数；weights × scale 全为整数"""
        return lcm(*(label.weight.denominator for label in self.labels))

    @cached_property
    def scaled(self) -> tuple[int, ...]:
        return tuple(int(label.weight * self.scale) for label in self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def subset_sums(self) -> list[int]:
        """每个位掩码对应子集的缩放权重和"""
        if self.n > PARTITION_MAX_N:
            raise SizeGuardError(f"Subset tables are limited to {PARTITION_MAX_N} labels, got {self.n}")
        sums = [0] * (1 << self.n)
        for mask in range(1, 1 << self.n):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + self.scaled[low.bit_length() - 1]
        return sums

    @cached_property
    def zero_blocks_by_low(self) -> dict[int, list[int]]:
        """零和子集按最低位分组，组内降序"""
        groups: dict[int, list[int]] = {}
        for mask, total in enumerate(self.subset_sums):
            if mask and total == 0:
                groups.setdefault(mask & -mask, []).append(mask)
        for masks in groups.values():
            masks.reverse()
        return groups

    def mask_of(self, labels: Iterable[IndexLabel]) -> int:
        mask = 0
        for label in labels:
            mask |= 1 << self.position(label)
        return mask

    def labels_of(self, mask: int) -> tuple[IndexLabel, ...]:
        return tuple(label for i, label in enumerate(self.labels) if mask >> i & 1)

    def sub(self, mask: int) -> FullPassport:
        """零和子集诱导的子护照（保持规范相对顺序）"""
        return FullPassport(self.labels_of(mask))

    @cached_property
    def power_notation(self) -> str:
        """同一权重的标号恰为 w_1..w_m（m > 1）时收成 `w^m`；展开后得到同一个完全护照"""
        groups: dict[Fraction, list[IndexLabel]] = {}
        for label in self.labels:
            groups.setdefault(label.weight, []).append(label)
        tokens: list[str] = []
        for weight, labels in groups.items():
            subscripts = [label.subscript for label in labels]
            if len(labels) > 1 and subscripts == list(range(1, len(labels) + 1)):
                tokens.append(f"{format_weight(weight)}^{len(labels)}")
            else:
                tokens.extend(str(label) for label in labels)
        return " ".join(tokens)

    def __str__(self) -> str:
        return " ".join(str(label) for label in self.labels)


def compress_mask(mask: int, within: int) -> int:
    """把 within 的子集 mask 映射到 within 诱导子护照的位置上"""
    out, bit = 0, 0
    while within:
        low = within & -within
        if mask & low:
            out |= 1 << bit
        bit += 1
        within ^= low
    return out


def expand_mask(mask: int, within: int) -> int:
    """compress_mask 的逆"""
    out, bit = 0, 0
    while within:
        low = within & -within
        if mask >> bit & 1:
            out |= low
        bit += 1
        within ^= low
    return out


def swap_colors(fp: FullPassport) -> FullPassport:
    """所有权重取反（下标不变）"""
    return FullPassport(tuple(label.negated() for label in fp.labels))


# ============================================================
# 划分
# ============================================================


@dataclass(frozen=True)
class Partition:
    """零和划分；block 按最小规范元素排序"""

    passport: FullPassport
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        masks = tuple(sorted(self.masks, key=lambda m: m & -m))
        covered = 0
        for mask in masks:
            if mask <= 0 or covered & mask:
                raise PassportValidationError("Blocks must be nonempty and pairwise disjoint")
            if self.passport.subset_sums[mask] != 0:
                raise PassportValidationError(
                    f"Block {{{', '.join(map(str, self.passport.labels_of(mask)))}}} is not zero-sum"
                )
            covered |= mask
        if covered != self.passport.full_mask:
            raise PassportValidationError("Blocks must cover the index set")
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_blocks(cls, fp: FullPassport, blocks: Iterable[Iterable[IndexLabel]]) -> Partition:
        return cls(fp, tuple(fp.mask_of(block) for block in blocks))

    @property
    def blocks(self) -> tuple[tuple[IndexLabel, ...], ...]:
        return tuple(self.passport.labels_of(mask) for mask in self.masks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(mask.bit_count() for mask in self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    def restrict(self, within: int) -> Partition:
        """落在 within 内的 block 组成 within 子护照上的划分"""
        inside = [mask for mask in self.masks if mask & within == mask]
        return Partition(self.passport.sub(within), tuple(compress_mask(m, within) for m in inside))

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks)


@dataclass(frozen=True)
class OrderedPartition:
    """有序的零和 block 序列"""

    passport: FullPassport
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        Partition(self.passport, self.masks)

    @property
    def unordered(self) -> Partition:
        return Partition(self.passport, self.masks)

    @property
    def blocks(self) -> tuple[tuple[IndexLabel, ...], ...]:
        return tuple(self.passport.labels_of(mask) for mask in self.masks)

    def __len__(self) -> int:
        return len(self.masks)


def iter_partition_masks(fp: FullPassport) -> Iterator[tuple[int, ...]]:
    """
    以位掩码元组的形式枚举 𝔓(Ξ_F)

    规则：下一个 block 总是包含最小的未分配标号，保证不重复；
    候选 block 按降序尝试，所以第一个产出的是 𝔢。
    """
    sums = fp.subset_sums
    by_low = fp.zero_blocks_by_low
    blocks: list[int] = []

    def walk(remaining: int) -> Iterator[tuple[int, ...]]:
        if not remaining:
            yield tuple(blocks)
            return
        low = remaining & -remaining
        rest = remaining ^ low
        candidates = by_low.get(low, [])
        if len(candidates) < 1 << rest.bit_count():
            for block in candidates:
                if block & remaining == block:
                    blocks.append(block)
                    yield from walk(remaining ^ block)
                    blocks.pop()
            return
        sub = rest
        while True:
            block = sub | low
            if sums[block] == 0:
                blocks.append(block)
                yield from walk(remaining ^ block)
                blocks.pop()
            if not sub:
                break
            sub = (sub - 1) & rest

    yield from walk(fp.full_mask)


def enumerate_partitions(fp: FullPassport) -> Iterator[Partition]:
    """枚举 𝔓(Ξ_F)，每个划分恰好一次，第一个是 𝔢"""
    for masks in iter_partition_masks(fp):
        yield Partition(fp, masks)


def is_decomposable(fp: FullPassport) -> bool:
    return next(islice(iter_partition_masks(fp), 1, None), None) is not None


def max_partition_length(fp: FullPassport) -> int:
    """m(Ξ_F) = max |𝔭|"""
    return max(len(masks) for masks in iter_partition_masks(fp))


def count_partitions(fp: FullPassport) -> int:
    return sum(1 for _ in iter_partition_masks(fp))


def count_partitions_dp(fp: FullPassport) -> int:
    """独立的位掩码动态规划：零和集合划分的个数"""
    sums = fp.subset_sums
    ways = [0] * (fp.full_mask + 1)
    ways[0] = 1
    for mask in range(1, fp.full_mask + 1):
        if sums[mask] != 0:
            continue
        low = mask & -mask
        rest = mask ^ low
        sub, total = rest, 0
        while True:
            block = sub | low
            if sums[block] == 0:
                total += ways[mask ^ block]
            if not sub:
                break
            sub = (sub - 1) & rest
        ways[mask] = total
    return ways[fp.full_mask]


def x_of_masks(masks: Iterable[int]) -> int:
    return prod(factorial(mask.bit_count() - 1) for mask in masks)


def x_value(partition: Partition) -> int:
    """X(𝔭) = ∏ (|S_i| − 1)!"""
    return x_of_masks(partition.masks)


def is_finer(q: Partition, p: Partition) -> bool:
    """q 的每个 block 都落在 p 的某个 block 里"""
    if q.passport != p.passport:
        raise PassportMismatchError("Partitions belong to different passports")
    return all(any(b & a == b for a in p.masks) for b in q.masks)


def existence_check(passport: Passport) -> bool:
    """WBP 树存在 ⇔ (p + q − 1)·gcd(wt) ≤ ‖Ξ‖"""
    return (passport.p + passport.q - 1) * passport.weight_gcd <= passport.total_weight


# ============================================================
# 扰动护照
# ============================================================


@dataclass(frozen=True)
class PerturbedPassport:
    """
    扰动护照 wt̃ = wt + ε

    epsilon 与 base.labels 对齐；images[i] 是 base.labels[i] 在扰动护照中的标号。
    trivial 为 True 时输入本身不可分解，ε ≡ 0。
    """

    base: FullPassport
    epsilon: tuple[Fraction, ...]
    s_minus: IndexLabel
    e0: Fraction
    eps0: Fraction
    perturbed: FullPassport
    images: tuple[IndexLabel, ...]
    trivial: bool = False

    def epsilon_of(self, label: IndexLabel) -> Fraction:
        return self.epsilon[self.base.position(label)]

    def push_forward(self, label: IndexLabel) -> IndexLabel:
        return self.images[self.base.position(label)]

    @cached_property
    def _preimage(self) -> dict[IndexLabel, IndexLabel]:
        return dict(zip(self.images, self.base.labels))

    def pull_back(self, order: Iterable[IndexLabel]) -> tuple[IndexLabel, ...]:
        """把扰动护照上的标号序列读回原护照"""
        try:
            return tuple(self._preimage[label] for label in order)
        except KeyError as e:
            raise PassportMismatchError(f"Label {e.args[0]} is not in the perturbed passport") from None

    def satisfies_subset_bounds(self) -> bool:
        """
        对所有子集 A 检查：|Σ_A ε| < E₀；A 非空真子集时 Σ_A ε ≠ 0，且 Σ_A ε > 0 ⇔ s₋ ∉ A
        """
        n = self.base.n
        if n > SUBSET_CHECK_MAX_N:
            raise SizeGuardError(f"Subset checks are limited to N ≤ {SUBSET_CHECK_MAX_N}, got {n}")
        full = self.base.full_mask
        minus_bit = 1 << self.base.position(self.s_minus)
        sums = [Fraction(0)] * (full + 1)
        for mask in range(1, full + 1):
            low = mask & -mask
            sums[mask] = total = sums[mask ^ low] + self.epsilon[low.bit_length() - 1]
            if abs(total) >= self.e0:
                return False
            if mask == full:
                continue
            if total == 0 or (total > 0) != (not mask & minus_bit):
                return False
        return True


def _perturbed_labels(fp: FullPassport, epsilon: Sequence[Fraction]) -> tuple[IndexLabel, ...]:
    """保留原下标；权重碰撞导致标号重复时给后来者换一个空闲下标"""
    used: dict[Fraction, set[int | None]] = {}
    images: list[IndexLabel] = []
    for label, eps in zip(fp.labels, epsilon):
        weight = label.weight + eps
        taken = used.setdefault(weight, set())
        subscript = label.subscript
        if subscript in taken:
            subscript = 1
            while subscript in taken:
                subscript += 1
        taken.add(subscript)
        images.append(IndexLabel(weight, subscript))
    return tuple(images)


def perturb(fp: FullPassport) -> PerturbedPassport:
    """
    构造扰动护照

    E₀ = 非零子集和绝对值的最小值，ε₀ = E₀/(N−1)；
    s₋ 取规范顺序的最后一个标号，其余 ε(s) = ε₀/(2N)，ε(s₋) = −(N−1)ε₀/(2N)。
    不可分解的输入原样返回（ε ≡ 0，trivial=True）。

    Raises:
        InvariantViolation: 扰动结果仍可分解
    """
    n = fp.n
    s_minus = fp.labels[-1]
    e0 = Fraction(min(abs(total) for total in fp.subset_sums if total != 0), fp.scale)
    eps0 = e0 / (n - 1)

    if not is_decomposable(fp):
        return PerturbedPassport(
            base=fp,
            epsilon=(Fraction(0),) * n,
            s_minus=s_minus,
            e0=e0,
            eps0=eps0,
            perturbed=fp,
            images=fp.labels,
            trivial=True,
        )

    small = eps0 / (2 * n)
    epsilon = tuple(-(n - 1) * small if label == s_minus else small for label in fp.labels)
    images = _perturbed_labels(fp, epsilon)
    perturbed = FullPassport(images)
    if is_decomposable(perturbed):
        raise InvariantViolation(f"Perturbed passport {perturbed} is still decomposable")

    logger.debug(
        "Perturbed {base} into {perturbed} (E0={e0}, eps0={eps0})",
        base=fp,
        perturbed=perturbed,
        e0=e0,
        eps0=eps0,
    )
    return PerturbedPassport(
        base=fp,
        epsilon=epsilon,
        s_minus=s_minus,
        e0=e0,
        eps0=eps0,
        perturbed=perturbed,
        images=images,
    )
