"""
枚举引擎

1. enumerate_trees：正树排列 → 梳理 → 忘掉标记 → 按规范形式分组
2. brute_force_trees：全部树排列做同样的事，作为独立对照
3. verify：把各模块的不变量串成一次端到端检查
4. table：整数划分对上的树个数矩阵
"""

from __future__ import annotations

import random
import time
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from lwbp.combing import (
    build_region,
    check_nesting,
    comb,
    edge_exists,
    horizontal_decomposition,
)
from lwbp.config import SizeGuard, VerifyOptions
from lwbp.exception import InvariantViolation, LWBPError, SizeGuardError
from lwbp.formula import (
    count_nonneg,
    count_pos_tree,
    identity_suite,
    kochetkov_count,
    np_plus,
    ordered_block_count,
)
from lwbp.passport import FullPassport, IndexLabel, Passport, is_decomposable, perturb
from lwbp.permutation import (
    Permutation,
    PermKind,
    block_partition,
    classify,
    count,
    horizontal_pairs,
    iterate,
    mark_path,
    sample,
)
from lwbp.planetree import (
    PlaneForest,
    all_markings,
    canonical_form,
    fold,
    fold_layout,
    path_between,
    swap_colors,
)
from lwbp.utils.logging import logger

IntPartition = tuple[int, ...]


# ============================================================
# 树目录
# ============================================================


@dataclass(frozen=True)
class CatalogEntry:
    canonical: str
    forest: PlaneForest
    witnesses: tuple[Permutation, ...]


@dataclass(frozen=True)
class TreeCatalog:
    """Tree(Ξ_F)：规范形式互不相同，每棵树附带见证它的排列"""

    passport: FullPassport
    entries: tuple[CatalogEntry, ...]
    source: PermKind = "positive_tree"

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    @property
    def canonical_forms(self) -> frozenset[str]:
        return frozenset(entry.canonical for entry in self.entries)


def _group_trees(
    fp: FullPassport,
    kind: PermKind,
    multiplicity: int,
    max_n: int,
    allow_large: bool,
) -> TreeCatalog:
    groups: dict[str, list[Permutation]] = {}
    forests: dict[str, PlaneForest] = {}
    for permutation in iterate(fp, kind, max_n=max_n, allow_large=allow_large):
        forest = comb(permutation, cross_check=False).forest
        key = canonical_form(forest)
        groups.setdefault(key, []).append(permutation)
        forests.setdefault(key, forest)

    for key, witnesses in groups.items():
        if len(witnesses) != multiplicity:
            raise InvariantViolation(
                f"Tree {key} is witnessed by {len(witnesses)} permutations, expected {multiplicity}"
            )
    entries = tuple(
        CatalogEntry(key, forests[key], tuple(groups[key])) for key in sorted(groups)
    )
    logger.info("Found {n} trees for {fp} from {kind} permutations", n=len(entries), fp=fp, kind=kind)
    return TreeCatalog(fp, entries, kind)


def enumerate_trees(
    fp: FullPassport, *, max_n: int = 8, allow_large: bool = False
) -> TreeCatalog:
    """
    枚举 Tree(Ξ_F)

    每棵树恰好由 N−1 个正树排列梳理得到。

    Raises:
        SizeGuardError: N 超过上限
        InvariantViolation: 分组大小不是 N−1
    """
    return _group_trees(fp, "positive_tree", fp.n - 1, max_n, allow_large)


def brute_force_trees(
    fp: FullPassport, *, max_n: int = 8, allow_large: bool = False
) -> TreeCatalog:
    """全部树排列梳理后分组；每棵树出现 N(N−1) 次"""
    return _group_trees(fp, "tree", fp.n * (fp.n - 1), max_n, allow_large)


# ============================================================
# 验证
# ============================================================


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    skipped: bool = False


@dataclass(frozen=True)
class VerifyReport:
    passport: FullPassport
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]


def _timed(name: str, check: Callable[[], str | None]) -> CheckResult:
    """运行一项检查；返回字符串表示失败原因，None 表示通过"""
    start = time.perf_counter()
    try:
        problem = check()
    except LWBPError as e:
        problem = f"{type(e).__name__}: {e}"
    seconds = time.perf_counter() - start
    if problem:
        logger.warning("Check {name} failed: {problem}", name=name, problem=problem)
    return CheckResult(name, not problem, problem or "ok", seconds)


def _mismatches(pairs: Sequence[tuple[str, int, int]]) -> str | None:
    bad = [f"{name}: {left} ≠ {right}" for name, left, right in pairs if left != right]
    return "; ".join(bad) or None


class _Verifier:
    def __init__(self, fp: FullPassport, options: VerifyOptions, max_n: int, allow_large: bool):
        self.fp = fp
        self.options = options
        self.max_n = max_n
        self.allow_large = allow_large
        self._catalog: TreeCatalog | None = None
        self._counts: dict[tuple[FullPassport, PermKind], int] = {}

    @property
    def catalog(self) -> TreeCatalog:
        if self._catalog is None:
            self._catalog = enumerate_trees(self.fp, max_n=self.max_n, allow_large=self.allow_large)
        return self._catalog

    def brute_count(self, fp: FullPassport, kind: PermKind) -> int:
        key = (fp, kind)
        if key not in self._counts:
            self._counts[key] = count(fp, kind, max_n=self.max_n, allow_large=self.allow_large)
        return self._counts[key]

    def formula_vs_enumeration(self) -> str | None:
        fp = self.fp
        n = fp.n
        brute = brute_force_trees(fp, max_n=self.max_n, allow_large=self.allow_large)
        if brute.canonical_forms != self.catalog.canonical_forms:
            return "enumerate_trees and brute_force_trees disagree"
        trees = kochetkov_count(fp)
        return _mismatches(
            [
                ("trees", trees, len(self.catalog)),
                ("pos_perms", np_plus(fp), self.brute_count(fp, "positive")),
                ("nonneg_perms", count_nonneg(fp), self.brute_count(fp, "nonnegative")),
                ("pos_tree_perms", count_pos_tree(fp), self.brute_count(fp, "positive_tree")),
                ("tree_perms", trees * n * (n - 1), self.brute_count(fp, "tree")),
            ]
        )

    def _roundtrip(self, permutation: Permutation) -> str | None:
        marked = comb(permutation)
        if fold(marked).order != permutation.order:
            return f"fold(comb(P)) ≠ P for {permutation}"
        if fold_layout(marked).order != permutation.order:
            return f"fold_layout order ≠ P for {permutation}"
        return None

    def bijection_roundtrip(self) -> str | None:
        for permutation in iterate(self.fp, "tree", max_n=self.max_n, allow_large=self.allow_large):
            if problem := self._roundtrip(permutation):
                return problem
        for entry in self.catalog:
            for marked in all_markings(entry.forest):
                back = comb(fold(marked))
                if canonical_form(back) != canonical_form(marked):
                    return f"comb(fold(T; a, b)) ≇ (T; a, b) for marks {marked.a}, {marked.b}"
        return None

    def sampled_roundtrip(self) -> str | None:
        rng = random.Random(self.options.seed)
        checked = 0
        for permutation in sample(self.fp, self.options.sample_count, rng):
            if not classify(permutation).tree:
                continue
            checked += 1
            if problem := self._roundtrip(permutation):
                return problem
        logger.info("Sampled round trip checked {n} tree permutations", n=checked)
        return None

    def forest_invariants(self) -> str | None:
        for permutation in iterate(self.fp, "all", max_n=self.max_n, allow_large=self.allow_large):
            rects = horizontal_decomposition(build_region(permutation))
            if not check_nesting(rects):
                return f"Nested edges cross for {permutation}"
            marked = comb(permutation, cross_check=False)
            cls = classify(permutation)
            if marked.forest.is_connected != cls.tree:
                return f"Connectivity of comb({permutation}) disagrees with the tree test"
            if cls.positive and (problem := _horizontal_pair_edges(permutation, cls.tree)):
                return problem
            swapped = swap_colors(marked.forest)
            if canonical_form(swap_colors(swapped)) != canonical_form(marked.forest):
                return f"Swapping colors twice changes comb({permutation})"
            if cls.tree:
                path = path_between(marked.forest, marked.a, marked.b)
                if mark_path(permutation) != path:
                    return f"Sign-changing points do not trace the marked path for {permutation}"
        return None

    def identities(self) -> str | None:
        report = identity_suite(
            self.fp,
            self.options.x_samples,
            pos_counter=lambda sub: self.brute_count(sub, "positive"),
            subset_sum_max_m=self.options.subset_sum_max_m,
        )
        failures = report.failures()
        if failures:
            return "; ".join(f"{f.name}[{f.sample}]: {f.lhs} ≠ {f.rhs}" for f in failures[:5])
        return None

    def perturbation_checks(self) -> str | None:
        fp = self.fp
        target = factorial(fp.n - 1)
        perturbed = perturb(fp)
        if is_decomposable(perturbed.perturbed):
            return f"Perturbed passport {perturbed.perturbed} is decomposable"
        if self.brute_count(perturbed.perturbed, "positive") != target:
            return "|P+| of the perturbed passport is not (N−1)!"
        if perturbed.trivial:
            return None
        if not perturbed.satisfies_subset_bounds():
            return "Perturbation violates the subset bounds"
        for label in fp.labels:
            image = perturbed.push_forward(label)
            if image.weight != label.weight + perturbed.epsilon_of(label):
                return f"Perturbed weight of {label} is not wt + ε"
            if perturbed.pull_back((image,)) != (label,):
                return f"Pull-back does not invert push-forward at {label}"

        pulled: set[tuple[IndexLabel, ...]] = set()
        for permutation in iterate(
            perturbed.perturbed, "positive", max_n=self.max_n, allow_large=self.allow_large
        ):
            pulled.add(perturbed.pull_back(permutation.order))

        blocks: Counter[tuple[int, ...]] = Counter()
        expected: set[tuple[IndexLabel, ...]] = set()
        for permutation in iterate(fp, "nonnegative", max_n=self.max_n, allow_large=self.allow_large):
            ordered = block_partition(permutation)
            if perturbed.s_minus in ordered.blocks[-1]:
                expected.add(permutation.order)
                blocks[ordered.masks] += 1
        if pulled != expected:
            return "Pulled-back positive permutations are not the s₋-last nonnegative ones"
        for masks, n in blocks.items():
            product = prod(np_plus(fp.sub(mask)) for mask in masks)
            if n != product:
                return f"Ordered partition {masks} has {n} permutations, expected {product}"
        if sum(blocks.values()) != target:
            return "Ordered partitions with s₋ last do not sum to (N−1)!"

        brute = ordered_block_count(fp, lambda sub: self.brute_count(sub, "positive"))
        if brute != target:
            return f"Σ (|p|−1)! ∏ |P+(Ξ_i)| = {brute}, expected {target}"
        return None


def _horizontal_pair_edges(permutation: Permutation, tree: bool) -> str | None:
    """正排列：每个水平对 (k, l) 都是上方的边；没有水平对当且仅当是树排列"""
    pairs = horizontal_pairs(permutation)
    if bool(pairs) == tree:
        return f"Horizontal pairs {pairs} disagree with the tree test for {permutation}"
    for k, l in pairs:
        edge = edge_exists(permutation, k, l)
        if edge is None or edge[1] != "above":
            return f"Horizontal pair ({k}, {l}) of {permutation} is not an edge above the axis"
    return None


def verify(
    fp: FullPassport,
    options: VerifyOptions | None = None,
    guard: SizeGuard | None = None,
    allow_large: bool = False,
) -> VerifyReport:
    """
    端到端验证；失败记录在报告里而不抛出

    N 超过 guard.max_n 时需要 allow_large，此时只做公式恒等式与抽样往返。

    Raises:
        SizeGuardError: N 超过上限且没有 allow_large
    """
    options = options or VerifyOptions()
    guard = guard or SizeGuard()
    sampled = fp.n > guard.max_n
    if sampled and not allow_large:
        raise SizeGuardError(
            f"N = {fp.n} exceeds the verification guard {guard.max_n}; pass the override flag"
        )
    verifier = _Verifier(fp, options, guard.hard_max_n if allow_large else guard.max_n, allow_large)

    logger.info("Verifying {fp} ({mode})", fp=fp, mode="sampled" if sampled else "exhaustive")
    if sampled:
        skipped = "skipped above the exhaustive size guard"
        checks = [
            CheckResult("formula_vs_enumeration", True, skipped, skipped=True),
            _timed("bijection_roundtrip", verifier.sampled_roundtrip),
            CheckResult("forest_invariants", True, skipped, skipped=True),
            _timed(
                "identity_suite",
                lambda: _identities_only(fp, options),
            ),
            CheckResult("perturbation_checks", True, skipped, skipped=True),
        ]
    else:
        checks = [
            _timed("formula_vs_enumeration", verifier.formula_vs_enumeration),
            _timed("bijection_roundtrip", verifier.bijection_roundtrip),
            _timed("forest_invariants", verifier.forest_invariants),
            _timed("identity_suite", verifier.identities),
            _timed("perturbation_checks", verifier.perturbation_checks),
        ]
    report = VerifyReport(fp, tuple(checks))
    logger.info("Verification of {fp}: {status}", fp=fp, status="pass" if report.passed else "FAIL")
    return report


def _identities_only(fp: FullPassport, options: VerifyOptions) -> str | None:
    report = identity_suite(fp, options.x_samples, subset_sum_max_m=options.subset_sum_max_m)
    failures = report.failures()
    return "; ".join(f"{f.name}[{f.sample}]" for f in failures[:5]) or None


# ============================================================
# 护照生成
# ============================================================


def integer_partitions(n: int, largest: int | None = None) -> Iterator[IntPartition]:
    """n 的整数划分，降序字典序：(n), (n−1, 1), …, (1, …, 1)"""
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest or n), 0, -1):
        for rest in integer_partitions(n - part, part):
            yield (part, *rest)


def format_partition(parts: IntPartition) -> str:
    """幂记号：(2, 1, 1) → `2 1^2`"""
    counts = Counter(parts)
    return " ".join(
        str(part) if counts[part] == 1 else f"{part}^{counts[part]}"
        for part in sorted(counts, reverse=True)
    )


def passport_from_partitions(black: IntPartition, white: IntPartition) -> FullPassport:
    """黑点权重取 black 的各部分，白点取 −white 的各部分"""
    entries = [(IndexLabel(Fraction(k)), m) for k, m in Counter(black).items()]
    entries += [(IndexLabel(Fraction(-k)), m) for k, m in Counter(white).items()]
    return Passport(tuple(entries)).expand_full()


def passports_of_weight(n: int) -> Iterator[tuple[IntPartition, IntPartition, FullPassport]]:
    """总权重为 n 的所有完全护照（黑、白划分都是 n 的划分）"""
    parts = list(integer_partitions(n))
    for black in parts:
        for white in parts:
            yield black, white, passport_from_partitions(black, white)


def random_nondecomposable_passport(rng: random.Random, n: int) -> FullPassport:
    """拒绝采样：n 个带下标的有理权重，直到不可分解"""
    if n < 2:
        raise ValueError(f"A passport needs at least 2 labels, got {n}")
    while True:
        p = rng.randint(1, n - 1)
        blacks = [Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(p)]
        total = sum(blacks, Fraction(0))
        cuts = sorted(total * Fraction(rng.randint(1, 47), 48) for _ in range(n - p - 1))
        bounds = [Fraction(0), *cuts, total]
        whites = [hi - lo for lo, hi in zip(bounds, bounds[1:])]
        if any(w == 0 for w in whites):
            continue
        weights = blacks + [-w for w in whites]
        fp = FullPassport(tuple(IndexLabel(w, i) for i, w in enumerate(weights, start=1)))
        if not is_decomposable(fp):
            return fp


# ============================================================
# 计数表
# ============================================================


@dataclass(frozen=True)
class PassportTable:
    """
    行 = 黑点划分，列 = 白点划分（都按降序字典序）；values 是完整矩阵
    """

    n: int
    partitions: tuple[IntPartition, ...]
    values: tuple[tuple[int, ...], ...]

    @property
    def labels(self) -> list[str]:
        return [format_partition(parts) for parts in self.partitions]

    def lower_triangle(self) -> list[list[int]]:
        return [list(row[: i + 1]) for i, row in enumerate(self.values)]

    @property
    def is_symmetric(self) -> bool:
        size = len(self.partitions)
        return all(
            self.values[i][j] == self.values[j][i] for i in range(size) for j in range(i)
        )

    def value(self, black: IntPartition, white: IntPartition) -> int:
        return self.values[self.partitions.index(black)][self.partitions.index(white)]


def _cell(pair: tuple[IntPartition, IntPartition]) -> int:
    return kochetkov_count(passport_from_partitions(*pair))


def table(n: int, workers: int = 1, check_symmetry: bool = True) -> PassportTable:
    """
    总权重 n 的树个数表

    Args:
        n: 总权重，≥ 2
        workers: 进程数；1 表示在当前进程内计算
        check_symmetry: 计算完整矩阵并断言关于黑白交换对称

    Raises:
        InvariantViolation: 表不对称或出现负值
    """
    if n < 2:
        raise ValueError(f"Table needs total weight n ≥ 2, got {n}")
    parts = tuple(integer_partitions(n))
    size = len(parts)
    cells = [(i, j) for i in range(size) for j in range(size) if check_symmetry or j <= i]
    pairs = [(parts[i], parts[j]) for i, j in cells]

    logger.info("Computing table n={n}: {cells} cells on {workers} worker(s)", n=n, cells=len(cells), workers=workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell, pairs, chunksize=4))
    else:
        results = [_cell(pair) for pair in pairs]

    matrix = [[0] * size for _ in range(size)]
    for (i, j), value in zip(cells, results):
        if value < 0:
            raise InvariantViolation(f"Negative table entry at ({i}, {j})")
        matrix[i][j] = value
    if not check_symmetry:
        for i in range(size):
            for j in range(i):
                matrix[j][i] = matrix[i][j]

    result = PassportTable(n, parts, tuple(tuple(row) for row in matrix))
    if check_symmetry and not result.is_symmetric:
        raise InvariantViolation(f"Table n={n} is not symmetric under color swap")
    return result
