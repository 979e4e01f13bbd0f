"""
平面森林测试

测试内容：
1. 构造校验：每种结构错误对应的异常
2. 规范形式与同构
3. 路径与标记
4. 折叠映射与精确布局
5. 颜色交换
"""

from fractions import Fraction

import pytest

from lwbp.combing import comb
from lwbp.exception import (
    ColorError,
    CycleError,
    DisconnectedError,
    MarkError,
    ParallelEdgeError,
    RotationError,
    WeightMismatchError,
)
from lwbp.passport import parse_full_passport, parse_label
from lwbp.permutation import iterate, mark_path
from lwbp.planetree import (
    Edge,
    PlaneForest,
    RootedTree,
    TwiceMarkedForest,
    all_markings,
    canonical_form,
    fold,
    fold_layout,
    is_isomorphic,
    path_between,
    rooted_markings,
    swap_colors,
)

T1_ROOTED_FOLDS = [
    "3,1_1,1_2,-4,-1",
    "3,-1,1_1,1_2,-4",
    "1_2,3,-1,1_1,-4",
    "1_1,1_2,3,-1,-4",
]


def L(token):
    return parse_label(token)


def _star(rotation):
    """(1₁1₂1₃3̄) 的星形树，白点处按给定循环序"""
    fp = parse_full_passport("1^3 -3")
    edges = [Edge(i, L(f"1_{i + 1}"), L("-3"), Fraction(1)) for i in range(3)]
    rot = {L(f"1_{i + 1}"): (i,) for i in range(3)}
    rot[L("-3")] = rotation
    return PlaneForest.from_rotation(fp, edges, rot)


# ============================================================
# 校验
# ============================================================


def test_color_error():
    """测试边连接两个黑点"""
    fp = parse_full_passport("1^2 -2")
    edges = [Edge(0, L("1_1"), L("1_2"), Fraction(1))]
    with pytest.raises(ColorError):
        PlaneForest.from_rotation(fp, edges, {})


def test_parallel_edge_error():
    """测试同一对顶点之间的两条边"""
    fp = parse_full_passport("2 -2")
    edges = [Edge(0, L("2"), L("-2"), Fraction(1)), Edge(1, L("2"), L("-2"), Fraction(1))]
    with pytest.raises(ParallelEdgeError):
        PlaneForest.from_rotation(fp, edges, {L("2"): (0, 1), L("-2"): (0, 1)})


def test_cycle_error():
    """测试四边形闭路"""
    fp = parse_full_passport("2^2 -2^2")
    pairs = [("2_1", "-2_1"), ("2_1", "-2_2"), ("2_2", "-2_1"), ("2_2", "-2_2")]
    edges = [Edge(i, L(b), L(w), Fraction(1)) for i, (b, w) in enumerate(pairs)]
    rotation = {
        L("2_1"): (0, 1),
        L("2_2"): (2, 3),
        L("-2_1"): (0, 2),
        L("-2_2"): (1, 3),
    }
    with pytest.raises(CycleError):
        PlaneForest.from_rotation(fp, edges, rotation)


def test_weight_mismatch_error():
    """测试顶点权重与边权之和不一致"""
    fp = parse_full_passport("2 -2")
    with pytest.raises(WeightMismatchError):
        PlaneForest.from_rotation(fp, [Edge(0, L("2"), L("-2"), Fraction(1))], {L("2"): (0,), L("-2"): (0,)})


def test_rotation_error():
    """测试循环序漏掉关联边"""
    with pytest.raises(RotationError):
        _star((0, 1))


def test_mark_errors(p1):
    """测试标记点重合与有根树的标记不是一条边"""
    forest = comb(p1).forest
    with pytest.raises(MarkError):
        TwiceMarkedForest(forest, (L("3"), L("3")))
    with pytest.raises(MarkError):
        RootedTree(forest, (L("1_1"), L("-1")))
    assert RootedTree(forest, (L("3"), L("-4"))).b == L("-4")


def test_disconnected_errors(split_perm):
    """测试只接受连通树的操作"""
    marked = comb(split_perm)
    with pytest.raises(DisconnectedError):
        fold(marked)
    with pytest.raises(DisconnectedError):
        path_between(marked.forest, L("1_1"), L("1_2"))
    with pytest.raises(DisconnectedError):
        list(all_markings(marked.forest))


# ============================================================
# 同构
# ============================================================


def test_isomorphic_star_rotations():
    """测试只差一个旋转的星形树同构，反向循环序不同构"""
    b, c, d = _star((0, 1, 2)), _star((0, 2, 1)), _star((1, 2, 0))
    assert is_isomorphic(b, d)
    assert not is_isomorphic(b, c)
    assert canonical_form(b) == canonical_form(d)


def test_canonical_ignores_edge_ids(p1):
    """测试重新编号边不改变规范形式"""
    forest = comb(p1).forest
    shift = {edge.id: edge.id + 10 for edge in forest.edges}
    edges = [Edge(shift[e.id], e.black, e.white, e.weight) for e in forest.edges]
    rotation = {
        label: tuple(shift[i] for i in rot)
        for label, rot in zip(forest.passport.labels, forest.rotation)
    }
    renamed = PlaneForest.from_rotation(forest.passport, edges, rotation)
    assert is_isomorphic(forest, renamed)


def test_component_forests(split_perm):
    """测试分支拆成各自子护照上的树"""
    parts = comb(split_perm).forest.component_forests()
    assert [str(part.passport) for part in parts] == ["1_1 1_4 -2_1", "1_2 -1_2", "1_3 -1_1"]
    assert all(part.is_connected for part in parts)


# ============================================================
# 路径与标记
# ============================================================


def test_path_between(sign_change_perm):
    """测试标记路径与变号点一致"""
    marked = comb(sign_change_perm)
    path = path_between(marked.forest, marked.a, marked.b)
    assert path == mark_path(sign_change_perm)


def test_marking_counts(p1, two_change_perm):
    """测试 N(N−1) 个二次标记与 N−1 个有根标记"""
    t1 = comb(p1).forest
    assert len(list(all_markings(t1))) == 20
    assert len(list(rooted_markings(t1))) == 4
    forest = comb(two_change_perm).forest
    assert len(list(all_markings(forest))) == 42
    assert len(list(rooted_markings(forest))) == 6


# ============================================================
# 折叠
# ============================================================


def test_fold_two_changes(two_change_perm):
    """测试以 (3̄₂, 3̄₃) 标记的树折叠回原排列"""
    tree = comb(two_change_perm).forest
    marked = TwiceMarkedForest(tree, (L("-3_2"), L("-3_3")))
    assert str(fold(marked)) == "-3_2,2_1,3_1,2_2,-3_1,2_3,-3_3"


def test_fold_rooted_t1(p1):
    """测试 T₁ 在四条边上取根，折叠得到的正是它的四个正树排列"""
    tree = comb(p1).forest
    folded = {str(fold(rooted)) for rooted in rooted_markings(tree)}
    assert folded == set(T1_ROOTED_FOLDS)
    assert str(fold(RootedTree(tree, (L("3"), L("-4"))))) == "3,-1,1_1,1_2,-4"


def test_fold_far_end_children(p1):
    """测试远端白点 4̄ 下的两棵子树按叠放顺序输出"""
    marked = comb(p1)
    assert str(fold(marked)) == "3,1_1,1_2,-4,-1"
    assert fold_layout(marked).order == p1.order


def test_fold_layout_matches_fold(p1):
    """测试精确布局按 x 排序与组合折叠一致"""
    tree = comb(p1).forest
    for marked in all_markings(tree):
        layout = fold_layout(marked)
        assert layout.order == fold(marked).order
        assert len(layout.rects) == len(tree.edges)


def test_comb_fold_roundtrip(sign_change_perm):
    """测试所有树排列上 fold(comb(P)) = P"""
    for permutation in iterate(sign_change_perm.passport, "tree"):
        assert fold(comb(permutation)).order == permutation.order


def test_fold_comb_roundtrip(two_change_perm):
    """测试所有标记上 comb(fold(T; a, b)) ≅ (T; a, b)"""
    tree = comb(two_change_perm).forest
    for marked in all_markings(tree):
        assert canonical_form(comb(fold(marked))) == canonical_form(marked)


# ============================================================
# 颜色交换
# ============================================================


def test_swap_colors(p1):
    """测试交换两次回到原树，护照取反"""
    tree = comb(p1).forest
    swapped = swap_colors(tree)
    assert str(swapped.passport) == "4 1 -3 -1_1 -1_2"
    assert canonical_form(swap_colors(swapped)) == canonical_form(tree)


def test_swap_colors_of_permutation(p1):
    """测试交换颜色的树仍可由正树排列梳理得到"""
    swapped = swap_colors(comb(p1).forest)
    forms = {canonical_form(comb(p).forest) for p in iterate(swapped.passport, "positive_tree")}
    assert canonical_form(swapped) in forms

