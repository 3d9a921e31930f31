from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from implode import lie_core as lc

G2 = [[2, -1], [-3, 2]]
B2 = [[2, -2], [-1, 2]]
B3 = [[2, -1, 0], [-1, 2, -2], [0, -1, 2]]
F4 = [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]


def test_rank_one_data():
    rs = lc.build_type_a(1)
    assert rs.simple_roots[0].coords == (1, -1)
    assert rs.fundamental_weights[0].coords == (F(1, 2), F(-1, 2))
    assert lc.coroot(rs, 1).coords == (1, -1)


def test_rank_two_fundamental_weights():
    rs = lc.build_type_a(2)
    assert rs.fundamental_weights[0].coords == (F(2, 3), F(-1, 3), F(-1, 3))
    assert rs.fundamental_weights[1].coords == (F(1, 3), F(1, 3), F(-2, 3))


@pytest.mark.parametrize("rank, j, expected", [(2, 1, (1, -1, 0)), (3, 2, (0, 1, -1, 0)), (1, 1, (1, -1))])
def test_coroot_examples(rank, j, expected):
    assert lc.coroot(lc.build_type_a(rank), j).coords == expected


def test_coroot_index_errors():
    rs = lc.build_type_a(2)
    for j in (0, 3):
        with pytest.raises(IndexError):
            lc.coroot(rs, j)


@pytest.mark.parametrize("bad", [0, -1, 1.5])
def test_build_rejects_bad_rank(bad):
    with pytest.raises(ValueError):
        lc.build_type_a(bad)


@pytest.mark.parametrize("cartan", [[[2, -1], [-1, 2]], G2, B2, B3, F4])
def test_fundamental_weights_dual_to_coroots(cartan):
    rs = lc.from_cartan(cartan)
    for i, w in enumerate(rs.fundamental_weights):
        for j in range(rs.rank):
            assert lc.pair(rs, w, rs.coroots[j]) == int(i == j)


@pytest.mark.parametrize("rank", range(1, 7))
def test_type_a_duality_and_trace(rank):
    rs = lc.build_type_a(rank)
    for i, w in enumerate(rs.fundamental_weights):
        assert sum(w) == 0
        for j, c in enumerate(rs.coroots):
            assert lc.pair(rs, w, c) == int(i == j)
    assert all(sum(a) == 0 for a in rs.simple_roots)


@pytest.mark.parametrize("cartan, order", [(G2, 12), (B2, 8), (B3, 48), (F4, 1152)])
def test_generic_weyl_orders(cartan, order):
    rs = lc.from_cartan(cartan)
    assert rs.weyl_order == order
    assert lc.weyl_subgroup(rs, range(1, rs.rank + 1)).order == order


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_type_a_weyl_order(rank):
    rs = lc.build_type_a(rank)
    import math

    assert rs.weyl_order == math.factorial(rank + 1)
    assert lc.weyl_subgroup(rs, range(1, rank + 1)).order == math.factorial(rank + 1)


def test_dominant_representative_examples():
    rs = lc.build_type_a(2)
    zp, w = lc.dominant_representative(rs, lc.Weight([0, 1, -1]))
    assert zp.coords == (1, 0, -1)
    assert w.perm == (1, 0, 2)
    z = lc.Weight([3, 1, -4])
    zp, w = lc.dominant_representative(rs, z)
    assert zp == z and w == lc.identity_element(rs)
    zp, _ = lc.dominant_representative(lc.build_type_a(3), lc.Weight([-3, 1, 2, 0]))
    assert zp.coords == (2, 1, 0, -3)


def test_dominant_representative_rejects_non_trace_zero():
    with pytest.raises(ValueError):
        lc.dominant_representative(lc.build_type_a(2), lc.Weight([1, 1, 1]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=2), st.sampled_from([G2, B2]))
def test_generic_dominant_representative_is_in_orbit(coords, cartan):
    rs = lc.from_cartan(cartan)
    z = lc.Weight(coords)
    zp, w = lc.dominant_representative(rs, z)
    assert all(v >= 0 for v in lc.simple_pairings(rs, zp))
    assert lc.act(rs, w, z) == zp


def test_face_examples():
    rs = lc.build_type_a(2)
    assert lc.face_of_dominant(rs, lc.Weight([1, 0, -1])).vanishing == frozenset()
    assert lc.face_of_dominant(rs, lc.Weight([1, 1, -2])).vanishing == {1}
    assert lc.face_of_dominant(rs, lc.Weight([0, 0, 0])).vanishing == {1, 2}


def test_face_rejects_non_dominant():
    with pytest.raises(ValueError):
        lc.face_of_dominant(lc.build_type_a(2), lc.Weight([0, 1, -1]))


def test_face_float_tolerance():
    rs = lc.build_type_a(2)
    assert lc.face_of_dominant(rs, lc.Weight([1.0, 1.0 + 1e-12, -2.0 - 1e-12])).vanishing == {1}


@pytest.mark.parametrize("rank", range(1, 7))
def test_face_count_and_representatives(rank):
    rs = lc.build_type_a(rank)
    faces = lc.enumerate_faces(rs)
    assert len(faces) == 2**rank
    assert len(set(faces)) == 2**rank
    for f in faces:
        assert lc.face_of_dominant(rs, lc.face_representative(rs, f)) == f


def test_levi_types():
    assert lc.levi_type_of_face(lc.build_type_a(2), lc.FaceDescriptor({1})) == [("A", 1)]
    assert lc.levi_type_of_face(lc.build_type_a(2), lc.FaceDescriptor(())) == []
    assert lc.levi_type_of_face(lc.build_type_a(3), lc.FaceDescriptor({1, 3})) == [("A", 1), ("A", 1)]
    assert lc.levi_type_of_face(lc.from_cartan(G2), {1, 2}) == [("G", 2)]
    assert lc.levi_type_of_face(lc.from_cartan(B3), {2, 3}) == [("B", 2)]


def test_weyl_subgroup_examples():
    rs = lc.build_type_a(2)
    pd = lc.weyl_subgroup(rs, {1})
    assert pd.order == 2
    assert {w.perm for w in pd.weyl_subgroup_elements} == {(0, 1, 2), (1, 0, 2)}
    assert lc.weyl_subgroup(rs, {1, 2}).order == 6
    assert lc.weyl_subgroup(lc.build_type_a(3), {1, 2}).order == 6


def test_weyl_subgroup_bound():
    with pytest.raises(ValueError):
        lc.weyl_subgroup(lc.from_cartan(F4), {1, 2, 3, 4}, bound=100)


def test_levi_blocks():
    assert lc.levi_blocks(3, lc.gl_r_parabolic(3)) == [[0, 1, 2], [3]]
    assert lc.levi_blocks(2, set()) == [[0], [1], [2]]
    assert lc.levi_blocks(3, {2}) == [[0], [1, 2], [3]]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.tuples(st.just(r), st.permutations(range(r + 1)), st.permutations(range(r + 1)))))
def test_weyl_group_action_is_a_homomorphism(data):
    r, p, q = data
    rs = lc.build_type_a(r)
    u, v = lc.WeylElement(perm=tuple(p)), lc.WeylElement(perm=tuple(q))
    z = lc.Weight([F(i * i - 3, 7) for i in range(r + 1)])
    z = z - lc.Weight([sum(z) / (r + 1)] * (r + 1))
    assert lc.act(rs, lc.compose(rs, u, v), z) == lc.act(rs, u, lc.act(rs, v, z))
    assert lc.act(rs, lc.inverse(rs, u), lc.act(rs, u, z)) == z
