import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import random_fan, random_unimodular, transform_fan
from toricpc.fan import (
    ConeNotInFan,
    Fan,
    FanConditionViolated,
    InvalidFanData,
    NonPrimitiveRay,
    NonRegularCone,
    NotComplete,
    build_fan,
    canonical_fan,
    canonical_form,
    faces,
    hirzebruch,
    is_isomorphic,
    locate,
    minimal_cone_containing,
    product,
    projective_space,
    star_fan,
    star_subdivision,
)
from toricpc.lattice import determinant
from toricpc.mori import picard_rank

P2_RAYS = [(1, 0), (0, 1), (-1, -1)]


def p1p1():
    return product(projective_space(1), projective_space(1))


def test_build_p2():
    f = build_fan(2, P2_RAYS, [[0, 1], [1, 2], [0, 2]])
    assert f.nrays == 3 and len(f.max_cones) == 3


def test_missing_cone_is_not_complete():
    with pytest.raises(NotComplete) as e:
        build_fan(2, P2_RAYS, [[0, 1], [1, 2]])
    assert e.value.cones


def test_non_regular_cone():
    # e1, e1 + 2 e2 span a cone of determinant 2
    rays = [(1, 0), (1, 2), (-1, 0), (0, -1)]
    with pytest.raises(NonRegularCone) as e:
        build_fan(2, rays, [[0, 1], [1, 2], [2, 3], [0, 3]])
    assert (0, 1) in e.value.cones


def test_non_primitive_ray():
    with pytest.raises(NonPrimitiveRay):
        build_fan(2, [(2, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


def test_degenerate_inputs():
    with pytest.raises(InvalidFanData):
        build_fan(0, [], [])
    with pytest.raises(InvalidFanData):
        build_fan(2, [(1, 0), (1, 0), (0, 1)], [[0, 2]])
    with pytest.raises(InvalidFanData):
        build_fan(2, [(1, 0, 0)], [[0]])
    with pytest.raises(InvalidFanData):
        # unused ray
        build_fan(2, P2_RAYS + [(1, 1)], [[0, 1], [1, 2], [0, 2]])


def test_wall_in_three_cones_rejected():
    rays = P2_RAYS + [(1, 1)]
    with pytest.raises(FanConditionViolated) as e:
        build_fan(2, rays, [[0, 1], [1, 2], [0, 2], [0, 3], [1, 3]])
    assert (0,) in e.value.cones


def test_triple_cover_rejected():
    # eight regular cones winding three times around the origin; every wall is
    # shared by two cones lying on opposite sides, so only the global check fires
    walk = [(1, 0), (-1, 1), (0, -1), (1, 1), (-1, 0), (1, -1), (0, 1), (-1, -1)]
    cones = [[i, (i + 1) % 8] for i in range(8)]
    with pytest.raises(FanConditionViolated):
        build_fan(2, walk, cones)


def test_wrong_side_across_wall():
    rays = [(1, 0), (0, 1), (-1, -1), (2, 1)]
    # cones (0,1) and (0,3) lie on the same side of the ray e1
    with pytest.raises(FanConditionViolated):
        build_fan(2, rays, [[0, 1], [0, 3], [1, 2], [2, 3]])


def test_faces_counts():
    fs = faces(projective_space(2))
    assert [len(x) for x in fs.by_dim] == [1, 3, 3]
    fs = faces(p1p1())
    assert [len(x) for x in fs.by_dim] == [1, 4, 4]
    assert len(faces(projective_space(3)).by_dim[2]) == 6
    assert set(faces(projective_space(3)).by_dim[3]) == set(projective_space(3).max_cones)


def test_minimal_cone_examples():
    p2 = projective_space(2)
    assert minimal_cone_containing(p2, (0, 0)) == ()
    assert minimal_cone_containing(p2, (1, 0)) == (0,)
    assert locate(p2, (1, 2)) == ((0, 1), (1, 2))


def test_star_subdivision_examples():
    bl = star_subdivision(projective_space(2), (0, 1))
    assert bl.nrays == 4 and bl.rays[3] == (1, 1)
    bl3 = star_subdivision(projective_space(3), (0, 1))
    assert bl3.nrays == 5 and picard_rank(bl3) == 2
    with pytest.raises(ConeNotInFan):
        star_subdivision(projective_space(2), (0,))
    with pytest.raises(ConeNotInFan):
        star_subdivision(p1p1(), (0, 1))


def test_star_fan_examples():
    p3 = projective_space(3)
    assert star_fan(p3, ()).fan == p3
    s = star_fan(p3, (0,))
    assert is_isomorphic(s.fan, projective_space(2))
    assert s.ray_map[0] is None
    s = star_fan(p1p1(), (0,))
    assert is_isomorphic(s.fan, projective_space(1))
    assert s.ray_map[1] is None  # -e1 is not adjacent to e1


def test_canonical_form_separates_hirzebruch():
    fs = [hirzebruch(a) for a in range(4)]
    forms = {canonical_form(f) for f in fs}
    assert len(forms) == 4
    assert is_isomorphic(hirzebruch(0), p1p1())


def test_cached_faces_are_shared():
    f = projective_space(3)
    assert faces(f) is faces(f)


@given(st.integers(0, 10 ** 6))
def test_random_fans_validate_and_membership_is_total(seed):
    rng = random.Random(seed)
    fan = random_fan(rng)
    for _ in range(10):
        v = [rng.randint(-4, 4) for _ in range(fan.dim)]
        cone, coeffs = locate(fan, v)
        assert all(c > 0 for c in coeffs)
        assert [sum(c * fan.rays[i][k] for i, c in zip(cone, coeffs)) for k in range(fan.dim)] == v
        # exactly one maximal cone contains v in its interior unless v is on a lower face
        hits = [c for c in fan.max_cones if set(cone) <= set(c)]
        assert hits
        if len(cone) == fan.dim:
            assert len(hits) == 1


@given(st.integers(0, 10 ** 6))
def test_star_subdivision_properties(seed):
    rng = random.Random(seed)
    fan = random_fan(rng, max_rays=9)
    k = rng.randint(2, fan.dim)
    tau = rng.choice(faces(fan).by_dim[k])
    bl = star_subdivision(fan, tau)
    assert bl.nrays == fan.nrays + 1
    assert picard_rank(bl) == picard_rank(fan) + 1
    for c in bl.max_cones:
        assert abs(determinant([bl.rays[i] for i in c])) == 1


@given(st.integers(0, 10 ** 6))
def test_star_fan_dimension(seed):
    rng = random.Random(seed)
    fan = random_fan(rng, max_rays=9)
    k = rng.randint(0, fan.dim - 1)
    tau = rng.choice(faces(fan).by_dim[k])
    s = star_fan(fan, tau)
    assert s.fan.dim == fan.dim - k
    # rays of the star map to rays of the quotient
    for i, j in s.ray_map.items():
        if j is not None:
            assert s.project(fan.rays[i]) == s.fan.rays[j]


@given(st.integers(0, 10 ** 6))
def test_canonical_form_is_invariant(seed):
    rng = random.Random(seed)
    fan = random_fan(rng, max_rays=8)
    g = random_unimodular(rng, fan.dim)
    order = list(range(fan.nrays))
    rng.shuffle(order)
    other = transform_fan(fan, g, order)
    assert canonical_form(other) == canonical_form(fan)
    assert canonical_fan(fan) == canonical_fan(other)


def test_fan_equality_and_hash():
    a = projective_space(2)
    b = Fan(2, a.rays, reversed(a.max_cones))
    assert a == b and hash(a) == hash(b)


def test_fans_pickle_without_their_cache():
    import pickle

    f = projective_space(3)
    faces(f)
    g = pickle.loads(pickle.dumps(f))
    assert g == f and faces(g).by_dim == faces(f).by_dim
