import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_count.cone import (
    CENTER,
    Ray,
    WallQuadratic,
    apply_automorphism,
    automorphism_stride,
    preserves_form,
    subdivide_cone,
)
from mirror_count.errors import RationalWalls

GOLDEN = WallQuadratic(1, -1, -1)


def test_golden_slopes():
    rays = subdivide_cone(GOLDEN, 3)
    assert [r.slope() for r in rays] == ["-5/8", "-2/3", "-1", "1/0", "2", "5/3", "13/8"]
    assert rays[3] == CENTER


def test_count_one():
    assert subdivide_cone(GOLDEN, 1) == [Ray(-1, 1), Ray(0, 1), Ray(1, 2)]


def test_automorphism_example():
    assert apply_automorphism(Ray(1, 0)) == Ray(2, 3)
    assert apply_automorphism(Ray(0, 1)) == Ray(3, 5)
    assert preserves_form(GOLDEN)
    assert not preserves_form(GOLDEN, ((1, 1), (0, 1)))


def test_golden_stride():
    assert automorphism_stride(subdivide_cone(GOLDEN, 8)) == 2


def test_stride_none_without_symmetry():
    assert automorphism_stride(subdivide_cone(GOLDEN, 5), ((1, 0), (0, 1))) == 0
    assert automorphism_stride([Ray(0, 1), Ray(1, 2)], ((1, 1), (0, 1))) is None


@pytest.mark.parametrize("abc", [(1, 0, -4), (1, -3, 2), (2, 0, -8)])
def test_rational_walls(abc):
    with pytest.raises(RationalWalls):
        WallQuadratic(*abc)


def test_bad_walls():
    with pytest.raises(ValueError):
        WallQuadratic(1, 0, 1)
    with pytest.raises(ValueError):
        WallQuadratic(0, 1, 1)
    with pytest.raises(ValueError):
        subdivide_cone(GOLDEN, 0)


def test_sign_normalization():
    assert subdivide_cone(WallQuadratic(-1, 1, 1), 3) == subdivide_cone(GOLDEN, 3)


def _walls_or_none(a, b, c):
    try:
        return WallQuadratic(a, b, c)
    except (ValueError, RationalWalls):
        return None


irrational_walls = st.builds(
    _walls_or_none,
    st.integers(-6, 6).filter(bool),
    st.integers(-8, 8),
    st.integers(-8, 8),
).filter(lambda w: w is not None)


@settings(max_examples=60, deadline=None)
@given(irrational_walls, st.integers(1, 6))
def test_subdivision_invariants(walls, count):
    rays = subdivide_cone(walls, count)
    assert len(rays) == 2 * count + 1
    for u, v in zip(rays, rays[1:]):
        assert abs(u.det(v)) == 1
    # consistently oriented, every ray strictly inside the cone
    dets = {u.det(v) for u, v in zip(rays, rays[1:])}
    assert len(dets) == 1
    assert all(walls.inside(r) for r in rays)
    # a longer run extends the shorter one on both sides
    longer = subdivide_cone(walls, count + 2)
    assert longer[2:-2] == rays


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10))
def test_golden_automorphism_keeps_unimodular(count):
    rays = subdivide_cone(GOLDEN, count)
    images = [apply_automorphism(r) for r in rays]
    for u, v in zip(images, images[1:]):
        assert abs(u.det(v)) == 1
    assert all(GOLDEN.inside(r) for r in images)


def test_ray_validation():
    with pytest.raises(ValueError):
        Ray(0, 0)
    with pytest.raises(ValueError):
        Ray(2, 4)
