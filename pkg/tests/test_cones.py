import random
from fractions import Fraction

import pytest

from toricount.cones import (
    dual_cone,
    exp_integral_cone,
    exp_integral_simplicial,
    extreme_rays,
    is_pointed,
    make_cone,
    triangulate_cone,
)
from toricount.errors import DivergentIntegral, DualNotPointed, NotPointed


def test_dual_orthant_self_dual():
    for b in (2, 3, 4):
        orthant = make_cone([tuple(1 if i == j else 0 for j in range(b)) for i in range(b)])
        dual = dual_cone(orthant)
        assert set(dual.generators) == set(orthant.generators)


def test_dual_single_ray_half_plane():
    dual = dual_cone(make_cone([(1, 0)]))
    assert set(dual.generators) == {(1, 0), (0, 1), (0, -1)}
    with pytest.raises(DualNotPointed):
        dual_cone(make_cone([(1, 0)]), require_pointed=True)


def test_dual_involution_random():
    rng = random.Random(7)
    trials = 0
    while trials < 25:
        d = rng.randint(2, 5)
        m = rng.randint(d, d + 3)
        # strictly positive first coordinate forces pointedness
        gens = [
            tuple([rng.randint(1, 4)] + [rng.randint(-4, 4) for _ in range(d - 1)])
            for _ in range(m)
        ]
        cone = make_cone(gens)
        from toricount.ratlin import mat_rank

        if mat_rank([list(g) for g in cone.generators]) < d:
            continue
        trials += 1
        once = dual_cone(cone, require_pointed=True)
        twice = dual_cone(once, require_pointed=True)
        assert set(twice.generators) == set(extreme_rays(cone))


def test_triangulate_simplicial_is_identity():
    cone = make_cone([(1, 0), (0, 1)])
    tri = triangulate_cone(cone)
    assert len(tri) == 1
    assert set(tri[0].generators) == {(1, 0), (0, 1)}


def test_triangulate_planar_three_rays():
    cone = make_cone([(1, 0), (1, 1), (0, 1)])
    tri = triangulate_cone(cone)
    assert len(tri) == 2


def test_triangulate_square_cone():
    # diagonal split: two simplicial cones sharing the diagonal rays
    cone = make_cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
    tri = triangulate_cone(cone)
    assert len(tri) == 2
    shared = set(tri[0].generators) & set(tri[1].generators)
    assert len(shared) == 2
    assert set(tri[0].generators) | set(tri[1].generators) == set(cone.generators)


def test_not_pointed_raises():
    with pytest.raises(NotPointed):
        triangulate_cone(make_cone([(1, 0), (-1, 0), (0, 1)]))
    assert not is_pointed(make_cone([(1, 0), (-1, 0)]))
    assert is_pointed(make_cone([(1, 0), (0, 1)]))


def test_exp_integral_orthant():
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert exp_integral_simplicial(basis, [1, 1, 1]) == 1


def test_exp_integral_1d_scaling():
    assert exp_integral_simplicial([(2,)], [3]) == Fraction(1, 3)


def test_exp_integral_divergent():
    with pytest.raises(DivergentIntegral):
        exp_integral_simplicial([(1, 0), (0, 1)], [1, 0])


def test_exp_integral_triangulation_independent():
    rng = random.Random(11)
    done = 0
    while done < 20:
        d = rng.choice([3, 4])
        m = rng.randint(d + 1, d + 3)
        gens = [
            tuple([rng.randint(1, 3)] + [rng.randint(-3, 3) for _ in range(d - 1)])
            for _ in range(m)
        ]
        cone = make_cone(gens)
        from toricount.ratlin import mat_rank

        if mat_rank([list(g) for g in cone.generators]) < d:
            continue
        # a functional strictly positive on the cone: sum of coordinates of
        # the dual's interior; first coordinate works since all gens have
        # first coordinate > 0
        ell = [1] + [0] * (d - 1)
        a = exp_integral_cone(cone, ell, apex_last=False)
        b = exp_integral_cone(cone, ell, apex_last=True)
        assert a == b
        done += 1


def test_zero_dimensional_integral():
    assert exp_integral_cone(make_cone([], ambient_dim=0), []) == 1
