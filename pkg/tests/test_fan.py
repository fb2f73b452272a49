import random
from fractions import Fraction

import pytest

from toricount.errors import NotComplete, NotSmooth, PreconditionViolated
from toricount.fan import (
    cartier_data,
    cox_monomial_hat,
    height_system,
    is_big_given_nef,
    is_nef,
    make_fan,
    phi,
    refine_fan,
    validate_fan,
)
from toricount.presets import hirzebruch_fan, p1xp1_fan, projective_fan


def test_p2_fan_valid():
    validate_fan(make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)]))


def test_not_smooth():
    with pytest.raises(NotSmooth):
        validate_fan(make_fan(2, [(1, 0), (1, 2)], [(0, 1)]))


def test_not_complete():
    with pytest.raises(NotComplete):
        validate_fan(make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)]))


def test_p1xp1_valid():
    p1xp1_fan()


def test_cartier_data_p2():
    f = projective_fan(3)
    # D = D_1; cones are leave-one-out: cone 0 omits ray 0
    d1 = (1, 0, 0)
    assert cartier_data(f, d1, f.max_cones[0]) == (Fraction(0), Fraction(0))
    # the cone containing rays 0,1 is the one omitting ray 2
    mu = cartier_data(f, d1, (0, 1))
    assert mu == (Fraction(1), Fraction(0))
    assert cartier_data(f, (0, 0, 0), f.max_cones[1]) == (Fraction(0), Fraction(0))


def test_height_system_p2():
    f = projective_fan(3)
    h = height_system(f, (1, 0, 0))
    # l^(i)(e_j) = 1 exactly when ray i is outside cone j; cone j omits ray j
    for i in range(3):
        for j in range(3):
            assert h.matrix[i][j] == (1 if i == j else 0)
    assert is_nef(h)
    assert is_big_given_nef(h)


def test_height_system_p1():
    f = projective_fan(2)
    h = height_system(f, (1, 0))
    rows = [tuple(r) for r in h.matrix]
    assert set(rows) == {(0, 1), (1, 0)}


def test_zero_divisor():
    f = projective_fan(3)
    h = height_system(f, (0, 0, 0))
    assert all(x == 0 for row in h.matrix for x in row)


def test_nef_big_flags():
    f = projective_fan(3)
    assert not is_nef(height_system(f, (-1, 0, 0)))
    fib = height_system(p1xp1_fan(), (1, 0, 0, 0))
    assert is_nef(fib)
    assert not is_big_given_nef(fib)
    with pytest.raises(PreconditionViolated):
        is_big_given_nef(height_system(f, (-1, 0, 0)))


def test_cox_monomial_hat():
    f = projective_fan(3)
    assert cox_monomial_hat(f, (0, 1)) == (0, 0, 1)
    f1 = projective_fan(2)
    assert cox_monomial_hat(f1, (0,)) == (0, 1)
    q = p1xp1_fan()
    assert cox_monomial_hat(q, (0, 2)) == (0, 1, 0, 1)


def test_refine_noop():
    f = projective_fan(3)
    assert refine_fan(f, []) == f
    # a multiple of an existing ray is skipped
    f1 = projective_fan(2)
    assert refine_fan(f1, [(2,)]) == f1


def test_refine_single_stellar():
    f = projective_fan(3)
    g = refine_fan(f, [(1, 1)])
    assert len(g.max_cones) == 4
    assert (1, 1) in g.rays
    ridx = g.rays.index((1, 1))
    split = [c for c in g.max_cones if ridx in c]
    assert len(split) == 2


def test_refine_cones_nested_in_input():
    f = hirzebruch_fan(2)
    g = refine_fan(f, [(1, 1), (-1, 1), (1, -1)])
    # each refined cone lies inside some input cone: its rays' coordinates in
    # the containing cone's basis are nonnegative
    from toricount.ratlin import solve_square

    for cone in g.max_cones:
        found = False
        for parent in f.max_cones:
            basis = [list(f.rays[i]) for i in parent]
            ok = True
            for i in cone:
                lam = solve_square(
                    [[basis[t][s] for t in range(2)] for s in range(2)], list(g.rays[i])
                )
                if any(x < 0 for x in lam):
                    ok = False
                    break
            if ok:
                found = True
                break
        assert found


def test_phi():
    f = projective_fan(3)
    assert phi((2, 0, 0), f) == (2, 0)
    assert phi((1, 0, 1), f) == (0, -1)
    assert phi((0, 0, 0), f) == (0, 0)


def _random_nef(f, rng, big=False):
    while True:
        coeffs = [Fraction(rng.randint(0, 6), rng.choice([1, 1, 2])) for _ in range(f.nrays)]
        h = height_system(f, coeffs)
        if is_nef(h) and (not big or is_big_given_nef(h)):
            return h


@pytest.mark.parametrize(
    "fan_name",
    ["p1", "p2", "p3", "p1xp1", "f1", "f2"],
)
def test_cartier_vanishing_sum_identity(fan_name):
    # sum over maximal cones of (prod of a_i over rays outside sigma) times
    # mu_D(sigma) vanishes for any divisor
    fans = {
        "p1": projective_fan(2),
        "p2": projective_fan(3),
        "p3": projective_fan(4),
        "p1xp1": p1xp1_fan(),
        "f1": hirzebruch_fan(1),
        "f2": hirzebruch_fan(2),
    }
    f = fans[fan_name]
    rng = random.Random(hash(fan_name) & 0xFFFF)
    for _ in range(100):
        coeffs = [Fraction(rng.randint(-5, 9), rng.choice([1, 2, 3])) for _ in range(f.nrays)]
        total = [Fraction(0)] * f.dim
        for cone in f.max_cones:
            mu = cartier_data(f, coeffs, cone)
            outside = [i for i in range(f.nrays) if i not in cone]
            w = Fraction(1)
            for i in outside:
                w *= coeffs[i]
            total = [t + w * x for t, x in zip(total, mu)]
        assert all(t == 0 for t in total)


@pytest.mark.parametrize("fan_name", ["p1", "p2", "p3", "p1xp1", "f1", "f2"])
def test_big_nef_rank(fan_name):
    fans = {
        "p1": projective_fan(2),
        "p2": projective_fan(3),
        "p3": projective_fan(4),
        "p1xp1": p1xp1_fan(),
        "f1": hirzebruch_fan(1),
        "f2": hirzebruch_fan(2),
    }
    f = fans[fan_name]
    rng = random.Random(len(fan_name))
    from toricount.ratlin import mat_rank

    for _ in range(20):
        h = _random_nef(f, rng, big=True)
        assert mat_rank([list(r) for r in h.matrix]) == f.dim + 1


def test_structural_vanishing_on_cone_rays():
    f = hirzebruch_fan(3)
    rng = random.Random(5)
    for _ in range(20):
        coeffs = [Fraction(rng.randint(-4, 8)) for _ in range(4)]
        h = height_system(f, coeffs)
        for j, cone in enumerate(f.max_cones):
            for i in cone:
                assert h.matrix[i][j] == 0
