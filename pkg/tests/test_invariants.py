import random
from fractions import Fraction
from math import comb

import pytest

from toricount import multiplicity as mult
from toricount.fan import height_system, is_big_given_nef, is_nef, phi
from toricount.invariants import (
    ADJOINT_RIGID,
    NOT_RIGID,
    TORIC_ADJOINT_RIGID_ONLY,
    alpha_constant,
    invariant_report,
)
from toricount.lp import OPTIMAL, lp_optimize, make_lp
from toricount.pairs import make_pair, pair_from_gamma, pair_picard, pullback
from toricount.presets import hirzebruch_fan, p1xp1_fan, preset, projective_fan


def report_for(name, **kw):
    pair, coeffs, _ = preset(name, **kw)
    h = height_system(pair.fan, coeffs)
    return invariant_report(pair, h)


def test_p2_weak_campana_full_report():
    rep = report_for("p2-weak-campana-2")
    assert rep.a == Fraction(3, 2)
    assert rep.b == 4
    assert rep.rigidity == ADJOINT_RIGID
    assert rep.alpha_const == Fraction(3, 16)
    assert rep.alpha_const / (rep.a * 6) == Fraction(1, 48)
    assert len(rep.gamma_circle) == 6
    assert rep.pic_circle.torsion_order() == 1
    assert sum(rep.alpha_vec) == rep.a
    assert all(x > 0 for x in rep.alpha_vec)


def test_pn_full_fujita():
    for n in (2, 3, 4, 5):
        rep = report_for("pn-full", n=n)
        assert rep.a == n
        assert rep.b == 1
        assert rep.alpha_const == 1
        assert rep.rigidity == ADJOINT_RIGID
        assert rep.gamma_circle == tuple(sorted(
            tuple(1 if j == i else 0 for j in range(n)) for i in range(n)
        ))


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_mfull_degree_formula(n, m):
    rep = report_for("pn-mfull", n=n, m=m)
    assert rep.a == Fraction(n, m)
    assert rep.b - 1 == comb(m + n - 1, n - 1) - comb(m - 1, n - 1) - n


def test_p1_campana_22():
    rep = report_for("p1-campana-2-2")
    assert rep.a == 1
    assert rep.b == 1
    assert rep.gamma_circle == ((0, 2), (2, 0))
    assert rep.pic_circle.torsion_order() == 2
    assert rep.alpha_const == Fraction(1, 4)
    assert rep.rigidity == ADJOINT_RIGID


def test_gamma_circle_excludes_higher_generators():
    # the Campana generators (3,0),(0,3) have l = 3/2 > 1 at the optimum
    pair, coeffs, _ = preset("p1-campana-2-2")
    h = height_system(pair.fan, coeffs)
    rep = invariant_report(pair, h)
    assert (3, 0) not in rep.gamma_circle and (0, 3) not in rep.gamma_circle


def test_rigidity_gm_integral():
    pair, coeffs, _ = preset("p1-gm-integral")
    h = height_system(pair.fan, coeffs)
    rep = invariant_report(pair, h, require_quasi_proper=False)
    assert not rep.quasi_proper
    assert rep.rigidity == TORIC_ADJOINT_RIGID_ONLY


def test_rigidity_hirzebruch():
    for d in (1, 2, 3):
        pair, coeffs, _ = preset("hirzebruch-d-integral", d=d)
        h = height_system(pair.fan, coeffs)
        rep = invariant_report(pair, h)
        assert rep.rigidity == TORIC_ADJOINT_RIGID_ONLY
        assert rep.a == 2
        assert rep.b == 1


def test_adjoint_divisor_vanishes_exactly_on_circle():
    for name, kw in [
        ("p2-weak-campana-2", {}),
        ("p1-campana-2-2", {}),
        ("p1xp1-full", {}),
        ("pn-mfull", {"n": 3, "m": 3}),
    ]:
        pair, coeffs, _ = preset(name, **kw)
        h = height_system(pair.fan, coeffs)
        rep = invariant_report(pair, h)
        adj = [
            sum(Fraction(m[i]) * rep.rep_divisor[i] for i in range(pair.n)) - 1
            for m in pair.minimal
        ]
        for m, c in zip(pair.minimal, adj):
            assert c >= 0
            assert (c == 0) == (m in rep.gamma_circle)


def test_scaling_invariance():
    pair, coeffs, _ = preset("p2-weak-campana-2")
    for t in (2, Fraction(1, 3), Fraction(5, 2)):
        h = height_system(pair.fan, tuple(Fraction(c) * t for c in coeffs))
        rep = invariant_report(pair, h)
        assert rep.a == Fraction(3, 2) / t
        assert rep.b == 4
        assert rep.rigidity == ADJOINT_RIGID
        assert rep.gamma_circle == report_for("p2-weak-campana-2").gamma_circle


def _random_big_nef(fan, rng):
    from toricount.fan import height_system

    while True:
        coeffs = [Fraction(rng.randint(0, 5), rng.choice([1, 2])) for _ in range(fan.nrays)]
        h = height_system(fan, coeffs)
        if is_nef(h) and is_big_given_nef(h):
            return h


@pytest.mark.parametrize(
    "name,kw",
    [
        ("p2-full", {}),
        ("p2-weak-campana-2", {}),
        ("p1-campana-2-2", {}),
        ("p1xp1-full", {}),
    ],
)
def test_lp_equals_direct_effectivity_lp(name, kw):
    # min t s.t. exists mu with t*a_m - 1 + <mu, phi(m)> >= 0 over minimal m
    # must equal the Fujita program value
    pair, _, _ = preset(name, **kw)
    fan = pair.fan
    rng = random.Random(name.__hash__() & 0xFFF)
    for _ in range(50):
        h = _random_big_nef(fan, rng)
        rep = invariant_report(pair, h)
        d = fan.dim
        nvars = 1 + d
        cons = []
        rhs = []
        for m in pair.minimal:
            a_m = sum(Fraction(h.coeffs[i]) * m[i] for i in range(fan.nrays))
            row = [a_m] + list(phi(m, fan))
            cons.append(row)
            rhs.append(Fraction(1))
        prob = make_lp(
            [1] + [0] * d, cons, rhs, nonneg=[True] + [False] * d
        )
        sol = lp_optimize(prob)
        assert sol.status == OPTIMAL
        assert sol.value == rep.a


def test_b_two_computations_agree_on_presets():
    for name, kw in [
        ("p1-full", {}),
        ("p2-full", {}),
        ("p2-weak-campana-2", {}),
        ("p1-campana-2-2", {}),
        ("p1xp1-full", {}),
        ("pn-mfull", {"n": 4, "m": 2}),
        ("hirzebruch-d-integral", {"d": 2}),
    ]:
        pair, coeffs, _ = preset(name, **kw)
        h = height_system(pair.fan, coeffs)
        rep = invariant_report(pair, h)
        from toricount.ratlin import mat_rank

        rows = [list(phi(m, pair.fan)) for m in rep.gamma_circle]
        assert rep.b == len(rep.gamma_circle) - mat_rank(rows)


def test_alpha_triangulation_independence():
    # recompute the alpha integral with the reversed-apex triangulation
    from toricount.cones import dual_cone, exp_integral_cone, make_cone

    for name, kw in [("p2-weak-campana-2", {}), ("pn-mfull", {"n": 3, "m": 3})]:
        pair, coeffs, _ = preset(name, **kw)
        h = height_system(pair.fan, coeffs)
        rep = invariant_report(pair, h)
        sub = rep.subpair
        pic = rep.pic_circle
        gens = []
        for t in range(len(sub.gamma)):
            e = [0] * len(sub.gamma)
            e[t] = 1
            v = pic.project_free(e)
            if any(x != 0 for x in v):
                gens.append(v)
        eff = make_cone(gens)
        dual = dual_cone(eff, require_pointed=True)
        ell = pic.project_free(pullback(sub, h.coeffs))
        a0 = exp_integral_cone(dual, ell, apex_last=False)
        a1 = exp_integral_cone(dual, ell, apex_last=True)
        assert a0 == a1
        assert a0 / pic.torsion_order() == rep.alpha_const


def test_dual_effective_cone_wc2_two_simplices():
    # the dual of the 4-dim effective cone decomposes into two simplicial cones
    from toricount.cones import dual_cone, make_cone, triangulate_cone

    rep = report_for("p2-weak-campana-2")
    pic = rep.pic_circle
    sub = rep.subpair
    gens = []
    for t in range(len(sub.gamma)):
        e = [0] * len(sub.gamma)
        e[t] = 1
        gens.append(pic.project_free(e))
    dual = dual_cone(make_cone(gens), require_pointed=True)
    assert len(triangulate_cone(dual)) == 2
