"""Acceptance suite: every documented criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one line per
criterion.  These are the exit criteria of the build; tolerances are pinned
here and nowhere else.
"""

import math
import random
import time
from fractions import Fraction
from math import comb

import pytest
from mpmath import mp, mpf

from toricount import multiplicity as mult
from toricount.constants import (
    c_inf_adjoint_rigid,
    c_inf_general,
    density_model,
    euler_product,
    leading_constant,
    volume_DB_estimate,
    zeta_series,
)
from toricount.counting import count_points_schedule, oracle_count_schedule
from toricount.fan import cartier_data, height_system, is_big_given_nef, is_nef, phi
from toricount.invariants import ADJOINT_RIGID, TORIC_ADJOINT_RIGID_ONLY, invariant_report
from toricount.pairs import make_pair
from toricount.presets import hirzebruch_fan, p1xp1_fan, preset, projective_fan
from toricount.ratlin import mat_rank, solve_square


def _report(name, **kw):
    pair, coeffs, _ = preset(name, **kw)
    h = height_system(pair.fan, coeffs)
    return invariant_report(pair, h)


def _line(num, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num}: {status}  {detail}")
    assert ok, detail


def test_criterion_1_weak_campana_plane():
    t0 = time.time()
    rep = _report("p2-weak-campana-2")
    assert rep.a == Fraction(3, 2)
    assert rep.b == 4
    ratio = rep.alpha_const / (rep.a * math.factorial(rep.b - 1))
    assert ratio == Fraction(1, 48)
    c_gen, cones, _, _ = c_inf_general(rep)
    c_ar = c_inf_adjoint_rigid(rep.pair.fan, rep.rep_divisor)
    assert c_gen == c_ar == 48
    cr = leading_constant(rep, s_level=1, prime_limit=10 ** 6)
    c_val = float(cr.leading)
    elapsed = time.time() - t0
    ok = abs(c_val - 0.862) <= 0.002 and elapsed < 60
    _line(
        1,
        ok,
        f"a=3/2 b=4 alpha/(a(b-1)!)=1/48 C_inf=48 both branches, "
        f"C={c_val:.5f} (target 0.862+-0.002), {elapsed:.1f}s",
    )


def test_criterion_2_projective_full():
    t0 = time.time()
    details = []
    ok = True
    for n in range(2, 6):
        rep = _report("pn-full", n=n)
        assert rep.a == n and rep.b == 1
        model = density_model(rep, 1)
        ep = euler_product(model, prime_limit=10 ** 6)
        zn, zerr = zeta_series(n)
        diff = abs(ep.value - 1 / zn)
        ok = ok and diff < 1e-5
        details.append(f"n={n}: |prod C_p - 1/zeta({n})|={float(diff):.2e}")
    rep3 = _report("pn-full", n=3)
    counts, _ = count_points_schedule(rep3.pair, rep3.heights, 1, [300])
    z3, _ = zeta_series(3)
    predicted = float(4 / z3) * 300 ** 3
    count_ratio = counts[0] / predicted
    ok = ok and abs(count_ratio - 1) < 0.05
    elapsed = time.time() - t0
    ok = ok and elapsed < 120
    _line(2, ok, "; ".join(details) + f"; N(300)/predicted={count_ratio:.4f}, {elapsed:.1f}s")


def test_criterion_3_mfull_degree_formula():
    checks = []
    ok = True
    for n, m in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)]:
        rep = _report("pn-mfull", n=n, m=m)
        want = comb(m + n - 1, n - 1) - comb(m - 1, n - 1) - n
        ok = ok and (rep.b - 1 == want)
        checks.append(f"(n={n},m={m}): b-1={rep.b - 1}={want}")
    _line(3, ok, "; ".join(checks))


def test_criterion_4_oracle_equivalence():
    t0 = time.time()
    schedule = list(range(1, 101))
    configs = 0
    for fan, coeffs in [
        (projective_fan(2), (1, 0)),
        (projective_fan(3), (1, 0, 0)),
        (p1xp1_fan(), (1, 1, 1, 1)),
    ]:
        n = fan.nrays
        for ms in [
            mult.full_set(n),
            mult.weak_campana(n, 2),
            mult.campana((2,) * n),
            mult.darmon((2,) * n),
        ]:
            pair = make_pair(fan, ms)
            h = height_system(fan, coeffs)
            fast, _ = count_points_schedule(pair, h, 1, schedule)
            slow, _ = oracle_count_schedule(pair, h, 1, schedule)
            assert fast == slow, (ms.describe(), fan.dim)
            configs += 1
    elapsed = time.time() - t0
    ok = configs == 12 and elapsed < 60
    _line(4, ok, f"count_points == oracle_count for all B<=100 on {configs} configs, {elapsed:.1f}s")


def test_criterion_5_identity_suite():
    fans = {
        "p1": projective_fan(2),
        "p2": projective_fan(3),
        "p3": projective_fan(4),
        "p1xp1": p1xp1_fan(),
        "f1": hirzebruch_fan(1),
        "f2": hirzebruch_fan(2),
    }
    # (a) vanishing sum over cones for 100 random nef divisors per fan
    for name, f in fans.items():
        rng = random.Random(hash(name) & 0xFFFF)
        done = 0
        while done < 100:
            coeffs = [Fraction(rng.randint(0, 8), rng.choice([1, 2])) for _ in range(f.nrays)]
            h = height_system(f, coeffs)
            if not is_nef(h):
                continue
            done += 1
            total = [Fraction(0)] * f.dim
            for cone in f.max_cones:
                mu = cartier_data(f, coeffs, cone)
                w = Fraction(1)
                for i in range(f.nrays):
                    if i not in cone:
                        w *= coeffs[i]
                total = [t + w * x for t, x in zip(total, mu)]
            assert all(t == 0 for t in total)
            # (b) rank = dim + 1 for big nef
            if is_big_given_nef(h):
                assert mat_rank([list(r) for r in h.matrix]) == f.dim + 1
    # (c,d,e) refined-cone index equality, cone-sum identity, branch equality
    rigid_presets = [
        ("p2-weak-campana-2", {}),
        ("p1-campana-2-2", {}),
        ("p2-full", {}),
        ("p1xp1-full", {}),
        ("pn-mfull", {"n": 3, "m": 2}),
        ("pn-mfull", {"n": 3, "m": 3}),
    ]
    for name, kw in rigid_presets:
        rep = _report(name, **kw)
        assert rep.rigidity == ADJOINT_RIGID
        general, cones, refined, ray_of = c_inf_general(rep)
        assert general == c_inf_adjoint_rigid(rep.pair.fan, rep.rep_divisor)
        for c in cones:
            assert c.index_snf == c.index_det
        # cone-sum identity per maximal cone of the original fan
        f = rep.pair.fan
        a = rep.rep_divisor

        def a_m(m):
            return sum(Fraction(a[i]) * m[i] for i in range(f.nrays))

        for parent in f.max_cones:
            basis = [list(f.rays[i]) for i in parent]
            want = Fraction(1)
            for i in parent:
                want /= Fraction(a[i])
            got = Fraction(0)
            for c in cones:
                inside = all(
                    all(
                        x >= 0
                        for x in solve_square(
                            [[basis[t][s] for t in range(f.dim)] for s in range(f.dim)],
                            list(phi(m, f)),
                        )
                    )
                    for m in c.ray_elements
                )
                if inside:
                    term = Fraction(c.index_det)
                    for m in c.ray_elements:
                        term /= a_m(m)
                    got += term
            assert got == want
    # (f) alpha triangulation independence (exact)
    from toricount.cones import dual_cone, exp_integral_cone, make_cone
    from toricount.pairs import pullback

    for name, kw in [("p2-weak-campana-2", {}), ("pn-mfull", {"n": 4, "m": 2})]:
        rep = _report(name, **kw)
        pic = rep.pic_circle
        sub = rep.subpair
        gens = []
        for t in range(len(sub.gamma)):
            e = [0] * len(sub.gamma)
            e[t] = 1
            v = pic.project_free(e)
            if any(x != 0 for x in v):
                gens.append(v)
        dual = dual_cone(make_cone(gens), require_pointed=True)
        ell = pic.project_free(pullback(sub, rep.heights.coeffs))
        assert exp_integral_cone(dual, ell, apex_last=False) == exp_integral_cone(
            dual, ell, apex_last=True
        )
    _line(
        5,
        True,
        "vanishing sums (600 divisors), big-nef rank, index two-way equality, "
        "cone-sum identity, branch equality, triangulation independence: all exact",
    )


def test_criterion_6_p1_campana_2_2():
    t0 = time.time()
    rep = _report("p1-campana-2-2")
    assert rep.a == 1
    assert rep.b == 1
    assert rep.gamma_circle == ((0, 2), (2, 0))
    assert rep.pic_circle.torsion_order() == 2
    assert rep.alpha_const == Fraction(1, 4)
    c_gen, _, _, _ = c_inf_general(rep)
    assert c_gen == c_inf_adjoint_rigid(rep.pair.fan, rep.rep_divisor) == 8
    cr = leading_constant(rep, s_level=1, prime_limit=10 ** 6)
    assert cr.exact_prefactor == 2
    schedule = [10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6]
    counts, _ = count_points_schedule(rep.pair, rep.heights, 1, schedule)
    c_val = float(cr.leading)
    ratios = [counts[i] / (c_val * b) for i, b in enumerate(schedule)]
    final_ok = abs(ratios[-1] - 1) < 0.15
    # trend stability: the deficit 1 - ratio shrinks monotonically
    deficits = [abs(1 - r) for r in ratios]
    trend_ok = all(a > b for a, b in zip(deficits, deficits[1:]))
    elapsed = time.time() - t0
    ok = final_ok and trend_ok and elapsed < 120
    _line(
        6,
        ok,
        f"a=1 b=1 circle={{(2,0),(0,2)}} torsion=2 alpha=1/4 C_inf=8; "
        f"ratios={[f'{r:.3f}' for r in ratios]}, {elapsed:.1f}s",
    )


def test_criterion_7_rigidity_classes():
    rep_wc = _report("p2-weak-campana-2")
    pair_gm, coeffs_gm, _ = preset("p1-gm-integral")
    rep_gm = invariant_report(
        pair_gm, height_system(pair_gm.fan, coeffs_gm), require_quasi_proper=False
    )
    oks = [rep_wc.rigidity == ADJOINT_RIGID, rep_gm.rigidity == TORIC_ADJOINT_RIGID_ONLY]
    hz = []
    for d in (1, 2, 3):
        rep_h = _report("hirzebruch-d-integral", d=d)
        hz.append(rep_h.rigidity)
        oks.append(rep_h.rigidity != ADJOINT_RIGID)
    _line(
        7,
        all(oks),
        f"weak-campana plane: {rep_wc.rigidity}; Gm in P1: {rep_gm.rigidity}; "
        f"Hirzebruch d=1,2,3: {hz}",
    )


def test_criterion_8_volume_monte_carlo():
    rep = _report("p1-full")
    results = []
    ok = True
    for B in (25.0, 200.0):
        est, se = volume_DB_estimate(rep, B, samples=10 ** 5, seed=7)
        want = (B - 1) ** 2
        ok = ok and abs(est - want) <= 3 * se
        results.append(f"B={B:g}: est={est:.1f} exact={want:.1f} se={se:.1f}")
    _line(8, ok, "; ".join(results))
