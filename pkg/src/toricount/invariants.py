"""Fujita invariant, rigid subpair, b-invariant, rigidity class, alpha.

The pipeline for a pair (X, M) and a big nef height system:

1. solve the Fujita program (minimize total alpha with l_m(alpha) >= 1 on
   the minimal reduced vectors); the optimum is the Fujita invariant a;
2. pick a relative-interior optimal point (barycenter of a vertex
   collection), so every coordinate and every l^(i) is strictly positive;
   the induced divisor D = sum_j alpha_j L(sigma_j) represents a*L and its
   adjoint coefficients are l_m(alpha) - 1 >= 0;
3. the rigid index set Gamma_circle keeps the minimal m whose constraint is
   tight on the whole optimal face (max of l_m over the face equals 1);
4. b = rank Pic of the subpair on Gamma_circle, computed twice (rational
   rank and Smith form) and asserted equal;
5. rigidity: adjoint rigid iff every coordinate form l^(i) lies in the span
   of {l_m : m in Gamma_circle}; toric adjoint rigid iff the l_m of every
   monoid generator of M does;
6. alpha-constant: exponential integral over the dual of the effective cone
   of the subpair, in the lattice normalization of the free quotient of its
   Picard group, divided by the torsion order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import multiplicity as mult
from .cones import dual_cone, exp_integral_cone, make_cone
from .errors import DivergentAlpha, NonPositiveAlpha, PreconditionViolated
from .fan import HeightSystem, is_big_given_nef, is_nef
from .lp import OPTIMAL, lp_max_over_optimal_face, lp_optimize, optimal_face_vertices
from .pairs import (
    PairPicard,
    ToricPair,
    fujita_lp,
    pair_from_gamma,
    pair_picard,
    pullback,
    quasi_proper_closure,
)
from .ratlin import in_row_span, mat_rank

ADJOINT_RIGID = "AdjointRigid"
TORIC_ADJOINT_RIGID_ONLY = "ToricAdjointRigidOnly"
NOT_RIGID = "NotRigid"


@dataclass(frozen=True)
class InvariantReport:
    pair: ToricPair
    heights: HeightSystem
    a: Fraction
    alpha_vec: tuple            # relative-interior optimal point, length k
    rep_divisor: tuple          # coefficients of the representative of a*L
    gamma_circle: tuple
    b: int
    rigidity: str
    alpha_const: Fraction | None
    pic_circle: PairPicard
    quasi_proper: bool
    closure_d: int | None

    @property
    def subpair(self) -> ToricPair:
        return pair_from_gamma(self.pair.fan, self.gamma_circle)


def monoid_generators_of_mset(pair: ToricPair) -> list:
    """Monoid generators of the full multiplicity set (not of M_red); these
    index the linear forms whose span membership decides toric adjoint
    rigidity."""
    mset = pair.mset
    n = pair.n
    if mset is None:
        return list(pair.gamma)
    if mset.kind == mult.FULL:
        return [mult._axis(n, i, 1) for i in range(n)]
    if mset.kind == mult.CAMPANA:
        out = []
        for i, w in enumerate(mset.weights):
            if w is None:
                continue
            out.extend(mult._axis(n, i, c) for c in range(w, 2 * w))
        return out
    if mset.kind == mult.WEAK_CAMPANA:
        # all vectors supported on the support set with total in
        # [threshold, 2*threshold): heavier vectors split off one such piece
        out = []
        supp = list(mset.support)
        for total in range(mset.total, 2 * mset.total):
            for k in range(1, min(len(supp), total) + 1):
                from itertools import combinations

                for chosen in combinations(supp, k):
                    for comp in mult._compositions(total, k):
                        v = [0] * n
                        for i, c in zip(chosen, comp):
                            v[i] = c
                        out.append(tuple(v))
        return out
    if mset.kind == mult.DARMON:
        return [mult._axis(n, i, d) for i, d in enumerate(mset.moduli)]
    if mset.kind == mult.INTEGRAL:
        return [mult._axis(n, i, 1) for i in range(n) if i not in mset.zero_set]
    return list(mset.gens)


def fujita_a(pair: ToricPair, h: HeightSystem):
    """Fujita invariant and a strictly positive relative-interior optimal
    point of the Fujita program.

    The returned point is the barycenter of the vertices found by pushing
    every coordinate and every minimal-element form across the optimal
    face, so each constraint that can be slack somewhere on the face is
    slack at the returned point.
    """
    prob = fujita_lp(pair, h)
    sol = lp_optimize(prob)
    if sol.status != OPTIMAL:
        raise PreconditionViolated(f"Fujita program is {sol.status}")
    k = len(pair.fan.max_cones)
    objectives = [tuple(1 if t == j else 0 for t in range(k)) for j in range(k)]
    objectives += [h.l_form(m) for m in pair.minimal]
    vertices = optimal_face_vertices(prob, objectives)
    nv = len(vertices)
    abar = tuple(sum(v[j] for v in vertices) / nv for j in range(k))
    return sol.value, abar, vertices


def m_circle(pair: ToricPair, h: HeightSystem) -> tuple:
    """Minimal reduced vectors whose constraint is tight on the entire
    optimal face (coefficient zero in the adjoint divisor for every optimal
    choice).  Only minimal vectors can qualify: anything strictly larger
    has l_m > 1 at the strictly positive optimum."""
    prob = fujita_lp(pair, h)
    out = []
    for m in pair.minimal:
        if lp_max_over_optimal_face(prob, h.l_form(m)) == 1:
            out.append(m)
    return tuple(out)


def b_invariant(pair: ToricPair, gamma_circle) -> tuple:
    """Rank of Pic of the subpair, computed two ways and asserted equal."""
    from .fan import phi

    sub = pair_from_gamma(pair.fan, gamma_circle)
    pic = pair_picard(sub)
    rows = [list(phi(m, pair.fan)) for m in gamma_circle]
    direct = len(gamma_circle) - mat_rank(rows)
    assert pic.rank == direct, "Smith rank and rational rank disagree"
    return pic.rank, pic


def rigidity_classify(pair: ToricPair, h: HeightSystem, gamma_circle, vertices) -> str:
    span = [list(h.l_form(m)) for m in gamma_circle]
    if all(in_row_span(span, list(row)) for row in h.matrix):
        return ADJOINT_RIGID
    gens = monoid_generators_of_mset(pair)
    if all(in_row_span(span, list(h.l_form(m))) for m in gens):
        # runtime confirmation that the a_m are well defined: every optimal
        # vertex must give the same value to every generator form
        for m in gens:
            form = h.l_form(m)
            vals = {sum(f * v[j] for j, f in enumerate(form)) for v in vertices}
            if len(vals) != 1:
                return NOT_RIGID
        return TORIC_ADJOINT_RIGID_ONLY
    return NOT_RIGID


def alpha_constant(subpair: ToricPair, pic: PairPicard, ell_coeffs) -> Fraction:
    """Exponential integral of exp(-<pr* L, x>) over the dual of the
    effective cone of the subpair, in the normalization of the dual of the
    free quotient lattice, divided by the Picard torsion order."""
    b = pic.rank
    if b == 0:
        return Fraction(1, pic.torsion_order())
    gens = []
    for t in range(len(subpair.gamma)):
        e = [0] * len(subpair.gamma)
        e[t] = 1
        v = pic.project_free(e)
        if any(x != 0 for x in v):
            gens.append(v)
    eff = make_cone(gens, ambient_dim=b)
    dual = dual_cone(eff, require_pointed=True)
    ell = pic.project_free(ell_coeffs)
    if any(sum(Fraction(x) * Fraction(y) for x, y in zip(ell, r)) <= 0 for r in dual.generators):
        raise DivergentAlpha(
            "pullback of L pairs nonpositively with a dual ray; the "
            "alpha-integral diverges"
        )
    integral = exp_integral_cone(dual, ell)
    return integral / pic.torsion_order()


def invariant_report(
    pair: ToricPair, h: HeightSystem, require_quasi_proper: bool = True
) -> InvariantReport:
    """Run the full invariant pipeline.

    With ``require_quasi_proper`` unset the quasi-properness failure is
    recorded in the report instead of raised, and the alpha-constant is
    suppressed; the rigidity class is still meaningful (it only involves
    the span tests).
    """
    if not is_nef(h):
        raise PreconditionViolated("height divisor is not nef")
    if not is_big_given_nef(h):
        raise PreconditionViolated("height divisor is not big")
    quasi_proper = True
    closure_d = None
    try:
        _, closure_d = quasi_proper_closure(pair, h)
    except Exception:
        quasi_proper = False
        if require_quasi_proper:
            raise
    a, abar, vertices = fujita_a(pair, h)
    rep = tuple(
        sum(abar[j] * h.matrix[i][j] for j in range(len(abar)))
        for i in range(pair.n)
    )
    if pair.minimal and any(x <= 0 for x in rep):
        raise NonPositiveAlpha(
            "no strictly positive representative of a*L on the optimal face; "
            "the divisor is not big or the pair is not quasi-proper"
        )
    gamma_circle = m_circle(pair, h)
    b, pic = b_invariant(pair, gamma_circle)
    rigidity = rigidity_classify(pair, h, gamma_circle, vertices)
    alpha = None
    if rigidity != NOT_RIGID and quasi_proper and gamma_circle:
        sub = pair_from_gamma(pair.fan, gamma_circle)
        alpha = alpha_constant(sub, pic, pullback(sub, h.coeffs))
    if rigidity == ADJOINT_RIGID and quasi_proper:
        # adjoint rigidity forces |Gamma_circle| = dim + b
        assert len(gamma_circle) == pair.fan.dim + b
    return InvariantReport(
        pair=pair,
        heights=h,
        a=a,
        alpha_vec=abar,
        rep_divisor=rep,
        gamma_circle=gamma_circle,
        b=b,
        rigidity=rigidity,
        alpha_const=alpha,
        pic_circle=pic,
        quasi_proper=quasi_proper,
        closure_d=closure_d,
    )
