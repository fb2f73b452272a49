"""Exact rational linear programming.

Primal form used throughout:

    minimize    c . x
    subject to  A x >= b,   x_j >= 0 for j with nonneg[j]

solved by a two-phase tableau simplex over ``Fraction`` with Bland's rule
(termination guaranteed, no tolerances anywhere).  Problem sizes in this
package stay below ~30 constraints, so the dense tableau is fine.

A solved problem carries a dual certificate y with y >= 0, A^T y <= c on
the nonnegative variables (= c on free ones) and b . y = c . x*, so
optimality is checkable by exact arithmetic alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionViolated

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    objective: tuple          # length nvars
    constraints: tuple        # rows, each length nvars; meaning row . x >= rhs
    rhs: tuple
    nonneg: tuple             # bools, per variable


def make_lp(objective, constraints, rhs, nonneg=None) -> LPProblem:
    objective = tuple(Fraction(x) for x in objective)
    constraints = tuple(tuple(Fraction(x) for x in row) for row in constraints)
    rhs = tuple(Fraction(x) for x in rhs)
    if nonneg is None:
        nonneg = tuple(True for _ in objective)
    else:
        nonneg = tuple(bool(f) for f in nonneg)
    for row in constraints:
        assert len(row) == len(objective)
    assert len(rhs) == len(constraints)
    assert len(nonneg) == len(objective)
    return LPProblem(objective, constraints, rhs, nonneg)


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Fraction | None
    point: tuple | None
    dual: tuple | None        # one multiplier per constraint, when optimal

    def check_certificate(self, prob: LPProblem) -> bool:
        """Exact optimality check: feasibility, dual feasibility,
        equal objectives and complementary slackness."""
        if self.status != OPTIMAL:
            return False
        x, y = self.point, self.dual
        slacks = [
            sum(row[j] * x[j] for j in range(len(x))) - rhs
            for row, rhs in zip(prob.constraints, prob.rhs)
        ]
        if any(s < 0 for s in slacks):
            return False
        if any(prob.nonneg[j] and x[j] < 0 for j in range(len(x))):
            return False
        if any(yi < 0 for yi in y):
            return False
        # reduced costs: c_j - sum_i y_i A_ij
        red = [
            prob.objective[j] - sum(y[i] * prob.constraints[i][j] for i in range(len(y)))
            for j in range(len(x))
        ]
        for j, r in enumerate(red):
            if prob.nonneg[j]:
                if r < 0:
                    return False
                if x[j] != 0 and r != 0:
                    return False
            elif r != 0:
                return False
        if any(y[i] != 0 and slacks[i] != 0 for i in range(len(y))):
            return False
        dual_value = sum(y[i] * prob.rhs[i] for i in range(len(y)))
        return dual_value == self.value


def _simplex(tableau, basis, ncols):
    """Minimize row -1 of the tableau in place; Bland's rule.

    ``tableau`` rows: constraints then objective; columns: variables then rhs.
    Returns "optimal" or "unbounded".
    """
    nrows = len(tableau) - 1
    while True:
        obj = tableau[-1]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        # ratio test, Bland tie-break on smallest basis variable
        best = None
        for i in range(nrows):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]
                ):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        leave = best[1]
        piv = tableau[leave][enter]
        tableau[leave] = [x / piv for x in tableau[leave]]
        for i in range(len(tableau)):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[leave])]
        basis[leave] = enter


def lp_optimize(prob: LPProblem) -> LPSolution:
    """Solve the LP exactly.  Deterministic: two-phase simplex, Bland's rule
    over a fixed variable order, so reruns give the identical vertex."""
    nvars = len(prob.objective)
    ncons = len(prob.constraints)

    # columns: split free variables into x+ - x-, then surplus s_i (Ax - s = b),
    # then artificials.
    cols = []           # (kind, index, sign)
    for j in range(nvars):
        cols.append(("x", j, 1))
        if not prob.nonneg[j]:
            cols.append(("x", j, -1))
    nx = len(cols)
    for i in range(ncons):
        cols.append(("s", i, 1))
    nxs = len(cols)

    def row_coeff(i, col):
        kind, idx, sign = col
        if kind == "x":
            return sign * prob.constraints[i][idx]
        return Fraction(-1) if idx == i else Fraction(0)

    # rows with negative rhs are negated so that b >= 0 for phase 1
    rows = []
    for i in range(ncons):
        r = [row_coeff(i, c) for c in cols]
        rhs = prob.rhs[i]
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        rows.append((r, rhs))

    # phase 1: artificial basis
    tableau = []
    basis = []
    for i, (r, rhs) in enumerate(rows):
        art = [Fraction(1) if t == i else Fraction(0) for t in range(ncons)]
        tableau.append(r + art + [rhs])
        basis.append(nxs + i)
    total_cols = nxs + ncons
    phase1 = [Fraction(0)] * (total_cols + 1)
    for j in range(nxs, total_cols):
        phase1[j] = Fraction(1)
    tableau.append(phase1)
    # reduced costs over the artificial basis: c - sum of constraint rows
    for i in range(ncons):
        tableau[-1] = [x - y for x, y in zip(tableau[-1], tableau[i])]
    status = _simplex(tableau, basis, total_cols)
    assert status == OPTIMAL
    if tableau[-1][-1] != 0:
        return LPSolution(INFEASIBLE, None, None, None)

    # drive leftover artificial variables out of the basis when possible
    for i in range(ncons):
        if basis[i] >= nxs:
            enter = next((j for j in range(nxs) if tableau[i][j] != 0), None)
            if enter is None:
                continue  # redundant row
            piv = tableau[i][enter]
            tableau[i] = [x / piv for x in tableau[i]]
            for t in range(len(tableau)):
                if t != i and tableau[t][enter] != 0:
                    f = tableau[t][enter]
                    tableau[t] = [x - f * y for x, y in zip(tableau[t], tableau[i])]
            basis[i] = enter

    # phase 2
    obj = [Fraction(0)] * (total_cols + 1)
    for j, col in enumerate(cols):
        kind, idx, sign = col
        if kind == "x":
            obj[j] = sign * prob.objective[idx]
    for j in range(nxs, total_cols):
        obj[j] = Fraction(0)  # artificials stay at zero; keep their columns inert
    tableau[-1] = obj
    for i in range(ncons):
        if basis[i] < nxs and tableau[-1][basis[i]] != 0:
            f = tableau[-1][basis[i]]
            tableau[-1] = [x - f * y for x, y in zip(tableau[-1], tableau[i])]
    # forbid re-entering artificial columns
    status = _simplex(tableau, basis, nxs)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, None, None, None)

    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        if b < nxs:
            kind, idx, sign = cols[b]
            if kind == "x":
                x[idx] += sign * tableau[i][-1]
    value = sum(prob.objective[j] * x[j] for j in range(nvars))

    # Dual multipliers read off the surplus columns.  The reduced cost there
    # is 0 - y'.(-e_i) = y'_i for an unflipped row; for a flipped row both the
    # surplus sign and the multiplier sign flip, so in either orientation the
    # objective-row entry equals the dual of the original >= constraint.
    y = tuple(tableau[-1][nx + i] for i in range(ncons))
    return LPSolution(OPTIMAL, value, tuple(x), y)


def _pinned_face_problem(prob: LPProblem, value: Fraction) -> LPProblem:
    cons = list(prob.constraints) + [prob.objective, tuple(-c for c in prob.objective)]
    rhs = list(prob.rhs) + [value, -value]
    return LPProblem(prob.objective, tuple(cons), tuple(rhs), prob.nonneg)


def lp_max_over_optimal_face(prob: LPProblem, g) -> Fraction:
    """Maximum of the linear functional ``g`` over the optimal face of
    ``prob``: a second LP with the optimal value pinned as an equality."""
    base = lp_optimize(prob)
    if base.status != OPTIMAL:
        raise PreconditionViolated(f"LP is {base.status}; optimal face undefined")
    face = _pinned_face_problem(prob, base.value)
    sol = lp_optimize(
        LPProblem(tuple(-Fraction(x) for x in g), face.constraints, face.rhs, face.nonneg)
    )
    if sol.status != OPTIMAL:
        raise PreconditionViolated(f"face LP is {sol.status}")
    return -sol.value


def optimal_face_vertices(prob: LPProblem, objectives) -> list:
    """Distinct optimal-face vertices obtained by optimizing each functional
    in ``objectives`` (and its negation) over the optimal face."""
    base = lp_optimize(prob)
    if base.status != OPTIMAL:
        raise PreconditionViolated(f"LP is {base.status}")
    face = _pinned_face_problem(prob, base.value)
    seen = {}
    seen[base.point] = True
    for g in objectives:
        for sign in (1, -1):
            obj = tuple(sign * Fraction(x) for x in g)
            sol = lp_optimize(LPProblem(obj, face.constraints, face.rhs, face.nonneg))
            if sol.status == OPTIMAL:
                seen[sol.point] = True
    return list(seen.keys())
