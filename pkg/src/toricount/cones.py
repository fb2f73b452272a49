"""Rational polyhedral cones: duality, triangulation, exponential integrals.

Cones are stored by generating rays (primitive integer vectors).  The dual
cone is computed by incremental double description: halfspaces <g, .> >= 0
are inserted one at a time while a (lineality basis, ray list) pair is
maintained.  Dimensions in this package stay <= ~8, so the algebraic
adjacency test (a rank computation per candidate pair) is affordable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivergentIntegral, DualNotPointed, NotPointed
from .ratlin import det_int, dot, mat_rank, primitivize, solve_square


@dataclass(frozen=True)
class RatCone:
    ambient_dim: int
    generators: tuple         # primitive integer vectors, pairwise distinct
    facet_normals: tuple | None = None


def make_cone(generators, ambient_dim=None) -> RatCone:
    gens = []
    seen = set()
    for g in generators:
        if all(x == 0 for x in g):
            continue
        p = primitivize(g)
        if ambient_dim is None:
            ambient_dim = len(p)
        if p not in seen:
            seen.add(p)
            gens.append(p)
    if ambient_dim is None:
        raise ValueError("empty generator list needs explicit ambient_dim")
    return RatCone(ambient_dim, tuple(gens))


def _dedup(rays):
    out, seen = [], set()
    for r in rays:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def _adjacent(r1, r2, inserted, lineality_dim, dim):
    # Rays of the intermediate cone are adjacent iff the inserted halfspaces
    # active at both cut the space down to a 2-plane (modulo lineality).
    needed = dim - lineality_dim - 2
    if needed <= 0:
        return True
    active = [h for h in inserted if dot(h, r1) == 0 and dot(h, r2) == 0]
    return mat_rank(active) >= needed


def dual_cone(cone: RatCone, require_pointed: bool = False) -> RatCone:
    """Generators of {x : <g, x> >= 0 for every generator g of ``cone``}.

    When the generators span the ambient space the result is pointed and the
    returned rays are its extreme rays.  Otherwise the dual contains lines;
    they are returned as +-pairs of a lineality basis unless
    ``require_pointed`` is set, in which case DualNotPointed is raised
    (callers computing the alpha-integral need this, since the integral
    diverges over a line).
    """
    dim = cone.ambient_dim
    halfspaces = [tuple(int(x) for x in g) for g in cone.generators]

    # start from the whole space
    lineality = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays: list = []
    inserted: list = []

    for h in halfspaces:
        lin_vals = [dot(h, z) for z in lineality]
        if any(v != 0 for v in lin_vals):
            # split off a lineality direction with <h, z> > 0, project the rest
            k = next(i for i, v in enumerate(lin_vals) if v != 0)
            z, zval = lineality[k], lin_vals[k]
            if zval < 0:
                z, zval = tuple(-x for x in z), -zval
            new_lin = []
            for i, w in enumerate(lineality):
                if i != k:
                    c = Fraction(lin_vals[i], zval)
                    new_lin.append(primitivize([a - c * b for a, b in zip(w, z)]))
            new_rays = [z]
            for r in rays:
                c = Fraction(dot(h, r), zval)
                v = [a - c * b for a, b in zip(r, z)]
                if any(x != 0 for x in v):
                    new_rays.append(primitivize(v))
            lineality = new_lin
            rays = _dedup(new_rays)
        else:
            plus = [r for r in rays if dot(h, r) > 0]
            zero = [r for r in rays if dot(h, r) == 0]
            minus = [r for r in rays if dot(h, r) < 0]
            if minus:
                combos = []
                for rp in plus:
                    for rm in minus:
                        if _adjacent(rp, rm, inserted, len(lineality), dim):
                            a, b = dot(h, rp), -dot(h, rm)
                            v = [b * x + a * y for x, y in zip(rp, rm)]
                            if any(x != 0 for x in v):
                                combos.append(primitivize(v))
                rays = _dedup(plus + zero + combos)
        inserted.append(h)

    if lineality:
        if require_pointed:
            raise DualNotPointed(
                "dual cone contains a line (generators span a proper subspace)"
            )
        for z in lineality:
            rays.append(z)
            rays.append(tuple(-x for x in z))
    return RatCone(dim, tuple(sorted(_dedup(rays))), facet_normals=tuple(sorted(halfspaces)))


def is_pointed(cone: RatCone) -> bool:
    """No nontrivial nonnegative combination of generators vanishes."""
    from .lp import OPTIMAL, lp_optimize, make_lp

    gens = cone.generators
    if not gens:
        return True
    n = len(gens)
    cons, rhs = [], []
    for j in range(cone.ambient_dim):
        row = tuple(Fraction(g[j]) for g in gens)
        cons.append(row)
        rhs.append(Fraction(0))
        cons.append(tuple(-x for x in row))
        rhs.append(Fraction(0))
    cons.append(tuple(Fraction(1) for _ in gens))
    rhs.append(Fraction(1))
    sol = lp_optimize(make_lp([0] * n, cons, rhs))
    return sol.status != OPTIMAL


def _span_basis(rays):
    basis, rows = [], []
    for r in rays:
        if mat_rank(rows + [list(r)]) > len(basis):
            basis.append(tuple(r))
            rows.append(list(r))
    return basis


def _coords_in_basis(v, basis):
    # exact coordinates via the Gram system (positive definite on the span)
    gram = [[Fraction(dot(bi, bj)) for bj in basis] for bi in basis]
    rhs = [Fraction(dot(bi, v)) for bi in basis]
    return solve_square(gram, rhs)


def _dual_basis(basis):
    gram = [[Fraction(dot(bi, bj)) for bj in basis] for bi in basis]
    out = []
    for i in range(len(basis)):
        c = solve_square(gram, [Fraction(1 if t == i else 0) for t in range(len(basis))])
        d = [Fraction(0)] * len(basis[0])
        for cj, b in zip(c, basis):
            d = [x + cj * y for x, y in zip(d, b)]
        out.append(d)
    return out


def facet_normals_in_span(rays, ambient_dim):
    """Facet normals of the pointed cone on ``rays``, as ambient vectors
    vanishing on each facet and nonnegative on the cone, computed inside the
    linear span of the rays."""
    basis = _span_basis(rays)
    coords = [_coords_in_basis(r, basis) for r in rays]
    sub = make_cone(coords, ambient_dim=len(basis))
    dual = dual_cone(sub, require_pointed=True)
    dual_b = _dual_basis(basis)
    normals = []
    for c in dual.generators:
        n = [Fraction(0)] * ambient_dim
        for cj, b in zip(c, dual_b):
            n = [x + cj * y for x, y in zip(n, b)]
        normals.append(primitivize(n))
    return normals


def extreme_rays(cone: RatCone) -> tuple:
    """Extreme rays of a pointed cone (drops redundant generators)."""
    gens = cone.generators
    if len(gens) <= 1:
        return gens
    if not is_pointed(cone):
        raise NotPointed("extreme rays are undefined for a non-pointed cone")
    k = mat_rank([list(g) for g in gens])
    normals = facet_normals_in_span(gens, cone.ambient_dim)
    out = []
    for g in gens:
        active = [n for n in normals if dot(n, g) == 0]
        if mat_rank(active) >= k - 1:
            out.append(g)
    return tuple(sorted(out))


def triangulate_cone(cone: RatCone, apex_last: bool = False) -> list:
    """Decompose a pointed cone into simplicial cones on its given rays.

    Apex-pulling triangulation on the extreme rays (every facet not
    containing the apex is triangulated recursively and coned off with the
    apex), followed by stellar insertion of any non-extreme generators in
    lexicographic order, so all supplied rays appear in the output.  The
    simplicial pieces have pairwise disjoint interiors and their union is
    the cone.  ``apex_last`` pulls from the lexicographically largest ray
    instead of the smallest, which yields a genuinely different
    triangulation on non-simplicial input (the integral tests rely on that).
    """
    rays = extreme_rays(cone)          # raises NotPointed when appropriate
    if not rays:
        return []
    sets = _triangulate_idx(tuple(range(len(rays))), rays, cone.ambient_dim, apex_last)
    simplices = [tuple(rays[i] for i in s) for s in sets]
    for r in sorted(set(cone.generators) - set(rays)):
        simplices = _stellar_insert(simplices, r)
    return [RatCone(cone.ambient_dim, s) for s in simplices]


def _stellar_insert(simplices, r):
    out = []
    for s in simplices:
        coords = _coords_in_basis(r, list(s))
        if any(c < 0 for c in coords):
            out.append(s)
            continue
        for i, c in enumerate(coords):
            if c > 0:
                out.append(tuple(v for j, v in enumerate(s) if j != i) + (r,))
    return out


def _triangulate_idx(indices, rays, ambient_dim, apex_last):
    sub = [rays[i] for i in indices]
    k = mat_rank([list(r) for r in sub])
    if len(indices) == k:
        return [tuple(indices)]
    apex = indices[-1] if apex_last else indices[0]
    out = []
    for n in facet_normals_in_span(sub, ambient_dim):
        if dot(n, rays[apex]) == 0:
            continue
        facet = tuple(i for i in indices if dot(n, rays[i]) == 0)
        for s in _triangulate_idx(facet, rays, ambient_dim, apex_last):
            out.append(s + (apex,))
    return out


def exp_integral_simplicial(generators, ell) -> Fraction:
    """Exact exponential integral over a full-dimensional simplicial cone.

    For linearly independent v_1..v_b spanning R^b and a linear form ell
    strictly positive on them, the integral of exp(-<ell, x>) over their
    cone equals |det(v_1..v_b)| / prod_i <ell, v_i>.
    """
    vs = [list(v) for v in generators]
    b = len(vs)
    if b == 0:
        return Fraction(1)
    if len(vs[0]) != b:
        raise ValueError("simplicial integral expects b vectors in R^b")
    pairings = [Fraction(dot(ell, v)) for v in vs]
    if any(p <= 0 for p in pairings):
        raise DivergentIntegral("ell is not strictly positive on the cone")
    d = abs(det_int(vs))
    if d == 0:
        raise ValueError("generators are linearly dependent")
    denom = Fraction(1)
    for p in pairings:
        denom *= p
    return Fraction(d) / denom


def exp_integral_cone(cone: RatCone, ell, apex_last: bool = False) -> Fraction:
    """Exponential integral over a pointed full-dimensional cone, by
    triangulating and summing the simplicial closed form.  The zero cone in
    R^0 integrates to 1 (point measure)."""
    if cone.ambient_dim == 0 or not cone.generators:
        return Fraction(1)
    total = Fraction(0)
    for simplex in triangulate_cone(cone, apex_last=apex_last):
        total += exp_integral_simplicial(simplex.generators, ell)
    return total
