"""Fans of smooth complete toric varieties and the toric height system.

A fan is stored by its ray generators (primitive integer vectors) and its
maximal cones (index sets into the rays).  Smoothness means every maximal
cone's rays form a Z-basis; completeness is checked combinatorially: every
facet of a maximal cone lies in exactly two maximal cones.

The height machinery attaches to a Q-divisor D = sum a_i D_i the Cartier
data mu_D(sigma) (the unique solution of <mu, n_rho> = a_rho over the rays
of sigma) and the matrix of linear forms

    l^(i)(e_j) = a_i - <mu_D(sigma_j), n_rho_i>,

whose column j, read as divisor coefficients, is the representative
L(sigma_j) of [D] supported away from sigma_j.  All entries are >= 0 iff D
is nef, and the per-cone monomials x^L(sigma_j) drive every height
computation downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import MalformedCone, NotComplete, NotSmooth, PreconditionViolated
from .ratlin import det_int, mat_rank, primitivize, solve_square


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple               # primitive integer vectors in Z^dim
    max_cones: tuple          # sorted tuples of ray indices

    @property
    def nrays(self) -> int:
        return len(self.rays)


def make_fan(dim, rays, max_cones) -> Fan:
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    max_cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
    return Fan(int(dim), rays, max_cones)


def validate_fan(f: Fan) -> Fan:
    """Check smoothness and completeness; returns the fan unchanged.

    Raises MalformedCone / NotSmooth / NotComplete.
    """
    for r in f.rays:
        if len(r) != f.dim:
            raise MalformedCone(f"ray {r} does not have length {f.dim}")
        if all(x == 0 for x in r):
            raise MalformedCone("zero ray")
        if primitivize(r) != tuple(r):
            raise MalformedCone(f"ray {r} is not primitive")
    if len(set(f.rays)) != len(f.rays):
        raise MalformedCone("rays are not pairwise distinct")
    if not f.max_cones:
        raise MalformedCone("no maximal cones")
    facet_count: dict = {}
    for cone in f.max_cones:
        if len(cone) != f.dim or len(set(cone)) != f.dim:
            raise MalformedCone(f"maximal cone {cone} does not have {f.dim} distinct rays")
        if any(i < 0 or i >= f.nrays for i in cone):
            raise MalformedCone(f"cone {cone} references a ray out of range")
        d = det_int([list(f.rays[i]) for i in cone])
        if abs(d) != 1:
            raise NotSmooth(f"cone {cone} has |det| = {abs(d)}, rays are not a Z-basis")
        for skip in range(f.dim):
            facet = tuple(x for t, x in enumerate(cone) if t != skip)
            facet_count[facet] = facet_count.get(facet, 0) + 1
    bad = {k: v for k, v in facet_count.items() if v != 2}
    if bad:
        raise NotComplete(f"facets not shared by exactly two maximal cones: {bad}")
    return f


def validate_simplicial_complete(f: Fan) -> Fan:
    """Like validate_fan but only requires simplicial cones (nonzero det)."""
    facet_count: dict = {}
    for cone in f.max_cones:
        if len(cone) != f.dim:
            raise MalformedCone(f"cone {cone} is not simplicial of full dimension")
        if det_int([list(f.rays[i]) for i in cone]) == 0:
            raise MalformedCone(f"cone {cone} has linearly dependent rays")
        for skip in range(f.dim):
            facet = tuple(x for t, x in enumerate(cone) if t != skip)
            facet_count[facet] = facet_count.get(facet, 0) + 1
    bad = {k: v for k, v in facet_count.items() if v != 2}
    if bad:
        raise NotComplete(f"facets not shared by exactly two maximal cones: {bad}")
    return f


@lru_cache(maxsize=None)
def fan_faces(f: Fan) -> frozenset:
    """All subsets of ray indices spanning a cone of the fan (the fan's
    underlying simplicial complex), as frozensets including the empty set."""
    faces = set()
    for cone in f.max_cones:
        idx = list(cone)
        for mask in range(1 << len(idx)):
            faces.add(frozenset(idx[t] for t in range(len(idx)) if mask >> t & 1))
    return frozenset(faces)


def spans_cone(f: Fan, support) -> bool:
    return frozenset(support) in fan_faces(f)


def phi(m, f: Fan):
    """Lattice point sum_i m_i * n_rho_i attached to a multiplicity vector."""
    return tuple(
        sum(int(m[i]) * f.rays[i][j] for i in range(f.nrays)) for j in range(f.dim)
    )


def cartier_data(f: Fan, coeffs, cone):
    """mu_D(sigma): the unique mu with <mu, n_rho> = a_rho for rho in sigma.

    The system is unimodular by smoothness, so the solution is exact; it
    makes l^(i)(e_j) vanish for rays contained in sigma_j.
    """
    a = [[f.rays[i][j] for j in range(f.dim)] for i in cone]
    b = [Fraction(coeffs[i]) for i in cone]
    return tuple(solve_square(a, b))


@dataclass(frozen=True)
class HeightSystem:
    fan: Fan
    coeffs: tuple             # divisor coefficients a_i, Fractions
    matrix: tuple             # n x k, entry (i,j) = l^(i)(e_j)
    cartier_points: tuple     # mu_D(sigma_j) per maximal cone

    @property
    def ncones(self) -> int:
        return len(self.fan.max_cones)

    def l_form(self, m) -> tuple:
        """The linear form l_m = sum_i m_i l^(i) as a vector over the cones."""
        k = self.ncones
        return tuple(
            sum(Fraction(m[i]) * self.matrix[i][j] for i in range(self.fan.nrays))
            for j in range(k)
        )

    def column_divisor(self, j) -> tuple:
        """Column j read as divisor coefficients: the representative
        L(sigma_j) of [D] supported away from sigma_j."""
        return tuple(self.matrix[i][j] for i in range(self.fan.nrays))


def height_system(f: Fan, coeffs) -> HeightSystem:
    coeffs = tuple(Fraction(x) for x in coeffs)
    if len(coeffs) != f.nrays:
        raise PreconditionViolated("one coefficient per ray required")
    mus = tuple(cartier_data(f, coeffs, c) for c in f.max_cones)
    matrix = tuple(
        tuple(
            coeffs[i] - sum(mu[t] * f.rays[i][t] for t in range(f.dim))
            for mu in mus
        )
        for i in range(f.nrays)
    )
    return HeightSystem(f, coeffs, matrix, mus)


def is_nef(h: HeightSystem) -> bool:
    return all(x >= 0 for row in h.matrix for x in row)


def is_big_given_nef(h: HeightSystem) -> bool:
    """Big (given nef) iff the height matrix has rank dim(X) + 1."""
    if not is_nef(h):
        raise PreconditionViolated("bigness test requires a nef divisor")
    return mat_rank([list(r) for r in h.matrix]) == h.fan.dim + 1


def cox_monomial_hat(f: Fan, cone) -> tuple:
    """Exponent vector of x^sigma-hat: 1 exactly at rays outside the cone."""
    inside = set(cone)
    return tuple(0 if i in inside else 1 for i in range(f.nrays))


def refine_fan(f: Fan, new_rays) -> Fan:
    """Iterated stellar subdivision at each new ray (primitivized, inserted
    in lexicographic order; rays already present are skipped).

    Input must be simplicial and complete; output is simplicial, complete,
    refines the input, and its rays are the input rays plus the new ones.
    Output cones need not be smooth.
    """
    rays = list(f.rays)
    cones = [tuple(c) for c in f.max_cones]
    to_add = sorted({primitivize(r) for r in new_rays if any(x != 0 for x in r)})
    if all(r in rays for r in to_add):
        return f
    for r in to_add:
        if r in rays:
            continue
        rays.append(r)
        ridx = len(rays) - 1
        new_cones = []
        for cone in cones:
            basis = [list(rays[i]) for i in cone]
            lam = solve_square([[basis[t][s] for t in range(f.dim)] for s in range(f.dim)], list(r))
            # lam are the coordinates of r in the cone's ray basis
            if any(x < 0 for x in lam):
                new_cones.append(cone)
                continue
            for t, x in enumerate(lam):
                if x > 0:
                    new_cones.append(tuple(sorted(set(cone) - {cone[t]} | {ridx})))
        cones = new_cones
    out = Fan(f.dim, tuple(rays), tuple(sorted(set(cones))))
    return validate_simplicial_complete(out)
