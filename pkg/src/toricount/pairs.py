"""Toric pairs: a smooth complete fan together with a multiplicity set.

The divisor group of the pair is indexed by the generating set Gamma of the
reduced multiplicity set; the Picard group of the pair is the cokernel of
the character map

    mu  |->  ( <mu, phi(m)> )_{m in Gamma},

computed by Smith normal form.  Derived pairs (the rigid subpair, closures,
per-cone enlargements) share the fan and carry an explicit Gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import multiplicity as mult
from .errors import NotQuasiProper, PreconditionViolated
from .fan import Fan, HeightSystem, phi
from .lp import OPTIMAL, lp_optimize, make_lp
from .ratlin import SmithDecomposition, smith_normal_form


@dataclass(frozen=True)
class ToricPair:
    fan: Fan
    mset: mult.MultiplicitySet | None
    gamma: tuple              # generating multiplicity vectors, sorted
    minimal: tuple            # componentwise-minimal reduced vectors, sorted

    @property
    def n(self) -> int:
        return self.fan.nrays

    def describe(self) -> str:
        tag = self.mset.describe() if self.mset is not None else f"gamma={list(self.gamma)}"
        return f"pair(dim={self.fan.dim}, rays={self.fan.nrays}, {tag})"


def make_pair(f: Fan, mset: mult.MultiplicitySet) -> ToricPair:
    if mset.n != f.nrays:
        raise PreconditionViolated("multiplicity length must match ray count")
    gamma = tuple(mult.generators(f, mset))
    minimal = tuple(mult.minimal_reduced_elements(f, mset))
    return ToricPair(f, mset, gamma, minimal)


def pair_from_gamma(f: Fan, gamma) -> ToricPair:
    """Derived pair whose multiplicity set is {0} together with the given
    generators (used for the rigid subpair and per-cone enlargements)."""
    gamma = tuple(sorted(tuple(int(x) for x in m) for m in gamma))
    minimal = tuple(sorted(_componentwise_minimal(gamma)))
    return ToricPair(f, None, gamma, minimal)


def _componentwise_minimal(vecs):
    return [
        v
        for v in vecs
        if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in vecs)
    ]


def pullback(pair: ToricPair, coeffs) -> tuple:
    """Coefficients of pr* (sum a_i D_i) on the pair's divisors: the entry
    at a generator m is a_m = sum_i a_i m_i."""
    coeffs = [Fraction(x) for x in coeffs]
    return tuple(sum(c * x for c, x in zip(coeffs, m)) for m in pair.gamma)


def anticanonical(pair: ToricPair) -> tuple:
    """The distinguished representative of the canonical class, negated:
    coefficient -1 on every generator divisor."""
    return tuple(Fraction(-1) for _ in pair.gamma)


@dataclass(frozen=True)
class PairPicard:
    rank: int
    invariant_factors: tuple      # torsion factors > 1
    presentation: tuple           # |Gamma| x dim integer matrix, rows phi(m)
    snf: SmithDecomposition
    finite_index_lattice: bool    # whether the phi(m) span the ambient lattice over Q

    def torsion_order(self) -> int:
        t = 1
        for d in self.invariant_factors:
            t *= d
        return t

    def project_free(self, vec):
        """Image of a divisor coefficient vector in the free quotient."""
        proj = self.snf.free_projection()
        return tuple(sum(Fraction(r[j]) * Fraction(vec[j]) for j in range(len(vec))) for r in proj)


def pair_picard(pair: ToricPair) -> PairPicard:
    rows = [list(phi(m, pair.fan)) for m in pair.gamma]
    if not rows:
        return PairPicard(0, (), (), smith_normal_form([]), False)
    snf = smith_normal_form(rows)
    return PairPicard(
        rank=snf.coker_rank(),
        invariant_factors=snf.torsion_factors(),
        presentation=tuple(tuple(r) for r in rows),
        snf=snf,
        finite_index_lattice=(snf.rank == pair.fan.dim),
    )


def fujita_lp(pair: ToricPair, h: HeightSystem):
    """The linear program computing the Fujita invariant: minimize the total
    of alpha over the maximal cones subject to l_m(alpha) >= 1 for every
    componentwise-minimal reduced m (dominated vectors satisfy their
    constraints automatically since all l^(i)(alpha) >= 0 for nef input)."""
    k = len(pair.fan.max_cones)
    cons = [h.l_form(m) for m in pair.minimal]
    rhs = [Fraction(1)] * len(cons)
    return make_lp([1] * k, cons, rhs)


def lp_fujita_value(pair: ToricPair, h: HeightSystem) -> Fraction:
    sol = lp_optimize(fujita_lp(pair, h))
    if sol.status != OPTIMAL:
        raise PreconditionViolated(f"Fujita LP is {sol.status}")
    return sol.value


def _closure_gamma(pair: ToricPair, d: int):
    axes = (
        mult.axes_without_multiples(pair.mset)
        if pair.mset is not None
        else tuple(
            i
            for i in range(pair.n)
            if not any(all(x == 0 for j, x in enumerate(m) if j != i) and m[i] > 0 for m in pair.gamma)
        )
    )
    extra = []
    for i in axes:
        v = [0] * pair.n
        v[i] = d
        extra.append(tuple(v))
    return axes, extra


def quasi_proper_closure(pair: ToricPair, h: HeightSystem, max_doublings: int = 10):
    """The proper pair obtained by adjoining d*e_i on every axis without a
    multiple, with d doubled until the Fujita invariant stabilises across
    two consecutive doublings and agrees with the pair's own LP value.

    Returns (closure_pair, d).  Raises NotQuasiProper when the invariant
    keeps moving (then the pair is rejected for counting with this height).
    """
    axes, _ = _closure_gamma(pair, 1)
    if not axes:
        return pair, None
    base_entries = [x for m in list(pair.gamma) + list(pair.minimal) for x in m]
    d = 2 * max(base_entries + [1])
    own = lp_fujita_value(pair, h)

    def closure_pair(dv):
        _, extra = _closure_gamma(pair, dv)
        return pair_from_gamma(pair.fan, list(pair.gamma) + extra)

    prev_val = None
    for _ in range(max_doublings + 1):
        cp = closure_pair(d)
        val = lp_fujita_value(cp, h)
        if prev_val is not None and val == prev_val:
            if val != own:
                raise NotQuasiProper(
                    f"closure Fujita invariant stabilises at {val} but the pair's "
                    f"own program gives {own}"
                )
            return cp, d
        prev_val = val
        d *= 2
    raise NotQuasiProper(
        f"Fujita invariant of the axis closure did not stabilise within "
        f"{max_doublings} doublings (last value {prev_val})"
    )
