"""Multiplicity sets: subsets of N^n containing the origin.

Built-in kinds
--------------
- full:          all of N^n
- campana:       per-coordinate thresholds w_i (m_i = 0 or m_i >= w_i);
                 w_i = None means the coordinate is forced to 0
- weak_campana:  a total threshold on a support set
                 (m = 0, or supp(m) inside the support set and
                  sum over the support >= total)
- darmon:        per-coordinate divisibility d_i | m_i
- integral:      coordinates in a given index set forced to 0, the rest free
- custom:        the monoid generated by a finite list

The reduced set M_red keeps the vectors whose support spans a cone of the
fan (orbit-cone correspondence: that is exactly when the corresponding
divisors meet).  Minimal elements and generating sets have per-kind closed
forms; completeness arguments are noted inline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFinitelyGenerated, PreconditionViolated
from .fan import Fan, fan_faces, spans_cone

FULL = "full"
CAMPANA = "campana"
WEAK_CAMPANA = "weak_campana"
DARMON = "darmon"
INTEGRAL = "integral"
CUSTOM = "custom"


@dataclass(frozen=True)
class MultiplicitySet:
    kind: str
    n: int
    weights: tuple | None = None      # campana: per-coordinate, None entry = infinity
    total: int | None = None          # weak_campana threshold
    support: tuple | None = None      # weak_campana support indices
    moduli: tuple | None = None       # darmon
    zero_set: tuple | None = None     # integral
    gens: tuple | None = None         # custom

    def describe(self) -> str:
        if self.kind == FULL:
            return "full"
        if self.kind == CAMPANA:
            w = ",".join("inf" if x is None else str(x) for x in self.weights)
            return f"campana({w})"
        if self.kind == WEAK_CAMPANA:
            return f"weak-campana(total={self.total}, support={list(self.support)})"
        if self.kind == DARMON:
            return f"darmon({list(self.moduli)})"
        if self.kind == INTEGRAL:
            return f"integral(zero={list(self.zero_set)})"
        return f"custom({list(self.gens)})"


def full_set(n: int) -> MultiplicitySet:
    return MultiplicitySet(FULL, n)


def campana(weights) -> MultiplicitySet:
    weights = tuple(None if w is None else int(w) for w in weights)
    if any(w is not None and w < 1 for w in weights):
        raise PreconditionViolated("campana weights must be positive or None")
    return MultiplicitySet(CAMPANA, len(weights), weights=weights)


def weak_campana(n: int, total: int, support=None) -> MultiplicitySet:
    if support is None:
        support = tuple(range(n))
    if total < 1:
        raise PreconditionViolated("weak campana total must be positive")
    return MultiplicitySet(WEAK_CAMPANA, n, total=int(total), support=tuple(sorted(support)))


def darmon(moduli) -> MultiplicitySet:
    moduli = tuple(int(d) for d in moduli)
    if any(d < 1 for d in moduli):
        raise PreconditionViolated("darmon moduli must be positive")
    return MultiplicitySet(DARMON, len(moduli), moduli=moduli)


def integral(n: int, zero_set=None) -> MultiplicitySet:
    if zero_set is None:
        zero_set = tuple(range(n))
    return MultiplicitySet(INTEGRAL, n, zero_set=tuple(sorted(zero_set)))


def custom(n: int, gens) -> MultiplicitySet:
    gens = tuple(sorted({tuple(int(x) for x in g) for g in gens if any(g)}))
    for g in gens:
        if len(g) != n or any(x < 0 for x in g):
            raise PreconditionViolated(f"bad custom generator {g}")
    return MultiplicitySet(CUSTOM, n, gens=gens)


def contains(mset: MultiplicitySet, m) -> bool:
    """Exact membership of a multiplicity vector."""
    m = tuple(int(x) for x in m)
    if len(m) != mset.n:
        raise PreconditionViolated("length mismatch")
    if any(x < 0 for x in m):
        return False
    if all(x == 0 for x in m):
        return True
    if mset.kind == FULL:
        return True
    if mset.kind == CAMPANA:
        return all(
            x == 0 or (w is not None and x >= w) for x, w in zip(m, mset.weights)
        )
    if mset.kind == WEAK_CAMPANA:
        supp = set(mset.support)
        if any(x > 0 for i, x in enumerate(m) if i not in supp):
            return False
        return sum(m[i] for i in mset.support) >= mset.total
    if mset.kind == DARMON:
        return all(x % d == 0 for x, d in zip(m, mset.moduli))
    if mset.kind == INTEGRAL:
        return all(m[i] == 0 for i in mset.zero_set)
    # custom: bounded search for an N-combination of the generators
    return _custom_member(mset.gens, m)


def _custom_member(gens, m) -> bool:
    target = tuple(m)
    memo = {tuple([0] * len(m)): True}

    def rec(v):
        if v in memo:
            return memo[v]
        ok = False
        for g in gens:
            w = tuple(a - b for a, b in zip(v, g))
            if all(x >= 0 for x in w) and rec(w):
                ok = True
                break
        memo[v] = ok
        return ok

    return rec(target)


def reduced_contains(f: Fan, mset: MultiplicitySet, m) -> bool:
    """Membership in M_red: in the set, and the rays supporting m span a
    cone of the fan (equivalently the corresponding divisors intersect)."""
    if not contains(mset, m):
        return False
    support = frozenset(i for i, x in enumerate(m) if x > 0)
    return spans_cone(f, support)


def _axis_has_multiple(mset: MultiplicitySet, i: int) -> bool:
    """Whether some positive multiple of e_i lies in the set."""
    if mset.kind == FULL:
        return True
    if mset.kind == CAMPANA:
        return mset.weights[i] is not None
    if mset.kind == WEAK_CAMPANA:
        return i in mset.support
    if mset.kind == DARMON:
        return True
    if mset.kind == INTEGRAL:
        return i not in mset.zero_set
    return any(all(x == 0 for j, x in enumerate(g) if j != i) and g[i] > 0 for g in mset.gens)


def axes_without_multiples(mset: MultiplicitySet) -> tuple:
    return tuple(i for i in range(mset.n) if not _axis_has_multiple(mset, i))


def _face_supports(f: Fan, allowed=None):
    faces = [set(face) for face in fan_faces(f)]
    if allowed is not None:
        allowed = set(allowed)
        faces = [s for s in faces if s <= allowed]
    return sorted(tuple(sorted(s)) for s in faces)


def _compositions(total, parts):
    """All ways to write ``total`` as an ordered sum of ``parts`` positive
    integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def minimal_reduced_elements(f: Fan, mset: MultiplicitySet) -> list:
    """The componentwise-minimal elements of M_red minus the origin.

    Completeness: for a monoid M generated by G, every element of
    M_red dominates a generator with the same or smaller support, and
    subsets of cone-spanning supports span cones, so the minimal elements
    are the componentwise-minimal face-supported generators.  The closed
    forms below instantiate that argument per kind.
    """
    n = mset.n
    out = []
    if mset.kind == FULL:
        out = [_axis(n, i, 1) for i in range(n)]
    elif mset.kind == CAMPANA:
        out = [_axis(n, i, w) for i, w in enumerate(mset.weights) if w is not None]
    elif mset.kind == WEAK_CAMPANA:
        # minimal elements have total exactly the threshold: any heavier
        # vector can shed mass one coordinate at a time without leaving the
        # set or enlarging the support
        for supp in _face_supports(f, allowed=mset.support):
            if not supp or len(supp) > mset.total:
                continue
            for comp in _compositions(mset.total, len(supp)):
                v = [0] * n
                for i, c in zip(supp, comp):
                    v[i] = c
                out.append(tuple(v))
        return sorted(out)
    elif mset.kind == DARMON:
        out = [_axis(n, i, d) for i, d in enumerate(mset.moduli)]
    elif mset.kind == INTEGRAL:
        out = [_axis(n, i, 1) for i in range(n) if i not in mset.zero_set]
    else:
        cand = [g for g in mset.gens if spans_cone(f, frozenset(i for i, x in enumerate(g) if x > 0))]
        out = _componentwise_minimal(cand)
        return sorted(out)
    out = [m for m in out if reduced_contains(f, mset, m)]
    return sorted(out)


def _axis(n, i, c):
    v = [0] * n
    v[i] = c
    return tuple(v)


def _componentwise_minimal(vecs):
    out = []
    for v in vecs:
        if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in vecs):
            out.append(v)
    return out


def generators(f: Fan, mset: MultiplicitySet) -> list:
    """A minimal generating set Gamma for M_red (the working divisor index
    set of the pair).

    Per-kind closed forms; each is finite by Dickson's lemma:

    - full:          the unit vectors (every reduced vector is a staircase
                     sum of units inside its own support)
    - campana:       per axis i the numerical semigroup {0} u [w_i, inf)
                     with minimal generators w_i .. 2 w_i - 1
    - weak_campana:  the reduced vectors of total exactly the threshold;
                     vectors of larger total in the generated monoid split
                     off such a piece, so this finite set serves as the
                     divisor index set of the pair
    - darmon:        d_i e_i per axis (semigroup d_i N)
    - integral:      unit vectors off the zero set
    - custom:        computed by bounded search; NotFinitelyGenerated when
                     the scan cannot certify completeness
    """
    n = mset.n
    if mset.kind == FULL:
        return sorted(
            m for m in (_axis(n, i, 1) for i in range(n)) if reduced_contains(f, mset, m)
        )
    if mset.kind == CAMPANA:
        out = []
        for i, w in enumerate(mset.weights):
            if w is None:
                continue
            if not spans_cone(f, frozenset([i])):
                continue
            for c in range(w, 2 * w):
                out.append(_axis(n, i, c))
        return sorted(out)
    if mset.kind == WEAK_CAMPANA:
        return minimal_reduced_elements(f, mset)
    if mset.kind == DARMON:
        return sorted(
            m
            for m in (_axis(n, i, d) for i, d in enumerate(mset.moduli))
            if reduced_contains(f, mset, m)
        )
    if mset.kind == INTEGRAL:
        return sorted(
            m
            for m in (_axis(n, i, 1) for i in range(n) if i not in mset.zero_set)
            if reduced_contains(f, mset, m)
        )
    return _custom_generators(f, mset)


def _custom_generators(f: Fan, mset: MultiplicitySet):
    # enumerate the generated monoid inside a box of coordinate sum <= bound,
    # then greedily keep elements not reachable as sums of kept ones whose
    # partial sums stay reduced
    maxpar = max((max(g) for g in mset.gens), default=1)
    bound = 4 * max(1, maxpar)
    elements = set()
    frontier = {tuple([0] * mset.n)}
    while frontier:
        new = set()
        for v in frontier:
            for g in mset.gens:
                w = tuple(a + b for a, b in zip(v, g))
                if sum(w) <= bound and w not in elements:
                    new.add(w)
        elements |= new
        frontier = new
    reduced = sorted(
        v for v in elements if any(v) and spans_cone(f, frozenset(i for i, x in enumerate(v) if x > 0))
    )
    reduced_set = set(reduced)
    kept: list = []

    def reachable(v):
        # can v be written as a sum of kept generators with reduced partials?
        seen = set()
        stack = [tuple([0] * mset.n)]
        while stack:
            cur = stack.pop()
            if cur == v:
                return True
            for g in kept:
                w = tuple(a + b for a, b in zip(cur, g))
                if (
                    all(x <= y for x, y in zip(w, v))
                    and w not in seen
                    and (w == v or w in reduced_set)
                ):
                    seen.add(w)
                    stack.append(w)
        return False

    for v in sorted(reduced, key=lambda x: (sum(x), x)):
        if not reachable(v):
            kept.append(v)
    max_gen_sum = max((sum(g) for g in mset.gens), default=1)
    if any(sum(v) > bound - max_gen_sum for v in kept):
        raise NotFinitelyGenerated(
            "generator scan reached the completeness bound; the custom set "
            "does not look finitely generated over the reduced locus"
        )
    return kept
