"""Local densities, Euler products, archimedean constants, leading constant.

The p-adic factor attached to a pair with rigid representative
D = sum a_i D_i (all a_i > 0) is

    C_p = (1 - 1/p)^g * sum over the reduced multiplicity set of p^(-a_m),

with g the size of the rigid index set, a_m = sum_i a_i m_i, and the sum
taken over N^n_red instead when p divides the level S.  For the built-in
multiplicity kinds the sum collapses into per-orthant geometric series over
the faces of the fan, giving an exact rational function in q = p^(-1/denom)
(denom clearing the denominators of the a_i).  The Euler product is
evaluated with mpmath at >= 80-bit precision and carries a rigorous tail
interval derived from |C_p - 1| <= K p^(-c) with explicit K and c.

The archimedean constant comes in two branches: the adjoint-rigid closed
form 2^dim * sum over maximal cones of prod 1/a_i, and the general (toric
adjoint rigid) cone sum 2^dim * sum I(sigma) C_inf(sigma) over the refined
fan of the rigid subpair, where I(sigma) is a lattice index (computed both
as a Smith-form quotient order and as a ray determinant, asserted equal)
and C_inf(sigma) couples a torsion ratio with a weighted simplex volume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from . import multiplicity as mult
from .cones import dual_cone, exp_integral_cone, is_pointed, make_cone
from .errors import (
    DivergentProduct,
    InfiniteIndex,
    NonSummable,
    OutsideRegion,
    PreconditionViolated,
)
from .fan import Fan, fan_faces, phi, refine_fan
from .invariants import ADJOINT_RIGID, NOT_RIGID, InvariantReport
from .pairs import ToricPair, pair_from_gamma, pair_picard, quasi_proper_closure
from .ratlin import det_int, primitivize, smith_normal_form

DEFAULT_PREC_BITS = 96


# ---------------------------------------------------------------------------
# polynomial helpers (dense lists of Fractions, index = degree)

def _p_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def p_add(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _p_trim(out)


def p_scale(a, c):
    return _p_trim([x * c for x in a])


def p_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _p_trim(out)


def p_pow(a, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = p_mul(out, a)
    return out


def p_eval(a, q):
    """Horner evaluation at an mpf point."""
    out = mpf(0)
    for c in reversed(a):
        out = out * q + mpf(c.numerator) / c.denominator
    return out


def _monomial(k):
    out = [Fraction(0)] * (k + 1)
    out[k] = Fraction(1)
    return out


@dataclass(frozen=True)
class ClosedForm:
    """C_p as an exact rational function: prefactor (1-q^denom)^g * num/den
    in q = p^(-1/denom)."""

    denom: int
    g: int
    num: tuple
    den: tuple

    def eval(self, p) -> mpf:
        q = 1 / mp.root(p, self.denom) if self.denom > 1 else mpf(1) / p
        pref = (1 - q ** self.denom) ** self.g
        return pref * p_eval(list(self.num), q) / p_eval(list(self.den), q)

    def describe(self) -> str:
        return (
            f"(1-p^-1)^{self.g} * N(q)/D(q), q = p^(-1/{self.denom}), "
            f"N = {[str(c) for c in self.num]}, D = {[str(c) for c in self.den]}"
        )


# ---------------------------------------------------------------------------
# density models

@dataclass(frozen=True)
class LocalDensity:
    p: int
    value: mpf
    tail_bound: mpf
    closed_form: ClosedForm | None = None


class DensityModel:
    """All per-prime data for a (pair, rigid representative, level) triple."""

    def __init__(
        self,
        pair: ToricPair,
        a_coeffs,
        s_level: int,
        g: int,
        gamma_circle,
        prec_bits: int = DEFAULT_PREC_BITS,
    ):
        if pair.mset is None:
            raise PreconditionViolated("density model needs a pair with a multiplicity set")
        self.pair = pair
        self.prec_bits = int(prec_bits)
        self.a = tuple(Fraction(x) for x in a_coeffs)
        if any(x <= 0 for x in self.a):
            raise NonSummable("all rigid coefficients must be positive")
        self.s_level = int(s_level)
        self.g = int(g)
        self.gamma_circle = tuple(gamma_circle)
        self.n = pair.n
        self.denom = 1
        for x in self.a:
            self.denom = self.denom * x.denominator // math.gcd(self.denom, x.denominator)
        # integer exponent of q for each coordinate: q_i = q^(k_i)
        self.k = [int(x * self.denom) for x in self.a]
        self.a_min = min(self.a)
        self.closed = self._closed_form(self.pair.mset)
        self.closed_s = self._closed_form(mult.full_set(self.n))
        self.s_primes = _prime_factors(self.s_level)

    # -- closed forms ------------------------------------------------------

    def _coordinate_series(self, mset, i):
        """Numerator/denominator of sum over nonzero admissible m_i of
        q_i^(m_i); None when the coordinate kind is not per-coordinate."""
        k = self.k[i]
        if mset.kind == mult.FULL:
            return _monomial(k), p_add(_monomial(0), p_scale(_monomial(k), -1))
        if mset.kind == mult.CAMPANA:
            w = mset.weights[i]
            if w is None:
                return [], [Fraction(1)]
            return _monomial(k * w), p_add(_monomial(0), p_scale(_monomial(k), -1))
        if mset.kind == mult.DARMON:
            d = mset.moduli[i]
            return _monomial(k * d), p_add(_monomial(0), p_scale(_monomial(k * d), -1))
        if mset.kind == mult.INTEGRAL:
            if i in mset.zero_set:
                return [], [Fraction(1)]
            return _monomial(k), p_add(_monomial(0), p_scale(_monomial(k), -1))
        return None

    def _closed_form(self, mset):
        faces = sorted(tuple(sorted(s)) for s in fan_faces(self.pair.fan))
        if mset.kind in (mult.FULL, mult.CAMPANA, mult.DARMON, mult.INTEGRAL):
            series = [self._coordinate_series(mset, i) for i in range(self.n)]
            dens = [s[1] for s in series]
            common = [Fraction(1)]
            for d in dens:
                common = p_mul(common, d)
            total = []
            for face in faces:
                term = [Fraction(1)]
                for i in range(self.n):
                    term = p_mul(term, series[i][0] if i in face else series[i][1])
                    if not term:
                        break
                total = p_add(total, term)
            return ClosedForm(self.denom, self.g, tuple(total), tuple(common))
        if mset.kind == mult.WEAK_CAMPANA:
            supp = set(mset.support)
            unit = p_add(_monomial(0), [])
            dens = [
                p_add(_monomial(0), p_scale(_monomial(self.k[i]), -1)) for i in range(self.n)
            ]
            common = [Fraction(1)]
            for d in dens:
                common = p_mul(common, d)
            total = []
            for face in faces:
                if not set(face) <= supp:
                    continue
                if not face:
                    # the origin alone
                    total = p_add(total, common)
                    continue
                # full product over the face minus the sub-threshold polynomial
                term = [Fraction(1)]
                for i in range(self.n):
                    term = p_mul(term, _monomial(self.k[i]) if i in face else dens[i])
                low = []
                for t in range(len(face), mset.total):
                    for comp in mult._compositions(t, len(face)):
                        mono = _monomial(sum(self.k[i] * c for i, c in zip(face, comp)))
                        low = p_add(low, mono)
                term = p_add(term, p_scale(p_mul(low, common), -1))
                total = p_add(total, term)
            return ClosedForm(self.denom, self.g, tuple(total), tuple(common))
        return None  # custom: truncated evaluation only

    # -- truncated evaluation ------------------------------------------------

    def _reduced_scan(self, mset, bound):
        """All m in M_red with coordinate sum <= bound (excluding 0)."""
        faces = fan_faces(self.pair.fan)
        out = []

        def rec(i, left, cur):
            if i == self.n:
                if any(cur):
                    m = tuple(cur)
                    if mult.contains(mset, m) and frozenset(
                        t for t, x in enumerate(m) if x > 0
                    ) in faces:
                        out.append(m)
                return
            for v in range(left + 1):
                cur.append(v)
                rec(i + 1, left - v, cur)
                cur.pop()

        rec(0, bound, [])
        return out

    def a_m(self, m) -> Fraction:
        return sum(self.a[i] * m[i] for i in range(self.n))

    def truncated_value(self, p, mset, bound) -> tuple:
        """(sum over the reduced set truncated at coordinate sum <= bound,
        rigorous tail bound for the rest)."""
        with mp.workprec(self.prec_bits):
            total = mpf(1)
            for m in self._reduced_scan(mset, bound):
                a = self.a_m(m)
                total += (mpf(1) / p) ** (mpf(a.numerator) / a.denominator)
            x = (mpf(1) / p) ** (mpf(self.a_min.numerator) / self.a_min.denominator)
            tail = _binomial_tail(bound, self.n, x)
            return total, tail

    # -- per-prime densities --------------------------------------------------

    def local_density(self, p: int, truncation: int = 40) -> LocalDensity:
        with mp.workprec(self.prec_bits):
            for_s = self.s_level % p == 0
            closed = self.closed_s if for_s else self.closed
            if closed is not None:
                val = closed.eval(p)
                return LocalDensity(p, val, abs(val) * mpf(2) ** (10 - mp.prec), closed)
            mset = mult.full_set(self.n) if for_s else self.pair.mset
            raw, tail = self.truncated_value(p, mset, truncation)
            pref = (1 - mpf(1) / p) ** self.g
            return LocalDensity(p, pref * raw, pref * tail)

    # -- Euler tail constants --------------------------------------------------

    def tail_data(self):
        """Data for the rigorous Euler tail bound.

        For p not dividing S,

            C_p - 1 = [(1-x)^g (1+gx) - 1] + (1-x)^g R_p,   x = 1/p,

        with R_p the reduced sum beyond the rigid part.  Vectors of
        coordinate sum above 2/a_min have a_m >= 2, so a scan up to that
        bound finds every exponent below 2 exactly.  Returns

            (c, low, kprime)

        where c = min(2, smallest exponent), ``low`` lists (with
        multiplicity) the exponents a_m < 2 of scanned vectors, and kprime
        bounds everything else: |C_p - 1| <= sum over low of p^(-a) +
        kprime * p^(-2).
        """
        g = self.g
        # E(x) = (1-x)^g (1+gx) - 1 has vanishing constant and linear terms;
        # |E(x)| <= K1 x^2 on x <= 1/2 with K1 the exact coefficient bound
        poly = p_mul(p_pow([Fraction(1), Fraction(-1)], g), [Fraction(1), Fraction(g)])
        poly[0] -= 1
        k1 = mpf(0)
        for j, cj in enumerate(poly):
            if j >= 2 and cj:
                k1 += abs(mpf(cj.numerator) / cj.denominator) * mpf(2) ** (2 - j)
        circle = set(self.gamma_circle)
        bound = 1
        while Fraction(bound) * self.a_min < 2:
            bound += 1
        low = []
        n2 = 0
        for m in self._reduced_scan(self.pair.mset, bound):
            if m in circle:
                continue
            a = self.a_m(m)
            if a < 2:
                low.append(a)
            else:
                n2 += 1
        # coordinate sums beyond the scan have a_m >= s a_min >= 2, and
        # p^(-s a_min) <= p^-2 2^(2 - s a_min) for p >= 2
        k2 = 4 * _binomial_tail(bound, self.n, mpf(2) ** (-self.a_min))
        c = min([Fraction(2)] + low)
        return c, sorted(low), k1 + n2 + k2


def _binomial_tail(bound, n, x) -> mpf:
    """Upper bound for sum over s > bound of binom(s+n-1, n-1) x^s, x in
    (0,1): sum terms while the ratio is above 1, then a geometric bound."""
    if x >= 1:
        raise NonSummable("binomial tail requires x < 1")
    s = bound + 1
    term = mpf(math.comb(s + n - 1, n - 1)) * x ** s
    total = mpf(0)
    while True:
        ratio = x * (s + n) / (s + 1)
        if ratio < mpf(99) / 100:
            total += term / (1 - ratio)
            return total * (1 + mpf(2) ** (-30))
        total += term
        s += 1
        term = term * x * (s + n - 1) / s


def _prime_factors(s: int):
    out = []
    s = abs(int(s))
    d = 2
    while d * d <= s:
        if s % d == 0:
            out.append(d)
            while s % d == 0:
                s //= d
        d += 1
    if s > 1:
        out.append(s)
    return tuple(out)


def sieve_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


@dataclass(frozen=True)
class EulerProduct:
    value: mpf
    lower: mpf
    upper: mpf
    prime_limit: int
    c: Fraction
    tail_constant: float


def _prime_sum_bound(a, P) -> mpf:
    """Rigorous upper bound for sum over primes p > P of p^(-a), a > 1:
    partial summation against pi(x) <= 1.25506 x / ln x gives
    1.25506 * a * P^(1-a) / ((a-1) ln P)."""
    af = mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mpf(a)
    return mpf("1.25506") * af * mpf(P) ** (1 - af) / ((af - 1) * mp.log(P))


def euler_product(
    model: DensityModel,
    prime_limit: int = 10 ** 6,
    threads: int = 1,
    prec_bits: int = DEFAULT_PREC_BITS,
) -> EulerProduct:
    """prod over p <= prime_limit of C_p, with a rigorous two-sided interval
    for the full product.

    |C_p - 1| <= sum over the finitely many exponents a < 2 of p^(-a)
    plus kprime p^(-2); |log(1+u)| <= 2|u| once |u| <= 1/2, and the prime
    sums are bounded through the Rosser-Schoenfeld inequality.
    """
    with mp.workprec(prec_bits):
        c, low, kprime = model.tail_data()
        if c <= 1:
            raise DivergentProduct(f"density exponent c = {c} <= 1")
        primes = sieve_primes(prime_limit)
        chunks = _chunk(primes, threads)
        if threads > 1 and len(chunks) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=threads) as ex:
                partials = list(
                    ex.map(_euler_chunk, [(model, ch, prec_bits) for ch in chunks])
                )
        else:
            partials = [_euler_chunk((model, ch, prec_bits)) for ch in chunks]
        prod = mpf(1)
        for x in partials:
            prod *= mpf(x)
        # primes dividing S beyond the sieve limit still contribute factors
        for p in model.s_primes:
            if p > prime_limit:
                prod *= model.local_density(int(p)).value
        P = prime_limit
        u_max = sum(mpf(P) ** (-(mpf(a.numerator) / a.denominator)) for a in low)
        u_max += kprime * mpf(P) ** (-2)
        if u_max > mpf(1) / 2:
            raise DivergentProduct("prime limit too small for the tail bound")
        tail_log = 2 * (
            sum(_prime_sum_bound(a, P) for a in low) + kprime * _prime_sum_bound(2, P)
        )
        round_slop = mpf(len(primes) + 4) * mpf(2) ** (8 - prec_bits)
        err = tail_log + round_slop
        return EulerProduct(
            value=prod,
            lower=prod * mp.exp(-err),
            upper=prod * mp.exp(err),
            prime_limit=prime_limit,
            c=c,
            tail_constant=float(kprime),
        )


_CHUNK = 20000


def _chunk(primes, threads):
    # fixed block size regardless of worker count, so the partial products
    # are multiplied in the same order and the result is bit-identical for
    # any number of threads
    return [primes[i : i + _CHUNK] for i in range(0, len(primes), _CHUNK)]


def _euler_chunk(arg):
    model, primes, prec_bits = arg
    with mp.workprec(prec_bits):
        prod = mpf(1)
        for p in primes:
            prod *= model.local_density(int(p)).value
        return prod


def zeta_series(n: int, terms: int = 4000, prec_bits: int = DEFAULT_PREC_BITS):
    """zeta(n) from its defining series with an Euler-Maclaurin remainder
    interval (independent of mpmath.zeta); returns (value, error_bound)."""
    with mp.workprec(prec_bits):
        s = mpf(0)
        for k in range(1, terms + 1):
            s += mpf(1) / mpf(k) ** n
        K = mpf(terms)
        corr = K ** (1 - n) / (n - 1) + K ** (-n) / 2 + n * K ** (-n - 1) / 12
        err = mpf(n * (n + 1) * (n + 2)) * K ** (-n - 3) / 720 + mpf(2) ** (8 - prec_bits)
        return s + corr, err


# ---------------------------------------------------------------------------
# archimedean constants

def c_inf_adjoint_rigid(f: Fan, a_coeffs) -> Fraction:
    """2^dim * sum over maximal cones of prod over rays in the cone of 1/a_i."""
    a = [Fraction(x) for x in a_coeffs]
    if any(x <= 0 for x in a):
        raise PreconditionViolated("adjoint-rigid archimedean constant needs a_i > 0")
    total = Fraction(0)
    for cone in f.max_cones:
        term = Fraction(1)
        for i in cone:
            term /= a[i]
        total += term
    return Fraction(2) ** f.dim * total


@dataclass(frozen=True)
class ConeContribution:
    ray_elements: tuple       # multiplicity vectors on the cone's rays
    index_det: int            # |det(phi(m_1), ..., phi(m_d))|
    index_snf: int            # order of Pic(X, M(sigma)) / <off-cone classes>
    torsion_ratio: Fraction
    z_volume_factorial: Fraction   # Volume(Z_sigma) * dim(Z_sigma)!
    z_dim: int
    unit_weight_differs: bool
    value: Fraction           # I(sigma) * C_inf(sigma)


def c_inf_general(report: InvariantReport):
    """General-branch archimedean constant 2^dim * sum I(sigma) C_inf(sigma)
    over the refined fan of the rigid subpair; returns (value, per-cone data,
    refined fan, element-by-ray map)."""
    pair = report.pair
    f = pair.fan
    sub = report.subpair
    closure, _ = quasi_proper_closure(sub, report.heights)
    gamma_bar = closure.gamma
    adjoined = tuple(sorted(set(gamma_bar) - set(sub.gamma)))

    ray_of = {}
    for m in gamma_bar:
        r = primitivize(phi(m, f))
        if r in ray_of and ray_of[r] != m:
            raise InfiniteIndex(
                f"two generators {ray_of[r]} and {m} lie on the same ray; the "
                "cone decomposition is ambiguous"
            )
        ray_of[r] = m
    refined = refine_fan(f, list(ray_of.keys()))
    missing = [r for r in refined.rays if r not in ray_of]
    if missing:
        raise InfiniteIndex(f"refined fan has rays without generators: {missing}")

    pic_circle = report.pic_circle
    tors_circle = pic_circle.torsion_order()
    a_coeffs = report.rep_divisor

    def a_m(m):
        return sum(Fraction(a_coeffs[i]) * m[i] for i in range(pair.n))

    contributions = []
    for cone in refined.max_cones:
        elems = tuple(ray_of[refined.rays[i]] for i in cone)
        idx_det = abs(det_int([list(phi(m, f)) for m in elems]))
        gamma_sigma = tuple(sorted(set(sub.gamma) | {m for m in elems if m in adjoined}))
        pic_sigma = pair_picard(pair_from_gamma(f, gamma_sigma))
        idx_snf = _quotient_order(f, gamma_sigma, set(elems))
        if idx_snf != idx_det:
            raise InfiniteIndex(
                f"index mismatch on cone {elems}: smith order {idx_snf}, "
                f"ray determinant {idx_det}"
            )
        ratio = Fraction(tors_circle, pic_sigma.torsion_order())
        in_sigma_adjoined = [m for m in elems if m in adjoined]
        zvf, zdim, differs = _z_volume_factorial(
            gamma_sigma, in_sigma_adjoined, pic_sigma, a_m
        )
        value = Fraction(idx_det) * ratio * zvf
        contributions.append(
            ConeContribution(
                ray_elements=elems,
                index_det=idx_det,
                index_snf=idx_snf,
                torsion_ratio=ratio,
                z_volume_factorial=zvf,
                z_dim=zdim,
                unit_weight_differs=differs,
                value=value,
            )
        )
    total = Fraction(2) ** f.dim * sum(c.value for c in contributions)
    return total, contributions, refined, ray_of


def _quotient_order(f: Fan, gamma_sigma, kill_set) -> int:
    """Order of Pic(X, M(sigma)) modulo the classes of generators whose ray
    lies outside the cone: cokernel of [characters | killed basis vectors]."""
    rows = []
    for m in gamma_sigma:
        row = list(phi(m, f))
        for mm in gamma_sigma:
            if mm not in kill_set:
                row.append(1 if mm == m else 0)
        rows.append(row)
    snf = smith_normal_form(rows)
    if snf.rank < len(gamma_sigma):
        raise InfiniteIndex("quotient by off-cone classes is infinite")
    order = 1
    for d in snf.invariant_factors:
        order *= d
    return order


def _z_volume_factorial(gamma_sigma, adjoined_in_sigma, pic_sigma, a_m):
    """Volume(Z_sigma) * dim(Z_sigma)! where Z_sigma is the weighted simplex
    of nonnegative functionals on the span of the adjoined classes, in the
    lattice normalization induced by the Picard dual.

    Computed as the exponential integral of the weight functional over the
    dual cone of the class vectors, inside saturated coordinates for their
    span (then the induced lattice is standard).  Classes that are torsion
    contribute nothing to the span.  Returns (value, dim, unit-weight flag).
    """
    if not adjoined_in_sigma:
        return Fraction(1), 0, False
    idx = {m: t for t, m in enumerate(gamma_sigma)}
    cols = []
    for m in adjoined_in_sigma:
        e = [0] * len(gamma_sigma)
        e[idx[m]] = 1
        cols.append([Fraction(x) for x in pic_sigma.project_free(e)])
    if all(all(x == 0 for x in col) for col in cols):
        return Fraction(1), 0, False
    # saturated basis of the span of the classes inside the free quotient:
    # SNF of the matrix whose columns are the class vectors
    b_sigma = pic_sigma.rank
    int_cols = [[int(c[i]) for i in range(b_sigma)] for c in cols]
    a = [[int_cols[j][i] for j in range(len(int_cols))] for i in range(b_sigma)]
    snf = smith_normal_form(a)
    e = snf.rank
    if e == 0:
        return Fraction(1), 0, False
    # U * class is supported on the first e coordinates; those are the
    # coordinates in the saturated basis (first e columns of U^-1)
    u = snf.left
    ts = []
    for col in int_cols:
        img = [sum(u[i][j] * col[j] for j in range(b_sigma)) for i in range(b_sigma)]
        assert all(x == 0 for x in img[e:]), "class outside the saturated span"
        ts.append(tuple(img[:e]))
    weights = [a_m(m) for m in adjoined_in_sigma]
    value = _truncated_cone_integral(ts, weights, e)
    unit = _truncated_cone_integral(ts, [Fraction(1)] * len(ts), e)
    return value, e, (unit != value)


def _truncated_cone_integral(ts, weights, e) -> Fraction:
    """Integral of exp(-<w, y>) over {y : <t_m, y> >= 0 for all m}, where
    w = sum weights_m t_m; equals Volume{y in cone : <w,y> <= 1} * e!.
    Zero when the constraint cone is lower-dimensional."""
    span_cone = make_cone([t for t in ts if any(t)], ambient_dim=e)
    if not is_pointed(span_cone):
        return Fraction(0)
    w = [Fraction(0)] * e
    for t, wt in zip(ts, weights):
        w = [x + wt * y for x, y in zip(w, t)]
    dual = dual_cone(span_cone, require_pointed=True)
    return exp_integral_cone(dual, w)


# ---------------------------------------------------------------------------
# the leading constant

ADJOINT_RIGID_FORMULA = "AdjointRigidFormula"
GENERAL_FORMULA = "GeneralFormula"


@dataclass(frozen=True)
class ConstantReport:
    invariants: InvariantReport
    branch: str
    c_inf: Fraction
    cone_data: tuple
    euler: EulerProduct
    leading: mpf
    leading_lower: mpf
    leading_upper: mpf
    s_level: int

    @property
    def exact_prefactor(self) -> Fraction:
        rep = self.invariants
        return (
            rep.alpha_const
            / (rep.a * math.factorial(rep.b - 1))
            * self.c_inf
        )


def density_model(report: InvariantReport, s_level: int) -> DensityModel:
    return DensityModel(
        report.pair,
        report.rep_divisor,
        s_level,
        len(report.gamma_circle),
        report.gamma_circle,
    )


def leading_constant(
    report: InvariantReport,
    s_level: int = 1,
    prime_limit: int = 10 ** 6,
    threads: int = 1,
    prec_bits: int = DEFAULT_PREC_BITS,
) -> ConstantReport:
    if report.rigidity == NOT_RIGID:
        raise PreconditionViolated(
            "leading constant undefined: the divisor is not toric adjoint rigid"
        )
    if report.rigidity != ADJOINT_RIGID and s_level != 1:
        raise PreconditionViolated(
            "toric-adjoint-rigid-only inputs require level S = 1"
        )
    if not report.quasi_proper:
        raise PreconditionViolated("pair is not quasi-proper for this divisor")
    c_general, cones, _, _ = c_inf_general(report)
    if report.rigidity == ADJOINT_RIGID:
        branch = ADJOINT_RIGID_FORMULA
        c_inf = c_inf_adjoint_rigid(report.pair.fan, report.rep_divisor)
        assert c_general == c_inf, (
            f"branch mismatch: general {c_general} vs adjoint-rigid {c_inf}"
        )
    else:
        branch = GENERAL_FORMULA
        c_inf = c_general
    model = density_model(report, s_level)
    ep = euler_product(model, prime_limit, threads=threads, prec_bits=prec_bits)
    with mp.workprec(prec_bits):
        pref = report.alpha_const / (report.a * math.factorial(report.b - 1)) * c_inf
        pref_mpf = mpf(pref.numerator) / pref.denominator
        return ConstantReport(
            invariants=report,
            branch=branch,
            c_inf=c_inf,
            cone_data=tuple(cones),
            euler=ep,
            leading=pref_mpf * ep.value,
            leading_lower=pref_mpf * ep.lower,
            leading_upper=pref_mpf * ep.upper,
            s_level=s_level,
        )


# ---------------------------------------------------------------------------
# Dirichlet local factors and the volume cross-check

def convergence_region_check(report: InvariantReport, s) -> bool:
    """Whether s lies in the region where the global series converges:
    every Re l^(i)(s) > 0 and every minimal reduced form exceeds 1."""
    h = report.heights
    k = len(h.fan.max_cones)
    li = [sum(complex(h.matrix[i][j]) * s[j] for j in range(k)) for i in range(h.fan.nrays)]
    if any(v.real <= 0 for v in li):
        return False
    for m in report.pair.minimal:
        lm = sum(m[i] * li[i] for i in range(h.fan.nrays))
        if lm.real <= 1:
            return False
    return True


def local_factor_F(report: InvariantReport, s, p: int, tol: float = 1e-12):
    """Truncated numeric value of F_p(s) = sum over the reduced set of
    p^(-l_m(s)), with a rigorous tail bound.  Raises OutsideRegion unless
    every Re l^(i)(s) > 0."""
    import cmath

    h = report.heights
    k = len(h.fan.max_cones)
    n = h.fan.nrays
    li = [sum(complex(h.matrix[i][j]) * s[j] for j in range(k)) for i in range(n)]
    if any(v.real <= 0 for v in li):
        raise OutsideRegion("some Re l^(i)(s) <= 0")
    sigma_min = min(v.real for v in li)
    logp = math.log(p)
    bound = 4
    while True:
        tail = _binomial_tail(bound, n, mpf(p) ** (-sigma_min))
        if tail < tol or bound > 80:
            break
        bound += 4
    total = 0 + 0j
    for m in [(0,) * n] + _reduced_scan_raw(report.pair, bound):
        lm = sum(m[i] * li[i] for i in range(n))
        total += cmath.exp(-lm * logp)
    return total, float(tail)


def _reduced_scan_raw(pair: ToricPair, bound):
    faces = fan_faces(pair.fan)
    n = pair.n
    out = []

    def rec(i, left, cur):
        if i == n:
            if any(cur):
                m = tuple(cur)
                if mult.contains(pair.mset, m) and frozenset(
                    t for t, x in enumerate(m) if x > 0
                ) in faces:
                    out.append(m)
            return
        for v in range(left + 1):
            cur.append(v)
            rec(i + 1, left - v, cur)
            cur.pop()

    rec(0, bound, [])
    return out


def volume_DB_estimate(report: InvariantReport, B: float, samples: int = 10 ** 5, seed: int = 0):
    """Monte-Carlo estimate of Volume(D(B)), the region in [1, inf)^Gamma
    where every per-cone monomial is at most B; sampled in log coordinates
    with exponential reweighting.  Returns (estimate, standard_error)."""
    if B <= math.e:
        raise PreconditionViolated("volume estimate needs B > e")
    h = report.heights
    gamma = report.gamma_circle
    k = len(h.fan.max_cones)
    forms = np.array(
        [[float(h.l_form(m)[j]) for j in range(k)] for m in gamma], dtype=float
    )
    b = math.log(B)
    upper = np.array([b / forms[t].max() for t in range(len(gamma))])
    rng = np.random.default_rng(seed)
    ys = rng.random((samples, len(gamma))) * upper
    ok = np.ones(samples, dtype=bool)
    for j in range(k):
        ok &= ys @ forms[:, j] <= b + 1e-12
    vals = np.where(ok, np.exp(ys.sum(axis=1)), 0.0)
    boxvol = float(np.prod(upper))
    est = boxvol * float(vals.mean())
    se = boxvol * float(vals.std(ddof=1)) / math.sqrt(samples)
    return est, se
