"""Enumeration of points of bounded height in Cox coordinates.

``count_points`` counts tuples d in (N*)^n with

  * height max_j prod_i d_i^(l^(i)(e_j)) <= B   (exponents scaled integral),
  * for every prime p: the support of the valuation vector of d at p spans
    a cone of the fan (equivalent to the gcd condition over the per-cone
    complementary monomials),
  * for every prime p not dividing the level S: the valuation vector lies
    in the multiplicity set,

and multiplies by 2^dim to account for Cox sign choices.  The enumeration
runs over per-coordinate admissible value lists (membership folded in for
per-coordinate kinds) with height pruning; a whole schedule of bounds is
answered in one pass.

``oracle_count`` is the independent verification path for products of
projective spaces: plain nested loops over full ranges, per-factor gcd
primitivity, and direct monomial heights, sharing no condition machinery
with the fast path.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import multiplicity as mult
from .errors import BudgetExceeded, PreconditionViolated, UnboundedCoordinate, UnsupportedFan
from .fan import Fan, HeightSystem, fan_faces
from .kernels import run_kernel
from .pairs import ToricPair

DEFAULT_BUDGET = 200_000_000


@dataclass(frozen=True)
class CountReport:
    B: int
    N: int
    method: str
    pair: str
    elapsed_ms: float


def scaled_exponents(h: HeightSystem):
    """Clear denominators: integer exponent matrix E = t * l-matrix and the
    scale t, so that heights compare against B^t exactly."""
    t = 1
    for row in h.matrix:
        for x in row:
            f = Fraction(x)
            t = t * f.denominator // math.gcd(t, f.denominator)
    expo = [[int(Fraction(x) * t) for x in row] for row in h.matrix]
    if any(x < 0 for row in expo for x in row):
        raise PreconditionViolated("heights need a nef divisor")
    return expo, t


def height_of_tuple(h: HeightSystem, x) -> int:
    """max_j prod_i x_i^E[i][j] for the scaled-integral exponent matrix.
    With scale t this is H(x)^t; exact integer arithmetic."""
    expo, _ = scaled_exponents(h)
    k = len(expo[0])
    best = 0
    for j in range(k):
        m = 1
        for i, xi in enumerate(x):
            m *= xi ** expo[i][j]
        best = max(best, m)
    return best


def _iroot(x: int, r: int) -> int:
    """Floor of the r-th root."""
    if x < 0:
        raise ValueError
    if r == 1:
        return x
    lo = int(round(x ** (1.0 / r)))
    while lo > 0 and lo ** r > x:
        lo -= 1
    while (lo + 1) ** r <= x:
        lo += 1
    return lo


def _s_composed(limit: int, s_primes) -> list:
    out = [1]
    for p in s_primes:
        cur = list(out)
        for v in out:
            w = v * p
            while w <= limit:
                cur.append(w)
                w *= p
        out = sorted(set(cur))
    return [v for v in out if v <= limit]


def _powerful_values(limit: int, w: int, s_primes) -> list:
    """Values whose non-level prime valuations are 0 or >= w, up to limit."""
    primes = [int(p) for p in _sieve(int(_iroot(limit, w)) + 1) if p not in s_primes]
    base = [1]

    def rec(idx, cur):
        base.append(cur)
        for t in range(idx, len(primes)):
            p = primes[t]
            v = cur * p ** w
            if v > limit:
                break
            while v <= limit:
                rec(t + 1, v)
                v *= p

    rec(0, 1)
    scomp = _s_composed(limit, s_primes)
    out = set()
    for b in set(base):
        for u in scomp:
            if b * u <= limit:
                out.add(b * u)
    return sorted(out)


def _dth_power_values(limit: int, d: int, s_primes) -> list:
    out = set()
    scomp = _s_composed(limit, s_primes)
    a = 1
    while a ** d <= limit:
        v = a ** d
        for u in scomp:
            if v * u <= limit:
                out.add(v * u)
        a += 1
    return sorted(out)


def _sieve(limit: int):
    import numpy as np

    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].tolist()


def _factorize(v: int, primes) -> tuple:
    out = []
    for p in primes:
        if p * p > v:
            break
        if v % p == 0:
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            out.append((p, e))
    if v > 1:
        out.append((v, 1))
    return tuple(out)


def _is_full_range(mset: mult.MultiplicitySet, i: int) -> bool:
    if mset.kind in (mult.FULL, mult.CUSTOM):
        return True
    if mset.kind == mult.WEAK_CAMPANA:
        return i in mset.support
    if mset.kind == mult.INTEGRAL:
        return i not in mset.zero_set
    return False


def admissible_values(mset: mult.MultiplicitySet, i: int, limit: int, s_primes) -> list:
    """Values allowed for coordinate i by per-coordinate membership; the
    full range when the kind couples coordinates."""
    sp = set(s_primes)
    if mset.kind == mult.CAMPANA:
        w = mset.weights[i]
        if w is None:
            return _s_composed(limit, sorted(sp))
        return _powerful_values(limit, w, sp)
    if mset.kind == mult.DARMON:
        return _dth_power_values(limit, mset.moduli[i], sorted(sp))
    if mset.kind == mult.INTEGRAL and i in mset.zero_set:
        return _s_composed(limit, sorted(sp))
    if mset.kind == mult.WEAK_CAMPANA and i not in mset.support:
        return _s_composed(limit, sorted(sp))
    return list(range(1, limit + 1))


def _faces_bitmask(f: Fan) -> bytes:
    n = f.nrays
    if n > 16:
        raise PreconditionViolated("enumeration supports at most 16 rays")
    table = bytearray(1 << n)
    for face in fan_faces(f):
        mask = 0
        for i in face:
            mask |= 1 << i
        table[mask] = 1
    return bytes(table)


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
    return out


def count_points_schedule(
    pair: ToricPair,
    h: HeightSystem,
    s_level: int,
    b_schedule,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    force_python: bool = False,
):
    """Counts N(B) for every B in the schedule, one enumeration pass.
    Returns (counts, elapsed_ms)."""
    t0 = time.perf_counter()
    if pair.mset is None:
        raise PreconditionViolated("counting needs a pair with a multiplicity set")
    b_schedule = sorted(set(int(b) for b in b_schedule))
    if not b_schedule or b_schedule[0] < 1:
        raise PreconditionViolated("height bounds must be positive integers")
    expo, scale = scaled_exponents(h)
    n = pair.n
    k = len(expo[0])
    bmax_scaled = b_schedule[-1] ** scale
    bounds = []
    for i in range(n):
        emax = max(expo[i])
        if emax == 0:
            raise UnboundedCoordinate(f"coordinate {i} is unconstrained by the height")
        bounds.append(_iroot(bmax_scaled, emax))
    s_primes = _prime_factors(s_level)
    # budget check before materializing full ranges
    values: list = [None] * n
    est = 1
    for i in range(n):
        if _is_full_range(pair.mset, i):
            est *= max(1, bounds[i])
        else:
            values[i] = admissible_values(pair.mset, i, bounds[i], s_primes)
            est *= max(1, len(values[i]))
    if est > budget:
        raise BudgetExceeded(f"estimated {est} tuples exceeds the budget {budget}")
    for i in range(n):
        if values[i] is None:
            values[i] = admissible_values(pair.mset, i, bounds[i], s_primes)
    if bmax_scaled >= 2 ** 62:
        force_python = True     # compiled kernel works in int64
    prime_table = _sieve(_iroot(max(bounds), 2) + 1)
    facts = [[_factorize(v, prime_table) for v in values[i]] for i in range(n)]
    faces = _faces_bitmask(pair.fan)
    kind_code, weak_total, custom_member = _kernel_kind(pair.mset)
    scaled_schedule = [b ** scale for b in b_schedule]

    blocks = _split_blocks(values, threads)
    if len(blocks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        args = [
            (
                [blk] + values[1:],
                [facts[0][lo:hi]] + facts[1:],
                expo,
                scaled_schedule,
                kind_code,
                weak_total,
                faces,
                s_primes,
                force_python,
            )
            for (blk, lo, hi) in blocks
        ]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            partials = list(ex.map(_kernel_block, args))
        counts = [sum(p[t] for p in partials) for t in range(len(b_schedule))]
    else:
        counts = run_kernel(
            values,
            facts,
            expo,
            scaled_schedule,
            kind_code,
            weak_total,
            faces,
            s_primes,
            custom_member,
            force_python=force_python,
        )
    mult2 = 2 ** pair.fan.dim
    elapsed = (time.perf_counter() - t0) * 1000.0
    return [c * mult2 for c in counts], elapsed


def _kernel_kind(mset):
    if mset.kind == mult.WEAK_CAMPANA:
        return 1, mset.total, None
    if mset.kind == mult.CUSTOM:
        return 2, 0, lambda vec: mult.contains(mset, vec)
    return 0, 0, None


def _split_blocks(values, threads):
    if threads <= 1 or len(values[0]) < 2 * threads:
        return [(values[0], 0, len(values[0]))]
    size = (len(values[0]) + threads - 1) // threads
    return [
        (values[0][i : i + size], i, min(i + size, len(values[0])))
        for i in range(0, len(values[0]), size)
    ]


def _kernel_block(arg):
    values, facts, expo, schedule, kind_code, weak_total, faces, s_primes, force_python = arg
    return run_kernel(
        values, facts, expo, schedule, kind_code, weak_total, faces, s_primes,
        None, force_python=force_python,
    )


def count_points(
    pair: ToricPair,
    h: HeightSystem,
    s_level: int,
    B: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    force_python: bool = False,
) -> CountReport:
    counts, elapsed = count_points_schedule(
        pair, h, s_level, [B], budget, threads, force_python
    )
    return CountReport(
        B=int(B), N=counts[0], method="CoxEnumeration", pair=pair.describe(), elapsed_ms=elapsed
    )


# ---------------------------------------------------------------------------
# independent oracle for products of projective spaces

def projective_factors(f: Fan):
    """Partition the rays into projective-space blocks, or raise
    UnsupportedFan.  Two rays belong to the same factor exactly when no
    maximal cone omits both."""
    n = f.nrays
    omitted = [set(range(n)) - set(c) for c in f.max_cones]
    same = [[False] * n for _ in range(n)]
    for i in range(n):
        same[i][i] = True
    for i in range(n):
        for j in range(i + 1, n):
            if not any(i in o and j in o for o in omitted):
                same[i][j] = same[j][i] = True
    blocks = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        blk = sorted(j for j in range(n) if same[i][j])
        blocks.append(blk)
        seen.update(blk)
    # verify: each block sums to zero, has one redundant ray, and the cones
    # are exactly the leave-one-out transversals
    from .ratlin import mat_rank

    total = 1
    for blk in blocks:
        if len(blk) < 2:
            raise UnsupportedFan("factor with a single ray")
        s = [sum(f.rays[i][t] for i in blk) for t in range(f.dim)]
        if any(x != 0 for x in s):
            raise UnsupportedFan("factor rays do not sum to zero")
        if mat_rank([list(f.rays[i]) for i in blk]) != len(blk) - 1:
            raise UnsupportedFan("factor rays have unexpected rank")
        total *= len(blk)
    if total != len(f.max_cones):
        raise UnsupportedFan("maximal cones are not the product transversals")
    expected = set()

    def rec(bi, chosen):
        if bi == len(blocks):
            expected.add(tuple(sorted(chosen)))
            return
        for omit in blocks[bi]:
            rec(bi + 1, chosen + [x for x in blocks[bi] if x != omit])

    rec(0, [])
    if expected != set(tuple(sorted(c)) for c in f.max_cones):
        raise UnsupportedFan("maximal cones are not the product transversals")
    return blocks


def oracle_count_schedule(
    pair: ToricPair,
    h: HeightSystem,
    s_level: int,
    b_schedule,
    budget: int = DEFAULT_BUDGET,
):
    """Slow independent count: full nested ranges, per-factor gcd
    primitivity, direct monomial heights, trial-division multiplicities."""
    t0 = time.perf_counter()
    blocks = projective_factors(pair.fan)
    b_schedule = sorted(set(int(b) for b in b_schedule))
    expo, scale = scaled_exponents(h)
    n = pair.n
    k = len(expo[0])
    bmax_scaled = b_schedule[-1] ** scale
    bounds = []
    for i in range(n):
        emax = max(expo[i])
        if emax == 0:
            raise UnboundedCoordinate(f"coordinate {i} is unconstrained by the height")
        bounds.append(_iroot(bmax_scaled, emax))
    est = 1
    for b in bounds:
        est *= max(1, b)
    if est > budget:
        raise BudgetExceeded(f"estimated {est} tuples exceeds the budget {budget}")
    s_primes = set(_prime_factors(s_level))
    maxv = max(bounds) if bounds else 1
    fact_cache = [_trial_division(v) for v in range(maxv + 1)]
    # per-cone power columns
    pows = [[[0] * (bounds[i] + 1) for _ in range(k)] for i in range(n)]
    for i in range(n):
        for j in range(k):
            e = expo[i][j]
            col = pows[i][j]
            for v in range(1, bounds[i] + 1):
                col[v] = v ** e
    scaled_schedule = [b ** scale for b in b_schedule]
    hist = [0] * (len(b_schedule) + 1)
    from bisect import bisect_left
    from math import gcd

    mset = pair.mset
    tup = [0] * n

    def rec(i):
        if i == n:
            h_val = 0
            for j in range(k):
                m = 1
                for t in range(n):
                    m *= pows[t][j][tup[t]]
                if m > h_val:
                    h_val = m
                if h_val > scaled_schedule[-1]:
                    return
            for blk in blocks:
                g = 0
                for t in blk:
                    g = gcd(g, tup[t])
                if g != 1:
                    return
            merged = {}
            for t in range(n):
                for p, e in fact_cache[tup[t]]:
                    merged.setdefault(p, [0] * n)[t] = e
            for p, vec in merged.items():
                if p in s_primes:
                    continue
                if not mult.contains(mset, tuple(vec)):
                    return
            hist[bisect_left(scaled_schedule, h_val)] += 1
            return
        for v in range(1, bounds[i] + 1):
            tup[i] = v
            rec(i + 1)

    rec(0)
    counts = []
    run = 0
    for c in hist[: len(b_schedule)]:
        run += c
        counts.append(run * 2 ** pair.fan.dim)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return counts, elapsed


def _trial_division(v: int) -> tuple:
    out = []
    d = 2
    while d * d <= v:
        if v % d == 0:
            e = 0
            while v % d == 0:
                v //= d
                e += 1
            out.append((d, e))
        d += 1
    if v > 1:
        out.append((v, 1))
    return tuple(out)


def oracle_count(
    pair: ToricPair, h: HeightSystem, s_level: int, B: int, budget: int = DEFAULT_BUDGET
) -> CountReport:
    counts, elapsed = oracle_count_schedule(pair, h, s_level, [B], budget)
    return CountReport(
        B=int(B), N=counts[0], method="ProjectiveOracle", pair=pair.describe(), elapsed_ms=elapsed
    )


# ---------------------------------------------------------------------------
# prediction comparison

def compare_prediction(
    constant_report,
    b_schedule,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
):
    """Rows (B, N, predicted, ratio, method, elapsed_ms) against
    C * B^a * (log B)^(b-1).  The ratio is None when the prediction
    vanishes (B = 1 with b > 1)."""
    rep = constant_report.invariants
    pair = rep.pair
    h = rep.heights
    bs = sorted(set(int(b) for b in b_schedule))
    if not bs:
        return []
    counts, elapsed = count_points_schedule(
        pair, h, constant_report.s_level, bs, budget=budget, threads=threads
    )
    c_val = float(constant_report.leading)
    a = float(rep.a)
    bexp = rep.b - 1
    rows = []
    for b, nval in zip(bs, counts):
        logb = math.log(b)
        predicted = c_val * b ** a * logb ** bexp if b > 1 else (c_val if bexp == 0 else 0.0)
        ratio = nval / predicted if predicted > 0 else None
        rows.append(
            {
                "B": b,
                "N": nval,
                "predicted": predicted,
                "ratio": ratio,
                "method": "CoxEnumeration",
                "elapsed_ms": elapsed,
            }
        )
    return rows
