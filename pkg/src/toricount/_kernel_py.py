"""Pure-Python enumeration kernel.

Shares its interface with the compiled kernel in ``_kernel.pyx``; the
dispatcher in ``kernels.py`` picks whichever is available.  The loop is an
odometer over per-coordinate admissible value lists with height pruning:
at depth t the running per-cone monomials are saturated at B+1, and once
even the smallest monomial exceeds the bound no larger value at any deeper
or equal position can recover, so the subtree is skipped.

Kind codes: 0 = per-coordinate (membership prebaked into the value lists),
1 = weak-campana (per-prime total valuation threshold), 2 = custom
(callback on the per-prime multiplicity vector).
"""

from __future__ import annotations

from bisect import bisect_left

KIND_PERCOORD = 0
KIND_WEAK = 1
KIND_CUSTOM = 2


def enumerate_counts(
    values,          # per coordinate: ascending ints >= 1
    facts,           # per coordinate, per value: tuple of (prime, exponent)
    expo,            # n x k nonnegative int exponents
    b_list,          # ascending positive height bounds
    kind_code,
    weak_total,
    faces,           # bytes of length 2^n: 1 if the support mask spans a cone
    s_primes,        # primes dividing the level; multiplicities unchecked there
    custom_member=None,
):
    n = len(values)
    k = len(expo[0])
    bmax = b_list[-1]
    hist = [0] * (len(b_list) + 1)
    s_set = set(s_primes)

    rows = [[1] * k for _ in range(n + 1)]
    pos = [0] * n
    t = 0
    while t >= 0:
        if pos[t] >= len(values[t]):
            t -= 1
            if t >= 0:
                pos[t] += 1
            continue
        v = values[t][pos[t]]
        prev = rows[t]
        cur = rows[t + 1]
        minval = bmax + 1
        for j in range(k):
            m = prev[j]
            e = expo[t][j]
            if e and v > 1:
                while e:
                    if m > bmax // v:
                        m = bmax + 1
                        break
                    m *= v
                    e -= 1
            cur[j] = m
            if m < minval:
                minval = m
        if minval > bmax:
            # every cone monomial exceeds the bound; larger values at this
            # position only grow, so backtrack
            t -= 1
            if t >= 0:
                pos[t] += 1
            continue
        if t == n - 1:
            h = max(cur)
            if h <= bmax and _conditions_ok(
                n, facts, pos, values, kind_code, weak_total, faces, s_set, custom_member
            ):
                hist[bisect_left(b_list, h)] += 1
            pos[t] += 1
        else:
            t += 1
            pos[t] = 0

    counts = []
    run = 0
    for c in hist[: len(b_list)]:
        run += c
        counts.append(run)
    return counts


def _conditions_ok(n, facts, pos, values, kind_code, weak_total, faces, s_set, custom_member):
    # merge the prime supports of the chosen values
    merged: dict = {}
    for i in range(n):
        for p, e in facts[i][pos[i]]:
            ent = merged.get(p)
            if ent is None:
                merged[p] = [1 << i, e, {i: e}]
            else:
                ent[0] |= 1 << i
                ent[1] += e
                ent[2][i] = e
    for p, (mask, total, per) in merged.items():
        if not faces[mask]:
            return False
        if p in s_set:
            continue
        if kind_code == KIND_WEAK:
            if total < weak_total:
                return False
        elif kind_code == KIND_CUSTOM:
            vec = tuple(per.get(i, 0) for i in range(n))
            if not custom_member(vec):
                return False
    return True
