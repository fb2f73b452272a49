"""Preset fans, pairs, and default height divisors.

Every preset returns (pair, divisor coefficients, expected dict); the
expected dict records documented invariants used by the selftest command.
"""

from __future__ import annotations

from fractions import Fraction

from . import multiplicity as mult
from .errors import ConfigError
from .fan import Fan, make_fan, validate_fan
from .pairs import make_pair


def projective_fan(n: int) -> Fan:
    """P^(n-1): unit rays plus the negative-sum ray, leave-one-out cones."""
    d = n - 1
    rays = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    rays.append(tuple(-1 for _ in range(d)))
    cones = [tuple(sorted(set(range(n)) - {i})) for i in range(n)]
    return validate_fan(make_fan(d, rays, cones))


def p1xp1_fan() -> Fan:
    rays = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    cones = [(0, 2), (0, 3), (1, 2), (1, 3)]
    return validate_fan(make_fan(2, rays, cones))


def hirzebruch_fan(d: int) -> Fan:
    rays = [(1, 0), (0, 1), (-1, d), (0, -1)]
    cones = [(0, 1), (1, 2), (2, 3), (0, 3)]
    return validate_fan(make_fan(2, rays, cones))


def product_projective_fan(sizes) -> Fan:
    """Product of projective spaces; coordinate blocks follow ``sizes``."""
    dims = [n - 1 for n in sizes]
    d = sum(dims)
    rays = []
    offsets = []
    pos = 0
    dpos = 0
    for n, dd in zip(sizes, dims):
        offsets.append(pos)
        for i in range(dd):
            rays.append(tuple(1 if j == dpos + i else 0 for j in range(d)))
        rays.append(tuple(-1 if dpos <= j < dpos + dd else 0 for j in range(d)))
        pos += n
        dpos += dd
    cones = []

    def rec(block, chosen):
        if block == len(sizes):
            cones.append(tuple(sorted(chosen)))
            return
        n = sizes[block]
        off = offsets[block]
        for omit in range(n):
            rec(block + 1, chosen + [off + i for i in range(n) if i != omit])

    rec(0, [])
    return validate_fan(make_fan(d, rays, cones))


def _pair(fan, mset):
    return make_pair(fan, mset)


def preset(name: str, n: int | None = None, m: int | None = None, d: int | None = None):
    """Return (pair, divisor coefficients, expected-invariants dict)."""
    if name == "p1-full":
        fan = projective_fan(2)
        return _pair(fan, mult.full_set(2)), (1, 0), {"a": Fraction(2), "b": 1, "rigidity": "AdjointRigid"}
    if name == "p1-campana-2-2":
        fan = projective_fan(2)
        return (
            _pair(fan, mult.campana((2, 2))),
            (1, 0),
            {
                "a": Fraction(1),
                "b": 1,
                "rigidity": "AdjointRigid",
                "gamma_circle": [(0, 2), (2, 0)],
                "torsion": 2,
                "alpha": Fraction(1, 4),
                "c_inf": Fraction(8),
            },
        )
    if name == "p2-full":
        fan = projective_fan(3)
        return _pair(fan, mult.full_set(3)), (1, 0, 0), {"a": Fraction(3), "b": 1, "rigidity": "AdjointRigid"}
    if name == "p2-weak-campana-2":
        fan = projective_fan(3)
        return (
            _pair(fan, mult.weak_campana(3, 2)),
            (1, 0, 0),
            {
                "a": Fraction(3, 2),
                "b": 4,
                "rigidity": "AdjointRigid",
                "alpha": Fraction(3, 16),
                "c_inf": Fraction(48),
            },
        )
    if name == "pn-full":
        if not n or n < 2:
            raise ConfigError("pn-full needs n >= 2", field="n")
        fan = projective_fan(n)
        return (
            _pair(fan, mult.full_set(n)),
            tuple([1] + [0] * (n - 1)),
            {"a": Fraction(n), "b": 1, "rigidity": "AdjointRigid", "alpha": Fraction(1)},
        )
    if name == "pn-mfull":
        if not n or n < 2 or not m or m < 1:
            raise ConfigError("pn-mfull needs n >= 2 and m >= 1", field="n/m")
        fan = projective_fan(n)
        from math import comb

        b = comb(m + n - 1, n - 1) - comb(m - 1, n - 1) - n + 1
        return (
            _pair(fan, mult.weak_campana(n, m)),
            tuple([1] + [0] * (n - 1)),
            {"a": Fraction(n, m), "b": b},
        )
    if name == "p1xp1-full":
        fan = p1xp1_fan()
        return (
            _pair(fan, mult.full_set(4)),
            (1, 1, 1, 1),
            {"a": Fraction(1), "b": 2, "rigidity": "AdjointRigid"},
        )
    if name == "hirzebruch-d-integral":
        if not d or d < 1:
            raise ConfigError("hirzebruch-d-integral needs d >= 1", field="d")
        fan = hirzebruch_fan(d)
        # integral points off the two fibers meeting the negative section
        return (
            _pair(fan, mult.integral(4, (0, 2))),
            (1, 0, 0, 1),
            {"a": Fraction(2), "b": 1, "rigidity": "ToricAdjointRigidOnly"},
        )
    if name == "p1-gm-integral":
        fan = projective_fan(2)
        return (
            _pair(fan, mult.integral(2)),
            (1, 0),
            {"rigidity": "ToricAdjointRigidOnly", "quasi_proper": False},
        )
    raise ConfigError(f"unknown preset {name!r}", field="preset")


PRESET_NAMES = [
    "p1-full",
    "p1-campana-2-2",
    "p2-full",
    "p2-weak-campana-2",
    "pn-full",
    "pn-mfull",
    "p1xp1-full",
    "hirzebruch-d-integral",
    "p1-gm-integral",
]
