"""Job configuration: versioned JSON with rationals as "p/q" strings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import multiplicity as mult
from .errors import ConfigError
from .fan import Fan, make_fan, validate_fan
from .pairs import make_pair
from .presets import preset

SCHEMA_VERSION = 1


def frac_to_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def frac_from_str(s, where="") -> Fraction:
    try:
        if isinstance(s, int):
            return Fraction(s)
        if isinstance(s, str):
            return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    raise ConfigError(f"expected a rational 'p/q' string, got {s!r}", field=where)


@dataclass(frozen=True)
class JobConfig:
    preset_name: str | None
    preset_params: dict
    fan_spec: dict | None                # {"rank":, "rays":, "max_cones":}
    multiplicity_spec: dict | None
    divisor: tuple | None                # Fractions per ray
    s_level: int = 1
    command_params: dict = field(default_factory=dict)

    def build(self):
        """Returns (pair, divisor coefficients)."""
        if self.preset_name is not None:
            pair, coeffs, _ = preset(self.preset_name, **self.preset_params)
            if self.divisor is not None:
                coeffs = self.divisor
            return pair, coeffs
        fan = _fan_from_spec(self.fan_spec)
        mset = _mset_from_spec(self.multiplicity_spec, fan.nrays)
        if self.divisor is None:
            raise ConfigError("explicit fans need a divisor", field="divisor")
        if len(self.divisor) != fan.nrays:
            raise ConfigError(
                f"divisor has {len(self.divisor)} coefficients for {fan.nrays} rays",
                field="divisor",
            )
        return make_pair(fan, mset), self.divisor


def _fan_from_spec(spec) -> Fan:
    if not isinstance(spec, dict):
        raise ConfigError("missing fan specification", field="fan")
    try:
        rank = int(spec["rank"])
        rays = [tuple(int(x) for x in r) for r in spec["rays"]]
        cones = [tuple(int(i) for i in c) for c in spec["max_cones"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed fan spec: {exc}", field="fan") from exc
    for c in cones:
        for i in c:
            if i < 0 or i >= len(rays):
                raise ConfigError(
                    f"cone {list(c)} references ray {i}, out of range", field="fan.max_cones"
                )
    return validate_fan(make_fan(rank, rays, cones))


def _mset_from_spec(spec, n) -> mult.MultiplicitySet:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("missing multiplicity kind", field="multiplicity")
    kind = spec["kind"]
    try:
        if kind == "full":
            return mult.full_set(n)
        if kind == "campana":
            weights = [None if w in ("inf", None) else int(w) for w in spec["weights"]]
            if len(weights) != n:
                raise ConfigError("weights length mismatch", field="multiplicity.weights")
            return mult.campana(weights)
        if kind == "weak_campana":
            support = spec.get("support")
            return mult.weak_campana(n, int(spec["total"]), support)
        if kind == "darmon":
            moduli = [int(d) for d in spec["moduli"]]
            if len(moduli) != n:
                raise ConfigError("moduli length mismatch", field="multiplicity.moduli")
            return mult.darmon(moduli)
        if kind == "integral":
            return mult.integral(n, spec.get("zero_set"))
        if kind == "custom":
            return mult.custom(n, [tuple(int(x) for x in g) for g in spec["generators"]])
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"malformed multiplicity spec: {exc}", field="multiplicity") from exc
    raise ConfigError(f"unknown multiplicity kind {kind!r}", field="multiplicity.kind")


def parse_config(data: dict) -> JobConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {version!r}", field="version")
    s_level = data.get("S", 1)
    if not isinstance(s_level, int) or s_level < 1:
        raise ConfigError("S must be an integer >= 1", field="S")
    divisor = None
    if "divisor" in data and data["divisor"] is not None:
        divisor = tuple(
            frac_from_str(x, where=f"divisor[{i}]") for i, x in enumerate(data["divisor"])
        )
    return JobConfig(
        preset_name=data.get("preset"),
        preset_params={k: int(v) for k, v in data.get("preset_params", {}).items()},
        fan_spec=data.get("fan"),
        multiplicity_spec=data.get("multiplicity"),
        divisor=divisor,
        s_level=s_level,
        command_params=dict(data.get("command_params", {})),
    )


def serialize_config(cfg: JobConfig) -> dict:
    out = {"version": SCHEMA_VERSION, "S": cfg.s_level}
    if cfg.preset_name is not None:
        out["preset"] = cfg.preset_name
        if cfg.preset_params:
            out["preset_params"] = dict(cfg.preset_params)
    if cfg.fan_spec is not None:
        out["fan"] = cfg.fan_spec
    if cfg.multiplicity_spec is not None:
        out["multiplicity"] = cfg.multiplicity_spec
    if cfg.divisor is not None:
        out["divisor"] = [frac_to_str(x) for x in cfg.divisor]
    if cfg.command_params:
        out["command_params"] = dict(cfg.command_params)
    return out


def load_config(path: str) -> JobConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data)
