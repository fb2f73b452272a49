"""Command-line interface.

Subcommands: invariants | constants | count | compare | selftest.
Exit codes: 0 success, 1 computational refusal (not rigid / not
quasi-proper), 2 configuration error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from mpmath import mp, nstr

from . import errors
from .config import JobConfig, frac_from_str, frac_to_str, load_config
from .constants import leading_constant, sieve_primes
from .counting import compare_prediction, count_points_schedule
from .fan import height_system, is_big_given_nef, is_nef
from .invariants import NOT_RIGID, invariant_report
from .presets import PRESET_NAMES, preset

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3

SIG_DIGITS = 12


def _num(x) -> str:
    return nstr(x, SIG_DIGITS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toricount",
        description="Points of bounded height on split toric varieties: "
        "invariants, leading constants, enumeration.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("invariants", "constants", "count", "compare", "selftest"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON job configuration")
        p.add_argument("--preset", choices=PRESET_NAMES)
        p.add_argument("--n", type=int, help="parameter for pn-* presets")
        p.add_argument("--m", type=int, help="parameter for pn-mfull")
        p.add_argument("--d", type=int, help="parameter for hirzebruch-d-integral")
        p.add_argument("--S", type=int, default=None, help="level (default 1)")
        p.add_argument("--divisor", help="comma-separated rational coefficients")
        p.add_argument("--B", action="append", type=int, help="height bound (repeatable)")
        p.add_argument("--prime-limit", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default=None)
    return ap


def _config_from_args(args) -> JobConfig:
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        params = {}
        for key in ("n", "m", "d"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
        divisor = None
        if args.divisor:
            divisor = tuple(frac_from_str(x.strip(), "divisor") for x in args.divisor.split(","))
        cfg = JobConfig(
            preset_name=args.preset,
            preset_params=params,
            fan_spec=None,
            multiplicity_spec=None,
            divisor=divisor,
            s_level=args.S if args.S is not None else 1,
        )
    else:
        raise errors.ConfigError("either --config or --preset is required")
    merged = dict(cfg.command_params)
    if args.S is not None:
        cfg = JobConfig(
            cfg.preset_name, cfg.preset_params, cfg.fan_spec, cfg.multiplicity_spec,
            cfg.divisor, args.S, merged,
        )
    if args.B:
        merged["B"] = list(args.B)
    if args.prime_limit is not None:
        merged["prime_limit"] = args.prime_limit
    if args.budget is not None:
        merged["budget"] = args.budget
    merged.setdefault("threads", args.threads)
    return JobConfig(
        cfg.preset_name, cfg.preset_params, cfg.fan_spec, cfg.multiplicity_spec,
        cfg.divisor, cfg.s_level, merged,
    )


def _report_dict(rep) -> dict:
    return {
        "pair": rep.pair.describe(),
        "quasi_proper": rep.quasi_proper,
        "a": frac_to_str(rep.a),
        "a_decimal": _num(mp.mpf(rep.a.numerator) / rep.a.denominator),
        "b": rep.b,
        "rigidity": rep.rigidity,
        "gamma_circle": [list(m) for m in rep.gamma_circle],
        "alpha_vec": [frac_to_str(x) for x in rep.alpha_vec],
        "rep_divisor": [frac_to_str(x) for x in rep.rep_divisor],
        "picard_rank": rep.pic_circle.rank,
        "picard_torsion": rep.pic_circle.torsion_order(),
        "alpha": frac_to_str(rep.alpha_const) if rep.alpha_const is not None else None,
        "alpha_decimal": (
            _num(mp.mpf(rep.alpha_const.numerator) / rep.alpha_const.denominator)
            if rep.alpha_const is not None
            else None
        ),
    }


def _constants_dict(cr, display_primes=10) -> dict:
    from .constants import density_model

    model = density_model(cr.invariants, cr.s_level)
    shown = []
    for p in [int(q) for q in sieve_primes(100)][:display_primes]:
        shown.append({"p": p, "C_p": _num(model.local_density(p).value)})
    out = _report_dict(cr.invariants)
    out.update(
        {
            "branch": cr.branch,
            "C_inf": frac_to_str(cr.c_inf),
            "C_inf_decimal": _num(mp.mpf(cr.c_inf.numerator) / cr.c_inf.denominator),
            "euler_product": {
                "value": _num(cr.euler.value),
                "lower": _num(cr.euler.lower),
                "upper": _num(cr.euler.upper),
                "prime_limit": cr.euler.prime_limit,
                "tail_exponent": frac_to_str(cr.euler.c),
            },
            "local_densities": shown,
            "leading_constant": {
                "value": _num(cr.leading),
                "lower": _num(cr.leading_lower),
                "upper": _num(cr.leading_upper),
            },
            "cone_data": [
                {
                    "ray_elements": [list(m) for m in c.ray_elements],
                    "index": c.index_det,
                    "torsion_ratio": frac_to_str(c.torsion_ratio),
                    "z_dim": c.z_dim,
                    "z_volume_factorial": frac_to_str(c.z_volume_factorial),
                    "unit_weight_differs": c.unit_weight_differs,
                }
                for c in cr.cone_data
            ],
        }
    )
    return out


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)


def _csv_rows(rows) -> str:
    lines = ["B,N,predicted,ratio,method,elapsed_ms"]
    for r in rows:
        ratio = "n/a" if r["ratio"] is None else _num(r["ratio"])
        lines.append(
            f"{r['B']},{r['N']},{_num(r['predicted'])},{ratio},"
            f"{r['method']},{_num(r['elapsed_ms'])}"
        )
    return "\n".join(lines) + "\n"


def cmd_invariants(cfg: JobConfig, fmt, out):
    pair, coeffs = cfg.build()
    h = height_system(pair.fan, coeffs)
    refusal = None
    try:
        rep = invariant_report(pair, h)
    except errors.NotQuasiProper as exc:
        rep = invariant_report(pair, h, require_quasi_proper=False)
        refusal = str(exc)
    data = _report_dict(rep)
    if refusal:
        data["refusal"] = f"not quasi-proper: {refusal}"
    _emit(json.dumps(data, indent=2), out)
    return EXIT_REFUSED if refusal else EXIT_OK


def cmd_constants(cfg: JobConfig, fmt, out):
    pair, coeffs = cfg.build()
    h = height_system(pair.fan, coeffs)
    try:
        rep = invariant_report(pair, h)
    except errors.NotQuasiProper as exc:
        _emit(json.dumps({"refusal": f"not quasi-proper: {exc}"}, indent=2), out)
        return EXIT_REFUSED
    if rep.rigidity == NOT_RIGID:
        _emit(
            json.dumps(
                {
                    "refusal": "divisor is not toric adjoint rigid; the counting "
                    "theorem provides no leading-constant formula",
                    "a": frac_to_str(rep.a),
                    "b": rep.b,
                },
                indent=2,
            ),
            out,
        )
        return EXIT_REFUSED
    cr = leading_constant(
        rep,
        s_level=cfg.s_level,
        prime_limit=cfg.command_params.get("prime_limit", 10 ** 6),
        threads=cfg.command_params.get("threads", 1),
    )
    _emit(json.dumps(_constants_dict(cr), indent=2), out)
    return EXIT_OK


def cmd_count(cfg: JobConfig, fmt, out):
    pair, coeffs = cfg.build()
    h = height_system(pair.fan, coeffs)
    bs = sorted(set(cfg.command_params.get("B") or []))
    rows = []
    if bs:
        counts, elapsed = count_points_schedule(
            pair,
            h,
            cfg.s_level,
            bs,
            budget=cfg.command_params.get("budget", 200_000_000),
            threads=cfg.command_params.get("threads", 1),
        )
        rows = [
            {
                "B": b,
                "N": nv,
                "predicted": float("nan"),
                "ratio": None,
                "method": "CoxEnumeration",
                "elapsed_ms": elapsed,
            }
            for b, nv in zip(bs, counts)
        ]
    if fmt == "json":
        _emit(
            json.dumps(
                [{"B": r["B"], "N": r["N"], "method": r["method"]} for r in rows], indent=2
            ),
            out,
        )
    else:
        lines = ["B,N,method,elapsed_ms"]
        for r in rows:
            lines.append(f"{r['B']},{r['N']},{r['method']},{_num(r['elapsed_ms'])}")
        _emit("\n".join(lines) + "\n", out)
    return EXIT_OK


def cmd_compare(cfg: JobConfig, fmt, out):
    pair, coeffs = cfg.build()
    h = height_system(pair.fan, coeffs)
    rep = invariant_report(pair, h)
    if rep.rigidity == NOT_RIGID:
        _emit(json.dumps({"refusal": "not toric adjoint rigid"}, indent=2), out)
        return EXIT_REFUSED
    cr = leading_constant(
        rep,
        s_level=cfg.s_level,
        prime_limit=cfg.command_params.get("prime_limit", 10 ** 6),
        threads=cfg.command_params.get("threads", 1),
    )
    rows = compare_prediction(
        cr,
        cfg.command_params.get("B") or [],
        budget=cfg.command_params.get("budget", 200_000_000),
        threads=cfg.command_params.get("threads", 1),
    )
    if fmt == "json":
        _emit(json.dumps(rows, default=str, indent=2), out)
    else:
        _emit(_csv_rows(rows), out)
    return EXIT_OK


def cmd_selftest(out):
    cases = [
        ("p1-full", {}),
        ("p1-campana-2-2", {}),
        ("p2-full", {}),
        ("p2-weak-campana-2", {}),
        ("pn-full", {"n": 4}),
        ("pn-mfull", {"n": 3, "m": 2}),
        ("p1xp1-full", {}),
        ("hirzebruch-d-integral", {"d": 2}),
        ("p1-gm-integral", {}),
    ]
    failures = 0
    lines = []
    for name, kw in cases:
        try:
            pair, coeffs, expected = preset(name, **kw)
            h = height_system(pair.fan, coeffs)
            assert is_nef(h) and is_big_given_nef(h)
            rep = invariant_report(
                pair, h, require_quasi_proper=expected.get("quasi_proper", True)
            )
            for key, want in expected.items():
                got = {
                    "a": rep.a,
                    "b": rep.b,
                    "rigidity": rep.rigidity,
                    "gamma_circle": sorted(rep.gamma_circle),
                    "torsion": rep.pic_circle.torsion_order(),
                    "alpha": rep.alpha_const,
                    "quasi_proper": rep.quasi_proper,
                    "c_inf": None,
                }[key]
                if key == "c_inf":
                    from .constants import c_inf_adjoint_rigid

                    got = c_inf_adjoint_rigid(pair.fan, rep.rep_divisor)
                if key == "gamma_circle":
                    want = sorted(tuple(m) for m in want)
                if got != want:
                    raise AssertionError(f"{key}: expected {want}, got {got}")
            lines.append(f"PASS {name} {kw if kw else ''}".rstrip())
        except Exception as exc:
            failures += 1
            lines.append(f"FAIL {name} {kw}: {exc}")
    _emit("\n".join(lines), out)
    return EXIT_OK if failures == 0 else EXIT_REFUSED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("csv" if args.command in ("count", "compare") else "json")
    try:
        if args.command == "selftest":
            return cmd_selftest(args.out)
        cfg = _config_from_args(args)
        if args.command == "invariants":
            return cmd_invariants(cfg, fmt, args.out)
        if args.command == "constants":
            return cmd_constants(cfg, fmt, args.out)
        if args.command == "count":
            return cmd_count(cfg, fmt, args.out)
        if args.command == "compare":
            return cmd_compare(cfg, fmt, args.out)
        raise AssertionError(args.command)
    except errors.ConfigError as exc:
        field = f" (field: {exc.field})" if exc.field else ""
        print(f"config error: {exc}{field}", file=sys.stderr)
        return EXIT_CONFIG
    except errors.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (errors.NotQuasiProper, errors.PreconditionViolated) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (errors.MalformedCone, errors.NotSmooth, errors.NotComplete) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
