"""Command-line front end: ``wildram <subcommand> [flags]``.

Exit codes: 0 success, 1 a checked identity failed, 2 invalid input,
3 precision did not stabilize.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .errors import InvalidInput, PrecisionError, VerificationError, WildramError

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


def _conductors(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad conductor list {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError("empty conductor list")
    return out


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _text(obj: Any, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            key = f"{prefix}{k}"
            if isinstance(v, dict) and v:
                lines.extend(_text(v, key + "."))
            else:
                lines.append(f"{key}: {json.dumps(v, sort_keys=True)}")
    else:
        lines.append(f"{prefix.rstrip('.') or 'value'}: {json.dumps(obj, sort_keys=True)}")
    return lines


# ---------------------------------------------------------------------------
# commands; each returns (payload, success)


def cmd_cohom(a) -> tuple[dict, bool]:
    from .automorphisms import standard_sigma
    from .cohomology import PrecisionPolicy, h_dims_bruteforce

    sigma = standard_sigma(a.p, a.m, prec=a.prec)
    rep = h_dims_bruteforce(sigma, PrecisionPolicy(window=a.window))
    d = rep.to_dict()
    if not rep.stabilized:
        raise PrecisionError("cohomology window did not stabilize", report=d)
    return d, rep.agrees_with_formula


def cmd_cohom_structure(a):
    from .automorphisms import standard_sigma
    from .cohomology import h1_module_structure

    rep = h1_module_structure(standard_sigma(a.p, a.m, prec=a.prec))
    d = rep.to_dict()
    checks = (rep.structure or {}).get("checks", {})
    return d, rep.agrees_with_formula and all(checks.values())


def cmd_chebyshev(a):
    from .chebyshev import mobius_order_test, psi_poly
    from .parsing import parse_ring

    cert = psi_poly(a.p)
    d = cert.to_dict()
    if a.a is not None:
        ring = parse_ring(a.ring or "Q")
        d["mobius"] = mobius_order_test(ring, a.a, a.p).to_dict()
    ok = cert.identity_holds and cert.denominators_powers_of_two and cert.psi_divides_both
    return d, ok


def cmd_versal_m1(a):
    from .chebyshev import versal_m1_check

    return versal_m1_check(a.p, a.n, a.prec), True


def cmd_polar(a):
    from .artin_schreier import ASClass, polar_reduce

    red = polar_reduce(ASClass.parse(a.p, a.input))
    return red.to_dict(), red.witness_holds()


def cmd_harbater(a):
    from .artin_schreier import harbater_dim

    return harbater_dim(a.p, a.conductors), True


def cmd_genus(a):
    from .artin_schreier import genus_rh

    return genus_rh(a.p, a.conductors, a.genus_quotient), True


def cmd_asdeform(a):
    from .artin_schreier import (
        _dual_numbers,
        build_deformed_cover,
        deformation_direction_valuation,
        independence_check,
    )

    if a.direction is None:
        cover = build_deformed_cover(a.p, a.m, prec=a.prec)
        d = {"cover": cover.to_dict(), "independence": independence_check(a.p, a.m)}
        return d, d["independence"]["independent"]
    ring = _dual_numbers(a.p)
    cover = build_deformed_cover(a.p, a.m, ring, {a.direction: ring.gen("e")}, prec=a.prec)
    val = deformation_direction_valuation(cover, a.direction)
    return {"cover": cover.to_dict(), "direction": val}, val["matches"]


def cmd_order_check(a):
    from .deformations import order_condition_check
    from .parsing import parse_ring

    ring = parse_ring(a.ring or f"F{a.p}")
    chk = order_condition_check(a.p, a.m, ring, a.a if a.a is not None else 1, a.prec)
    return chk.to_dict(), chk.agree


def cmd_obstruction(a):
    from .deformations import default_quotient, obstruction_class
    from .parsing import parse_ring

    if a.ring is None or a.a is None:
        raise InvalidInput("obstruction needs --ring and --a")
    source = parse_ring(a.ring)
    target = parse_ring(a.target) if a.target else default_quotient(source)
    rep = obstruction_class(a.p, a.m, source, target, a.a, a.prec)
    return rep.to_dict(), rep.defect_matches


def cmd_krull(a):
    from .deformations import krull_dim_local

    return krull_dim_local(a.p, a.m).to_dict(), True


def cmd_global(a):
    from .deformations import global_dim_report

    return global_dim_report(a.p, a.conductors, a.genus_quotient).to_dict(), True


def cmd_verify(a):
    from .suite import load_config, run_suite

    report = run_suite(load_config(a.config))
    text = report.to_json()
    if a.out:
        Path(a.out).write_text(text)
    return report.to_dict(), report.ok


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wildram", description="Deformations of wildly ramified automorphisms.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name: str, fn: Callable, help_: str, *flags: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", help="emit JSON")
        for f in flags:
            if f == "p":
                sp.add_argument("--p", type=int, required=True)
            elif f == "m":
                sp.add_argument("--m", type=int, required=True)
            elif f == "conductors":
                sp.add_argument("--conductors", type=_conductors, required=True, help="comma list")
            elif f == "genus-quotient":
                sp.add_argument("--genus-quotient", type=int, default=0)
            elif f == "ring":
                sp.add_argument("--ring", default=None, help='ring descriptor, e.g. "F5[u]/(u^4)"')
            elif f == "a":
                sp.add_argument("--a", default=None, help="ring element")
            elif f == "prec":
                sp.add_argument("--prec", type=int, default=None)
        return sp

    sp = add("cohom", cmd_cohom, "dimensions of H^1 and H^2", "p", "m", "prec")
    sp.add_argument("--window", type=int, default=None)
    add("cohom-structure", cmd_cohom_structure, "k[[Y]]-module structure of H^1", "p", "m", "prec")
    add("chebyshev", cmd_chebyshev, "T_p, S_(p-1), psi and the Bezout certificate", "p", "ring", "a")
    sp = add("versal-m1", cmd_versal_m1, "order-p check over Z/p^n[X]/(psi)", "p", "prec")
    sp.add_argument("--n", type=int, default=3)
    sp = add("polar", cmd_polar, "polar normal form of an Artin-Schreier class", "p")
    sp.add_argument("--input", required=True, help='e.g. "1*T^-9 + 1*T^-3"')
    add("harbater", cmd_harbater, "Harbater space dimension", "p", "conductors")
    add("genus", cmd_genus, "Riemann-Hurwitz genus", "p", "conductors", "genus-quotient")
    sp = add("asdeform", cmd_asdeform, "deformed Artin-Schreier cover", "p", "m", "prec")
    sp.add_argument("--direction", type=int, default=None)
    add("order-check", cmd_order_check, "sigma_a^p = Id versus the geometric sum", "p", "m", "ring", "a", "prec")
    sp = add("obstruction", cmd_obstruction, "obstruction class across a small extension", "p", "m", "ring", "a", "prec")
    sp.add_argument("--target", default=None, help="target ring (default: the socle quotient)")
    add("krull", cmd_krull, "local Krull dimension", "p", "m")
    add("global", cmd_global, "global dimension report", "p", "conductors", "genus-quotient")
    sp = add("verify", cmd_verify, "run the verification suite")
    sp.add_argument("--config", default=None)
    sp.add_argument("--out", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    payload: Any
    try:
        payload, ok = args.func(args)
        code = EXIT_OK if ok else EXIT_VERIFY
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionError as exc:
        print(f"precision: {exc}", file=sys.stderr)
        if getattr(exc, "report", None) is not None and args.json:
            print(_dump(exc.report))
        return EXIT_PRECISION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except WildramError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "verify" and not args.json:
        counts = payload["summary"]
        print(f"pass: {counts['pass']}  fail: {counts['fail']}  flagged: {counts['flagged']}")
        for r in payload["records"]:
            if r["status"] != "pass":
                print(f"{r['status']}: {r['id']}")
    elif args.json:
        print(_dump(payload))
    else:
        print("\n".join(_text(payload)))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
