"""Command-line front end.  Every subcommand dispatches to library calls and reports JSON or text."""

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import cazanave_maps as cz
from . import gersten_complex as gc
from . import residue_theory as rt
from . import unit_groups as ug
from .arith_fields import FunctionField, parse_field
from .errors import ParseError, WittkitError
from .parsing import parse_element, parse_form
from .quad_forms import invariants, is_isotropic, witt_decompose
from .witt_rings import GWClass, WittClass, witt_table

SCHEMA_ID = "wittkit.report/v1"
EXIT_OK, EXIT_PROPERTY, EXIT_INPUT = 0, 1, 2


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def _field(text):
    return parse_field(text)


# ------------------------------------------------------------------ commands

def cmd_witt_table(a):
    F = _field(a.field)
    t = witt_table(F)
    report = ug.verify_pushout_square(F) if F.has_finite_witt_ring else {}
    return {
        "order": len(t["elements"]),
        "units": report.get("units"),
        "square_classes": report.get("square_classes"),
        **t,
    }, []


def cmd_classify(a):
    q = parse_form(a.form)
    x = WittClass.of(q)
    out = {"form": str(q), "witt_class": str(x), "dim": x.dim, "is_zero": x.is_zero()}
    if not q.field.is_function_field:
        kernel, index = witt_decompose(q)
        inv = invariants(q)
        out.update({
            "anisotropic_kernel": str(kernel),
            "hyperbolic_index": index,
            "isotropic": is_isotropic(q),
            "determinant": q.field.fmt(inv.det),
            "signed_discriminant": q.field.fmt(inv.signed_disc),
            "hasse": {str(p): e for p, e in sorted(inv.hasse.items(), key=lambda t: str(t[0]))},
            "signature": {str(p): s for p, s in inv.signature.items()},
        })
    return out, []


def cmd_unit_decompose(a):
    q = parse_form(a.form)
    x = WittClass.of(q)
    out = {"element": str(x), "is_unit": ug.is_unit(x)}
    failures = []
    if out["is_unit"]:
        dec = ug.unit_decompose(x)
        out.update({
            "sign": dec.sign,
            "square_class": q.field.fmt(dec.square_class),
            "nilpotent_part": str(dec.nilpotent_part),
            "represented_by_square_class": (None if (r := ug.represented_by_square_class(x)) is None
                                            else q.field.fmt(r)),
            "inverse": str(ug.unit_inverse(x)),
        })
        if dec.recompose() != x:
            failures.append({"property": "recompose", "element": str(x)})
    return out, failures


def cmd_pushout_check(a):
    F = _field(a.field)
    r = ug.verify_pushout_square(F)
    seq = ug.gw_unit_sequence(F)
    out = dict(r)
    out["gw_kernel"] = seq["kernel"]
    failures = [] if r["ok"] else [{"property": "pushout", "checks": r["checks"]}]
    return out, failures


def cmd_residue(a):
    q = parse_form(a.form)
    F = q.field
    if not isinstance(F, FunctionField) and a.prime is None:
        raise ParseError("--prime is required over Q or Q_p")
    if isinstance(F, FunctionField):
        v = rt.ValuationSpec.at(F, a.place)
    else:
        v = rt.ValuationSpec.padic(a.prime, F)
    x = WittClass.of(q)
    x0, x1 = rt.local_classes(v, x)
    out = {"place": v.label, "residue_field": str(v.residue_field), "first_residue": str(x0),
           "second_residue": str(x1), "unramified": x1.is_zero(),
           "A_present": not v.is_sum_of_squares_uniformizer()}
    if v.irreducibility_asserted:
        out["irreducibility"] = "asserted"
    if ug.is_unit(x):
        out["contraction"] = rt.contraction_classify(v, x).to_dict()
    return out, []


def _support(FF, text):
    return rt.parse_support(FF, text)


def cmd_milnor_check(a):
    k = _field(a.base)
    FF = FunctionField(k)
    r = rt.milnor_round_trip(k, _support(FF, a.support), samples=a.samples, seed=a.seed)
    return r, r["failures"]


def cmd_gersten(a):
    k = _field(a.base)
    FF = FunctionField(k)
    support = [s.strip() for s in a.support.split(",") if s.strip()] if a.support else []
    places = [rt.ValuationSpec.infinity(FF) if s in ("inf", "oo", "∞") else rt.parse_place(FF, s)
              for s in support]
    cx = gc.build_complex(k, a.scheme, a.sheaf, places, level=a.level)
    out = {"terms": cx.describe()}
    failures = []
    checks = {"all", "d2", "h0", "h1", "diagram"} if a.check == "all" else {a.check}
    if "d2" in checks:
        d2 = gc.check_d_squared(cx)
        out["d2"] = "pass" if d2["ok"] else "fail"
        out["d2_report"] = d2
        failures += [{"property": "d_squared", "element": f} for f in d2["failures"]]
    if "h0" in checks:
        probes = {}
        if cx.sheaf in ("GWx", "NQ", "1+Itor"):
            one = WittClass.one(FF)
            probes["1"] = gc.h0(cx, one)
            T = WittClass.square(FF, FF.T())
            probes["<T>"] = gc.h0(cx, T)
        out["h0_probe"] = probes
    if "h1" in checks and a.scheme == "P1":
        h1 = gc.h1_p1(k, a.sheaf, max_support=a.max_support, samples=min(a.samples, 50), seed=a.seed,
                      level=a.level)
        out["h1"] = h1
        if h1["samples_outside_image"]:
            failures.append({"property": "h1_image", "elements": h1["samples_outside_image"]})
    if "diagram" in checks and a.scheme == "P1" and a.sheaf == "GWx":
        d = gc.exact_diagram_check(k, places, samples=min(a.samples, 50), seed=a.seed)
        out["diagram"] = d
        failures += d["failures"]
    return out, failures


def cmd_p1_fibrations(a):
    k = _field(a.base)
    h1 = gc.h1_p1(k, "GWx", max_support=a.max_support, samples=min(a.samples, 50), seed=a.seed)
    FF = FunctionField(k)
    cx = gc.build_complex(k, "P1", "GWx", [rt.ValuationSpec.infinity(FF)])
    comp = cx.components["inf"]
    classes = [comp.label(i) for i in range(comp.order)] if h1["structure_via"] == "component at infinity" else None
    lb = {f"O({d})": gc.line_bundle_h1_image(k, d) for d in (-1, -2)}
    out = {"h1": h1, "classes": classes, "line_bundles": lb}
    failures = [{"property": "h1_image", "elements": h1["samples_outside_image"]}] if h1["samples_outside_image"] else []
    return out, failures


def cmd_sphere_cohomology(a):
    k = _field(a.base)
    return gc.sphere_cohomology(k, a.p, a.q, a.i), []


def cmd_orientation(a):
    k = _field(a.base)
    chi = gc.orientation_character(a.n, k)
    ok, tag = gc.is_orientable_ST(a.n, k)
    return {"n": a.n, "base": str(k), "exponent": chi.exponent, "orientable": ok, "justification": tag}, []


def cmd_bezout(a):
    F = _field(a.field)
    f = cz.rational_map(F, a.map)
    r = cz.bezout_form(f)
    R = f.A.field
    return {
        "map": f.fmt(),
        "matrix": [[R.fmt(c) for c in row] for row in r.matrix],
        "diagonal_form": "<" + ", ".join(F.fmt(d) for d in r.diagonal) + ">",
        "gw_class": {"witt": str(r.gw_class.witt), "rank": r.gw_class.rank},
    }, []


def cmd_clutch(a):
    k = _field(a.base)
    u = parse_element(k, a.u)
    f = cz.t_family(k, u)
    r = cz.bezout_form(f)
    c = cz.clutching_class(r.gw_class)
    FF = f.field
    return {"family": f.fmt(), "bezout_diagonal": "<" + ", ".join(FF.fmt(d) for d in r.diagonal) + ">",
            "u_is_square": k.is_square(u), **c.to_dict()}, []


def cmd_axioms(a):
    k = _field(a.base)
    scenarios = rt.SCENARIOS if a.scenario == "all" else [a.scenario]
    results, failures = {}, []
    for s in scenarios:
        r = rt.axiom_checks(k, s, samples=a.samples, seed=a.seed, p=a.prime)
        results[s] = {"samples": r["samples"], "failures": len(r["failures"]), "ok": r["ok"]}
        failures += [{"scenario": s, **f} for f in r["failures"]]
    return results, failures


COMMANDS = {
    "witt-table": cmd_witt_table,
    "classify": cmd_classify,
    "unit-decompose": cmd_unit_decompose,
    "pushout-check": cmd_pushout_check,
    "residue": cmd_residue,
    "milnor-check": cmd_milnor_check,
    "gersten": cmd_gersten,
    "p1-fibrations": cmd_p1_fibrations,
    "sphere-cohomology": cmd_sphere_cohomology,
    "orientation": cmd_orientation,
    "bezout": cmd_bezout,
    "clutch": cmd_clutch,
    "axioms": cmd_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None, help="overrides WITTKIT_SEED (default 0)")
    common.add_argument("--samples", type=int, default=500)
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")

    p = argparse.ArgumentParser(prog="wittkit", description="Exact Witt and Grothendieck-Witt ring computations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("witt-table", parents=[common]); s.add_argument("field")
    s = sub.add_parser("classify", parents=[common]); s.add_argument("form")
    s = sub.add_parser("unit-decompose", parents=[common]); s.add_argument("form")
    s = sub.add_parser("pushout-check", parents=[common]); s.add_argument("field")
    s = sub.add_parser("residue", parents=[common])
    s.add_argument("form")
    s.add_argument("--place", "--at", dest="place", default="T")
    s.add_argument("--prime", type=int)
    s = sub.add_parser("milnor-check", parents=[common])
    s.add_argument("--base", required=True)
    s.add_argument("--support", default="(T),(T-1)")
    s = sub.add_parser("gersten", parents=[common])
    s.add_argument("--base", required=True)
    s.add_argument("--scheme", choices=gc.SCHEMES, default="P1")
    s.add_argument("--sheaf", choices=gc.SHEAVES, default="GWx")
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--support", default="(T)")
    s.add_argument("--check", choices=("all", "d2", "h0", "h1", "diagram"), default="all")
    s.add_argument("--max-support", type=int, default=3)
    s = sub.add_parser("p1-fibrations", parents=[common])
    s.add_argument("base")
    s.add_argument("--max-support", type=int, default=3)
    s = sub.add_parser("sphere-cohomology", parents=[common])
    s.add_argument("--base", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--i", type=int)
    s = sub.add_parser("orientation", parents=[common])
    s.add_argument("--base", required=True)
    s.add_argument("--n", type=int, required=True)
    s = sub.add_parser("bezout", parents=[common])
    s.add_argument("map")
    s.add_argument("--field", default="Q")
    s = sub.add_parser("clutch", parents=[common])
    s.add_argument("--base", required=True)
    s.add_argument("--u", required=True)
    s = sub.add_parser("axioms", parents=[common])
    s.add_argument("--base", default="Q")
    s.add_argument("--scenario", choices=("all",) + rt.SCENARIOS, default="all")
    s.add_argument("--prime", type=int, default=3)
    return p


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("WITTKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise ParseError(f"WITTKIT_SEED must be an integer, got {env!r}") from exc


def _text(results, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(results, dict):
        for k, v in results.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(results, list):
        for v in results:
            lines.append(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}")
    else:
        lines.append(f"{pad}{results}")
    return "\n".join(lines)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "no_timing")}
    start = time.perf_counter()
    try:
        args.seed = _resolve_seed(args)
        inputs["seed"] = args.seed
        results, failures = COMMANDS[args.command](args)
        status = EXIT_PROPERTY if failures else EXIT_OK
        error = None
    except WittkitError as exc:
        results, failures, status = None, [], EXIT_INPUT
        error = {"type": type(exc).__name__, "message": str(exc)}
    report = {
        "schema": SCHEMA_ID,
        "command": args.command,
        "inputs": inputs,
        "results": results,
        "property_failures": failures,
        "status": status,
    }
    if error:
        report["error"] = error
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    report = _jsonable(report)
    if args.output == "json":
        stdout.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stdout.write(_text(report) + "\n")
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
