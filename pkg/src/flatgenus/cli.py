"""Command-line front end.

Commands: genus, crystal-class, iso-check, cohomology, classgroup-verify,
charlap.  Reports are deterministic given identical inputs and registry;
--json switches to a machine-readable rendering.  Exit codes: 0 success,
2 input or validation error, 3 bounded/unknown result (unresolved genus
terms, or an undecidable isomorphism query).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FlatGenusError
from .arith import build_context
from .classgroups import Registry, load_registry, minus_class_number, validate_record
from .cohomology import census, fixed_nonzero_count, h2, special_primes, x_size
from .genus import (
    GenusReport,
    OrbitPolicy,
    charlap_enumerate,
    genus_cardinality,
)
from .lattice import (
    UNDECIDABLE,
    compile_matrix,
    invariants_of,
    linearly_isomorphic,
    parse_lattice,
    profinitely_isomorphic,
    semilinearly_isomorphic,
)

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_BOUNDED = 3


def _class_tuple_text(ctx, tup) -> str:
    return " ".join(
        f"d={d}:({','.join(str(c) for c in coords)})"
        for d, coords in zip(ctx.divisors, tup)
    )


def _render_lines(pairs) -> str:
    return "\n".join(f"{key}: {value}" for key, value in pairs) + "\n"


def _genus_payload(report: GenusReport, ctx) -> dict:
    payload = {
        "command": "genus",
        "delta": report.delta,
        "lattice": report.lattice,
        "rank": report.rank,
        "special_primes": list(report.special_primes),
        "x_size": report.x_size,
        "crystal_class_size": report.crystal_class_size,
        "representatives": (
            None
            if report.representatives is None
            else [_class_tuple_text(ctx, t) for t in report.representatives]
        ),
        "orbit_terms": [
            {
                "prime": t.prime,
                "representative": t.rep_index,
                "count": t.value,
                "provenance": t.provenance,
            }
            for t in report.terms
        ],
        "genus": report.genus,
        "lower_bound": report.lower_bound,
        "upper_bound": report.upper_bound,
        "notes": report.notes,
    }
    return payload


def _print_genus(report: GenusReport, ctx, as_json: bool) -> int:
    payload = _genus_payload(report, ctx)
    if as_json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            ("command", "genus"),
            ("delta", report.delta),
            ("lattice", report.lattice),
            ("rank", report.rank),
            ("special_primes", " ".join(map(str, report.special_primes)) or "(none)"),
            ("x_size", report.x_size),
            ("crystal_class_size", report.crystal_class_size),
        ]
        if report.representatives is not None:
            for i, t in enumerate(report.representatives):
                lines.append((f"representative {i}", _class_tuple_text(ctx, t)))
        for t in report.terms:
            rep = "all" if t.rep_index < 0 else str(t.rep_index)
            lines.append(
                (f"orbit_term p={t.prime} rep={rep}",
                 f"{'unknown' if t.value is None else t.value} [{t.provenance}]")
            )
        if report.resolved:
            lines.append(("genus", report.genus))
        else:
            lines.append(("genus", f"bounded in [{report.lower_bound}, {report.upper_bound}]"))
        lines.append(("upper_bound", report.upper_bound))
        for note in report.notes:
            lines.append(("note", note))
        sys.stdout.write(_render_lines(lines))
    return EXIT_OK if report.resolved else EXIT_BOUNDED


def _cmd_genus(args, registry: Registry) -> int:
    spec = parse_lattice(args.lattice, delta=args.delta, registry=registry)
    policy = OrbitPolicy.from_file(args.orbit_terms) if args.orbit_terms else None
    report = genus_cardinality(spec, registry, policy)
    return _print_genus(report, spec.context, args.json)


def _cmd_crystal_class(args, registry: Registry) -> int:
    spec = parse_lattice(args.lattice, delta=args.delta, registry=registry)
    matrix = compile_matrix(spec)
    special = special_primes(matrix, spec.context)
    from .genus import crystal_class_size, representatives_T

    inv = invariants_of(spec, registry)
    size = crystal_class_size(inv, special, registry)
    reps = representatives_T(inv, special, registry)
    payload = {
        "command": "crystal-class",
        "delta": spec.context.delta,
        "lattice": spec.text(),
        "special_primes": list(special),
        "crystal_class_size": size,
        "representatives": [_class_tuple_text(spec.context, t) for t in reps],
    }
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            ("command", "crystal-class"),
            ("delta", payload["delta"]),
            ("lattice", payload["lattice"]),
            ("special_primes", " ".join(map(str, special)) or "(none)"),
            ("crystal_class_size", size),
        ]
        for i, t in enumerate(reps):
            lines.append((f"representative {i}", _class_tuple_text(spec.context, t)))
        sys.stdout.write(_render_lines(lines))
    return EXIT_OK


def _cmd_iso_check(args, registry: Registry) -> int:
    delta = args.delta
    a_spec = parse_lattice(args.lattice, delta=delta, registry=registry)
    b_spec = parse_lattice(args.lattice2, delta=a_spec.context.delta, registry=registry)
    a = invariants_of(a_spec, registry)
    b = invariants_of(b_spec, registry)
    if args.level == "profinite":
        verdict = profinitely_isomorphic(a, b)
    elif args.level == "semilinear":
        verdict = semilinearly_isomorphic(a, b, registry)
    else:
        verdict = linearly_isomorphic(a, b, registry)
    text = "undecidable" if verdict is UNDECIDABLE else str(bool(verdict)).lower()
    payload = {
        "command": "iso-check",
        "level": args.level,
        "lattice": a_spec.text(),
        "lattice2": b_spec.text(),
        "delta": a_spec.context.delta,
        "result": text,
    }
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(_render_lines(sorted(payload.items())))
    return EXIT_BOUNDED if verdict is UNDECIDABLE else EXIT_OK


def _cmd_cohomology(args, registry: Registry) -> int:
    spec = parse_lattice(args.lattice, delta=args.delta, registry=registry)
    ctx = spec.context
    matrix = compile_matrix(spec)
    primes = [args.prime] if args.prime else list(ctx.primes)
    for p in primes:
        if p not in ctx.primes:
            raise FlatGenusError(f"{p} does not divide delta = {ctx.delta}")
    rows = []
    for p in primes:
        result = h2(matrix, p, ctx.delta)
        c = census(matrix, p, ctx.delta)
        rows.append(
            {
                "prime": p,
                "h2_invariant_factors": list(result.group.invariant_factors),
                "census": {"a": c.a_p, "b": c.b_p, "c": c.c_p},
                "fixed_nonzero": fixed_nonzero_count(result),
            }
        )
    payload = {
        "command": "cohomology",
        "delta": ctx.delta,
        "lattice": spec.text(),
        "primes": rows,
        "x_size": x_size(matrix, ctx) if not args.prime else None,
    }
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            ("command", "cohomology"),
            ("delta", ctx.delta),
            ("lattice", spec.text()),
        ]
        for row in rows:
            p = row["prime"]
            facs = row["h2_invariant_factors"]
            text = " x ".join(f"Z/{d}" for d in facs) if facs else "0"
            lines.append((f"h2 p={p}", text))
            cns = row["census"]
            lines.append(
                (f"census p={p}", f"a={cns['a']} b={cns['b']} c={cns['c']}")
            )
            lines.append((f"fixed_nonzero p={p}", row["fixed_nonzero"]))
        if payload["x_size"] is not None:
            lines.append(("x_size", payload["x_size"]))
        sys.stdout.write(_render_lines(lines))
    return EXIT_OK


def _cmd_classgroup_verify(args, registry: Registry) -> int:
    rec = registry.get(args.conductor)
    report = validate_record(rec, oracle=True)
    oracle_value = None
    if rec.conductor >= 3:
        oracle_value = minus_class_number(rec.conductor)
    payload = {
        "command": "classgroup-verify",
        "conductor": rec.conductor,
        "invariant_factors": list(rec.group.invariant_factors),
        "order": rec.group.order,
        "plus_part": rec.plus_part_order,
        "minus_class_number": oracle_value,
        "valid": report.ok,
        "issues": report.issues,
        "flags": report.flags,
        "checks": report.checks,
        "provenance": rec.provenance,
    }
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            ("command", "classgroup-verify"),
            ("conductor", rec.conductor),
            ("invariant_factors", " ".join(map(str, rec.group.invariant_factors)) or "(trivial)"),
            ("order", rec.group.order),
            ("plus_part", rec.plus_part_order if rec.plus_part_order is not None else "unknown"),
            ("minus_class_number", oracle_value if oracle_value is not None else "(not computed)"),
            ("valid", str(report.ok).lower()),
        ]
        for issue in report.issues:
            lines.append(("issue", issue))
        for flag in report.flags:
            lines.append(("flag", flag))
        sys.stdout.write(_render_lines(lines))
    if not report.ok:
        raise FlatGenusError(f"record for conductor {rec.conductor} failed validation")
    return EXIT_OK


def _cmd_charlap(args, registry: Registry) -> int:
    try:
        bounds = tuple(int(tok) for tok in args.bounds.split(","))
    except ValueError:
        raise FlatGenusError(f"--bounds wants 'a,b,c', got '{args.bounds}'")
    if len(bounds) != 3:
        raise FlatGenusError(f"--bounds wants three integers, got '{args.bounds}'")
    report = charlap_enumerate(args.prime, bounds, registry)
    payload = {
        "command": "charlap",
        "prime": report.prime,
        "bounds": list(bounds),
        "nonexceptional_tuples": [list(t) for t in report.nonexceptional],
        "theta_nonexceptional": report.theta_nonexceptional,
        "exceptional_b": report.exceptional_b,
        "theta_exceptional": report.theta_exceptional,
        "total_classes": report.total,
    }
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            ("command", "charlap"),
            ("prime", report.prime),
            ("bounds", ",".join(map(str, bounds))),
            ("nonexceptional_tuples", " ".join(str(t) for t in report.nonexceptional) or "(none)"),
            ("theta_nonexceptional", report.theta_nonexceptional),
            ("exceptional_b", " ".join(map(str, report.exceptional_b)) or "(none)"),
            ("theta_exceptional", report.theta_exceptional),
            ("total_classes", report.total),
        ]
        sys.stdout.write(_render_lines(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatgenus",
        description="Exact profinite-genus arithmetic for Bieberbach groups "
        "with cyclic square-free holonomy",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lattice=False):
        p.add_argument("--registry", default=None, help="registry path (default: bundled)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if lattice:
            p.add_argument("--lattice", required=True, help='lattice spec, e.g. "R(6)+Z"')
            p.add_argument("--delta", type=int, default=None,
                           help="holonomy order (default: inferred from the lattice)")

    p = sub.add_parser("genus", help="cardinality of the profinite genus")
    common(p, lattice=True)
    p.add_argument("--orbit-terms", default=None,
                   help="file of 'p rep_index count' triples for unresolved terms")

    p = sub.add_parser("crystal-class", help="crystal-class count and representatives")
    common(p, lattice=True)

    p = sub.add_parser("iso-check", help="compare two lattices")
    common(p, lattice=True)
    p.add_argument("--lattice2", required=True, help="second lattice spec")
    p.add_argument("--level", choices=["profinite", "semilinear", "linear"],
                   default="profinite")

    p = sub.add_parser("cohomology", help="H^2, census, and fixed counts per prime")
    common(p, lattice=True)
    p.add_argument("--prime", type=int, default=None, help="restrict to one prime")

    p = sub.add_parser("classgroup-verify", help="validate a registry record")
    common(p)
    p.add_argument("--conductor", type=int, required=True)

    p = sub.add_parser("charlap", help="classified tuples for prime-order holonomy")
    common(p)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--bounds", required=True, help="a,b,c upper bounds")

    return parser


_HANDLERS = {
    "genus": _cmd_genus,
    "crystal-class": _cmd_crystal_class,
    "iso-check": _cmd_iso_check,
    "cohomology": _cmd_cohomology,
    "classgroup-verify": _cmd_classgroup_verify,
    "charlap": _cmd_charlap,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        registry = load_registry(args.registry)
        return _HANDLERS[args.command](args, registry)
    except FlatGenusError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
