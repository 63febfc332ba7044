"""``neroncomb`` command line.

Every subcommand builds a report ``{command, inputs, results, provenance}``.
Plain output renders it as ``key: value`` lines; ``--json`` prints the report
as JSON with sorted keys, so identical inputs give byte-identical output.

Exit status: 0 on success, 1 when a mathematical precondition or an asserted
identity fails, 2 on usage errors and unreadable files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import graph, picard, strata
from .curvefile import read_curve, serialize_curve
from .errors import CurveSyntaxError, NeronCombError

LEVEL_NAMES = {
    "semibalanced": picard.SEMIBALANCED,
    "balanced": picard.BALANCED,
    "stable": picard.STABLY_BALANCED,
}


class CheckFailed(Exception):
    """An identity the library asserts did not hold; reported with exit status 1."""


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, picard.Multidegree):
        return list(x.values)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _fmt(x) -> str:
    if isinstance(x, (list, tuple)) and all(isinstance(v, int) for v in x):
        return "(" + ",".join(map(str, x)) + ")"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def _render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for key, val in report["inputs"].items():
        lines.append(f"input {key}: {_fmt(val)}")
    for key, val in report["results"].items():
        if isinstance(val, list) and val and isinstance(val[0], (list, dict, str)):
            lines.append(f"{key}: {len(val)}")
            for item in val:
                if isinstance(item, dict):
                    lines.append("  " + "  ".join(f"{k}={_fmt(v)}" for k, v in item.items()))
                else:
                    lines.append("  " + _fmt(item))
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            for k, v in val.items():
                lines.append(f"  {k}: {_fmt(v)}")
        else:
            lines.append(f"{key}: {_fmt(val)}")
    for note in report["provenance"]:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _genus_notes(curve) -> list[str]:
    if graph.genus(curve) == 2:
        return ["genus 2 is accepted but lies below the range g >= 3 in which the balanced theory is usually stated"]
    return []


# ----------------------------------------------------------------- commands


def cmd_dcg(args, cf):
    curve = cf.curve
    dcg = picard.degree_class_group(curve, cf.twisters)
    res = {
        "invariant_factors": list(dcg.invariant_factors),
        "free_rank": dcg.group.free_rank,
        "group": str(dcg.group),
        "custom_lattice": dcg.custom,
    }
    notes = ["degree class group = zero-sum multidegrees modulo the twister lattice"]
    if dcg.group.is_finite:
        res["order"] = dcg.order
    if not dcg.custom:
        trees = graph.spanning_tree_count(curve)
        hom = graph.homology_complexity_group(curve)
        res["spanning_trees"] = trees
        res["homology_complexity_group"] = str(hom)
        ok = dcg.order == trees == hom.order and dcg.group == hom
        res["complexity_check"] = "OK" if ok else "FAILED"
        notes.append("order = number of spanning trees (matrix-tree theorem) = homology complexity group order")
        if not ok:
            raise CheckFailed(f"complexity mismatch: {dcg.order}, {trees}, {hom.order}")
    else:
        notes.append("lattice spanned by the twister lines of the curve file")
    return res, notes


def cmd_balanced(args, cf):
    curve = cf.curve
    level = LEVEL_NAMES[args.level]
    pts = picard.enumerate_balanced(curve, args.degree, level)
    res = {"level": level, "count": len(pts), "multidegrees": [list(p.values) for p in pts]}
    notes = ["points satisfying the basic inequality on every subcurve at the requested level"]
    return res, notes + _genus_notes(curve)


def cmd_classify(args, cf):
    curve = cf.curve
    if len(args.multidegree) != 1:
        raise argparse.ArgumentTypeError("classify takes exactly one --multidegree")
    md = args.multidegree[0]
    if args.degree is not None and args.degree != sum(md):
        raise NeronCombError(f"--degree {args.degree} differs from the multidegree total {sum(md)}")
    rep = picard.classify_multidegree(curve, md)
    res = {"multidegree": md, "degree": sum(md), "level": rep.level}
    if rep.witness is not None:
        res["witness"] = [curve.ids[i] for i in rep.witness]
        m, dz, mm = rep.bounds
        res["bounds"] = {"lower": m, "value": dz, "upper": mm}
        res["reason"] = rep.reason
    notes = ["levels: not_semibalanced < semibalanced < balanced < stably_balanced; the strongest one is reported"]
    return res, notes + _genus_notes(curve)


def cmd_equiv(args, cf):
    if len(args.multidegree) != 2:
        raise argparse.ArgumentTypeError("equiv takes exactly two --multidegree options")
    dcg = picard.degree_class_group(cf.curve, cf.twisters)
    a, b = args.multidegree
    res = {
        "multidegrees": [a, b],
        "equivalent": dcg.are_equivalent(a, b),
        "custom_lattice": dcg.custom,
    }
    return res, ["equivalent iff the difference lies in the twister lattice"]


def cmd_twister(args, cf):
    if args.coeffs is None:
        raise argparse.ArgumentTypeError("twister needs --coeffs c1,...")
    md = picard.twister_multidegree(cf.curve, args.coeffs)
    res = {"coefficients": args.coeffs, "multidegree": list(md.values)}
    return res, ["multidegree of the twister sum c_i C_i: columns of the intersection matrix"]


def cmd_dgeneral(args, cf):
    curve = cf.curve
    d = args.degree
    gen = picard.is_d_general(curve, d)
    g = graph.genus(curve)
    res = {
        "general": gen.general,
        "genus": g,
        "balanced_count": len(gen.balanced),
        "class_count": gen.class_count,
        "group_order": gen.group_order,
        "coprime": picard.coprimality(d, g),
    }
    if gen.witness_pair:
        res["equivalent_balanced_pair"] = [list(m.values) for m in gen.witness_pair]
    if gen.witness_unstable:
        res["not_stably_balanced"] = list(gen.witness_unstable.multidegree.values)
    if res["coprime"] and not gen.general:
        raise CheckFailed("gcd(d - g + 1, 2g - 2) = 1 but the curve is not d-general")
    notes = ["d-general: balanced multidegrees biject onto degree-d classes",
             "gcd(d - g + 1, 2g - 2) = 1 forces d-generality"]
    return res, notes + _genus_notes(curve)


def cmd_blowup(args, cf):
    curve = cf.curve
    nodes = args.nodes or []
    ctx = graph.blow_up(curve, nodes)
    res = {
        "node_set": list(ctx.node_set),
        "blown_up_curve": serialize_curve(ctx.blown).splitlines(),
        "exceptional": [ctx.blown.ids[v] for v in ctx.exceptional_vertices],
        "classification": graph.classify_curve(ctx.blown).kind,
        "normalization_connected": ctx.normalized.is_connected,
    }
    notes = ["exceptional components are appended after the original components"]
    if args.degree is not None:
        table = picard.rho_map(ctx, args.degree)
        res["rho"] = [
            {"blown_up": list(p.blown_rep), "normalized": list(p.normalized_rep)}
            for p in table.pairs
        ]
        res["rho_bijective"] = table.bijective
        notes.append("rho restricts balanced multidegrees of the blow-up to the partial normalization")
        if not table.bijective:
            raise CheckFailed(f"rho is not a bijection for S = {list(ctx.node_set)}")
    return res, notes


def cmd_strata(args, cf):
    curve = cf.curve
    strat = strata.stratification(curve, args.degree)
    wanted = set(args.nodes) if args.nodes is not None else None
    rows = []
    for s in strat:
        if wanted is not None and not set(s.node_set) <= wanted:
            continue
        rows.append({
            "nodes": list(s.node_set),
            "dimension": s.dimension,
            "codimension": s.codimension,
            "torus_fiber_dim": s.torus_fiber_dim,
            "components": s.component_count,
        })
    minimal = strata.minimal_strata(strat)
    res = {
        "strata": rows,
        "stratum_count": len(strat),
        "total_components": strata.total_component_count(strat),
        "minimal_dimension": minimal.minimal_dimension,
        "minimal_strata": len(minimal.strata),
        "spanning_trees": graph.spanning_tree_count(curve),
        "minimal_strata_check": "OK" if minimal.ok else "FAILED",
        "irreducible_iff_compact_type": minimal.irreducible_iff_compact_type,
    }
    if not minimal.ok:
        raise CheckFailed("minimal strata do not match the complexity of the dual graph")
    notes = ["one stratum per node set with connected normalization, of dimension g - |S|",
             "components of a stratum = degree classes of the partial normalization"]
    if not minimal.irreducible_iff_compact_type:
        notes.append("a self-node survives in some partial normalization: that stratum is irreducible "
                     "without being of compact type")
    return res, notes


def cmd_models(args, cf):
    if args.genus is None:
        raise argparse.ArgumentTypeError("models needs --genus")
    count, degrees = picard.count_picard_models(args.genus)
    res = {"genus": args.genus, "count": count, "degrees": degrees}
    return res, ["coprime degrees d up to d ~ -d modulo 2g - 2, counted by Euler's phi of g - 1"]


def run_checks(curve, d) -> list[tuple[str, bool]]:
    """The invariant suite behind ``check``; each entry is ``(name, passed)``."""
    out = []
    cls = graph.classify_curve(curve)
    dcg = picard.degree_class_group(curve)
    trees = graph.spanning_tree_count(curve)
    hom = graph.homology_complexity_group(curve)
    out.append(("class group order = spanning trees = homology group order",
                dcg.order == trees == hom.order and dcg.group == hom))
    if not cls.is_stable:
        return out
    g = cls.genus
    gen = picard.is_d_general(curve, d)
    stable_pts = picard.basic_domain_points(curve, d, picard.STABLY_BALANCED)
    cond_i = len(stable_pts) == len(gen.balanced)
    out.append(("balanced = stably balanced iff balanced points biject onto classes", cond_i == gen.general))
    if picard.coprimality(d, g):
        out.append(("coprime degree gives a d-general curve", gen.general))
    sets = graph.nondisconnecting_sets(curve)
    exists = True
    for s in sets:
        y = graph.blow_up(curve, s).blown
        pts = picard.basic_domain_points(y, d, picard.SEMIBALANCED)
        dcg_y = picard._dcg_cached(y)
        if len(set(dcg_y.keys(pts))) != dcg_y.order:
            exists = False
    out.append(("every class of every blow-up has a semibalanced representative", exists))
    if not gen.general:
        return out
    tables = {s: picard.rho_map(graph.blow_up(curve, s), d, check_general=False) for s in sets}
    out.append(("rho is a bijection for every S", all(t.bijective for t in tables.values())))
    part = picard.partition_by_support(curve, d, check_general=False)
    sizes = part.sizes
    out.append(("support blocks partition the classes of the full blow-up",
                sum(sizes.values()) == part.class_count == part.group_order))
    out.append(("support block sizes match the rho tables",
                set(sizes) == set(tables) and all(sizes[s] == tables[s].normalized_order for s in sets)))
    rep = strata.minimal_strata(strata.stratification(curve, d))
    out.append(("minimal strata match the complexity", rep.ok))
    return out


def cmd_check(args, cf):
    checks = run_checks(cf.curve, args.degree)
    res = {
        "classification": graph.classify_curve(cf.curve).kind,
        "checks": [{"name": name, "passed": ok} for name, ok in checks],
        "all_passed": all(ok for _, ok in checks),
    }
    if not res["all_passed"]:
        failed = [name for name, ok in checks if not ok]
        raise CheckFailed("failed: " + "; ".join(failed))
    return res, ["the d-dependent checks need a stable curve; they are skipped otherwise"]


COMMANDS = {
    "dcg": (cmd_dcg, "degree class group and complexity cross-check"),
    "balanced": (cmd_balanced, "enumerate (semi/stably) balanced multidegrees"),
    "classify": (cmd_classify, "balance level of one multidegree"),
    "equiv": (cmd_equiv, "whether two multidegrees are twister-equivalent"),
    "twister": (cmd_twister, "multidegree of a twister"),
    "dgeneral": (cmd_dgeneral, "d-generality test"),
    "blowup": (cmd_blowup, "blow up a node set"),
    "strata": (cmd_strata, "stratification of the compactified model"),
    "models": (cmd_models, "count compactified Picard models by genus"),
    "check": (cmd_check, "run the invariant suite on one curve"),
}
NEEDS_DEGREE = {"balanced", "dgeneral", "strata", "check"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neroncomb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        if name != "models":
            p.add_argument("curve", help="curve file")
        p.add_argument("--degree", type=int, required=name in NEEDS_DEGREE)
        p.add_argument("--level", choices=sorted(LEVEL_NAMES), default="balanced")
        p.add_argument("--multidegree", type=_int_list, action="append", default=[])
        p.add_argument("--nodes", type=_int_list, help="edge indices, comma separated")
        p.add_argument("--coeffs", type=_int_list, help="twister coefficients (twister command)")
        p.add_argument("--genus", type=int, help="genus (models command)")
        p.add_argument("--json", action="store_true", help="print the JSON report")
    return parser


def _inputs(args) -> dict:
    out = {}
    for key in ("curve", "degree", "level", "multidegree", "nodes", "coeffs", "genus"):
        val = getattr(args, key, None)
        if val is None or val == []:
            continue
        if key == "level" and args.command not in ("balanced",):
            continue
        out[key] = val
    return out


VALUE_FLAGS = ("--degree", "--multidegree", "--nodes", "--coeffs", "--genus")


def _glue_values(argv: list[str]) -> list[str]:
    # "--multidegree -1,1" would read "-1,1" as an option; pass it as "--multidegree=-1,1"
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(list(sys.argv[1:] if argv is None else argv)))
    func, _ = COMMANDS[args.command]
    try:
        cf = read_curve(args.curve) if args.command != "models" else None
    except OSError as exc:
        print(f"neroncomb: cannot read {args.curve}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except CurveSyntaxError as exc:
        print(f"neroncomb: {args.curve}: {exc}", file=sys.stderr)
        return 2
    except NeronCombError as exc:
        print(f"neroncomb: {args.curve}: {exc}", file=sys.stderr)
        return 1
    try:
        results, notes = func(args, cf)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"neroncomb {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (NeronCombError, CheckFailed) as exc:
        print(f"neroncomb {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = {
        "command": args.command,
        "inputs": _jsonable(_inputs(args)),
        "results": _jsonable(results),
        "provenance": notes,
    }
    if args.json:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(_render_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
