"""Command-line entry point: ``eqalg <command> [options]``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .groups import SMALL_CATALOG, FiniteGroup, GroupError, build_group, is_solvable
from .transfer import TransferSystem, TransferSystemError, enumerate_systems

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def load_group(descriptor: str) -> FiniteGroup:
    """A catalog name such as C6, D6, C2xC2, S3, or a path to a saved group."""
    if os.path.exists(descriptor):
        with open(descriptor) as fh:
            return FiniteGroup.from_text(fh.read())
    try:
        return build_group(descriptor)
    except GroupError as exc:
        raise UsageError(str(exc)) from exc


def load_system(G: FiniteGroup, descriptor: str) -> TransferSystem:
    """An index into the enumeration, a JSON document, or a path to one."""
    if descriptor.lstrip("-").isdigit():
        systems = enumerate_systems(G)
        i = int(descriptor)
        if not 0 <= i < len(systems):
            raise UsageError(f"system index {i} out of range (0..{len(systems) - 1})")
        return systems[i]
    text = descriptor
    if os.path.exists(descriptor):
        with open(descriptor) as fh:
            text = fh.read()
    try:
        return TransferSystem.from_json(G, text)
    except (ValueError, TransferSystemError, KeyError) as exc:
        raise UsageError(f"bad transfer system: {exc}") from exc


def subgroup_id(G: FiniteGroup, value: str) -> int:
    try:
        sid = int(value)
    except ValueError:
        raise UsageError(f"subgroup id must be an integer, got {value!r}") from None
    if not 0 <= sid < len(G.subgroups):
        raise UsageError(f"subgroup id {sid} out of range (0..{len(G.subgroups) - 1})")
    return sid


def orbit_set(G: FiniteGroup, descriptor: str):
    from .gsets import disjoint_union, empty_gset, make_orbit

    ids = [subgroup_id(G, s) for s in descriptor.split(",") if s.strip()]
    if not ids:
        return empty_gset(G)
    return disjoint_union(*[make_orbit(G, s) for s in ids])[0]


def emit(args, payload, text=None) -> None:
    if args.format == "json" or text is None:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _jsonable(obj):
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "numerator"):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_groups(args) -> int:
    if args.group:
        G = load_group(args.group)
        L = G.lattice
        subs = [{"id": s.id, "order": s.order, "elements": list(s.elements), "class": int(L.conj_class[s.id]),
                 "normal": bool(L.normal[s.id])} for s in G.subgroups]
        payload = {"name": G.name, "order": G.order, "depth": L.depth, "solvable": is_solvable(G),
                   "subgroups": subs}
        lines = [f"{G.name}: order {G.order}, {len(subs)} subgroups, depth {L.depth}"]
        lines += [f"  {s['id']:>3}  order {s['order']:>3}  class {s['class']:>3}"
                  f"{'  normal' if s['normal'] else ''}" for s in subs]
        emit(args, payload, "\n".join(lines))
        return EXIT_OK
    rows = []
    for name in SMALL_CATALOG:
        G = build_group(name)
        rows.append({"name": name, "order": G.order, "subgroups": len(G.subgroups),
                     "classes": len(G.lattice.class_reps), "solvable": is_solvable(G)})
    text = "\n".join(f"{r['name']:<10} order {r['order']:>3}  subgroups {r['subgroups']:>3}" for r in rows)
    emit(args, rows, text)
    return EXIT_OK


def cmd_burnside(args) -> int:
    from .burnside import burnside_ring

    G = load_group(args.group)
    level = subgroup_id(G, args.level) if args.level is not None else G.whole.id
    R = burnside_ring(G, level)
    marks = [[int(v) for v in row] for row in R.marks]
    payload = {"group": G.name, "level": level, "classes": R.reps, "marks": marks}
    width = max(len(str(v)) for row in marks for v in row) + 1
    lines = ["classes: " + " ".join(map(str, R.reps))]
    lines += ["".join(str(v).rjust(width) for v in row) for row in marks]
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_transfer_systems(args) -> int:
    G = load_group(args.group)
    systems = enumerate_systems(G)
    if args.format == "csv":
        lines = ["index,pairs"] + [f"{i},\"{' '.join(f'{k}-{h}' for k, h in O.nontrivial_pairs())}\""
                                    for i, O in enumerate(systems)]
        sys.stdout.write("\n".join(lines) + "\n")
    elif args.format == "dot":
        out = []
        for i, O in enumerate(systems):
            out.append(f"digraph system_{i} {{")
            out += [f"  s{h};" for h in range(len(G.subgroups))]
            out += [f"  s{k} -> s{h};" for k, h in O.nontrivial_pairs()]
            out.append("}")
        sys.stdout.write("\n".join(out) + "\n")
    else:
        payload = {"group": G.name, "count": len(systems),
                   "systems": [[list(p) for p in O.nontrivial_pairs()] for O in systems]}
        text = f"{G.name}: {len(systems)} transfer systems\n" + "\n".join(
            f"{i:>5}: {' '.join(f'{k}->{h}' for k, h in O.nontrivial_pairs()) or '(trivial)'}"
            for i, O in enumerate(systems))
        emit(args, payload, text)
    return EXIT_OK


def cmd_free_mackey(args) -> int:
    from .mackey import free_mackey

    G = load_group(args.group)
    T = orbit_set(G, args.orbits)
    M = free_mackey(T)
    levels = {str(h): {"rank": M.rank(h), "basis": [list(t) for t in M.labels[h]]} for h in M.labels}
    payload = {"group": G.name, "orbits": args.orbits, "levels": levels,
               "functorial": M.check_functoriality()}
    text = "\n".join(f"level {h}: rank {M.rank(h)}" for h in M.labels)
    emit(args, payload, text)
    return EXIT_OK


def cmd_free_tambara(args) -> int:
    from .gsets import make_orbit
    from .polynomials import key_grade, poly_basis

    G = load_group(args.group)
    O = load_system(G, args.system)
    gen = subgroup_id(G, args.gen)
    level = subgroup_id(G, args.level)
    max_size = args.max_size if args.max_size is not None else 3 * G.order
    keys = poly_basis(O, make_orbit(G, gen), level, max_size)
    basis = [{"grade": key_grade(G, k), "J": k[0], "y": k[1],
              "exponent": [{"L": L, "x": x} for L, x in k[2]]} for k in keys]
    payload = {"group": G.name, "system": [list(p) for p in O.nontrivial_pairs()], "gen": gen,
               "level": level, "max_size": max_size, "basis": basis}
    text = "\n".join(f"|A|={b['grade']:>3}  G/{b['J']} at {b['y']}  "
                     + " + ".join(f"G/{e['L']}@{e['x']}" for e in b["exponent"]) for b in basis)
    emit(args, payload, text)
    return EXIT_OK


def cmd_classify(args) -> int:
    from .classify import classify

    G = load_group(args.group)
    O = load_system(G, args.system)
    H = subgroup_id(G, args.subgroup)
    v = classify(G, O, H)
    text = v.status + "\n" + "\n".join(f"  {c.name}: {c.holds}" for c in v.reasons)
    emit(args, v.to_dict(), text)
    return EXIT_OK


def cmd_tables(args) -> int:
    from .classify import appendix_table

    G = load_group(args.group)
    try:
        table = appendix_table(G)
    except GroupError as exc:
        raise UsageError(str(exc)) from exc
    fmt = args.format if args.format in ("md", "csv", "txt", "json") else "md"
    sys.stdout.write(table.render(fmt))
    return EXIT_OK


def cmd_stats(args) -> int:
    from .classify import stats

    s = stats(load_group(args.group))
    d = s.to_dict()
    text = f"{s.group}: n={s.n} T={s.T} P={s.P} d={s.d}" + (
        f"  P/T={s.ratio} <= 1/d: {s.bound_holds}" if s.solvable else "  (not solvable)")
    emit(args, d, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verification

    G = load_group(args.group)
    report = run_verification(G, seed=args.seed, max_systems=args.max_systems)
    text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in report.items())
    emit(args, {"group": G.name, "checks": report, "ok": all(report.values())}, text)
    return EXIT_OK if all(report.values()) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", default=None,
                        choices=["json", "txt", "md", "csv", "dot"],
                        help="output format (json is the machine format)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--max-size", type=int, default=None, dest="max_size",
                        help="bound on |A| for polynomial bases (default 3|G|)")

    parser = _Parser(prog="eqalg", description="Equivariant algebra toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("groups", parents=[common], help="list catalog groups or describe one")
    p.add_argument("--group")
    p.set_defaults(func=cmd_groups, default_format="txt")

    p = sub.add_parser("burnside", parents=[common], help="Burnside ring data")
    bsub = p.add_subparsers(dest="what", parser_class=_Parser)
    q = bsub.add_parser("marks", parents=[common], help="table of marks")
    q.add_argument("--group", required=True)
    q.add_argument("--level")
    q.set_defaults(func=cmd_burnside, default_format="txt")

    p = sub.add_parser("transfer-systems", parents=[common], help="transfer systems")
    tsub = p.add_subparsers(dest="what", parser_class=_Parser)
    q = tsub.add_parser("enumerate", parents=[common], help="list every transfer system")
    q.add_argument("--group", required=True)
    q.set_defaults(func=cmd_transfer_systems, default_format="json")

    p = sub.add_parser("free-mackey", parents=[common], help="levels of the free Mackey functor on a G-set")
    p.add_argument("--group", required=True)
    p.add_argument("--orbits", required=True, help="comma-separated stabiliser ids, one per orbit")
    p.set_defaults(func=cmd_free_mackey, default_format="json")

    p = sub.add_parser("free-tambara", parents=[common], help="graded basis of a free incomplete Tambara functor")
    p.add_argument("--group", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--gen", required=True)
    p.add_argument("--level", required=True)
    p.set_defaults(func=cmd_free_tambara, default_format="json")

    p = sub.add_parser("classify", parents=[common], help="freeness verdict for (system, subgroup)")
    p.add_argument("--group", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--subgroup", required=True)
    p.set_defaults(func=cmd_classify, default_format="json")

    p = sub.add_parser("tables", parents=[common], help="regenerate reference tables")
    tsub = p.add_subparsers(dest="what", parser_class=_Parser)
    q = tsub.add_parser("appendix", parents=[common], help="freeness table for a small group")
    q.add_argument("--group", required=True)
    q.set_defaults(func=cmd_tables, default_format="md")

    p = sub.add_parser("stats", parents=[common], help="counts n, T, P and depth d")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_stats, default_format="json")

    p = sub.add_parser("verify", parents=[common], help="run the identity suite on one group")
    p.add_argument("--group", required=True)
    p.add_argument("--max-systems", type=int, default=12, dest="max_systems",
                   help="transfer systems sampled per check")
    p.set_defaults(func=cmd_verify, default_format="txt")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            raise UsageError(parser.format_usage().strip())
        if args.format is None:
            args.format = args.default_format
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
