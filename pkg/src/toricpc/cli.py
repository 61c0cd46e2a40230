"""Command line interface: ``toricpc <command> ...``.

Exit codes: 0 success (or a positive verdict), 1 a definite negative verdict
(invalid fan, not Fano, not 2-Fano), 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any

from .bundle import FAMILIES, NotCentrallySymmetric, OpenSubfan, bundle_structure, classification_family
from .chow import two_fano_invariant_test
from .fan import Fan, FanError, locate
from .io import FanFormatError, canonical_document, load_fan, load_polytope_db, read_text, parse_fan, tabulate_m, write_fan
from .lattice import LatticeError
from .mori import WrongShape, blowdown, is_fano, picard_rank, reduce_order2
from .primcoll import (
    HypothesisViolated,
    NotRankThree,
    PrimitiveRelation,
    batyrev_rho3_structure,
    minimal_p_dimension,
    primitive_collections,
    primitive_relations,
)


class UsageError(Exception):
    pass


def _cone(c) -> list[int]:
    return [int(i) for i in c]


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _relation_json(r: PrimitiveRelation, fan: Fan) -> dict[str, Any]:
    return {"collection": _cone(r.collection), "sigma": _cone(r.sigma),
            "multiplicities": list(r.multiplicities), "order": r.order, "degree": r.degree,
            "relation": r.format(fan)}


def _emit(args, report: dict[str, Any], lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _write_out(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _pick(items: list, idx: int, what: str):
    if not 0 <= idx < len(items):
        raise UsageError(f"{what} index {idx} out of range (0..{len(items) - 1})")
    return items[idx]


# ---------------------------------------------------------------------------
# commands

def cmd_check(args) -> int:
    text = read_text(args.file)
    try:
        fan = parse_fan(text)
    except FanError as e:
        _emit(args, {"valid": False, "error": type(e).__name__, "message": str(e),
                     "cones": [_cone(c) for c in e.cones]},
              [f"invalid fan: {type(e).__name__}: {e}"])
        return 1
    probes = []
    if args.probe:
        rng = random.Random(args.seed)
        for _ in range(args.probe):
            v = [rng.randint(-5, 5) for _ in range(fan.dim)]
            probes.append((v, _cone(locate(fan, v)[0])))
    report = {"valid": True, "dim": fan.dim, "rays": fan.nrays, "max_cones": len(fan.max_cones),
              "rho": picard_rank(fan), "name": fan.name}
    lines = [f"valid fan: dim {fan.dim}, {fan.nrays} rays, {len(fan.max_cones)} maximal cones, "
             f"rho = {picard_rank(fan)}"]
    if probes:
        report["probes"] = [{"vector": v, "cone": c} for v, c in probes]
        lines += [f"  {v} lies in the relative interior of cone {c}" for v, c in probes]
    _emit(args, report, lines)
    return 0


def cmd_pc(args) -> int:
    fan = load_fan(args.file)
    rels = primitive_relations(fan)
    report = {"count": len(rels), "collections": [_cone(r.collection) for r in rels]}
    lines = [f"{len(rels)} primitive collections"]
    if args.relations:
        report["relations"] = [_relation_json(r, fan) for r in rels]
        lines += [f"  [{i}] {_cone(r.collection)}: {r.format(fan)}  (degree {r.degree})"
                  for i, r in enumerate(rels)]
    else:
        lines += [f"  [{i}] {_cone(r.collection)}" for i, r in enumerate(rels)]
    _emit(args, report, lines)
    return 0


def cmd_minp(args) -> int:
    fan = load_fan(args.file)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m = minimal_p_dimension(fan)
    note = [] if m is not None else ["no centrally symmetric collection: the fan is not projective"]
    _emit(args, {"m": m}, [f"m = {m if m is not None else 'none'}"] + note)
    return 0


def cmd_fano(args) -> int:
    fan = load_fan(args.file)
    v = is_fano(fan)
    report = {"fano": v.fano, "witness": _cone(v.witness) if v.witness else None,
              "witness_degree": v.witness_degree}
    line = "Fano" if v else f"not Fano: collection {_cone(v.witness)} has degree {v.witness_degree}"
    _emit(args, report, [line])
    return 0 if v else 1


def cmd_two_fano(args) -> int:
    fan = load_fan(args.file)
    v = two_fano_invariant_test(fan)
    report = {"passes": v.passes, "fano": v.fano.fano,
              "witness": _cone(v.witness) if v.witness is not None else None,
              "witness_value": _frac(v.witness_value) if v.witness is not None else None,
              "min_value": _frac(min(v.values.values())) if v.values else None}
    if v.passes:
        lines = ["PASSES 2-Fano (invariant-surface criterion)",
                 f"  min ch2.V(tau) = {report['min_value']}"]
    else:
        lines = ["FAILS 2-Fano (invariant-surface criterion)"]
        if not v.fano:
            lines.append(f"  not Fano: collection {_cone(v.fano.witness)} has degree {v.fano.witness_degree}")
        if v.witness is not None:
            lines.append(f"  witness cone {_cone(v.witness)}: ch2.V(tau) = {report['witness_value']}")
    _emit(args, report, lines)
    return 0 if v.passes else 1


def cmd_rho(args) -> int:
    fan = load_fan(args.file)
    _emit(args, {"rho": picard_rank(fan)}, [f"rho = {picard_rank(fan)}"])
    return 0


def cmd_blowdown(args) -> int:
    fan = load_fan(args.file)
    r = _pick(primitive_relations(fan), args.relation, "relation")
    res = blowdown(fan, r)
    doc = write_fan(res.target)
    _write_out(args.output, doc)
    report = {"relation": _relation_json(r, fan), "removed_ray": res.removed_ray,
              "center": _cone(res.center), "predicted_pcs": [_cone(p) for p in res.predicted_pcs],
              "target": canonical_document(res.target)}
    lines = [f"contracted {r.format(fan)} (removed ray {res.removed_ray})",
             f"centre in target: {_cone(res.center)}",
             f"predicted primitive collections: {[_cone(p) for p in res.predicted_pcs]}"]
    if not args.output:
        lines.append(doc.rstrip())
    _emit(args, report, lines)
    return 0


def cmd_bundle(args) -> int:
    fan = load_fan(args.file)
    P = _pick(primitive_collections(fan), args.pc, "collection")
    b = bundle_structure(fan, P)
    report: dict[str, Any] = {"collection": _cone(P), "fiber_dim": b.fiber_dim,
                              "exceptional_cones": [_cone(c) for c in b.exceptional_cones],
                              "global": b.is_global}
    lines = [f"collection {_cone(P)}: P^{b.fiber_dim}-bundle structure",
             f"E_P minimal cones: {[_cone(c) for c in b.exceptional_cones]}"]
    if isinstance(b.base, OpenSubfan):
        report["base"] = {"dim": b.base.dim, "rays": [list(r) for r in b.base.rays],
                          "cones": [_cone(c) for c in b.base.maximal_cones()]}
        lines.append(f"base (open, not complete): dim {b.base.dim}, {len(b.base.rays)} rays")
    else:
        doc = write_fan(b.base)
        _write_out(args.output, doc)
        report["base"] = canonical_document(b.base)
        lines.append("global bundle; base fan:")
        lines.append(doc.rstrip())
    _emit(args, report, lines)
    return 0


def cmd_reduce2(args) -> int:
    fan = load_fan(args.file)
    P = _pick(primitive_collections(fan), args.pc, "collection")
    res = reduce_order2(fan, P)
    doc = write_fan(res.fan)
    _write_out(args.output, doc)
    report = {"blowdowns": len(res.steps), "collection": _cone(res.collection),
              "steps": [{"relation": res_step.relation.format(res_step.source), "center": _cone(res_step.center)}
                        for res_step in res.steps],
              "fan": canonical_document(res.fan)}
    lines = [f"{len(res.steps)} blowdown(s)"]
    lines += [f"  {s.relation.format(s.source)} contracted, centre {_cone(s.center)}" for s in res.steps]
    lines.append(f"collection in the result: {_cone(res.collection)}")
    if not args.output:
        lines.append(doc.rstrip())
    _emit(args, report, lines)
    return 0


def cmd_construct(args) -> int:
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    try:
        fan = classification_family(args.family, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    doc = write_fan(fan)
    if args.output:
        _write_out(args.output, doc)
    else:
        sys.stdout.write(doc)
    return 0


def cmd_batch(args) -> int:
    db = load_polytope_db(args.db, jobs=args.jobs)
    for ident, msg in db.errors:
        print(f"rejected {ident}: {msg}", file=sys.stderr)
    if not args.tabulate_m:
        _emit(args, {"fans": len(db.fans), "rejected": len(db.errors)},
              [f"{len(db.fans)} valid fans, {len(db.errors)} rejected"])
        return 0
    table = tabulate_m(db.fans, rejected=len(db.errors))
    if args.json:
        print(json.dumps({"dim": table.dim, "total": table.total,
                          "counts": {("none" if m is None else str(m)): c for m, c in table.counts.items()},
                          "pc_total": table.pc_total, "pc_size2": table.pc_size2,
                          "rejected": table.rejected}, sort_keys=True))
    elif args.csv:
        sys.stdout.write(table.csv())
    else:
        sys.stdout.write(table.text())
    return 0


def cmd_batyrev3(args) -> int:
    fan = load_fan(args.file)
    s = batyrev_rho3_structure(fan)
    report = {"l": s.l, "parts": [_cone(p) for p in s.parts],
              "relations": [_relation_json(r, fan) for r in s.relations],
              "c": list(s.c) if s.c is not None else None, "b": list(s.b) if s.b is not None else None}
    lines = [f"l = {s.l}"]
    lines += [f"  X{i} = {_cone(p)}" for i, p in enumerate(s.parts)]
    lines += [f"  r{i}: {r.format(fan)}" for i, r in enumerate(s.relations)]
    if s.l == 5:
        lines.append(f"  c = {list(s.c)}, b = {list(s.b)}")
    _emit(args, report, lines)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured JSON report")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomised self-checks (never changes results)")
    ap = argparse.ArgumentParser(prog="toricpc", description="Primitive collections of smooth complete toric fans.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_, file_arg=True):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if file_arg:
            p.add_argument("file", help="fan JSON file, or - for stdin")
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "validate a fan")
    p.add_argument("--probe", type=int, default=0, metavar="K", help="locate K random vectors")
    p = add("pc", cmd_pc, "list primitive collections")
    p.add_argument("--relations", action="store_true", help="also print the primitive relations")
    add("minp", cmd_minp, "minimal P-dimension m(X)")
    add("fano", cmd_fano, "Fano test with witness")
    add("two-fano", cmd_two_fano, "2-Fano test on invariant surfaces")
    add("rho", cmd_rho, "Picard rank")
    p = add("blowdown", cmd_blowdown, "contract a relation t_1 + ... + t_s = z")
    p.add_argument("--relation", type=int, required=True, metavar="IDX", help="index in the `pc` listing")
    p.add_argument("-o", "--output", help="write the target fan here")
    p = add("bundle", cmd_bundle, "bundle structure of a centrally symmetric collection")
    p.add_argument("--pc", type=int, required=True, metavar="IDX", help="index in the `pc` listing")
    p.add_argument("-o", "--output", help="write the base fan here (global bundles)")
    p = add("reduce2", cmd_reduce2, "blow down until an order-2 collection has codim >= 2 exceptional locus")
    p.add_argument("--pc", type=int, required=True, metavar="IDX", help="index in the `pc` listing")
    p.add_argument("-o", "--output", help="write the resulting fan here")
    p = add("construct", cmd_construct, "fan of a named family", file_arg=False)
    p.add_argument("family", help=", ".join(FAMILIES))
    p.add_argument("--n", type=int, required=True, help="dimension")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p = add("batch", cmd_batch, "process a smooth Fano polytope database", file_arg=False)
    p.add_argument("db", help="database file, or - for stdin")
    p.add_argument("--tabulate-m", action="store_true", help="tabulate the minimal P-dimension")
    p.add_argument("--csv", action="store_true", help="CSV table output")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for ingestion")
    add("batyrev3", cmd_batyrev3, "structure of a Picard rank three fan")
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        return args.func(args)
    except (UsageError, FanFormatError, FanError, LatticeError, FileNotFoundError, IsADirectoryError,
            HypothesisViolated, NotCentrallySymmetric, NotRankThree, WrongShape, ValueError) as e:
        print(f"toricpc {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
