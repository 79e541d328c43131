"""Command-line front end.  Every subcommand prints one JSON report.

Exit codes: 0 found/true, 1 not found/false, 2 capped/partial, 64 usage error.
"""

import argparse
import json
import sys
import time

from . import bigtower, combinatorics, hjspace
from .bigint import DEFAULT_BIT_CAP
from .errors import BitCapExceeded, ParseError, ResourceLimitError
from .formats import (SCHEMA, dumps, format_coloring, format_cube, format_windowset, parse_coloring,
                      parse_cube, parse_windowset, witness_from_json, witness_to_json)
from .polyarith import PolyFamily, format_poly, parse_poly
from .rules import RuleColoring
from .search import (Coloring, Context, SearchCaps, Witness, ap_family, config_set_R, configurations,
                     find_ap, find_exp, find_poly_config, find_schur, hj_witness, phj_witness,
                     pvdw_threshold, schur_threshold, schur_triples, sumsub_pattern_search, sumsub_witness,
                     validate_avoiding, validate_witness, verify_ipr_pvdw)

EXIT = {"found": 0, "not_found": 1, "exhausted": 1, "capped": 2}
USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc.strerror}") from None


def _family(args):
    if getattr(args, "k", None):
        return ap_family(args.k)
    if not args.poly:
        raise UsageError("need at least one --poly (or --k)")
    return PolyFamily(tuple(parse_poly(p) for p in args.poly))


def _coloring(path, dense_only=False):
    c = parse_coloring(_read(path))
    if dense_only and isinstance(c, RuleColoring):
        raise UsageError(f"{path}: a dense coloring 'n r' is required here, got a rule")
    return c


class Report:
    def __init__(self, command, params, search_order="", caps=None):
        self.command = command
        self.params = params
        self.status = "found"
        self.result = {}
        self.witnesses = []
        self.counterexamples = []
        self.certificate = None
        self.search_order = search_order
        self.caps = caps or {}
        self.perf = {}

    def add_witness(self, w: Witness, context):
        self.witnesses.append(witness_to_json(w, context))

    def to_json(self):
        prov = {"search_order": self.search_order, "caps": self.caps}
        witnesses = [{**w, "provenance": prov} for w in self.witnesses]
        out = {"schema": SCHEMA, "command": self.command, "status": self.status,
               "params": self.params, "result": self.result, "witnesses": witnesses,
               "counterexamples": self.counterexamples,
               "provenance": prov, "perf": self.perf}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def _caps(args):
    return {"max_nodes": args.max_nodes, "max_window": args.max_window, "bit_cap": args.bit_cap}


# ---------------------------------------------------------------- subcommands

def cmd_fs(args):
    seq = combinatorics.GenSeq(tuple(args.seq), distinct=not args.allow_repeats)
    rep = Report("fs", {"seq": list(seq.xs)})
    rep.result = {"values": sorted(combinatorics.fs(seq))}
    return rep


def cmd_fp(args):
    seq = combinatorics.GenSeq(tuple(args.seq), distinct=not args.allow_repeats)
    rep = Report("fp", {"seq": list(seq.xs)})
    rep.result = {"values": sorted(combinatorics.fp(seq))}
    return rep


def cmd_fep(args):
    rep = Report("fep", {"seq": list(args.seq)}, "chains by length then lexicographic", _caps(args))
    try:
        rep.result = {"values": sorted(combinatorics.fep(tuple(args.seq), args.bit_cap))}
    except BitCapExceeded as exc:
        rep.status = "capped"
        rep.result = {"overflow_chain": list(exc.chain or ()), "message": str(exc)}
    return rep


def cmd_sumsub_check(args):
    rep = Report("sumsub-check", {"y": args.y, "x": args.x}, "blocks depth-first, prefix-first")
    found = combinatorics.is_sum_subsystem(tuple(args.y), tuple(args.x))
    if found is None:
        rep.status = "not_found"
    else:
        rep.result = {"blocks": [list(b) for b in found.blocks]}
    return rep


def cmd_find_config(args):
    c = _coloring(args.coloring, dense_only=True)
    context = {"coloring": format_coloring(c)}
    if args.k:
        rep = Report("find-config", {"k": args.k}, "(a, d) lexicographic")
        w = find_ap(c, args.k)
    else:
        F = _family(args)
        rep = Report("find-config", {"polys": F.labels(), "include_anchor": args.anchor},
                     "(a, d) lexicographic")
        w = find_poly_config(c, F, include_anchor=args.anchor)
    if w is None:
        rep.status = "not_found"
    else:
        rep.add_witness(w, context)
    return rep


def _family_json(kind, args, F=None):
    if kind in ("schur", "product-schur"):
        return {"type": "schur", "op": "add" if kind == "schur" else "mul", "distinct": not args.allow_equal}
    return {"type": "poly", "polys": F.labels(), "include_anchor": args.anchor}


def _family_edges(fam, n):
    if fam["type"] == "schur":
        return [e for _, _, e in schur_triples(n, fam["op"], fam["distinct"])]
    if fam["type"] == "poly":
        F = PolyFamily(tuple(parse_poly(p) for p in fam["polys"]))
        return [e for _, _, e in configurations(F, n, fam.get("include_anchor", True))]
    if fam["type"] == "hj":
        t = fam["t"]
        return [[i + 1 for i in e] for e in hjspace.hj_edges(t, fam["N"])]
    raise ValueError(f"unknown family type {fam['type']!r}")


def cmd_threshold(args):
    caps = SearchCaps(max_nodes=args.max_nodes, max_window=args.max_window)
    kind = args.kind
    if kind in ("schur", "product-schur"):
        op = "add" if kind == "schur" else "mul"
        fam = _family_json(kind, args)
        params = {"kind": kind, "r": args.r, "max": args.max, "distinct": not args.allow_equal}
        res = schur_threshold(args.r, op, args.max, distinct=not args.allow_equal, caps=caps,
                              workers=args.workers)
    else:
        if kind == "vdw":
            if not args.k:
                raise UsageError("--kind vdw needs --k")
            F = ap_family(args.k)
        else:
            F = _family(args)
        fam = _family_json(kind, args, F)
        params = {"kind": kind, "r": args.r, "max": args.max, "polys": F.labels(),
                  "include_anchor": args.anchor}
        if kind == "vdw":
            params["k"] = args.k
        res = pvdw_threshold(F, args.r, args.max, include_anchor=args.anchor, caps=caps,
                             workers=args.workers)
    rep = Report("threshold", params, "windows ascending; colorings lexicographic, canonical colors",
                 {"max_nodes": caps.max_nodes, "max_window": caps.max_window})
    rep.status = res.status
    rep.result = {"n": res.n, "searched_up_to": res.searched_up_to, "avoiding_window": res.avoiding_n,
                  "avoiding_coloring": list(res.avoiding) if res.avoiding is not None else None}
    if res.avoiding is not None:
        rep.certificate = {"schema": SCHEMA, "kind": "avoiding", "family": fam, "r": args.r,
                           "coloring": format_coloring(Coloring(res.avoiding_n, args.r, res.avoiding))}
    rep.perf = {"nodes": res.nodes}
    return rep


def cmd_schur(args):
    c = _coloring(args.coloring, dense_only=True)
    rep = Report("schur", {"op": args.op, "distinct": not args.allow_equal}, "(x, y) lexicographic")
    w = find_schur(c, args.op, distinct=not args.allow_equal)
    if w is None:
        rep.status = "not_found"
    else:
        rep.add_witness(w, {"coloring": format_coloring(c)})
    return rep


def cmd_exp_search(args):
    c = _coloring(args.coloring)
    rep = Report("exp-search", {"x_max": args.x_max, "y_max": args.y_max}, "(x, y) lexicographic", _caps(args))
    res = find_exp(c, args.x_max, args.y_max, args.bit_cap)
    rep.counterexamples = []
    rep.result = {"skipped": res.skipped}
    if res.witness is None:
        rep.status = "capped" if res.skipped else "not_found"
    else:
        rep.add_witness(res.witness, {"coloring": format_coloring(c)})
    return rep


def cmd_hj_search(args):
    cube = parse_cube(_read(args.cube))
    if cube.kind != "hj":
        raise UsageError("hj-search needs an 'hj t N r' cube")
    rep = Report("hj-search", {"t": cube.q, "N": cube.N, "r": cube.r}, "variable words lexicographic, v < 1 < ... < t")
    w = hjspace.hj_search(cube)
    if w is None:
        rep.status = "not_found"
    else:
        word = hjspace.format_word(w)
        rep.add_witness(hj_witness(cube, w), {"cube": format_cube(cube)})
        rep.result = {"word": word, "line": [hjspace.format_word(p) for p in hjspace.line(w, cube.q)]}
    return rep


def cmd_hj_number(args):
    rep = Report("hj-number", {"r": args.r, "t": args.t, "max": args.max},
                 "N ascending; colorings lexicographic, canonical colors",
                 {"max_nodes": args.max_nodes})
    res = hjspace.hj_number(args.r, args.t, args.max, workers=args.workers, max_nodes=args.max_nodes)
    rep.status = res.status
    rep.result = {"N": res.N, "avoiding_N": res.avoiding_N,
                  "avoiding_coloring": list(res.avoiding) if res.avoiding is not None else None}
    if res.avoiding is not None and res.avoiding_N:
        rep.certificate = {"schema": SCHEMA, "kind": "avoiding", "r": args.r,
                           "family": {"type": "hj", "t": args.t, "N": res.avoiding_N},
                           "coloring": format_coloring(Coloring(len(res.avoiding), args.r, res.avoiding))}
    rep.perf = {"nodes": res.nodes}
    return rep


def cmd_phj_search(args):
    cube = parse_cube(_read(args.cube))
    if cube.kind != "phj":
        raise UsageError("phj-search needs a 'phj q N d r' cube")
    rep = Report("phj-search", {"q": cube.q, "N": cube.N, "d": cube.d, "r": cube.r},
                 "gamma by size then lexicographic; a lexicographic")
    found = hjspace.phj_search(cube)
    if found is None:
        rep.status = "not_found"
    else:
        a, gamma = found
        rep.add_witness(phj_witness(cube, a, gamma), {"cube": format_cube(cube)})
        rep.result = {"a": [list(lv) for lv in a.levels], "gamma": list(gamma)}
    return rep


def _parse_point(text, q, N):
    levels = []
    for part in text.split("|"):
        try:
            levels.append(tuple(int(t) for t in part.split()))
        except ValueError:
            raise ParseError(f"bad point level {part!r}", token=part.strip()) from None
    return hjspace.PHJPoint(q, N, tuple(levels))


def cmd_phj_embed(args):
    xs = tuple(args.xs)
    a = _parse_point(args.point, args.q, len(xs))
    base, value = hjspace.embedded_pattern(a, args.gamma, xs, tuple(args.coeffs))
    s = sum(xs[i - 1] for i in set(args.gamma))
    predicted = base + sum(c * s ** j for j, c in enumerate(args.coeffs, start=1))
    rep = Report("phj-embed", {"q": args.q, "xs": list(xs), "point": [list(lv) for lv in a.levels],
                               "gamma": sorted(set(args.gamma)), "coeffs": list(args.coeffs)})
    rep.result = {"base": base, "value": value, "x_gamma": s, "predicted": predicted,
                  "gamma_of_point": hjspace.gamma_embed(a, xs)}
    rep.status = "found" if predicted == value else "not_found"
    return rep


def _params(args):
    return combinatorics.LargenessParams(args.g, args.L)


def cmd_config_R(args):
    A = parse_windowset(_read(args.set))
    F = _family(args)
    R = config_set_R(A, F, _params(args))
    rep = Report("config-R", {"polys": F.labels(), "g": args.g, "L": args.L, "n": A.n})
    rep.result = {"R": R.sorted()}
    rep.status = "found" if R.members else "not_found"
    return rep


def cmd_ipstar_check(args):
    A = parse_windowset(_read(args.set))
    rep = Report("ipstar-check", {"r": args.r, "n": A.n, "distinct": not args.allow_repeats},
                 "sequences lexicographic (sorted)")
    res = combinatorics.is_ip_r_star(A, args.r, distinct=not args.allow_repeats, workers=args.workers)
    rep.result = {"verdict": res.status}
    if res.status == "fails":
        rep.status = "not_found"
        ce = list(res.counterexample)
        rep.counterexamples = [{"r": args.r, "seq": ce, "fs": sorted(combinatorics.fs(ce))}]
    elif res.status == "vacuous":
        rep.status = "exhausted"
    return rep


def cmd_ipr_verify(args):
    A = parse_windowset(_read(args.set))
    F = _family(args)
    res = verify_ipr_pvdw(A, F, _params(args), args.r_max, distinct=not args.allow_repeats,
                          workers=args.workers)
    rep = Report("ipr-verify", {"polys": F.labels(), "g": args.g, "L": args.L, "r_max": args.r_max,
                                "n": A.n, "distinct": not args.allow_repeats},
                 "r ascending; sequences lexicographic (sorted)")
    rep.result = {"r": res.r, "R": res.R.sorted(), "verdict": res.status,
                  "checks": [{"r": c.r, "verdict": c.status} for c in res.checks]}
    rep.counterexamples = [{"r": c.r, "seq": list(c.counterexample)} for c in res.checks
                           if c.counterexample is not None]
    rep.status = {"found": "found", "none": "not_found", "vacuous": "exhausted"}[res.status]
    return rep


def cmd_sumsub_search(args):
    A = parse_windowset(_read(args.set))
    B = parse_windowset(_read(args.set_b)) if args.set_b else None
    F = _family(args)
    rep = Report("sumsub-search", {"x": args.x, "polys": F.labels(), "depth": args.depth,
                                   "include_anchor": args.anchor, "n": A.n, "with_B": B is not None},
                 "block partitions depth-first, prefix-first", {"max_nodes": args.max_nodes})
    res = sumsub_pattern_search(A, B, tuple(args.x), F, args.depth, include_anchor=args.anchor,
                                max_nodes=args.max_nodes)
    if res is None:
        rep.status = "not_found"
        return rep
    rep.result = {"y": list(res.y), "blocks": [list(b) for b in res.blocks.blocks],
                  "anchors": list(res.anchors), "anchor_sets": [s.sorted() for s in res.anchor_sets]}
    context = {"A": format_windowset(A)}
    if B is not None:
        context["B"] = format_windowset(B)
    rep.add_witness(sumsub_witness(res, args.x, F, args.anchor, A.n), context)
    return rep


def cmd_tower(args):
    modes = [args.expr is not None, args.f is not None, args.star is not None]
    if sum(modes) != 1:
        raise UsageError("tower needs exactly one of --expr, --f, --star")
    rep = Report("tower", {}, "", {"bit_cap": args.bit_cap})
    if args.expr is not None:
        e = bigtower.parse_tower(args.expr)
        rep.params = {"expr": e.prefix()}
        try:
            rep.result = {"value": e.evaluate(args.bit_cap)}
        except BitCapExceeded as exc:
            rep.status = "capped"
            rep.result = {"message": str(exc)}
    elif args.f is not None:
        if args.x is None:
            raise UsageError("--f needs --x")
        res = bigtower.f_seq(args.f, args.x, args.bit_cap)
        rep.params = {"k": args.f, "x": args.x}
        rep.result = {"expr": res.expr.prefix(), "value": res.value}
        rep.status = "capped" if res.capped else "found"
    else:
        n, a, b = args.star
        rep.params = {"n": n, "a": a, "b": b}
        try:
            rep.result = {"value": bigtower.star(n, a, b, args.bit_cap)}
        except BitCapExceeded as exc:
            rep.status = "capped"
            rep.result = {"message": str(exc)}
    return rep


def cmd_pf_pattern(args):
    if len(args.family) < args.k_max - 1:
        raise UsageError(f"need --family for each index 1..{args.k_max - 1}")
    fams = [PolyFamily(tuple(parse_poly(p) for p in f.split(","))) for f in args.family]
    res = bigtower.pf_pattern(args.n, tuple(args.xs), fams, args.k_max, args.bit_cap)
    rep = Report("pf-pattern", {"n": args.n, "xs": args.xs, "families": [f.labels() for f in fams],
                                "k_max": args.k_max}, "k ascending; choices lexicographic", _caps(args))
    rep.result = {"values": sorted(res.values), "omitted": res.omitted, "complete": res.complete}
    rep.status = "found" if res.complete else "capped"
    return rep


def _bound(tok):
    if tok == "none":
        return None
    if tok.startswith("f"):
        k = int(tok[1:])
        return lambda a, k=k: bigtower.f_value(k, a)
    return int(tok)


def cmd_lambda_check(args):
    c = _coloring(args.coloring)
    try:
        bounds = [_bound(t) for t in (args.bound or [])]
    except ValueError:
        raise UsageError(f"bad --bound in {args.bound}") from None
    res = bigtower.check_lambda_pattern(tuple(args.a), args.N, bounds, c, args.bit_cap)
    rep = Report("lambda-check", {"a": args.a, "N": args.N, "bounds": args.bound or []},
                 "k ascending; lambda vectors lexicographic", _caps(args))
    rep.result = {"monochromatic": res.monochromatic, "checked": res.checked, "omitted": res.omitted}
    if not res.monochromatic:
        rep.status = "not_found"
        rep.counterexamples = [{"element": res.failing, **res.failing_at}]
    elif res.omitted:
        rep.status = "capped"
    return rep


def cmd_fep_search(args):
    c = _coloring(args.coloring)
    res = bigtower.fep_monochrome_search(range(args.lo, args.hi + 1), args.size, c, args.bit_cap)
    rep = Report("fep-search", {"lo": args.lo, "hi": args.hi, "size": args.size},
                 "increasing sequences lexicographic", _caps(args))
    rep.result = {"skipped": res.skipped, "examined": res.examined}
    if res.seq is None:
        rep.status = "capped" if res.skipped else "not_found"
    else:
        window = c.n if isinstance(c, Coloring) else None
        rep.add_witness(Witness("tower", tuple(res.elements), res.color, {"xs": list(res.seq)}, window),
                        {"coloring": format_coloring(c)})
    return rep


def _context_from(obj_ctx, args):
    ctx = Context(bit_cap=args.bit_cap)
    obj_ctx = obj_ctx or {}
    if args.coloring:
        ctx.coloring = _coloring(args.coloring)
    elif "coloring" in obj_ctx:
        ctx.coloring = parse_coloring(obj_ctx["coloring"])
    if args.set:
        ctx.A = parse_windowset(_read(args.set))
    elif "A" in obj_ctx:
        ctx.A = parse_windowset(obj_ctx["A"])
    if args.set_b:
        ctx.B = parse_windowset(_read(args.set_b))
    elif "B" in obj_ctx:
        ctx.B = parse_windowset(obj_ctx["B"])
    if args.cube:
        ctx.cube = parse_cube(_read(args.cube))
    elif "cube" in obj_ctx:
        ctx.cube = parse_cube(obj_ctx["cube"])
    return ctx


def verify_certificate(cert, diag):
    c = parse_coloring(cert["coloring"])
    if not isinstance(c, Coloring):
        diag.append("avoiding certificate needs a dense coloring")
        return False
    if c.r != cert["r"]:
        diag.append(f"coloring uses r={c.r}, certificate says {cert['r']}")
        return False
    fam = cert["family"]
    if fam["type"] == "hj":
        edges = _family_edges(fam, None)
        if c.n != fam["t"] ** fam["N"]:
            diag.append("coloring size does not match the cube")
            return False
    else:
        edges = _family_edges(fam, c.n)
    if not validate_avoiding(c, edges):
        diag.append("coloring contains a monochromatic configuration")
        return False
    return True


def cmd_verify_witness(args):
    try:
        obj = json.loads(_read(args.file))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", token=args.file) from None
    rep = Report("verify-witness", {})
    diag = []
    checked = 0
    ok = True
    if obj.get("kind") == "avoiding":
        items, certs = [], [obj]
    elif "witnesses" in obj:
        items, certs = obj["witnesses"], ([obj["certificate"]] if obj.get("certificate") else [])
    else:
        items, certs = [obj], []
    for item in items:
        w = witness_from_json(item)
        ctx = _context_from(item.get("context"), args)
        checked += 1
        if not validate_witness(w, ctx, diag):
            ok = False
    for cert in certs:
        checked += 1
        if not verify_certificate(cert, diag):
            ok = False
    rep.result = {"valid": ok and checked > 0, "checked": checked, "diagnostics": diag}
    rep.status = "found" if ok and checked > 0 else "not_found"
    return rep


# ---------------------------------------------------------------- parser

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--max-nodes", type=int, default=5_000_000)
    common.add_argument("--max-window", type=int, default=10_000)
    common.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP)

    p = _Parser(prog="ramseyfin", description="Finite-scale arithmetic Ramsey engine.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def polys(sp, k=False):
        sp.add_argument("--poly", action="append", default=[], help="polynomial, e.g. 'd^2+3d'")
        if k:
            sp.add_argument("--k", type=int, help="use {d, 2d, ..., (k-1)d}")

    for name, fn in (("fs", cmd_fs), ("fp", cmd_fp)):
        sp = add(name, fn, f"finite {'sums' if name == 'fs' else 'products'} of a sequence")
        sp.add_argument("--seq", type=int, nargs="+", required=True)
        sp.add_argument("--allow-repeats", action="store_true")
    sp = add("fep", cmd_fep, "finite exponential towers of a sequence")
    sp.add_argument("--seq", type=int, nargs="+", required=True)

    sp = add("sumsub-check", cmd_sumsub_check, "is y a sum subsystem of x")
    sp.add_argument("--y", type=int, nargs="+", required=True)
    sp.add_argument("--x", type=int, nargs="+", required=True)

    sp = add("find-config", cmd_find_config, "monochromatic {a} u {a+p(d)} in a coloring")
    sp.add_argument("--coloring", required=True)
    polys(sp, k=True)
    sp.add_argument("--anchor", dest="anchor", action="store_true", default=True)
    sp.add_argument("--no-anchor", dest="anchor", action="store_false")

    sp = add("threshold", cmd_threshold, "least n forcing a monochromatic configuration")
    sp.add_argument("--kind", choices=["vdw", "poly", "schur", "product-schur"], required=True)
    polys(sp, k=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--max", type=int, default=50)
    sp.add_argument("--allow-equal", action="store_true", help="Schur triples with x = y allowed")
    sp.add_argument("--anchor", dest="anchor", action="store_true", default=True)
    sp.add_argument("--no-anchor", dest="anchor", action="store_false")

    sp = add("schur", cmd_schur, "monochromatic {x, y, x+y} or {x, y, xy}")
    sp.add_argument("--coloring", required=True)
    sp.add_argument("--op", choices=["add", "mul"], default="add")
    sp.add_argument("--allow-equal", action="store_true")

    sp = add("exp-search", cmd_exp_search, "monochromatic {x, y, x^y}")
    sp.add_argument("--coloring", required=True)
    sp.add_argument("--x-max", type=int, required=True)
    sp.add_argument("--y-max", type=int, required=True)

    sp = add("hj-search", cmd_hj_search, "monochromatic combinatorial line")
    sp.add_argument("--cube", required=True)
    sp = add("hj-number", cmd_hj_number, "least N forcing a monochromatic line")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--max", type=int, required=True)
    sp = add("phj-search", cmd_phj_search, "monochromatic polynomial Hales-Jewett pattern")
    sp.add_argument("--cube", required=True)
    sp = add("phj-embed", cmd_phj_embed, "gamma-embedding of a (+) c gamma ...")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--xs", type=int, nargs="+", required=True)
    sp.add_argument("--point", required=True, help="levels separated by '|', e.g. '1 1 | 1 1 1 1'")
    sp.add_argument("--gamma", type=int, nargs="+", required=True)
    sp.add_argument("--coeffs", type=int, nargs="+", required=True)

    for name, fn in (("config-R", cmd_config_R), ("ipr-verify", cmd_ipr_verify)):
        sp = add(name, fn, "recurrence set R" if name == "config-R" else "least r with R IP_r* in the window")
        sp.add_argument("--set", required=True)
        polys(sp)
        sp.add_argument("--g", type=int, required=True)
        sp.add_argument("--L", type=int, required=True)
        if name == "ipr-verify":
            sp.add_argument("--r-max", type=int, required=True)
            sp.add_argument("--allow-repeats", action="store_true")
    sp = add("ipstar-check", cmd_ipstar_check, "does a set meet every IP_r set in its window")
    sp.add_argument("--set", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--allow-repeats", action="store_true")

    sp = add("sumsub-search", cmd_sumsub_search, "polynomial patterns over a sum subsystem")
    sp.add_argument("--set", required=True)
    sp.add_argument("--set-b")
    sp.add_argument("--x", type=int, nargs="+", required=True)
    polys(sp)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--anchor", action="store_true", help="require the anchor a(N) itself in A")

    sp = add("tower", cmd_tower, "tower expressions, f_k(x), and n^a*b")
    sp.add_argument("--expr")
    sp.add_argument("--f", type=int)
    sp.add_argument("--x", type=int)
    sp.add_argument("--star", type=int, nargs=3, metavar=("N", "A", "B"))

    sp = add("pf-pattern", cmd_pf_pattern, "x_k * n^(sum p_i(x_i)) pattern set")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--xs", type=int, nargs="+", required=True)
    sp.add_argument("--family", action="append", default=[], help="comma-separated polynomials for one index")
    sp.add_argument("--k-max", type=int, required=True)

    sp = add("lambda-check", cmd_lambda_check, "is a_k * 2^(sum lambda_i a_i) monochromatic")
    sp.add_argument("--a", type=int, nargs="+", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--bound", action="append", help="bound for lambda_i, i >= 2: integer, fK, or none")
    sp.add_argument("--coloring", required=True)

    sp = add("fep-search", cmd_fep_search, "increasing sequence with monochromatic FEP")
    sp.add_argument("--lo", type=int, required=True)
    sp.add_argument("--hi", type=int, required=True)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--coloring", required=True)

    sp = add("verify-witness", cmd_verify_witness, "re-check a witness, certificate or report")
    sp.add_argument("file")
    sp.add_argument("--coloring")
    sp.add_argument("--set")
    sp.add_argument("--set-b")
    sp.add_argument("--cube")
    return p


def run(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "workers", 1) < 1 or getattr(args, "max_nodes", 1) < 1 or getattr(args, "bit_cap", 1) < 1:
            raise UsageError("caps and --workers must be positive")
        t0 = time.perf_counter()
        rep = args.fn(args)
        rep.perf = {**rep.perf, "elapsed_s": round(time.perf_counter() - t0, 6), "workers": args.workers}
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return USAGE
    except ParseError as exc:
        tok = f" (offending token: {exc.token!r})" if exc.token is not None else ""
        print(f"input error: {exc}{tok}", file=stderr)
        return USAGE
    except ResourceLimitError as exc:
        print(f"resource cap: {exc}", file=stderr)
        out = {"schema": SCHEMA, "command": argv[0] if argv else None, "status": "capped",
               "result": {"message": str(exc)}}
        stdout.write(dumps(out))
        return EXIT["capped"]
    except ValueError as exc:
        print(f"input error: {exc}", file=stderr)
        return USAGE
    text = dumps(rep.to_json())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT[rep.status]


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
