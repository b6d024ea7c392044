"""Command-line entry point.

Exit codes: 0 yes/ok, 1 no, 2 unknown or budget exhausted, 3 usage error,
4 input or runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats as fm
from .connectivity import SteinerInstance, verify
from .graph import GraphError, orient
from .hardness import (
    FormulaError,
    gen_3col_to_modified,
    gen_max2sat_to_3col,
    gen_mnae_to_k2,
    gen_modified_to_4term,
    lift_k,
    pad_terminals,
)
from .minors import (
    BudgetExceeded,
    catalog_decide,
    enumerate_minimal,
    enumerate_minimal_digraphs,
    fixed_topo_minor,
    fixed_topo_minor_directed,
)
from .reductions import cap_reduction, lift_orientation, reduce_degree_k, reduce_r, three_regularize
from .solver import DEFAULT_BUDGET, brute_force_solve, maximize_k, solve
from . import structure as st

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3, 4
_CODE = {"yes": EXIT_YES, "no": EXIT_NO, "unknown": EXIT_UNKNOWN}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Out:
    """Collects report lines and writes them once to a file or stdout."""

    def __init__(self, args):
        self.fmt = args.format
        self.path = getattr(args, "output", "-")

    def write(self, text: str):
        if self.path in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(self.path).write_text(text)

    def report(self, fields: dict, text_lines=None):
        if self.fmt == "structured":
            self.write(json.dumps(fields, sort_keys=True) + "\n")
        else:
            lines = text_lines if text_lines is not None else [
                f"{k} {_flat(v)}" for k, v in fields.items() if k != "type"]
            self.write("".join(l + "\n" for l in lines))


def _flat(v):
    if isinstance(v, (list, tuple)):
        return " ".join(_flat(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load(path: str, expect):
    return fm.loads(_read(path), expect)[1]


def _bits(o) -> str:
    return "".join(str(int(x)) for x in o)


# ---------------------------------------------------------------------------
# solve / oracle / verify / maximize-k


def _decide(inst: SteinerInstance, args, oracle: bool):
    if oracle:
        return brute_force_solve(inst, limit=args.limit)
    return solve(inst, args.budget, args.threads)


def _verdict_report(out: _Out, res):
    fields = {"type": "verdict", "verdict": res.kind}
    lines = [f"v {res.kind}"]
    if res.is_yes:
        fields["orientation"] = _bits(res.orientation)
        lines.append(fm.serialize_orientation(res.orientation).rstrip("\n"))
    out.report(fields, lines)


def _corpus(path: Path) -> list:
    return sorted(p for p in path.iterdir() if p.is_file() and not p.name.startswith("."))


def _cmd_decide(args, oracle: bool) -> int:
    out = _Out(args)
    src = Path(args.instance) if args.instance != "-" else None
    if src is not None and src.is_dir():
        rows, worst = [], EXIT_YES
        for p in _corpus(src):
            res = _decide(_load(str(p), ["steiner"]), args, oracle)
            rows.append((p.name, res.kind))
            if res.is_unknown:
                worst = EXIT_UNKNOWN
        out.report({"type": "verdicts", "verdicts": [{"file": n, "verdict": v} for n, v in rows]},
                   [f"{n} {v}" for n, v in rows])
        return worst
    res = _decide(_load(args.instance, ["steiner"]), args, oracle)
    _verdict_report(out, res)
    return _CODE[res.kind]


def cmd_solve(args):
    return _cmd_decide(args, oracle=False)


def cmd_oracle(args):
    return _cmd_decide(args, oracle=True)


def cmd_verify(args):
    inst = _load(args.instance, ["steiner"])
    o = _load(args.orientation, ["orientation"])
    if len(o) != inst.graph.m:
        raise fm.FormatError(f"orientation has {len(o)} entries, instance has {inst.graph.m} edges")
    v = verify(inst, o)
    out = _Out(args)
    if v.ok:
        out.report({"type": "verify", "ok": True}, ["v ok"])
        return EXIT_YES
    c = v.certificate
    side = sorted(c.side)
    out.report({"type": "verify", "ok": False, "terminal": c.separated_terminal, "side": side,
                "out_degree": c.out_degree},
               ["v no", f"c terminal {c.separated_terminal} out_degree {c.out_degree} k {inst.k}",
                "c side " + " ".join(map(str, side))])
    return EXIT_NO


def cmd_maximize_k(args):
    inst = _load(args.instance, ["steiner"])
    best, best_res, stop = maximize_k(inst, args.budget, args.threads)
    fields = {"type": "maximize-k", "best_k": best, "exact": stop.is_no}
    lines = [f"k {best}", f"exact {_flat(stop.is_no)}"]
    if best_res is not None:
        fields["orientation"] = _bits(best_res.orientation)
        lines.append(fm.serialize_orientation(best_res.orientation).rstrip("\n"))
    _Out(args).report(fields, lines)
    return EXIT_YES if stop.is_no else EXIT_UNKNOWN


# ---------------------------------------------------------------------------
# reduce / generate


def cmd_reduce(args):
    if args.kind == "rdemand":
        red = reduce_r(_load(args.input, ["rorient"]))
    else:
        inst = _load(args.input, ["steiner"])
        red = {"cap": cap_reduction, "degk": reduce_degree_k, "threg": three_regularize}[args.kind](inst)
    out = _Out(args)
    if args.lift:
        o = _load(args.lift, ["orientation"])
        lifted = lift_orientation(red, o)
        out.write(fm.dumps(lifted, args.format, "orientation"))
    else:
        out.write(fm.dumps(red.instance, args.format))
    return EXIT_YES


def cmd_generate(args):
    kind = args.kind
    out = _Out(args)
    if kind == "random-steiner":
        return _generate_random(args)
    if args.input is None:
        raise fm.FormatError(f"generate {kind} needs an input file")
    if kind == "mnae-k2":
        res = gen_mnae_to_k2(_load(args.input, ["nae3"]))
    elif kind == "lift-k":
        res = lift_k(_load(args.input, ["steiner"]), _need(args.k, "--k"))
    elif kind == "max2sat-3col":
        res = gen_max2sat_to_3col(_load(args.input, ["cnf2"]))[0]
    elif kind == "3col-modified":
        res = gen_3col_to_modified(_load(args.input, ["cnf2col"]))[0]
    elif kind == "modified-4t":
        res = gen_modified_to_4term(_load(args.input, ["modified"]))[0]
    else:  # pad-t
        res = pad_terminals(_load(args.input, ["steiner"]), _need(args.t, "--t"))
    out.write(fm.dumps(res, args.format))
    return EXIT_YES


def _need(val, flag):
    if val is None:
        raise fm.FormatError(f"missing required option {flag}")
    return val


def _generate_random(args):
    import random

    from .generators import random_instance, random_small_instance, random_three_regular

    rng = random.Random(args.seed)
    recs = []
    for _ in range(args.count):
        if args.regular:
            inst = random_three_regular(rng, _need(args.n, "--n"), args.k or 1, args.t or 2)
        elif args.n is not None and args.m is not None:
            inst = random_instance(rng, args.n, args.m, args.k or 1, args.t or 1)
        else:
            inst = random_small_instance(rng)
        recs.append(fm.dumps(inst, args.format))
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        width = len(str(max(args.count - 1, 0)))
        for i, text in enumerate(recs):
            (d / f"inst_{i:0{width}d}.txt").write_text(text)
    else:
        _Out(args).write("".join(recs))
    return EXIT_YES


# ---------------------------------------------------------------------------
# minors


def cmd_enumerate_minimal(args):
    out = _Out(args)
    if args.digraphs:
        try:
            recs = enumerate_minimal_digraphs(args.k, args.t, args.max_vertices, args.gen_budget)
        except BudgetExceeded:
            sys.stderr.write("generation budget exhausted\n")
            return EXIT_UNKNOWN
        if args.format == "structured":
            items = [fm.to_structured((r.digraph, r.root, r.terminals, r.k), "sdigraph") for r in recs]
            out.write(json.dumps({"type": "digraph-catalog", "k": args.k, "t": args.t,
                                  "max_vertices": args.max_vertices, "entries": items}, sort_keys=True) + "\n")
        else:
            out.write(f"p digraph-catalog {args.k} {args.t} {args.max_vertices} {len(recs)}\n" + "".join(
                fm.serialize_sdigraph(r.digraph, r.root, r.terminals, r.k) for r in recs))
        return EXIT_YES
    cat = enumerate_minimal(args.k, args.t, args.max_vertices, args.gen_budget, args.budget)
    out.write(fm.dumps(cat, args.format))
    sizes = sorted({e.instance.graph.n for e in cat.entries})
    sys.stderr.write(f"entries {len(cat)} vertex counts {sizes} complete {int(cat.complete)}\n")
    return EXIT_YES if cat.complete else EXIT_UNKNOWN


def _w_map(pattern_fixed, host_fixed, spec):
    if spec:
        W = {}
        for item in spec.split(","):
            a, b = item.split(":")
            W[int(a)] = int(b)
        return W
    if len(pattern_fixed) != len(host_fixed):
        raise GraphError("pattern and host fix different numbers of vertices")
    return dict(zip(pattern_fixed, host_fixed))


def cmd_minor_test(args):
    hk, host = fm.loads(_read(args.host), ["steiner", "sdigraph"])
    pk, pat = fm.loads(_read(args.pattern), ["steiner", "sdigraph"])
    if hk != pk:
        raise fm.FormatError("host and pattern must both be undirected or both directed")
    try:
        if hk == "steiner":
            W = _w_map([pat.root, *pat.terminals], [host.root, *host.terminals], args.fixed)
            emb = fixed_topo_minor(host.graph, pat.graph, W, args.budget)
        else:
            W = _w_map([pat[1], *pat[2]], [host[1], *host[2]], args.fixed)
            emb = fixed_topo_minor_directed(host[0], pat[0], W, args.budget)
    except BudgetExceeded:
        _Out(args).report({"type": "minor-test", "verdict": "unknown"}, ["v unknown"])
        return EXIT_UNKNOWN
    if emb is None:
        _Out(args).report({"type": "minor-test", "verdict": "no"}, ["v no"])
        return EXIT_NO
    vm = [[p, h] for p, h in sorted(emb.vertex_map.items())]
    paths = [[list(vs), list(es)] for vs, es in emb.path_map]
    lines = ["v yes"] + [f"m {p} {h}" for p, h in vm]
    lines += [f"path {i} " + " ".join(map(str, vs)) + " | " + " ".join(map(str, es)) for i, (vs, es) in enumerate(paths)]
    _Out(args).report({"type": "minor-test", "verdict": "yes", "vertex_map": vm, "paths": paths}, lines)
    return EXIT_YES


def cmd_catalog_decide(args):
    inst = _load(args.instance, ["steiner"])
    cat = _load(_need(args.catalog, "--catalog"), ["catalog"])
    verdict = catalog_decide(inst, cat, args.complete, args.budget)
    _Out(args).report({"type": "catalog-decide", "verdict": verdict}, [f"v {verdict}"])
    return {"yes": EXIT_YES, "no": EXIT_NO}.get(verdict, EXIT_UNKNOWN)


# ---------------------------------------------------------------------------
# analyze


def _digraph_input(args):
    kind, obj = fm.loads(_read(args.input), ["sdigraph", "steiner"])
    if kind == "sdigraph":
        return obj
    if not args.orientation:
        raise fm.FormatError("an undirected instance needs --orientation")
    o = _load(args.orientation, ["orientation"])
    return orient(obj.graph, o), obj.root, obj.terminals, obj.k


def _cycle_list(spec: str) -> list:
    return [tuple(int(x) for x in part.split(",") if x) for part in spec.split(";") if part]


def cmd_analyze(args):
    d, root, terms, k = _digraph_input(args)
    out = _Out(args)
    kind = args.kind
    s = args.terminal if args.terminal is not None else (terms[0] if terms else None)
    if kind in ("fas", "fvs"):
        fn = st.min_feedback_arc_set if kind == "fas" else st.min_feedback_vertex_set
        r = fn(d, args.exact_limit)
        items = sorted(r.items)
        out.report({"type": kind, "size": len(items), "items": items, "exact": r.exact})
        return EXIT_YES
    if kind == "cycles":
        cycles, exact = st.max_disjoint_cycles(d, args.exact_limit)
        out.report({"type": "cycles", "count": len(cycles), "cycles": [list(c) for c in cycles], "exact": exact},
                   [f"count {len(cycles)}", f"exact {_flat(exact)}"] + [f"cycle {_flat(list(c))}" for c in cycles])
        return EXIT_YES
    if kind == "lemma-min":
        rep = st.check_lemma_minimality(d, k, terms, root)
        out.report({"type": "lemma-min", "cycles": rep.cycles_checked, "violations": len(rep.violations),
                    "ok": rep.ok})
        return EXIT_YES if rep.ok else EXIT_NO
    if s is None:
        raise GraphError("no terminal to analyze")
    if kind == "tight-lattice":
        rep = st.tight_cut_lattice_check(d, root, s, k, args.samples, args.seed or 0)
        out.report({"type": "tight-lattice", "terminal": s, "cuts": rep.cuts_found, "pairs": rep.pairs_checked,
                    "violations": len(rep.violations), "ok": rep.ok})
        return EXIT_YES if rep.ok else EXIT_NO
    cycles = _cycle_list(_need(args.cycles, "--cycles"))
    if kind == "essential":
        if len(cycles) != 1:
            raise fm.FormatError("essential takes exactly one cycle")
        ess = st.is_s_essential(d, root, s, cycles[0], k)
        out.report({"type": "essential", "terminal": s, "essential": ess})
        return EXIT_YES if ess else EXIT_NO
    # ordered
    w = st.find_s_ordered_witness(d, root, s, cycles, k)
    if w is None:
        out.report({"type": "ordered", "terminal": s, "ordered": False})
        return EXIT_NO
    cuts = [sorted(c.side) for c in w.cuts]
    out.report({"type": "ordered", "terminal": s, "ordered": True, "cuts": cuts},
               ["ordered true"] + [f"cut {i} {_flat(c)}" for i, c in enumerate(cuts)])
    return EXIT_YES


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    common.add_argument("--threads", type=int, default=1, help="worker threads (never changes results)")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")

    p = _Parser(prog="steiner-orient", description="Steiner rooted k-arc-connected orientations")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, helptext in (("solve", cmd_solve, "exact search"), ("oracle", cmd_oracle, "brute force")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("instance", help="instance file, corpus directory or '-'")
        q.add_argument("--limit", type=int, default=24, help="edge limit for brute force")
        q.set_defaults(func=fn)

    q = sub.add_parser("verify", parents=[common], help="check an orientation")
    q.add_argument("instance")
    q.add_argument("orientation")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("maximize-k", parents=[common], help="largest feasible k")
    q.add_argument("instance")
    q.set_defaults(func=cmd_maximize_k)

    q = sub.add_parser("reduce", parents=[common], help="normalizing reductions")
    q.add_argument("kind", choices=("cap", "degk", "threg", "rdemand"))
    q.add_argument("input")
    q.add_argument("--lift", metavar="ORIENTATION", help="lift an orientation of the reduced instance back")
    q.set_defaults(func=cmd_reduce)

    q = sub.add_parser("generate", parents=[common], help="hardness constructions and random corpora")
    q.add_argument("kind", choices=("mnae-k2", "lift-k", "max2sat-3col", "3col-modified", "modified-4t", "pad-t",
                                    "random-steiner"))
    q.add_argument("input", nargs="?")
    q.add_argument("--k", type=int)
    q.add_argument("--t", type=int)
    q.add_argument("--n", type=int)
    q.add_argument("--m", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=int, default=1)
    q.add_argument("--regular", action="store_true", help="3-regular instances (needs --n)")
    q.add_argument("--out-dir")
    q.set_defaults(func=cmd_generate)

    q = sub.add_parser("enumerate-minimal", parents=[common], help="catalog of minimal 3-regular instances")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--max-vertices", type=int, required=True)
    q.add_argument("--gen-budget", type=int, default=5_000_000)
    q.add_argument("--digraphs", action="store_true", help="enumerate minimal digraphs instead")
    q.set_defaults(func=cmd_enumerate_minimal)

    q = sub.add_parser("minor-test", parents=[common], help="fixed topological minor test")
    q.add_argument("host")
    q.add_argument("pattern")
    q.add_argument("--fixed", help="pattern:host pairs, e.g. 0:0,1:4 (default: root and terminals)")
    q.set_defaults(func=cmd_minor_test)

    q = sub.add_parser("catalog-decide", parents=[common], help="decide via a catalog of minimal instances")
    q.add_argument("instance")
    q.add_argument("--catalog", required=True)
    q.add_argument("--complete", action="store_true", help="treat the catalog as complete")
    q.set_defaults(func=cmd_catalog_decide)

    q = sub.add_parser("analyze", parents=[common], help="cycle and cut diagnostics")
    q.add_argument("kind", choices=("fas", "fvs", "cycles", "essential", "ordered", "lemma-min", "tight-lattice"))
    q.add_argument("input", help="sdigraph record, or instance plus --orientation")
    q.add_argument("--orientation")
    q.add_argument("--terminal", type=int)
    q.add_argument("--cycles", help="arc ids, cycles separated by ';', e.g. 1,2;5,6")
    q.add_argument("--exact-limit", type=int, default=20)
    q.add_argument("--samples", type=int, default=50)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (fm.FormatError, GraphError, FormulaError, OSError, AssertionError) as exc:
        sys.stderr.write(f"steiner-orient: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
