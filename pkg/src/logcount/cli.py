"""Command-line interface.

Input formats (0-indexed vertices, ``#`` starts a comment):

* graph:  ``n m`` then m lines ``u v [w]``
* sldag:  ``n m``, ``layers L``, one line with the layer (1..L) of each vertex,
  then m edge lines
* matrix: ``n`` then n rows of n integers
* cnf2:   DIMACS ``p cnf V C`` followed by clauses of two literals ended by 0

Exit codes: 0 success, 2 usage error, 3 parse or invariant error, 4 budget
exceeded or internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from . import clowdet, isolation, matred, ndsim, reductions
from .classlab import prime_power_flatten
from .errors import BudgetExceeded, InvariantError
from .graphs import Digraph, LayeredDag, count_st_paths
from .linalg import IntMatrix, det_bareiss

DEFAULT_SEED = isolation.DEFAULT_SEED

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET = 0, 2, 3, 4


class ParseError(InvariantError):
    def __init__(self, msg: str, line: int, col: int = 1) -> None:
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


Payload = Union[Digraph, LayeredDag, IntMatrix, reductions.TwoCnf]


@dataclass
class Instance:
    kind: str
    payload: Payload


def _tokens(text: str) -> List[Tuple[int, List[Tuple[int, str]]]]:
    """Non-empty lines as (line number, [(column, token), ...]) with comments stripped."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in line.split():
            col = line.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            out.append((ln, toks))
    return out


def _int(tok: Tuple[int, str], ln: int) -> int:
    col, s = tok
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"expected an integer, found {s!r}", ln, col) from None


def _ints(line: Tuple[int, List[Tuple[int, str]]], count: Optional[int] = None) -> List[int]:
    ln, toks = line
    if count is not None and len(toks) != count:
        raise ParseError(f"expected {count} fields, found {len(toks)}", ln, toks[0][0])
    return [_int(t, ln) for t in toks]


def _edges(lines: Sequence, m: int) -> Tuple[List[Tuple[int, int]], Optional[List[int]]]:
    if len(lines) != m:
        ln = lines[-1][0] if lines else 1
        raise ParseError(f"expected {m} edge lines, found {len(lines)}", ln)
    edges, weights = [], []
    arity = None
    for line in lines:
        ln, toks = line
        if len(toks) not in (2, 3):
            raise ParseError("edge lines have the form 'u v [w]'", ln, toks[0][0])
        if arity is None:
            arity = len(toks)
        elif arity != len(toks):
            raise ParseError("either all edges carry a weight or none does", ln, toks[0][0])
        vals = _ints(line)
        edges.append((vals[0], vals[1]))
        if len(vals) == 3:
            weights.append(vals[2])
    return edges, (weights if arity == 3 else None)


def parse(text: str, fmt: str) -> Instance:
    """Parse and validate an instance in one of the four formats."""
    lines = _tokens(text)
    if not lines:
        raise ParseError("empty input", 1)
    if fmt in ("graph", "sldag"):
        n, m = _ints(lines[0], 2)
        rest = lines[1:]
        layer = None
        if fmt == "sldag":
            if len(rest) < 2:
                raise ParseError("missing 'layers L' line or layer assignment", lines[0][0])
            ln, toks = rest[0]
            if toks[0][1] != "layers" or len(toks) != 2:
                raise ParseError("expected 'layers L'", ln, toks[0][0])
            big_l = _int(toks[1], ln)
            layer = _ints(rest[1], n)
            rest = rest[2:]
        edges, weights = _edges(rest, m)
        g = Digraph.from_edges(n, edges, weights)
        if layer is None:
            return Instance("graph", g)
        return Instance("sldag", LayeredDag(g, tuple(layer), big_l))
    if fmt == "matrix":
        (n,) = _ints(lines[0], 1)
        rows = [_ints(line, n) for line in lines[1:]]
        if len(rows) != n:
            raise ParseError(f"expected {n} rows, found {len(rows)}", lines[-1][0])
        return Instance("matrix", IntMatrix.of(rows))
    if fmt == "cnf2":
        ln, toks = lines[0]
        if [t[1] for t in toks[:2]] != ["p", "cnf"] or len(toks) != 4:
            raise ParseError("expected header 'p cnf V C'", ln, toks[0][0])
        nv, nc = _int(toks[2], ln), _int(toks[3], ln)
        lits: List[Tuple[int, int, int]] = []
        for ln2, toks2 in lines[1:]:
            if toks2[0][1] == "c":
                continue
            for col, s in toks2:
                lits.append((ln2, col, _int((col, s), ln2)))
        clauses, cur = [], []
        for ln2, col, v in lits:
            if v == 0:
                if len(cur) != 2:
                    raise ParseError(f"clause has {len(cur)} literals, expected 2", ln2, col)
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(v)
        if cur:
            raise ParseError("unterminated clause", lits[-1][0], lits[-1][1])
        if len(clauses) != nc:
            raise ParseError(f"header declares {nc} clauses, found {len(clauses)}", ln)
        return Instance("cnf2", reductions.TwoCnf(nv, tuple(clauses)))
    raise InvariantError(f"unknown format {fmt!r}")


def format_graph(g: Digraph) -> str:
    lines = [f"{g.n} {len(g.edges)}"]
    for u, v in g.sorted_edges():
        lines.append(f"{u} {v}" if g.weight is None else f"{u} {v} {g.weight[(u, v)]}")
    return "\n".join(lines) + "\n"


def format_sldag(d: LayeredDag) -> str:
    head, *edges = format_graph(d.base).splitlines()
    lines = [head, f"layers {d.layer_count}", " ".join(map(str, d.layer))] + edges
    return "\n".join(lines) + "\n"


def format_matrix(a: IntMatrix) -> str:
    return "\n".join([str(a.nrows)] + [" ".join(map(str, r)) for r in a.rows]) + "\n"


# ---------------------------------------------------------------------------
# decision problems over path counts


def decide(kind: str, f1: int, f2: Optional[int] = None, k: Optional[int] = None) -> Union[bool, int]:
    """exact: f1 == f2; gap: f1 - f2; prob: f1 - f2 > 0; mod/modl: the count
    (or gap when f2 is given) is not divisible by k."""
    val = f1 if f2 is None else f1 - f2
    if kind == "exact":
        if f2 is None:
            raise InvariantError("exact needs two counts")
        return f1 == f2
    if kind == "gap":
        if f2 is None:
            raise InvariantError("gap needs two counts")
        return val
    if kind == "prob":
        if f2 is None:
            raise InvariantError("prob needs two counts")
        return val > 0
    if kind in ("mod", "modl"):
        if k is None or k < 2:
            raise InvariantError("mod needs k >= 2")
        return val % k != 0
    raise InvariantError(f"unknown decision {kind!r}")


def _prime_power(k: int) -> Optional[Tuple[int, int]]:
    for p in range(2, k + 1):
        if k % p == 0:
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            return (p, e) if k == 1 else None
    return None


# ---------------------------------------------------------------------------
# command handlers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, fmt: str) -> Payload:
    return parse(_read(path), fmt).payload


def _graph_arg(args: argparse.Namespace) -> Union[Digraph, LayeredDag]:
    return _load(args.file, args.format)


def _frac(x: Fraction) -> str:
    return str(x)


Result = Dict[str, Any]


def _res(command: str, result: Any, counts: Any = None, witness: Any = None, seed: Any = None, text: str = "") -> Result:
    return {"command": command, "result": result, "counts": counts, "witness": witness, "seed": seed, "_text": text}


def cmd_count_paths(args: argparse.Namespace) -> Result:
    g = _graph_arg(args)
    c = int(count_st_paths(g, args.s, args.t, budget=args.budget))
    return _res("count-paths", c, counts={"paths": c}, text=str(c))


def cmd_reduce(args: argparse.Namespace) -> Result:
    kind = args.kind
    if kind == "unroll":
        g = _load(args.file, "graph")
        d, s2, t2 = reductions.unroll_to_sldag(g, args.s, args.t)
        out = format_sldag(d)
        return _res("reduce unroll", out, witness={"s": s2, "t": t2}, text=out + f"# s'={s2} t'={t2}")
    if kind == "2cnf":
        g = _load(args.file, "graph")
        out = reductions.dstcon_to_unsat2cnf(g, args.s, args.t).to_dimacs()
        return _res("reduce 2cnf", out, text=out.rstrip("\n"))
    if kind == "from-2cnf":
        phi = _load(args.file, "cnf2")
        out = format_graph(reductions.implication_graph(phi))
        return _res("reduce from-2cnf", out, text=out.rstrip("\n"))
    if kind == "power-to-det":
        a = _load(args.file, "matrix")
        j = args.j if args.j is not None else a.n
        b = matred.powerelement_to_det(a, args.m, args.i, j)
        out = format_matrix(b)
        return _res("reduce power-to-det", out, text=out.rstrip("\n"))
    if kind == "itmatprod":
        mats = [_load(p, "matrix") for p in [args.file] + list(args.more)]
        inst = matred.itmatprod_to_powerelement(mats)
        out = format_matrix(inst.b)
        wit = {"power": inst.power, "rows": [inst.rows.start, inst.rows.stop], "cols": [inst.cols.start, inst.cols.stop]}
        return _res("reduce itmatprod", out, witness=wit, text=out.rstrip("\n"))
    raise InvariantError(f"unknown reduction {kind!r}")


def cmd_det(args: argparse.Namespace) -> Result:
    a = _load(args.file, "matrix")
    fn = {"clow": clowdet.det_via_clows, "ha": clowdet.det_via_HA, "oracle": det_bareiss}[args.method]
    d = fn(a)
    return _res("det", d, witness={"method": args.method}, text=str(d))


def cmd_charpoly(args: argparse.Namespace) -> Result:
    c = clowdet.charpoly_coeffs(_load(args.file, "matrix"))
    return _res("charpoly", c, text=" ".join(map(str, c)))


def cmd_rank(args: argparse.Namespace) -> Result:
    r = clowdet.rank_of(_load(args.file, "matrix"))
    return _res("rank", r, text=str(r))


def cmd_twosat(args: argparse.Namespace) -> Result:
    phi = _load(args.file, "cnf2")
    sol = reductions.twosat_solve(phi)
    wit = None if sol is None else [v if val else -v for v, val in enumerate(sol, start=1)]
    text = "UNSAT" if sol is None else "SAT " + " ".join(map(str, wit))
    return _res("twosat", sol is not None, witness=wit, text=text)


def cmd_linsys(args: argparse.Namespace) -> Result:
    a = _load(args.file, "matrix")
    b = [int(x) for x in args.b.split(",")] if args.b else []
    r = matred.linsys_feasible(a, b)
    vec = r.x if r.feasible else r.y
    wit = {"x" if r.feasible else "y": [_frac(v) for v in vec]}
    label = "feasible" if r.feasible else "infeasible"
    return _res("linsys", r.feasible, witness=wit, text=f"{label} {' '.join(map(_frac, vec))}")


def cmd_isolate(args: argparse.Namespace) -> Result:
    import random

    g = _load(args.file, "graph")
    r = args.r if args.r is not None else 4 * len(g.edges) + 1
    rng = random.Random(args.seed)
    good = 0
    for _ in range(args.trials):
        h = isolation.random_weighting(g, r, rng)
        good += isolation.is_min_unique(h, args.s)
    frac = Fraction(good, args.trials)
    text = f"min-unique in {good}/{args.trials} trials (r={r}, seed={args.seed})"
    return _res("isolate", _frac(frac), counts={"good": good, "trials": args.trials, "r": r}, seed=args.seed, text=text)


def cmd_ndsim(args: argparse.Namespace) -> Result:
    if args.algo == "ul":
        g = _load(args.file, "graph")
        tr = ndsim.ul_reach_trace(g, args.s, args.t)
        counts = {"predicate_calls": tr.predicate_calls, "max_definite_paths": max(tr.definite_paths)}
        return _res("ndsim ul", tr.reachable, counts=counts, text=f"reachable={tr.reachable} calls={tr.predicate_calls}")
    d = _load(args.file, "sldag")
    if args.algo == "is":
        st = ndsim.run_all_paths(ndsim.nonreach_nd(d, args.s, args.t))
        res = st.acc > 0
        counts = {"acc": st.acc, "rej": st.rej, "gap": st.gap}
        return _res("ndsim is", res, counts=counts, text=f"unreachable={res} acc={st.acc} rej={st.rej}")
    st = ndsim.run_all_paths(ndsim.sharplcfl(d, args.s, args.t, args.k))
    counts = {"acc": st.acc, "rej": st.rej, "gap": st.gap}
    return _res("ndsim sharplcfl", st.acc, counts=counts, text=f"acc={st.acc} rej={st.rej}")


def cmd_decide(args: argparse.Namespace) -> Result:
    if args.counts:
        f1 = args.counts[0]
        f2 = args.counts[1] if len(args.counts) > 1 else None
    else:
        if args.file is None:
            raise InvariantError("give a graph file or --counts")
        g = _graph_arg(args)
        f1 = int(count_st_paths(g, args.s1, args.t1))
        f2 = None
        if args.s2 is not None and args.t2 is not None:
            f2 = int(count_st_paths(g, args.s2, args.t2))
    res = decide(args.kind, f1, f2, args.k)
    wit = None
    if args.kind == "modl":
        pe = _prime_power(args.k)
        if pe is not None:
            p, e = pe
            val = (f1 if f2 is None else f1 - f2) % args.k
            wit = {"p": p, "e": e, "flattened_residue": prime_power_flatten(val, p, e) % p}
    counts = [f1] if f2 is None else [f1, f2]
    text = str(res) if isinstance(res, int) and not isinstance(res, bool) else ("yes" if res else "no")
    return _res(f"decide {args.kind}", res, counts=counts, witness=wit, text=text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logcount", description=__doc__.split("\n")[0])
    p.add_argument("--json", action="store_true", help="emit a machine-readable JSON object")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_opts(sp: argparse.ArgumentParser, st: bool = True) -> None:
        sp.add_argument("file")
        sp.add_argument("--format", choices=["graph", "sldag"], default="graph")
        if st:
            sp.add_argument("--s", type=int, default=0)
            sp.add_argument("--t", type=int, required=True)

    sp = sub.add_parser("count-paths", help="count s-t paths")
    graph_opts(sp)
    sp.add_argument("--budget", type=int, default=2_000_000)
    sp.set_defaults(fn=cmd_count_paths)

    sp = sub.add_parser("reduce", help="apply a reduction and print the new instance")
    sp.add_argument("kind", choices=["unroll", "2cnf", "from-2cnf", "power-to-det", "itmatprod"])
    sp.add_argument("file")
    sp.add_argument("more", nargs="*", help="further matrix files for itmatprod")
    sp.add_argument("--s", type=int, default=0)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--m", type=int, default=1, help="exponent for power-to-det")
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--j", type=int, default=None)
    sp.set_defaults(fn=cmd_reduce)

    sp = sub.add_parser("det", help="determinant")
    sp.add_argument("file")
    sp.add_argument("--method", choices=["clow", "ha", "oracle"], default="ha")
    sp.set_defaults(fn=cmd_det)

    for name, fn, hlp in (("charpoly", cmd_charpoly, "coefficients c_0..c_n of det(xI - A)"), ("rank", cmd_rank, "rank over Q")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("file")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("twosat", help="2-CNF satisfiability")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_twosat)

    sp = sub.add_parser("linsys", help="feasibility of Ax = b over Q")
    sp.add_argument("file")
    sp.add_argument("--b", required=True, help="comma-separated right-hand side")
    sp.set_defaults(fn=cmd_linsys)

    sp = sub.add_parser("isolate", help="frequency of min-unique random weightings")
    sp.add_argument("file")
    sp.add_argument("--s", type=int, default=0)
    sp.add_argument("--r", type=int, default=None, help="weight range (default 4|E|+1)")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(fn=cmd_isolate)

    sp = sub.add_parser("ndsim", help="run a nondeterministic algorithm exhaustively")
    sp.add_argument("algo", choices=["is", "ul", "sharplcfl"])
    sp.add_argument("file")
    sp.add_argument("--s", type=int, default=0)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(fn=cmd_ndsim)

    sp = sub.add_parser("decide", help="decision problems over path counts")
    sp.add_argument("kind", choices=["exact", "gap", "prob", "mod", "modl"])
    sp.add_argument("file", nargs="?")
    sp.add_argument("--format", choices=["graph", "sldag"], default="graph")
    sp.add_argument("--s1", type=int, default=0)
    sp.add_argument("--t1", type=int, default=None)
    sp.add_argument("--s2", type=int, default=None)
    sp.add_argument("--t2", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--counts", type=int, nargs="+", help="decide directly on given counts")
    sp.set_defaults(fn=cmd_decide)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "decide" and not args.counts and args.t1 is None:
            parser.error("decide needs --t1 (or --counts)")
        if args.command == "decide" and args.kind in ("exact", "gap", "prob") and not args.counts and args.t2 is None:
            parser.error(f"decide {args.kind} needs a second pair --s2/--t2")
        if args.command == "decide" and args.kind in ("mod", "modl") and args.k is None:
            parser.error("decide mod needs --k")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        res = args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, AssertionError, RecursionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    text = res.pop("_text")
    if args.json:
        print(json.dumps(res, sort_keys=True))
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
