"""Text formats and the ``pathpack`` command line.

Network files are line based::

    # comment
    terminal s
    terminal t
    edge s x 2
    edge x t
    demand s t          (or: anticlique s ..., never both)

Solution files carry ``problem``, ``mode`` and ``value`` headers, one
``path <w> v0 ... vk`` line per path and optional ``cut`` / ``expansion``
certificate lines.  Rationals are always written ``num/den``.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .cuts import CutCertificate, beta, lambda_
from .demand import Clutter, DemandError, anticliques, strong_pairs, validate_k_network
from .duality import Expansion, verify_maxmin
from .flows import Multiflow, TPath, check_capacity
from .generate import GenConfig, random_network
from .netmodel import Network, NetworkError, pair
from .solve import (Falsifier, SearchBudgetExceeded, SolveError, common_solution_search,
                    min_size_w_solution, solve_fractional, solve_min_size, solve_scaled_integer)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
FALSIFIER_ENV = "PATHPACK_FALSIFIER_DIR"


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class InconsistentStyle(ParseError):
    pass


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(tok: str, line: int = 0) -> Fraction:
    num, sep, den = tok.partition("/")
    try:
        n, d = int(num), int(den) if sep else 1
    except ValueError:
        raise ParseError(line, f"bad rational {tok!r}") from None
    if d <= 0:
        raise ParseError(line, f"bad denominator in {tok!r}")
    q = Fraction(n, d)
    if sep and (q.numerator, q.denominator) != (n, d):
        raise ParseError(line, f"rational {tok!r} is not in lowest terms")
    return q


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield no, body


# -- networks ---------------------------------------------------------------

def parse_network(text: str) -> tuple[Network, Optional[Clutter]]:
    """The instance, plus the clutter when the file is written in anticlique style."""
    terminals: list[str] = []
    edges: dict[tuple[str, str], int] = {}
    demands: list[tuple[int, str, str]] = []
    cliques: list[tuple[int, list[str]]] = []
    for no, tok in _lines(text):
        kind, args = tok[0], tok[1:]
        if kind == "terminal":
            if len(args) != 1:
                raise ParseError(no, "terminal takes one name")
            if args[0] not in terminals:
                terminals.append(args[0])
        elif kind == "edge":
            if len(args) not in (2, 3):
                raise ParseError(no, "edge takes two nodes and an optional multiplicity")
            u, v = args[:2]
            if u == v:
                raise ParseError(no, f"self-loop at {u}")
            try:
                m = int(args[2]) if len(args) == 3 else 1
            except ValueError:
                raise ParseError(no, f"bad multiplicity {args[2]!r}") from None
            if m < 1:
                raise ParseError(no, "multiplicity must be a positive integer")
            e = pair(u, v)
            edges[e] = edges.get(e, 0) + m
        elif kind == "demand":
            if cliques:
                raise InconsistentStyle(no, "demand line in an anticlique-style file")
            if len(args) != 2:
                raise ParseError(no, "demand takes two terminals")
            demands.append((no, args[0], args[1]))
        elif kind == "anticlique":
            if demands:
                raise InconsistentStyle(no, "anticlique line in a demand-style file")
            if not args:
                raise ParseError(no, "empty anticlique")
            cliques.append((no, args))
        else:
            raise ParseError(no, f"unknown directive {kind!r}")
    T = set(terminals)
    for no, u, v in demands:
        for t in (u, v):
            if t not in T:
                raise ParseError(no, f"{t} is not a declared terminal")
        if u == v:
            raise ParseError(no, f"demand pair ({u}, {v}) has equal ends")
    k = None
    if cliques:
        for no, m in cliques:
            bad = [t for t in m if t not in T]
            if bad:
                raise ParseError(no, f"{bad[0]} is not a declared terminal")
        try:
            k = Clutter.of(T, [m for _, m in cliques])
        except DemandError as exc:
            raise ParseError(cliques[0][0], str(exc)) from None
        S = strong_pairs(k)
    else:
        S = {pair(u, v) for _, u, v in demands}
    try:
        net = Network.build([(u, v, c) for (u, v), c in edges.items()], T, S)
    except NetworkError as exc:
        raise ParseError(0, str(exc)) from None
    return net, k


def print_network(net: Network, k: Optional[Clutter] = None, header: Sequence[str] = ()) -> str:
    out = [f"# {h}" for h in header]
    out += [f"terminal {t}" for t in net.sorted_terminals()]
    out += [f"edge {u} {v}" + (f" {c}" if c != 1 else "") for u, v, c in sorted(net.graph.edges())]
    if k is None:
        out += [f"demand {u} {v}" for u, v in sorted(net.demands)]
    else:
        out += ["anticlique " + " ".join(sorted(m)) for m in k.sorted_members()]
    return "\n".join(out) + "\n"


def load_instance(path: str) -> tuple[Network, Clutter]:
    net, k = parse_network(Path(path).read_text(encoding="utf-8"))
    return net, (anticliques(net.terminals, net.demands) if k is None else k)


# -- solutions ----------------------------------------------------------------

@dataclass
class SolutionFile:
    problem: str
    mode: str
    value: Fraction
    flow: Multiflow
    cuts: list[CutCertificate] = field(default_factory=list)
    expansions: list[tuple[Fraction, Expansion]] = field(default_factory=list)


def _cut_line(c: CutCertificate) -> str:
    return f"cut {' '.join(sorted(c.A))} | {' '.join(sorted(c.X))} {c.value}"


def print_solution(sol: SolutionFile) -> str:
    out = [f"problem {sol.problem}", f"mode {sol.mode}", f"value {fmt(sol.value)}"]
    out += [f"path {fmt(w)} {' '.join(p.nodes)}" for p, w in sol.flow]
    out += [_cut_line(c) for c in sol.cuts]
    for v, X in sol.expansions:
        out.append(f"expansion {fmt(v)}")
        out += [f"block {t} {' '.join(sorted(b))}" for t, b in X.blocks]
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> SolutionFile:
    head: dict[str, str] = {}
    paths: list[tuple[TPath, Fraction]] = []
    cuts: list[CutCertificate] = []
    exps: list[tuple[Fraction, dict]] = []
    for no, tok in _lines(text):
        kind, args = tok[0], tok[1:]
        if kind in ("problem", "mode", "value"):
            if len(args) != 1:
                raise ParseError(no, f"{kind} takes one argument")
            head[kind] = args[0]
        elif kind == "path":
            if len(args) < 3:
                raise ParseError(no, "path needs a weight and at least two nodes")
            paths.append((TPath(tuple(args[1:])), parse_rational(args[0], no)))
        elif kind == "cut":
            if "|" not in args or len(args) < 4:
                raise ParseError(no, "cut needs 'A... | X... value'")
            bar = args.index("|")
            try:
                val = int(args[-1])
            except ValueError:
                raise ParseError(no, f"bad cut value {args[-1]!r}") from None
            cuts.append(CutCertificate(frozenset(args[:bar]), frozenset(args[bar + 1:-1]), val))
        elif kind == "expansion":
            if len(args) != 1:
                raise ParseError(no, "expansion takes its dual value")
            exps.append((parse_rational(args[0], no), {}))
        elif kind == "block":
            if not exps or not args:
                raise ParseError(no, "block outside an expansion")
            exps[-1][1][args[0]] = frozenset(args[1:]) | {args[0]}
        else:
            raise ParseError(no, f"unknown directive {kind!r}")
    for key in ("problem", "mode", "value"):
        if key not in head:
            raise ParseError(0, f"missing {key} header")
    if head["problem"] not in ("s", "w"):
        raise ParseError(0, f"bad problem {head['problem']!r}")
    flow = Multiflow.of(paths)
    if len(flow) != len(paths):
        raise ParseError(0, "repeated path")
    return SolutionFile(head["problem"], head["mode"], parse_rational(head["value"]), flow, cuts,
                        [(v, Expansion.of(b)) for v, b in exps])


# -- commands -------------------------------------------------------------------

def _mode_denominator(mode: str) -> Optional[int]:
    if mode == "lp":
        return None
    if mode == "half":
        return 2
    if mode == "integer":
        return 1
    if mode.startswith("frac:"):
        try:
            D = int(mode[5:])
        except ValueError:
            D = 0
        if D >= 1:
            return D
    raise argparse.ArgumentTypeError(f"bad mode {mode!r}")


def _record_falsifier(args, net: Network, k: Clutter, exc: Exception) -> None:
    target = Path(args.falsifier_dir or os.environ.get(FALSIFIER_ENV, "falsifiers"))
    target.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    out = target / f"{type(exc).__name__}-{stamp}-{os.getpid()}.net"
    out.write_text(print_network(net, k, [f"{type(exc).__name__}: {exc}"]), encoding="utf-8")
    print(f"falsifier: {exc} (written to {out})", file=sys.stderr)


def cmd_validate(args) -> int:
    net, k = parse_network(Path(args.file).read_text(encoding="utf-8"))
    rep = validate_k_network(net, k)
    print(f"anticliques {'yes' if rep.anticliques_match else 'no'}")
    print(f"k-clutter {'yes' if rep.k_clutter else 'no'}")
    print(f"eulerian {'yes' if rep.eulerian else 'no'}")
    for r in rep.reasons:
        print(f"reason {r}")
    print("K-network" if rep.is_k_network else "not a K-network")
    return EXIT_OK if rep.is_k_network else EXIT_FAIL


def cmd_solve(args) -> int:
    net, k = load_instance(args.file)
    D = _mode_denominator(args.mode)
    if args.min_size and args.problem == "w" and D == 2 and args.simple_only:
        res = min_size_w_solution(net, k)
    elif args.min_size:
        res = solve_min_size(net, k, args.problem, D, args.simple_only)
    elif D is None:
        res = solve_fractional(net, k, args.problem, args.simple_only)
    else:
        res = solve_scaled_integer(net, k, args.problem, D, args.simple_only)
    if check_capacity(net, res.flow):
        raise SolveError("solver produced an infeasible flow")
    sys.stdout.write(print_solution(SolutionFile(res.problem, res.mode, res.value, res.flow)))
    return EXIT_OK


def cmd_common(args) -> int:
    net, k = load_instance(args.file)
    res = common_solution_search(net, k, args.simple_only)
    sys.stdout.write(print_solution(SolutionFile("w", res.mode, res.value, res.flow)))
    print(f"# eta {fmt(res.certificates['eta'])} size {fmt(res.certificates['size'])}")
    return EXIT_OK


def cmd_duality(args) -> int:
    net, k = load_instance(args.file)
    rep = verify_maxmin(net, k, args.max_expansions, compress=args.compress)
    print(f"theta {fmt(rep.primal_value)}")
    print(f"expansions {rep.expansions_examined}")
    print(f"weak duality {'holds' if rep.weak_duality_holds else 'fails'}")
    if rep.equality_holds:
        print(f"equality at {fmt(rep.dual_value)}")
    else:
        print(f"gap: theta {fmt(rep.primal_value)} < dual minimum {fmt(rep.dual_value)}")
    print(f"expansion {fmt(rep.dual_value)}")
    for t, b in rep.best_expansion.blocks:
        print(f"block {t} {' '.join(sorted(b))}")
    if not (rep.equality_holds and rep.weak_duality_holds):
        _record_falsifier(args, net, k, Falsifier("max-min equality fails"))
        return EXIT_FAIL
    return EXIT_OK


def cmd_cuts(args) -> int:
    net, k = load_instance(args.file)
    sets = [frozenset({t}) for t in net.sorted_terminals()]
    sets += [m for m in k.sorted_members() if m not in sets]
    for A in sets:
        print(_cut_line(lambda_(net, A)))
    for A in sets:
        print(f"beta {' '.join(sorted(A))} {fmt(beta(net, A))}")
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = GenConfig(nodes=args.nodes, terminals=args.terminals, max_mult=args.max_mult,
                    eulerian=not args.non_eulerian)
    net, _ = random_network(args.seed, cfg)
    header = [f"gen seed {args.seed} nodes {args.nodes} terminals {args.terminals}"]
    sys.stdout.write(print_network(net, header=header))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathpack", description=__doc__.split("\n")[0])
    ap.add_argument("--falsifier-dir", default=None,
                    help=f"where theorem-violating instances are written (env {FALSIFIER_ENV})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the K-network conditions")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="solve the S- or W-problem exactly")
    p.add_argument("--problem", choices=["s", "w"], required=True)
    p.add_argument("--mode", default="lp", help="lp, half, integer or frac:D")
    p.add_argument("--simple-only", action="store_true")
    p.add_argument("--min-size", action="store_true", help="least size among optimal flows")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("common", help="half-integer flow solving both problems")
    p.add_argument("--simple-only", action="store_true")
    p.add_argument("file")
    p.set_defaults(func=cmd_common)

    p = sub.add_parser("duality", help="compare theta with the expansion minimum")
    p.add_argument("--max-expansions", type=int, default=2_000_000)
    p.add_argument("--compress", choices=["zero", "all", "none"], default="zero")
    p.add_argument("file")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("cuts", help="lambda and beta tables")
    p.add_argument("file")
    p.set_defaults(func=cmd_cuts)

    p = sub.add_parser("gen", help="random Eulerian K-network")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--nodes", type=int, default=6)
    p.add_argument("--terminals", type=int, default=4)
    p.add_argument("--max-mult", type=int, default=3)
    p.add_argument("--non-eulerian", action="store_true")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if getattr(args, "mode", None) is not None:
            _mode_denominator(args.mode)
        return args.func(args)
    except (ParseError, OSError, argparse.ArgumentTypeError, DemandError, NetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchBudgetExceeded as exc:
        print(f"search budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Falsifier as exc:
        net, k = load_instance(args.file)
        _record_falsifier(args, net, k, exc)
        return EXIT_FAIL
    except SolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
