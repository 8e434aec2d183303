"""Exact solvers for the S- and W-problems over explicitly enumerated T-paths."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import lp
from .cuts import lambda_
from .demand import Clutter, PairClass, classify_pair
from .flows import Multiflow, TPath
from .netmodel import Network, is_eulerian

log = logging.getLogger(__name__)

MAX_PATHS = 100_000
BUDGET_ENV = "PATHPACK_SEARCH_BUDGET"


class SolveError(RuntimeError):
    pass


class TooManyPaths(SolveError):
    pass


class Falsifier(SolveError):
    """A computed value contradicts a theorem the toolkit checks."""


class HalfIntegerGapDetected(Falsifier):
    pass


class CommonSolutionGapDetected(Falsifier):
    pass


class LovaszCherkasskyGap(Falsifier):
    pass


SearchBudgetExceeded = lp.SearchBudgetExceeded


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, "20000"))


@dataclass
class SolveResult:
    flow: Multiflow
    value: Fraction
    problem: str
    mode: str  # "lp" or "scaled:D"
    simple_only: bool = False
    certificates: dict = field(default_factory=dict)


def enumerate_t_paths(net: Network, simple_only: bool = False, max_paths: int = MAX_PATHS) -> list[TPath]:
    """Every node-simple T-path once, oriented from its lexicographically
    smaller end; compound paths are skipped when ``simple_only``."""
    T = net.terminals
    adj = {x: sorted(net.graph.neighbors(x)) for x in net.nodes}
    out: list[TPath] = []

    def dfs(path: list[str], on: set[str]) -> None:
        for y in adj[path[-1]]:
            if y in on:
                continue
            if y in T and y > path[0]:
                out.append(TPath(tuple(path) + (y,)))
                if len(out) > max_paths:
                    raise TooManyPaths(f"more than {max_paths} T-paths")
            if y in T and simple_only:
                continue
            path.append(y)
            on.add(y)
            dfs(path, on)
            on.discard(y)
            path.pop()

    for s in sorted(T):
        dfs([s], {s})
    out.sort(key=lambda p: (p.endpair, len(p), p.nodes))
    return out


def _problem(problem: str) -> str:
    p = problem.lower()
    if p not in ("s", "w"):
        raise ValueError(f"problem must be 's' or 'w', not {problem!r}")
    return p


def rewards(paths: Sequence[TPath], k: Clutter, problem: str) -> list[Fraction]:
    problem = _problem(problem)
    out = []
    for p in paths:
        cls = classify_pair(k, *p.ends)
        if problem == "s":
            out.append(Fraction(1) if cls is PairClass.STRONG else Fraction(0))
        else:
            out.append(cls.weight)
    return out


class _PathProgram:
    """Capacity rows over a fixed path list, plus optional pinned objectives."""

    def __init__(self, net: Network, paths: Sequence[TPath]):
        self.net = net
        self.paths = list(paths)
        edges = sorted({e for p in self.paths for e in p.edges()})
        col = {e: i for i, e in enumerate(edges)}
        self.A = [[0] * len(self.paths) for _ in edges]
        for j, p in enumerate(self.paths):
            for e in p.edges():
                self.A[col[e]][j] = 1
        self.cap = [net.graph.c(*e) for e in edges]

    def lp(self, c, pins=(), maximize=True) -> lp.LPResult:
        A = list(self.A) + [list(row) for row, _ in pins]
        senses = [lp.LE] * len(self.A) + [lp.EQ] * len(pins)
        b = list(self.cap) + [v for _, v in pins]
        return lp.solve_lp(c, A, senses, b, maximize)

    def ip(self, c, D: int, pins=(), maximize=True, budget=None, target=None) -> lp.IPResult:
        """Variables are D times the path weights; c and pins are stated per
        unit of weight and get scaled to integers here."""
        scale = _common_denominator(list(c) + [v for row, _ in pins for v in row])
        ci = [int(v * scale) for v in c]
        A = list(self.A)
        b = [D * v for v in self.cap]
        senses = [lp.LE] * len(self.A)
        for row, val in pins:
            s = _common_denominator(list(row))
            rhs = Fraction(val) * s * D
            if rhs.denominator != 1:
                return lp.IPResult("infeasible")
            A.append([int(v * s) for v in row])
            b.append(int(rhs))
            senses.append(lp.EQ)
        tgt = None if target is None else Fraction(target) * scale * D
        res = lp.solve_ip(ci, A, senses, b, maximize, budget=budget or default_budget(), target=tgt)
        if res.status != "infeasible":
            res.value = res.value / (scale * D)
        return res

    def flow(self, x, D: int = 1) -> Multiflow:
        return Multiflow({p: Fraction(v) / D for p, v in zip(self.paths, x) if v})


def _common_denominator(vals) -> int:
    d = 1
    for v in vals:
        d = d * Fraction(v).denominator // _gcd(d, Fraction(v).denominator)
    return d


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _program(net: Network, k: Clutter, problem: str, simple_only: bool, positive_only: bool = True):
    paths = enumerate_t_paths(net, simple_only)
    r = rewards(paths, k, problem)
    if positive_only:
        keep = [i for i, v in enumerate(r) if v]
        paths, r = [paths[i] for i in keep], [r[i] for i in keep]
    return _PathProgram(net, paths), r


def solve_fractional(net: Network, k: Clutter, problem: str, simple_only: bool = False) -> SolveResult:
    problem = _problem(problem)
    prog, r = _program(net, k, problem, simple_only)
    res = prog.lp(r)
    return SolveResult(prog.flow(res.x), res.value, problem, "lp", simple_only)


def solve_scaled_integer(net: Network, k: Clutter, problem: str, D: int,
                         simple_only: bool = False, budget: Optional[int] = None) -> SolveResult:
    """Optimum over flows whose weights are multiples of 1/D (exact branch-and-bound)."""
    if D < 1:
        raise ValueError("D must be a positive integer")
    problem = _problem(problem)
    prog, r = _program(net, k, problem, simple_only)
    res = prog.ip(r, D, budget=budget)
    return SolveResult(prog.flow(res.x, D), res.value, problem, f"scaled:{D}", simple_only,
                       {"nodes": res.nodes})


def _sizes(prog: _PathProgram) -> list[Fraction]:
    return [Fraction(1)] * len(prog.paths)


def min_size_w_solution(net: Network, k: Clutter, budget: Optional[int] = None) -> SolveResult:
    """A half-integer simple W-problem solution of least size among simple
    W-problem solutions.  Raises HalfIntegerGapDetected if none exists."""
    theta = solve_fractional(net, k, "w").value
    prog, r = _program(net, k, "w", simple_only=True)
    simple_theta = prog.lp(r).value
    if simple_theta != theta:
        raise HalfIntegerGapDetected(f"simple W-optimum {simple_theta} differs from theta {theta}")
    pin = [(r, theta)]
    sigma = prog.lp(_sizes(prog), pin, maximize=False).value
    res = prog.ip(_sizes(prog), 2, pin, maximize=False, budget=budget, target=sigma)
    if res.status == "infeasible" or res.value != sigma:
        got = "none" if res.status == "infeasible" else res.value
        raise HalfIntegerGapDetected(
            f"no half-integer simple W-solution of size {sigma} (theta {theta}); best {got}")
    return SolveResult(prog.flow(res.x, 2), theta, "w", "scaled:2", True,
                       {"size": sigma, "nodes": res.nodes})


def solve_min_size(net: Network, k: Clutter, problem: str, D: Optional[int] = None,
                   simple_only: bool = False, budget: Optional[int] = None) -> SolveResult:
    """Lexicographic solve: best objective value (at weights in multiples of
    1/D, or fractional when D is None), then least size among such flows."""
    problem = _problem(problem)
    prog, r = _program(net, k, problem, simple_only)
    sizes = _sizes(prog)
    if D is None:
        best = prog.lp(r).value
        res = prog.lp(sizes, [(r, best)], maximize=False)
        return SolveResult(prog.flow(res.x), best, problem, "lp", simple_only, {"size": res.value})
    best = prog.ip(r, D, budget=budget).value
    res = prog.ip(sizes, D, [(r, best)], maximize=False, budget=budget)
    return SolveResult(prog.flow(res.x, D), best, problem, f"scaled:{D}", simple_only,
                       {"size": res.value, "nodes": res.nodes})


def common_solution_search(net: Network, k: Clutter, simple_only: bool = False,
                           budget: Optional[int] = None) -> SolveResult:
    """A half-integer least-size W-problem solution that also solves the S-problem."""
    theta = solve_fractional(net, k, "w", simple_only).value
    eta = solve_fractional(net, k, "s", simple_only).value
    prog, r = _program(net, k, "w", simple_only)
    strong = [Fraction(1) if v == 1 else Fraction(0) for v in r]
    sizes = _sizes(prog)
    least = prog.lp(sizes, [(r, theta)], maximize=False).value
    both = prog.lp(sizes, [(r, theta), (strong, eta)], maximize=False)
    if not both.optimal:
        raise CommonSolutionGapDetected(f"no fractional flow has Theta = {theta} and f[S] = {eta}")
    if both.value != least:
        raise CommonSolutionGapDetected(
            f"least-size W-solutions have size {least} but common solutions need {both.value}")
    res = prog.ip(sizes, 2, [(r, theta), (strong, eta)], maximize=False, budget=budget, target=least)
    if res.status == "infeasible" or res.value != least:
        got = "none" if res.status == "infeasible" else res.value
        raise CommonSolutionGapDetected(
            f"no half-integer common solution of size {least} (theta {theta}, eta {eta}); best {got}")
    return SolveResult(prog.flow(res.x, 2), theta, "w", "scaled:2", simple_only,
                       {"eta": eta, "size": least, "nodes": res.nodes})


def max_size_w_solution(net: Network, k: Clutter, D: Optional[int] = None, simple_only: bool = False,
                        budget: Optional[int] = None) -> SolveResult:
    """Lexicographic solve: maximize Theta, then |f|, then minimize f[W].

    Zero paths are allowed, so on Eulerian networks the result is a maximum
    multiflow.  With D the weights are restricted to multiples of 1/D.
    """
    theta = solve_fractional(net, k, "w").value
    prog, r = _program(net, k, "w", simple_only, positive_only=False)
    sizes = _sizes(prog)
    weak = [Fraction(1) if v == Fraction(1, 2) else Fraction(0) for v in r]
    size = prog.lp(sizes, [(r, theta)]).value
    least_weak = prog.lp(weak, [(r, theta), (sizes, size)], maximize=False)
    if D is None:
        return SolveResult(prog.flow(least_weak.x), theta, "w", "lp", simple_only,
                           {"size": size, "weak": least_weak.value})
    res = prog.ip(weak, D, [(r, theta), (sizes, size)], maximize=False, budget=budget,
                  target=least_weak.value)
    if res.status == "infeasible":
        raise HalfIntegerGapDetected(f"no {D}-scaled maximum W-solution (theta {theta}, size {size})")
    return SolveResult(prog.flow(res.x, D), theta, "w", f"scaled:{D}", simple_only,
                       {"size": size, "weak": res.value, "nodes": res.nodes})


def max_size(net: Network) -> Fraction:
    """max |f| over fractional T-flows, by LP."""
    prog = _PathProgram(net, enumerate_t_paths(net))
    return prog.lp(_sizes(prog)).value


def lovasz_cherkassky_value(net: Network, check: bool = True) -> Fraction:
    """(1/2) sum of lambda(t); on Eulerian networks also checked against max |f|."""
    value = Fraction(sum(lambda_(net, {t}).value for t in net.terminals), 2)
    if not is_eulerian(net):
        log.info("network is not Eulerian; %s returned as a bound only", value)
        return value
    if check:
        best = max_size(net)
        if best != value:
            raise LovaszCherkasskyGap(f"max |f| = {best} but half the lambda sum is {value}")
    return value
