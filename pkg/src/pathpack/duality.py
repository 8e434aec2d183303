"""Expansions and the combinatorial min side of the W-problem max-min relation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Optional

from .cuts import beta
from .demand import Clutter, compress_atoms
from .flows import Multiflow, locks
from .netmodel import Multigraph, Network
from .solve import solve_fractional

MAX_EXPANSIONS = 2_000_000


class DualityError(ValueError):
    pass


class TooManyExpansions(DualityError):
    pass


class NotDualSolution(DualityError):
    pass


@dataclass(frozen=True)
class Expansion:
    blocks: tuple[tuple[str, frozenset[str]], ...]

    @classmethod
    def of(cls, blocks: Mapping[str, object]) -> "Expansion":
        return cls(tuple(sorted((t, frozenset(X) | {t}) for t, X in blocks.items())))

    def block(self, t: str) -> frozenset[str]:
        return dict(self.blocks)[t]

    def owner(self) -> dict[str, str]:
        return {x: t for t, X in self.blocks for x in X}

    def is_trivial(self) -> bool:
        return all(len(X) == 1 for _, X in self.blocks)

    def refines_to(self, other: "Expansion") -> bool:
        """self <= other: each block of self lies inside the same terminal's block of other."""
        o = dict(other.blocks)
        return all(X <= o.get(t, frozenset()) for t, X in self.blocks)

    def __str__(self) -> str:
        return " ".join(f"{t}:{','.join(sorted(X))}" for t, X in self.blocks)


def check_expansion(net: Network, X: Expansion) -> None:
    seen: set[str] = set()
    if {t for t, _ in X.blocks} != set(net.terminals):
        raise DualityError("expansion must have one block per terminal")
    for t, B in X.blocks:
        if B & net.terminals != {t}:
            raise DualityError(f"block of {t} meets the terminals in {sorted(B & net.terminals)}")
        if not B <= net.nodes:
            raise DualityError(f"block of {t} has unknown nodes")
        if B & seen:
            raise DualityError("expansion blocks overlap")
        seen |= B


def count_expansions(net: Network) -> int:
    return (len(net.terminals) + 1) ** len(net.inner)


def enumerate_expansions(net: Network, max_expansions: int = MAX_EXPANSIONS) -> Iterator[Expansion]:
    """Every way to hand each inner node to at most one terminal block,
    starting with the trivial expansion."""
    n = count_expansions(net)
    if n > max_expansions:
        raise TooManyExpansions(f"{n} expansions exceed the cap of {max_expansions}")
    T = net.sorted_terminals()
    inner = net.sorted_inner()
    for choice in itertools.product([None] + T, repeat=len(inner)):
        blocks = {t: {t} for t in T}
        for x, t in zip(inner, choice):
            if t is not None:
                blocks[t].add(x)
        yield Expansion.of(blocks)


def compress_expansion(net: Network, X: Expansion) -> Network:
    """Contract each block X_t into the terminal t (edges inside a block vanish)."""
    check_expansion(net, X)
    own = X.owner()
    f = lambda x: own.get(x, x)
    edges = [(f(u), f(v), c) for u, v, c in net.graph.edges() if f(u) != f(v)]
    graph = Multigraph.from_edges(edges, nodes={f(x) for x in net.nodes})
    return Network(graph, net.terminals, net.demands)


def dual_value(net: Network, k: Clutter, X: Expansion) -> Fraction:
    """(1/2) sum_t d(X_t) - (1/2) sum over members A of beta(A), with beta taken
    in the contracted network."""
    G = compress_expansion(net, X)
    degs = sum(sum(G.graph.neighbors(t).values()) for t in G.terminals)
    return Fraction(degs, 2) - sum((beta(G, A) for A in k.sorted_members()), Fraction(0)) / 2


def theta_of(net: Network, k: Clutter, X: Expansion) -> Fraction:
    """W-problem optimum in the contracted network."""
    return solve_fractional(compress_expansion(net, X), k, "w").value


def successors(net: Network, X: Expansion) -> Iterator[Expansion]:
    """Expansions obtained by adding one unassigned inner node to one block."""
    free = sorted(net.inner - set(X.owner()))
    blocks = dict(X.blocks)
    for x in free:
        for t in sorted(blocks):
            nb = dict(blocks)
            nb[t] = blocks[t] | {x}
            yield Expansion.of(nb)


def is_critical(net: Network, k: Clutter, X: Expansion, theta_x: Optional[Fraction] = None) -> bool:
    # theta is monotone along refinement, so one-step successors decide criticality
    theta_x = theta_of(net, k, X) if theta_x is None else theta_x
    return all(theta_of(net, k, Y) > theta_x for Y in successors(net, X))


@dataclass
class DualReport:
    best_expansion: Expansion
    dual_value: Fraction
    primal_value: Fraction
    equality_holds: bool
    weak_duality_holds: bool
    expansions_examined: int
    violations: list[tuple[Expansion, Fraction]] = field(default_factory=list)
    critical: dict[Expansion, bool] = field(default_factory=dict)
    compressed: bool = False


def verify_maxmin(net: Network, k: Clutter, max_expansions: int = MAX_EXPANSIONS,
                  check_critical: bool = False, compress: str = "zero") -> DualReport:
    """Scan all expansions and compare the minimum dual value with theta.

    ``compress`` selects which atoms are merged first: "zero" (atoms of zero
    pairs only), "all" or "none".
    """
    theta = solve_fractional(net, k, "w").value
    compressed = False
    if compress != "none":
        net2, k2 = compress_atoms(net, k, zero_only=(compress == "zero"))
        compressed = net2 is not net
        net, k = net2, k2
    best: Optional[tuple[Fraction, Expansion]] = None
    violations = []
    count = 0
    for X in enumerate_expansions(net, max_expansions):
        count += 1
        v = dual_value(net, k, X)
        if v < theta:
            violations.append((X, v))
        if best is None or v < best[0]:
            best = (v, X)
    value, X = best
    report = DualReport(X, value, theta, value == theta, not violations, count,
                        violations, compressed=compressed)
    if check_critical:
        report.critical[X] = is_critical(net, k, X)
    return report


@dataclass
class DualSolutionReport:
    unsaturated: list[tuple[str, str]]
    unlocked_terminals: list[str]
    unlocked_members: list[frozenset[str]]

    @property
    def ok(self) -> bool:
        return not (self.unsaturated or self.unlocked_terminals or self.unlocked_members)


def dual_solution_properties(net: Network, k: Clutter, X: Expansion, h: Multiflow,
                             theta: Optional[Fraction] = None) -> DualSolutionReport:
    """Check that h (a flow in the contracted network) saturates every edge
    leaving a block and locks every block and every clutter member."""
    theta = solve_fractional(net, k, "w").value if theta is None else theta
    theta_x = theta_of(net, k, X)
    if theta_x != theta or not is_critical(net, k, X, theta_x):
        raise NotDualSolution(f"expansion {X} is not a dual solution")
    G = compress_expansion(net, X)
    loads = h.loads()
    unsat = []
    for t in G.sorted_terminals():
        for y, c in G.graph.neighbors(t).items():
            e = (t, y) if t <= y else (y, t)
            if loads.get(e, 0) < c and e not in unsat:
                unsat.append(e)
    bad_t = [t for t in G.sorted_terminals() if not locks(G, h, {t})]
    bad_a = [A for A in k.sorted_members() if not locks(G, h, A)]
    return DualSolutionReport(sorted(unsat), bad_t, bad_a)
