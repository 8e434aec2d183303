"""Max-flow / min-cut on multigraphs and the cut quantities lambda and beta."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .netmodel import Network, UnknownNode, cut_degree, is_eulerian


class CutError(ValueError):
    pass


class BadPartition(CutError):
    pass


class EmptySet(CutError):
    pass


@dataclass(frozen=True)
class CutCertificate:
    A: frozenset[str]
    X: frozenset[str]
    value: int


def max_flow(net: Network, sources: Iterable[str], sinks: Iterable[str]) -> tuple[int, frozenset[str]]:
    """Edmonds-Karp between two disjoint node sets.

    Returns the flow value and the source side X of a minimum cut (the nodes
    reachable from ``sources`` in the final residual graph).
    """
    src, snk = frozenset(sources), frozenset(sinks)
    if not src or not snk or src & snk:
        raise BadPartition("sources and sinks must be nonempty and disjoint")
    if not (src | snk) <= net.nodes:
        raise UnknownNode(f"{sorted((src | snk) - net.nodes)}")
    g = net.graph
    flow: dict[tuple[str, str], int] = {}

    def residual(u: str, v: str) -> int:
        return g.c(u, v) - flow.get((u, v), 0) + flow.get((v, u), 0)

    adj = {x: sorted(g.neighbors(x)) for x in net.nodes}
    value = 0
    while True:
        parent: dict[str, str | None] = {s: None for s in sorted(src)}
        queue = deque(sorted(src))
        hit = None
        while queue and hit is None:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and residual(u, v) > 0:
                    parent[v] = u
                    if v in snk:
                        hit = v
                        break
                    queue.append(v)
        if hit is None:
            return value, frozenset(parent)
        path = []
        v = hit
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual(u, v) for u, v in path)
        for u, v in path:
            back = min(push, flow.get((v, u), 0))
            if back:
                flow[(v, u)] -= back
            if push - back:
                flow[(u, v)] = flow.get((u, v), 0) + push - back
        value += push


def lambda_(net: Network, A: Iterable[str]) -> CutCertificate:
    """lambda(A) = min d(X) over node sets X with X meeting T exactly in A."""
    A = frozenset(A)
    if not A:
        raise EmptySet("lambda of the empty set")
    if not A <= net.terminals:
        raise UnknownNode(f"not terminals: {sorted(A - net.terminals)}")
    rest = net.terminals - A
    if not rest:
        # X = N is admissible and d(N) = 0
        return CutCertificate(A, net.nodes, 0)
    value, X = max_flow(net, A, rest)
    assert cut_degree(net, X) == value
    return CutCertificate(A, X, value)


def beta(net: Network, A: Iterable[str]) -> Fraction:
    """Surplus (sum of lambda(t) over t in A minus lambda(A)) / 2."""
    A = frozenset(A)
    if not A:
        raise EmptySet("beta of the empty set")
    total = sum(lambda_(net, {t}).value for t in A) - lambda_(net, A).value
    b = Fraction(total, 2)
    if is_eulerian(net) and b.denominator != 1:
        raise AssertionError(f"beta({sorted(A)}) = {b} is not integral in an Eulerian network")
    return b
