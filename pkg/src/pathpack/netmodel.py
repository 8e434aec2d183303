"""Multigraphs with terminals and demand pairs.

Nodes are opaque strings; every iteration order exposed here is
lexicographic so that downstream output is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class NetworkError(ValueError):
    pass


class UnknownNode(NetworkError):
    pass


def pair(u: str, v: str) -> tuple[str, str]:
    """Canonical key of an unordered node pair."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Multigraph:
    nodes: frozenset[str]
    mult: Mapping[tuple[str, str], int]
    _adj: Mapping[str, Mapping[str, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        clean: dict[tuple[str, str], int] = {}
        adj: dict[str, dict[str, int]] = {x: {} for x in self.nodes}
        for (u, v), c in self.mult.items():
            if u == v:
                raise NetworkError(f"self-loop at {u!r}")
            if c < 0 or int(c) != c:
                raise NetworkError(f"bad multiplicity {c!r} for ({u}, {v})")
            if c == 0:
                continue
            if u not in adj or v not in adj:
                raise NetworkError(f"edge ({u}, {v}) has an endpoint outside the node set")
            key = pair(u, v)
            clean[key] = clean.get(key, 0) + int(c)
            adj[u][v] = clean[key]
            adj[v][u] = clean[key]
        object.__setattr__(self, "mult", dict(sorted(clean.items())))
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], nodes: Iterable[str] = ()) -> "Multigraph":
        """Build from ``(u, v)`` or ``(u, v, mult)`` tuples; repeated pairs add up."""
        node_set = set(nodes)
        mult: dict[tuple[str, str], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            c = e[2] if len(e) > 2 else 1
            if u == v:
                raise NetworkError(f"self-loop at {u!r}")
            node_set.update((u, v))
            key = pair(u, v)
            mult[key] = mult.get(key, 0) + c
        return cls(frozenset(node_set), mult)

    def c(self, u: str, v: str) -> int:
        return self._adj.get(u, {}).get(v, 0)

    def neighbors(self, x: str) -> dict[str, int]:
        if x not in self._adj:
            raise UnknownNode(x)
        return dict(sorted(self._adj[x].items()))

    def edges(self) -> Iterator[tuple[str, str, int]]:
        for (u, v), c in self.mult.items():
            yield u, v, c

    def sorted_nodes(self) -> list[str]:
        return sorted(self.nodes)


@dataclass(frozen=True)
class Network:
    graph: Multigraph
    terminals: frozenset[str]
    demands: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        missing = self.terminals - self.graph.nodes
        if missing:
            raise UnknownNode(f"terminals not in graph: {sorted(missing)}")
        dem = set()
        for u, v in self.demands:
            if u == v:
                raise NetworkError(f"demand pair ({u}, {v}) has equal ends")
            if u not in self.terminals or v not in self.terminals:
                raise NetworkError(f"demand pair ({u}, {v}) is not over terminals")
            dem.add(pair(u, v))
        object.__setattr__(self, "demands", frozenset(dem))

    @classmethod
    def build(cls, edges: Iterable[tuple], terminals: Iterable[str],
              demands: Iterable[tuple[str, str]] = (), nodes: Iterable[str] = ()) -> "Network":
        terminals = frozenset(terminals)
        graph = Multigraph.from_edges(edges, set(nodes) | terminals)
        return cls(graph, terminals, frozenset(demands))

    @property
    def nodes(self) -> frozenset[str]:
        return self.graph.nodes

    @property
    def inner(self) -> frozenset[str]:
        return self.graph.nodes - self.terminals

    def sorted_terminals(self) -> list[str]:
        return sorted(self.terminals)

    def sorted_inner(self) -> list[str]:
        return sorted(self.inner)

    def with_graph(self, graph: Multigraph) -> "Network":
        return Network(graph, self.terminals, self.demands)


def degree(net: Network, x: str) -> int:
    if x not in net.nodes:
        raise UnknownNode(x)
    return sum(net.graph.neighbors(x).values())


def cut_degree(net: Network, X: Iterable[str]) -> int:
    """d(X): total multiplicity of edges with exactly one end in X."""
    X = set(X)
    unknown = X - net.nodes
    if unknown:
        raise UnknownNode(f"{sorted(unknown)}")
    return sum(c for u, v, c in net.graph.edges() if (u in X) != (v in X))


def odd_inner_nodes(net: Network) -> list[str]:
    return [x for x in net.sorted_inner() if degree(net, x) % 2]


def is_eulerian(net: Network) -> bool:
    """True iff every inner node has even degree."""
    return not odd_inner_nodes(net)
