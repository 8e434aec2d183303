"""Demand-graph analysis: anticliques, the K-clutter condition, the W-metric
classes of terminal pairs, and atoms."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .netmodel import Multigraph, Network, NetworkError, degree, odd_inner_nodes, pair

MAX_TERMINALS = 16


class DemandError(ValueError):
    pass


class TooManyTerminals(DemandError):
    pass


class SameTerminal(DemandError):
    pass


class UnknownTerminal(DemandError):
    pass


class PairClass(enum.Enum):
    STRONG = Fraction(1)
    WEAK = Fraction(1, 2)
    ZERO = Fraction(0)

    @property
    def weight(self) -> Fraction:
        return self.value


def _member_key(m: frozenset[str]) -> tuple:
    return (len(m), sorted(m))


@dataclass(frozen=True)
class Clutter:
    terminals: frozenset[str]
    members: frozenset[frozenset[str]]

    def __post_init__(self) -> None:
        terms = frozenset(self.terminals)
        members = frozenset(frozenset(m) for m in self.members)
        for m in members:
            if not m:
                raise DemandError("clutter member is empty")
            if not m <= terms:
                raise DemandError(f"clutter member {sorted(m)} is not a set of terminals")
        for a, b in itertools.permutations(members, 2):
            if a < b:
                raise DemandError(f"clutter member {sorted(a)} is contained in {sorted(b)}")
        object.__setattr__(self, "terminals", terms)
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, terminals: Iterable[str], members: Iterable[Iterable[str]]) -> "Clutter":
        return cls(frozenset(terminals), frozenset(frozenset(m) for m in members))

    def sorted_members(self) -> list[frozenset[str]]:
        return sorted(self.members, key=_member_key)

    def coverage(self, u: str, v: str) -> int:
        return sum(1 for m in self.members if u in m and v in m)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members())


def anticliques(terminals: Iterable[str], demands: Iterable[tuple[str, str]],
                max_terminals: int = MAX_TERMINALS) -> Clutter:
    """All inclusion-maximal stable sets of the demand graph (T, S)."""
    T = sorted(set(terminals))
    if len(T) > max_terminals:
        raise TooManyTerminals(f"{len(T)} terminals exceed the limit of {max_terminals}")
    S = {pair(u, v) for u, v in demands}
    # maximal stable sets of (T, S) are maximal cliques of the complement
    nonadj = {t: {u for u in T if u != t and pair(t, u) not in S} for t in T}
    found: list[frozenset[str]] = []

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            found.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(nonadj[u] & p))
        for v in sorted(p - nonadj[pivot]):
            expand(r | {v}, p & nonadj[v], x & nonadj[v])
            p = p - {v}
            x = x | {v}

    if T:
        expand(set(), set(T), set())
    return Clutter(frozenset(T), frozenset(found))


def strong_pairs(k: Clutter) -> frozenset[tuple[str, str]]:
    """The demand set S recovered from a clutter: pairs covered by no member."""
    T = sorted(k.terminals)
    return frozenset((u, v) for u, v in itertools.combinations(T, 2) if k.coverage(u, v) == 0)


class KClutterCheck(NamedTuple):
    ok: bool
    witness: Optional[tuple[frozenset[str], frozenset[str], frozenset[str]]] = None


def is_k_clutter(k: Clutter) -> KClutterCheck:
    """Every triple of distinct pairwise-intersecting members must have equal
    pairwise intersections; returns the first violating triple otherwise."""
    ms = k.sorted_members()
    for a, b, c in itertools.combinations(ms, 3):
        ab, ac, bc = a & b, a & c, b & c
        if ab and ac and bc and not (ab == ac == bc):
            return KClutterCheck(False, (a, b, c))
    return KClutterCheck(True)


def classify_pair(k: Clutter, u: str, v: str) -> PairClass:
    if u == v:
        raise SameTerminal(u)
    for t in (u, v):
        if t not in k.terminals:
            raise UnknownTerminal(t)
    n = k.coverage(u, v)
    if n == 0:
        return PairClass.STRONG
    return PairClass.WEAK if n == 1 else PairClass.ZERO


def pair_classes(k: Clutter) -> dict[tuple[str, str], PairClass]:
    T = sorted(k.terminals)
    return {(u, v): classify_pair(k, u, v) for u, v in itertools.combinations(T, 2)}


@dataclass(frozen=True)
class AtomPartition:
    blocks: tuple[frozenset[str], ...]

    @property
    def is_simple(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def block_of(self, t: str) -> frozenset[str]:
        for b in self.blocks:
            if t in b:
                return b
        raise UnknownTerminal(t)


def atoms(k: Clutter, terminals: Optional[Iterable[str]] = None) -> AtomPartition:
    """Partition T into classes of terminals that no member separates."""
    T = sorted(set(terminals) if terminals is not None else k.terminals)
    # terminals with the same membership signature are exactly the unseparated ones
    ms = k.sorted_members()
    groups: dict[tuple[bool, ...], list[str]] = {}
    for t in T:
        groups.setdefault(tuple(t in m for m in ms), []).append(t)
    blocks = sorted((frozenset(g) for g in groups.values()), key=lambda b: sorted(b))
    return AtomPartition(tuple(blocks))


def atom_name(block: Iterable[str]) -> str:
    return "+".join(sorted(block))


def is_zero_atom(k: Clutter, block: frozenset[str]) -> bool:
    """True when the pairs inside the atom are zero pairs (two or more covering members)."""
    if len(block) < 2:
        return True
    t = next(iter(block))
    return sum(1 for m in k.members if t in m) >= 2


def compress_atoms(net: Network, k: Clutter, zero_only: bool = False) -> tuple[Network, Clutter]:
    """Merge every atom into a single terminal named by joining its members with '+'.

    Pairs inside an atom lying in exactly one member are weak, so merging such
    an atom discards their flow; ``zero_only`` restricts the merge to atoms of
    zero pairs, which leaves theta unchanged.
    """
    part = atoms(k, net.terminals)
    blocks = [b for b in part.blocks if len(b) > 1 and (not zero_only or is_zero_atom(k, b))]
    if not blocks:
        return net, k
    rename = {t: (atom_name(b) if b in blocks else t) for b in part.blocks for t in b}
    new_names = set(rename.values())
    clash = (new_names - set(rename)) & net.inner
    if clash:
        raise NetworkError(f"atom names collide with inner nodes: {sorted(clash)}")
    f = lambda x: rename.get(x, x)
    edges = [(f(u), f(v), c) for u, v, c in net.graph.edges() if f(u) != f(v)]
    graph = Multigraph.from_edges(edges, nodes={f(x) for x in net.nodes})
    demands = {pair(f(u), f(v)) for u, v in net.demands if f(u) != f(v)}
    k2 = Clutter(frozenset(new_names), frozenset(frozenset(f(t) for t in m) for m in k.members))
    return Network(graph, frozenset(new_names), frozenset(demands)), k2


@dataclass
class KNetworkReport:
    anticliques_match: bool
    k_clutter: bool
    eulerian: bool
    clutter: Clutter
    witness: Optional[tuple] = None
    reasons: list[str] = field(default_factory=list)

    @property
    def is_k_network(self) -> bool:
        return self.anticliques_match and self.k_clutter and self.eulerian


def validate_k_network(net: Network, k: Optional[Clutter] = None) -> KNetworkReport:
    derived = anticliques(net.terminals, net.demands)
    k = derived if k is None else k
    reasons = []
    match = k == derived
    if not match:
        reasons.append("clutter is not the anticlique clutter of the demand graph")
    check = is_k_clutter(k)
    if not check.ok:
        a, b, c = check.witness
        reasons.append("K-clutter condition fails for "
                       + ", ".join("{" + ",".join(sorted(m)) + "}" for m in (a, b, c)))
    odd = odd_inner_nodes(net)
    for x in odd:
        reasons.append(f"inner node {x} has odd degree {degree(net, x)}")
    return KNetworkReport(match, check.ok, not odd, k, check.witness, reasons)
