"""Multiflows: weighted T-paths, their aggregates, and path transformations."""
from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .cuts import lambda_
from .demand import Clutter, PairClass, classify_pair
from .netmodel import Multigraph, Network, degree, pair


class FlowError(ValueError):
    pass


class PathNotInGraph(FlowError):
    pass


class SwitchCreatesClosedWalk(FlowError):
    pass


class SwitchCreatesNonSimpleWalk(FlowError):
    pass


class NoCommonInnerNode(FlowError):
    pass


class ClassPatternMismatch(FlowError):
    pass


class NotMaximumFlow(FlowError):
    pass


class OddDegree(FlowError):
    pass


class NotInner(FlowError):
    pass


class BadPairing(FlowError):
    pass


@dataclass(frozen=True, order=True)
class TPath:
    nodes: tuple[str, ...]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise FlowError(f"path {nodes} has fewer than two nodes")
        if nodes[0] == nodes[-1]:
            raise SwitchCreatesClosedWalk(f"walk {nodes} is closed")
        if len(set(nodes)) != len(nodes):
            raise SwitchCreatesNonSimpleWalk(f"walk {nodes} repeats a node")

    @classmethod
    def of(cls, *nodes: str) -> "TPath":
        return cls(tuple(nodes))

    @property
    def ends(self) -> tuple[str, str]:
        return self.nodes[0], self.nodes[-1]

    @property
    def endpair(self) -> tuple[str, str]:
        return pair(self.nodes[0], self.nodes[-1])

    @property
    def interior(self) -> tuple[str, ...]:
        return self.nodes[1:-1]

    def reversed(self) -> "TPath":
        return TPath(self.nodes[::-1])

    def canonical(self) -> "TPath":
        return self if self.nodes[0] <= self.nodes[-1] else self.reversed()

    def edges(self) -> list[tuple[str, str]]:
        return [pair(u, v) for u, v in zip(self.nodes, self.nodes[1:])]

    def is_simple(self, terminals: Iterable[str]) -> bool:
        """False for compound paths, which pass through a terminal other than their ends."""
        return not set(self.interior) & set(terminals)

    def index(self, x: str) -> int:
        return self.nodes.index(x)

    def __len__(self) -> int:
        return len(self.nodes) - 1

    def __str__(self) -> str:
        return "-".join(self.nodes)


def _as_path(p) -> TPath:
    return p if isinstance(p, TPath) else TPath(tuple(p))


@dataclass(frozen=True)
class Multiflow:
    weights: Mapping[TPath, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        merged: dict[TPath, Fraction] = {}
        for p, w in self.weights.items():
            w = Fraction(w)
            if w < 0:
                raise FlowError(f"negative weight {w} on {p}")
            key = _as_path(p).canonical()
            merged[key] = merged.get(key, Fraction(0)) + w
        object.__setattr__(self, "weights", {p: w for p, w in sorted(merged.items()) if w})

    @classmethod
    def of(cls, entries: Iterable[tuple[Sequence[str], object]]) -> "Multiflow":
        acc: dict[TPath, Fraction] = {}
        for nodes, w in entries:
            key = _as_path(nodes).canonical()
            acc[key] = acc.get(key, Fraction(0)) + Fraction(w)
        return cls(acc)

    def __iter__(self) -> Iterator[tuple[TPath, Fraction]]:
        return iter(self.weights.items())

    def __len__(self) -> int:
        return len(self.weights)

    def __contains__(self, p) -> bool:
        return _as_path(p).canonical() in self.weights

    def weight(self, p) -> Fraction:
        return self.weights.get(_as_path(p).canonical(), Fraction(0))

    @property
    def size(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def pair_weight(self, u: str, v: str) -> Fraction:
        """f[u, v]."""
        key = pair(u, v)
        return sum((w for p, w in self if p.endpair == key), Fraction(0))

    def between(self, A: Iterable[str], B: Iterable[str]) -> Fraction:
        """f[A, B]: weight of paths with one end in A and the other in B."""
        A, B = set(A), set(B)
        total = Fraction(0)
        for p, w in self:
            u, v = p.ends
            if (u in A and v in B) or (u in B and v in A):
                total += w
        return total

    def within(self, A: Iterable[str]) -> Fraction:
        """f[A]: weight of paths with both ends in A."""
        A = set(A)
        return sum((w for p, w in self if p.ends[0] in A and p.ends[1] in A), Fraction(0))

    def loads(self) -> dict[tuple[str, str], Fraction]:
        acc: dict[tuple[str, str], Fraction] = {}
        for p, w in self:
            for e in p.edges():
                acc[e] = acc.get(e, Fraction(0)) + w
        return dict(sorted(acc.items()))

    def plus(self, other: Mapping | Iterable) -> "Multiflow":
        acc = dict(self.weights)
        items = other.items() if isinstance(other, Mapping) else other
        for p, w in items:
            key = _as_path(p).canonical()
            acc[key] = acc.get(key, Fraction(0)) + Fraction(w)
        return Multiflow(acc)

    def scaled(self, factor) -> "Multiflow":
        factor = Fraction(factor)
        return Multiflow({p: w * factor for p, w in self})


class Violation(NamedTuple):
    edge: tuple[str, str]
    load: Fraction
    capacity: int


def validate_paths(net: Network, f: Multiflow) -> None:
    for p, _ in f:
        for u in p.nodes:
            if u not in net.nodes:
                raise PathNotInGraph(f"{p}: unknown node {u}")
        u, v = p.ends
        if u not in net.terminals or v not in net.terminals:
            raise PathNotInGraph(f"{p}: ends are not terminals")
        for a, b in p.edges():
            if net.graph.c(a, b) == 0:
                raise PathNotInGraph(f"{p}: {a} and {b} are not adjacent")


def check_capacity(net: Network, f: Multiflow) -> list[Violation]:
    """Edges whose total traversal weight exceeds their multiplicity (empty = feasible)."""
    validate_paths(net, f)
    return [Violation(e, load, net.graph.c(*e)) for e, load in f.loads().items()
            if load > net.graph.c(*e)]


class Objective(NamedTuple):
    size: Fraction
    strong: Fraction
    weak: Fraction
    zero: Fraction
    theta: Fraction
    size_minus_half_weak: Fraction
    no_zero_paths: bool


def objective(f: Multiflow, k: Clutter) -> Objective:
    acc = {c: Fraction(0) for c in PairClass}
    for p, w in f:
        acc[classify_pair(k, *p.ends)] += w
    size = f.size
    s, wk, z = acc[PairClass.STRONG], acc[PairClass.WEAK], acc[PairClass.ZERO]
    theta = s + wk / 2
    alt = size - wk / 2
    return Objective(size, s, wk, z, theta, alt, alt == theta)


def fractionality(f: Multiflow) -> int:
    """Least D with D*f integral (lcm of the weight denominators)."""
    return math.lcm(1, *(w.denominator for _, w in f))


def largest_denominator(f: Multiflow) -> int:
    return max((w.denominator for _, w in f), default=1)


def locks(net: Network, f: Multiflow, A: Iterable[str]) -> bool:
    """f locks A when f[A, A^c] equals lambda(A)."""
    A = frozenset(A)
    rest = net.terminals - A
    return f.between(A, rest) == lambda_(net, A).value


def _check_inner_interior(p: TPath, x: str, terminals: Iterable[str]) -> int:
    if x in set(terminals):
        raise NoCommonInnerNode(f"{x} is a terminal")
    if x not in p.interior:
        raise NoCommonInnerNode(f"{x} is not an interior node of {p}")
    return p.index(x)


def _take(f: Multiflow, p: TPath, amount: Fraction) -> dict[TPath, Fraction]:
    have = f.weight(p)
    if have < amount:
        raise FlowError(f"{p} carries {have}, cannot remove {amount}")
    acc = dict(f.weights)
    acc[p.canonical()] = have - amount
    return acc


def switched_pair(P: TPath, Q: TPath, x: str) -> tuple[TPath, TPath]:
    """P = P'xP'', Q = Q'xQ''  ->  K = P'xQ' (Q' reversed) and L = P''xQ''."""
    i, j = P.index(x), Q.index(x)
    K = P.nodes[:i + 1] + Q.nodes[:j][::-1]
    L = P.nodes[i:][::-1] + Q.nodes[j + 1:]
    for walk in (K, L):
        if walk[0] == walk[-1]:
            raise SwitchCreatesClosedWalk(f"switch at {x} yields closed walk {'-'.join(walk)}")
        if len(set(walk)) != len(walk):
            raise SwitchCreatesNonSimpleWalk(f"switch at {x} yields {'-'.join(walk)}")
    return TPath(K), TPath(L)


def switch(f: Multiflow, P, Q, x: str, terminals: Iterable[str] = ()) -> Multiflow:
    """Switch P and Q in the inner node x.

    With unequal weights only min(w(P), w(Q)) of each path is switched; the
    heavier path keeps its remainder.
    """
    P, Q = _as_path(P), _as_path(Q)
    if P.canonical() == Q.canonical():
        raise FlowError("cannot switch a path with itself")
    _check_inner_interior(P, x, terminals)
    _check_inner_interior(Q, x, terminals)
    w = min(f.weight(P), f.weight(Q))
    if w == 0:
        raise FlowError("both paths must carry positive weight in f")
    K, L = switched_pair(P, Q, x)
    acc = _take(f, P, w)
    acc = _take(Multiflow(acc), Q, w)
    return Multiflow(acc).plus([(K, w), (L, w)])


def three_halves(f: Multiflow, P, Q, x: str, k: Clutter, eps=None,
                 terminals: Iterable[str] = ()) -> Multiflow:
    """The 3/2-operation on a weak path P = p1..p2 and a strong path Q = q1..q2.

    Required classes: (p1,p2), (p1,q1), (p1,q2) weak; (p2,q1), (p2,q2),
    (q1,q2) strong.  With amount eps, P loses eps, Q loses eps/2 and the
    paths p2..x..q1 and p2..x..q2 gain eps/2 each.  eps defaults to
    min(w(P), 2 w(Q)), which for w(P) = w(Q) = w replaces P and Q by three
    paths of weight w/2.  Theta is preserved, f[S] grows by eps/2 and |f|
    shrinks by eps/2.
    """
    P, Q = _as_path(P), _as_path(Q)
    i = _check_inner_interior(P, x, terminals)
    j = _check_inner_interior(Q, x, terminals)
    p1, p2 = P.ends
    q1, q2 = Q.ends
    if len({p1, p2, q1, q2}) < 4:
        raise ClassPatternMismatch("P and Q must have four distinct ends")
    W, S = PairClass.WEAK, PairClass.STRONG
    want = {(p1, p2): W, (p1, q1): W, (p1, q2): W, (p2, q1): S, (p2, q2): S, (q1, q2): S}
    for (u, v), cls in want.items():
        got = classify_pair(k, u, v)
        if got is not cls:
            raise ClassPatternMismatch(f"({u},{v}) is {got.name}, expected {cls.name}")
    wp, wq = f.weight(P), f.weight(Q)
    eps = min(wp, 2 * wq) if eps is None else Fraction(eps)
    if eps < 0 or eps > wp or eps > 2 * wq:
        raise FlowError(f"amount {eps} outside [0, min(w(P), 2w(Q))]")
    if eps == 0:
        return f
    tail = P.nodes[i:][::-1]  # p2 .. x
    to_q1 = TPath(tail + Q.nodes[:j][::-1])
    to_q2 = TPath(tail + Q.nodes[j + 1:])
    acc = _take(f, P, eps)
    acc = _take(Multiflow(acc), Q, eps / 2)
    return Multiflow(acc).plus([(to_q1, eps / 2), (to_q2, eps / 2)])


@dataclass(frozen=True)
class AugmentingSequence:
    """Paths P1..Pn and switch nodes x1..x(n-1); each (A, A^c)-path is
    oriented from its A-end."""
    paths: tuple[TPath, ...]
    nodes: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.paths)


def _orient_from(p: TPath, A: frozenset[str]) -> TPath:
    return p if p.nodes[0] in A else p.reversed()


def is_augmenting_sequence(net: Network, f: Multiflow, A: Iterable[str],
                           seq: AugmentingSequence) -> bool:
    A = frozenset(A)
    Ac = net.terminals - A
    ps, xs = seq.paths, seq.nodes
    if len(ps) < 2 or len(xs) != len(ps) - 1:
        return False
    if any(p not in f for p in ps):
        return False
    kind = lambda p: (p.ends[0] in A) + (p.ends[1] in A)
    if kind(ps[0]) != 2 or kind(ps[-1]) != 0 or not set(ps[-1].ends) <= Ac:
        return False
    if any(kind(p) != 1 for p in ps[1:-1]):
        return False
    for i, x in enumerate(xs):
        if x in net.terminals or x not in ps[i].interior or x not in ps[i + 1].interior:
            return False
    for i in range(1, len(ps) - 1):
        p = _orient_from(ps[i], A)
        if p.index(xs[i]) > p.index(xs[i - 1]):
            return False
    return True


def lovasz_cherkassky_bound(net: Network) -> Fraction:
    return Fraction(sum(lambda_(net, {t}).value for t in net.terminals), 2)


def find_augmenting_sequence(net: Network, f: Multiflow, A: Iterable[str]) -> Optional[AugmentingSequence]:
    """Search for an augmenting sequence for A in a maximum multiflow f.

    Breadth-first over (path, entry node) states starting from A-paths; an
    (A, A^c)-path entered at node y can hand over at any inner node lying
    strictly between y and its A-end.  Returns None when no sequence exists.
    """
    A = frozenset(A)
    if f.size != lovasz_cherkassky_bound(net):
        raise NotMaximumFlow(f"|f| = {f.size} is not the maximum {lovasz_cherkassky_bound(net)}")
    inner = net.inner
    a_paths, cross, ac_paths = [], [], []
    for p, _ in f:
        n_in = (p.ends[0] in A) + (p.ends[1] in A)
        if n_in == 2:
            a_paths.append(p)
        elif n_in == 1:
            cross.append(_orient_from(p, A))
        else:
            ac_paths.append(p)
    through: dict[str, list[TPath]] = {}
    for p in cross:
        for x in p.interior:
            if x in inner:
                through.setdefault(x, []).append(p)
    ac_through: dict[str, TPath] = {}
    for p in ac_paths:
        for x in p.interior:
            if x in inner:
                ac_through.setdefault(x, p)

    # state: (path, entry index); A-paths use entry index len(nodes) (everything reachable)
    parent: dict[tuple[TPath, int], Optional[tuple[tuple[TPath, int], str]]] = {}
    queue: deque[tuple[TPath, int]] = deque()
    for p in a_paths:
        s = (p, len(p.nodes))
        parent[s] = None
        queue.append(s)

    def rebuild(state, x_last, last):
        paths, nodes = [last], [x_last]
        while state is not None:
            paths.append(state[0])
            link = parent[state]
            if link is None:
                break
            state, x = link
            nodes.append(x)
        return AugmentingSequence(tuple(reversed(paths)), tuple(reversed(nodes)))

    while queue:
        state = queue.popleft()
        p, limit = state
        for idx in range(1, min(limit, len(p.nodes) - 1)):
            x = p.nodes[idx]
            if x not in inner:
                continue
            if x in ac_through:
                return rebuild(state, x, ac_through[x])
            for q in through.get(x, ()):
                s = (q, q.index(x))
                if s not in parent:
                    parent[s] = (state, x)
                    queue.append(s)
    return None


Slot = tuple[str, int]
Pairing = tuple[tuple[Slot, Slot], ...]


def _slots(net: Network, x: str) -> list[Slot]:
    return [(y, i) for y, c in net.graph.neighbors(x).items() for i in range(c)]


def _check_split(net: Network, x: str) -> None:
    if x not in net.nodes:
        raise NotInner(f"unknown node {x}")
    if x in net.terminals:
        raise NotInner(f"{x} is a terminal")
    if degree(net, x) % 2:
        raise OddDegree(f"{x} has odd degree {degree(net, x)}")


def slot_pairings(net: Network, x: str, distinct: bool = True) -> list[Pairing]:
    """Perfect matchings of the edge slots at x.  With ``distinct`` only one
    pairing per resulting multiset of neighbour pairs is kept."""
    _check_split(net, x)

    def rec(rest: list[Slot]) -> Iterator[list]:
        if not rest:
            yield []
            return
        a = rest[0]
        for i in range(1, len(rest)):
            for tail in rec(rest[1:i] + rest[i + 1:]):
                yield [(a, rest[i])] + tail

    out, seen = [], set()
    for m in rec(_slots(net, x)):
        key = tuple(sorted(pair(a[0], b[0]) for a, b in m))
        if distinct and key in seen:
            continue
        seen.add(key)
        out.append(tuple(m))
    return out


def _pair_counts(pairing: Pairing) -> dict[tuple[str, str], int]:
    acc: dict[tuple[str, str], int] = {}
    for a, b in pairing:
        key = pair(a[0], b[0])
        acc[key] = acc.get(key, 0) + 1
    return acc


def _check_pairing(net: Network, x: str, pairing: Pairing) -> None:
    used = [s for ab in pairing for s in ab]
    if sorted(used) != sorted(_slots(net, x)):
        raise BadPairing(f"pairing does not cover the edge slots at {x} exactly once")


def split_node(net: Network, x: str, pairing: Pairing) -> Network:
    """Remove x and join its neighbours pairwise as the slot pairing says.

    A pair of slots leading to the same neighbour would become a self-loop;
    it is dropped with a warning.
    """
    _check_split(net, x)
    _check_pairing(net, x, pairing)
    mult = {e: c for e, c in net.graph.mult.items() if x not in e}
    for (u, v), c in _pair_counts(pairing).items():
        if u == v:
            warnings.warn(f"split of {x}: dropping {c} self-loop(s) at {u}", stacklevel=2)
            continue
        mult[(u, v)] = mult.get((u, v), 0) + c
    graph = Multigraph(net.nodes - {x}, mult)
    return Network(graph, net.terminals, net.demands)


def _transits(f: Multiflow, x: str) -> dict[tuple[str, str], Fraction]:
    acc: dict[tuple[str, str], Fraction] = {}
    for p, w in f:
        if x in p.interior:
            i = p.index(x)
            key = pair(p.nodes[i - 1], p.nodes[i + 1])
            acc[key] = acc.get(key, Fraction(0)) + w
    return acc


def admissible_splits(net: Network, f: Multiflow, x: str) -> list[tuple[Pairing, Fraction]]:
    """Each distinct pairing at x with the weight of f's transits through x it
    cannot carry; weight 0 marks an f-split."""
    trans = _transits(f, x)
    out = []
    for m in slot_pairings(net, x):
        counts = _pair_counts(m)
        lost = sum((max(Fraction(0), w - counts.get(e, 0)) for e, w in trans.items()), Fraction(0))
        out.append((m, lost))
    return out


def reroute_split(f: Multiflow, x: str) -> Multiflow:
    """Carry f over to a split of x by shortcutting every path through x."""
    return Multiflow.of((tuple(n for n in p.nodes if n != x), w) for p, w in f)
