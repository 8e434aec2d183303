"""Seeded random K-networks for the verification corpus."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .demand import Clutter, anticliques, is_k_clutter, strong_pairs
from .netmodel import Multigraph, Network, degree, pair


@dataclass
class GenConfig:
    nodes: int = 6
    terminals: int = 4
    max_mult: int = 3
    edge_prob: float = 0.45
    eulerian: bool = True
    max_tries: int = 1000


def _demands(rng: random.Random, T: list[str], tries: int) -> frozenset[tuple[str, str]]:
    for _ in range(tries):
        p = rng.uniform(0.2, 0.9)
        S = frozenset(pair(u, v) for u, v in itertools.combinations(T, 2) if rng.random() < p)
        if is_k_clutter(anticliques(T, S)).ok:
            return S
    # the complete demand graph always qualifies (singleton anticliques)
    return frozenset(pair(u, v) for u, v in itertools.combinations(T, 2))


def _bump(mult: dict, u: str, v: str, cap: int) -> bool:
    key = pair(u, v)
    if mult.get(key, 0) >= cap:
        return False
    mult[key] = mult.get(key, 0) + 1
    return True


def _repair_parity(rng: random.Random, mult: dict, nodes: list[str], T: list[str], cap: int) -> None:
    """Make every inner degree even by adding edges between odd inner nodes,
    falling back to edges into terminals."""
    net = Network(Multigraph(frozenset(nodes), mult), frozenset(T))
    odd = [x for x in net.sorted_inner() if degree(net, x) % 2]
    rng.shuffle(odd)
    while len(odd) >= 2:
        u, v = odd.pop(), odd.pop()
        if _bump(mult, u, v, cap):
            continue
        odd.extend([u, v])
        break
    for x in odd:
        for t in rng.sample(T, len(T)):
            if _bump(mult, x, t, cap):
                break
        else:
            # every terminal edge is full: pull one parallel edge out instead
            y = next(y for (a, b) in sorted(mult) for y in (a, b) if x in (a, b) and y != x)
            mult[pair(x, y)] -= 1


def random_network(seed: int, cfg: GenConfig, T: Optional[list[str]] = None,
                   S: Optional[frozenset] = None) -> tuple[Network, Clutter]:
    rng = random.Random(seed)
    if T is None:
        T = [f"t{i}" for i in range(1, cfg.terminals + 1)]
    inner = [f"v{i}" for i in range(1, cfg.nodes - len(T) + 1)]
    nodes = list(T) + inner
    if S is None:
        S = _demands(rng, T, cfg.max_tries)
    mult: dict[tuple[str, str], int] = {}
    for u, v in itertools.combinations(nodes, 2):
        if rng.random() < cfg.edge_prob:
            mult[pair(u, v)] = rng.randint(1, cfg.max_mult)
    if cfg.eulerian:
        _repair_parity(rng, mult, nodes, T, cfg.max_mult)
    else:
        net = Network(Multigraph(frozenset(nodes), mult), frozenset(T))
        if inner and not any(degree(net, x) % 2 for x in inner):
            x = rng.choice(inner)
            for y in rng.sample(nodes, len(nodes)):
                if y != x and _bump(mult, x, y, cfg.max_mult):
                    break
            else:
                mult[pair(x, T[0])] -= 1
    graph = Multigraph(frozenset(nodes), {e: c for e, c in mult.items() if c})
    net = Network(graph, frozenset(T), S)
    return net, anticliques(T, S)


def corpus(seed: int, count: int, cfg: GenConfig, max_paths: Optional[int] = 400,
           vary: bool = True) -> Iterator[tuple[int, Network, Clutter]]:
    """``count`` instances from consecutive derived seeds; with ``vary`` the
    node and terminal counts are drawn per instance up to the config's values.
    Instances with more than ``max_paths`` T-paths are skipped."""
    from .solve import TooManyPaths, enumerate_t_paths

    master = random.Random(seed)
    made = 0
    while made < count:
        s = master.randrange(2 ** 32)
        c = cfg
        if vary:
            r = random.Random(s ^ 0x5EED)
            t = r.randint(2, cfg.terminals)
            n = r.randint(t + (0 if cfg.eulerian else 1), max(cfg.nodes, t + 1))
            c = GenConfig(n, t, cfg.max_mult, r.uniform(0.25, cfg.edge_prob), cfg.eulerian, cfg.max_tries)
        net, k = random_network(s, c)
        if not cfg.eulerian and not any(degree(net, x) % 2 for x in net.inner):
            continue
        if max_paths is not None:
            try:
                enumerate_t_paths(net, max_paths=max_paths)
            except TooManyPaths:
                continue
        made += 1
        yield s, net, k


BIPARTITE_TERMINALS = ["s1", "s2", "s3", "t1", "t2", "t3"]
BIPARTITE_DEMANDS = frozenset(pair(u, v) for u, v in
                            [("s1", "s2"), ("s1", "s3"), ("s2", "s3"),
                             ("t1", "t2"), ("t1", "t3"), ("t2", "t3")])


def bipartite_clutter() -> Clutter:
    return Clutter.of(BIPARTITE_TERMINALS, [{f"s{i}", f"t{j}"} for i in (1, 2, 3) for j in (1, 2, 3)])


@dataclass
class GapInstance:
    seed: int
    tries: int
    net: Network
    k: Clutter
    integer_eta: object
    half_eta: object
    integer_theta: object
    half_theta: object


def search_gap_instance(max_seeds: int = 10_000, seed: int = 0, budget: int = 20000) -> Optional[GapInstance]:
    """Seeded search for a 6-terminal Eulerian network over the clutter
    {{s_i, t_j}} whose integer S-optimum is at most 2 while a half-integer
    flow reaches 3."""
    from .solve import solve_fractional, solve_scaled_integer

    k = bipartite_clutter()
    assert strong_pairs(k) == BIPARTITE_DEMANDS
    master = random.Random(seed)
    for i in range(1, max_seeds + 1):
        s = master.randrange(2 ** 32)
        r = random.Random(s)
        cfg = GenConfig(nodes=6 + r.randint(1, 2), terminals=6, max_mult=1,
                        edge_prob=r.uniform(0.15, 0.4))
        net, _ = random_network(s, cfg, BIPARTITE_TERMINALS, BIPARTITE_DEMANDS)
        if solve_fractional(net, k, "s").value < 3:
            continue
        half = solve_scaled_integer(net, k, "s", 2, budget=budget).value
        if half < 3:
            continue
        whole = solve_scaled_integer(net, k, "s", 1, budget=budget).value
        if whole <= 2:
            return GapInstance(s, i, net, k, whole, half,
                               solve_scaled_integer(net, k, "w", 1, budget=budget).value,
                               solve_scaled_integer(net, k, "w", 2, budget=budget).value)
    return None
