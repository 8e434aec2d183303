"""Shared builders for flow-level tests."""
import itertools
import random

from pathpack.flows import FlowError, switch
from pathpack.solve import max_size_w_solution


def random_switches(net, f, rng: random.Random, steps: int):
    """Apply up to ``steps`` random valid switches; yields each flow visited."""
    yield f
    for _ in range(steps):
        paths = [p for p, _ in f]
        moves = [(P, Q, x) for P, Q in itertools.combinations(paths, 2)
                 for x in sorted(set(P.interior) & set(Q.interior)) if x in net.inner]
        rng.shuffle(moves)
        for P, Q, x in moves:
            try:
                f = switch(f, P, Q, x, net.terminals)
                break
            except FlowError:
                continue
        else:
            return
        yield f


def maximum_flows(net, k, seed, steps=6):
    f = max_size_w_solution(net, k).flow
    return list(random_switches(net, f, random.Random(seed), steps))
