import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make
from oracles import best_packing, float_lp, lam, path_rewards, t_paths
from strategies import k_networks
from pathpack.flows import check_capacity, fractionality, objective
from pathpack.netmodel import Network
from pathpack.solve import (TooManyPaths, common_solution_search, enumerate_t_paths,
                            lovasz_cherkassky_value, max_size, max_size_w_solution, min_size_w_solution,
                            solve_fractional, solve_min_size, solve_scaled_integer)

H = Fraction(1, 2)


def test_path_enumeration_examples(c4):
    net, _ = c4
    simple = enumerate_t_paths(net, simple_only=True)
    assert len(simple) == 4 and all(len(p) == 1 for p in simple)
    full = enumerate_t_paths(net)
    assert len(full) == 12 == len(t_paths(net))
    assert sorted(len(p) for p in full) == [1] * 4 + [2] * 4 + [3] * 4
    with pytest.raises(TooManyPaths):
        enumerate_t_paths(net, max_paths=5)


@given(k_networks(max_nodes=7))
def test_path_enumeration_matches_networkx(inst):
    net, _ = inst
    for simple in (False, True):
        mine = sorted(p.canonical().nodes for p in enumerate_t_paths(net, simple))
        ref = sorted(min(p, p[::-1]) for p in t_paths(net, simple))
        assert mine == ref


def test_s_problem_on_the_4_cycle(c4):
    net, k = c4
    paths = t_paths(net)
    r = path_rewards(paths, k.members, "s")
    assert solve_fractional(net, k, "s").value == 2 == pytest.approx(float_lp(net, paths, r))
    whole, x = best_packing(net, paths, r, D=1)
    assert solve_scaled_integer(net, k, "s", 1).value == whole == 2
    half, _ = best_packing(net, paths, r, D=2)
    assert solve_scaled_integer(net, k, "s", 2).value == half == 2
    res = solve_fractional(net, k, "s")
    assert check_capacity(net, res.flow) == [] and objective(res.flow, k).strong == 2


def test_w_problem_on_the_4_cycle(c4):
    net, k = c4
    assert solve_fractional(net, k, "w").value == 2
    assert solve_fractional(net, k, "w", simple_only=True).value == 2


def brute_min_size(net, k, paths, D=2):
    """Least size among D-scaled flows on ``paths`` reaching the best Theta."""
    r = path_rewards(paths, k.members, "w")
    best = (Fraction(-1), None)
    top = D * max((c for _, _, c in net.graph.edges()), default=0)
    for x in itertools.product(range(top + 1), repeat=len(paths)):
        load = {}
        for n, p in zip(x, paths):
            for a, b in zip(p, p[1:]):
                e = (min(a, b), max(a, b))
                load[e] = load.get(e, 0) + n
        if any(v > D * net.graph.c(*e) for e, v in load.items()):
            continue
        key = (sum(ri * n for ri, n in zip(r, x)) / D, -Fraction(sum(x), D))
        if best[1] is None or key > best[0]:
            best = (key, x)
    return best[0][0], -best[0][1]


def test_min_size_examples(sxt, c4):
    res = min_size_w_solution(*sxt)
    assert res.value == 1 and [w for _, w in res.flow] == [1] and res.flow.size == 1
    net, k = c4
    res = min_size_w_solution(net, k)
    theta, size = brute_min_size(net, k, t_paths(net, simple_only=True))
    assert res.value == theta == 2
    assert res.flow.size == size == 4
    assert all(p.is_simple(net.terminals) for p, _ in res.flow)
    dead = Network.build([("x", "y")], "ab", [("a", "b")], nodes="xy")
    k0 = make([("x", "y")], "ab", [("a", "b")])[1]
    assert len(min_size_w_solution(dead, k0).flow) == 0


@settings(max_examples=15)
@given(k_networks(max_nodes=5, max_terminals=4))
def test_min_size_matches_brute_force(inst):
    net, k = inst
    paths = t_paths(net, simple_only=True)
    if len(paths) > 5:
        return
    res = min_size_w_solution(net, k)
    theta, size = brute_min_size(net, k, paths)
    assert (res.value, res.flow.size) == (theta, size)


def test_lovasz_cherkassky_examples(sxt, c4, star):
    assert lovasz_cherkassky_value(sxt[0]) == 1
    assert lovasz_cherkassky_value(c4[0]) == 4 == max_size(c4[0])
    lonely = Network.build([("s", "x"), ("x", "t")], ["s", "t", "u"], nodes=["u"])
    assert lovasz_cherkassky_value(lonely) == 1
    assert lovasz_cherkassky_value(star[0]) == Fraction(3, 2)


def test_common_solution_examples(sxt, c4):
    res = common_solution_search(*sxt)
    assert res.flow.size == 1 and res.value == 1
    net, k = c4
    res = common_solution_search(net, k)
    o = objective(res.flow, k)
    assert o.theta == 2 and o.strong == 2 and o.size == 2
    assert fractionality(res.flow) <= 2


def test_solve_min_size(c4):
    net, k = c4
    res = solve_min_size(net, k, "w", None)
    assert res.value == 2 and res.certificates["size"] == 2
    res = solve_min_size(net, k, "s", 1)
    assert res.value == 2 and res.flow.size == 2


@settings(max_examples=25)
@given(k_networks(max_nodes=7, eulerian=False), st.sampled_from("sw"))
def test_monotone_refinement(inst, problem):
    net, k = inst
    lp_value = solve_fractional(net, k, problem).value
    vals = [solve_scaled_integer(net, k, problem, D).value for D in (1, 2, 4)]
    assert vals[0] <= vals[1] <= vals[2] <= lp_value


@settings(max_examples=20)
@given(k_networks(max_nodes=7), st.sampled_from("sw"))
def test_lp_matches_float_reference(inst, problem):
    net, k = inst
    paths = t_paths(net)
    ref = float_lp(net, paths, path_rewards(paths, k.members, problem))
    res = solve_fractional(net, k, problem)
    assert float(res.value) == pytest.approx(ref, abs=1e-7)
    assert check_capacity(net, res.flow) == []


@settings(max_examples=10)
@given(k_networks(max_nodes=5, max_terminals=3), st.sampled_from("sw"))
def test_integer_optimum_matches_enumeration(inst, problem):
    net, k = inst
    paths = t_paths(net)
    if len(paths) > 10:
        return
    whole, _ = best_packing(net, paths, path_rewards(paths, k.members, problem))
    assert solve_scaled_integer(net, k, problem, 1).value == max(whole, 0)


@settings(max_examples=20)
@given(k_networks(max_nodes=7))
def test_lovasz_cherkassky_equality(inst):
    net, _ = inst
    assert max_size(net) == Fraction(sum(lam(net, {t}) for t in net.terminals), 2)


BETA_GAP = """terminal a
terminal t2
terminal t5
edge a v2
edge a v3 4
edge t2 v1
edge t2 v2 2
edge t2 v3
edge t5 v1
edge t5 v2 3
edge t5 v3
anticlique a t2
anticlique a t5
"""


def test_least_size_solution_need_not_be_maximum():
    """Least-size W-solutions can be smaller than a maximum multiflow, and
    then h[A] >= beta(A) may fail; a maximum W-solution keeps it."""
    from pathpack.cli import parse_network
    from pathpack.cuts import beta

    net, k = parse_network(BETA_GAP)
    paths = t_paths(net, simple_only=True)
    r = path_rewards(paths, k.members, "w")
    theta = float_lp(net, paths, r)
    assert theta == pytest.approx(4.5)
    least = float_lp(net, paths, [1] * len(paths), maximize=False, eq=[(r, theta)])
    assert least == pytest.approx(5)
    lc = Fraction(sum(lam(net, {t}) for t in net.terminals), 2)
    assert lc == 6

    h = min_size_w_solution(net, k)
    assert h.value == Fraction(9, 2) and h.flow.size == 5
    assert any(h.flow.within(M) < beta(net, M) for M in k.members)
    g = max_size_w_solution(net, k, D=2, simple_only=True)
    assert g.flow.size == lc and objective(g.flow, k).theta == Fraction(9, 2)
    assert all(g.flow.within(M) >= beta(net, M) for M in k.members)
