from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strategies import k_networks
from pathpack import cli
from pathpack.cli import (InconsistentStyle, ParseError, SolutionFile, parse_network,
                          parse_solution, print_network, print_solution)
from pathpack.cuts import lambda_
from pathpack.demand import anticliques, validate_k_network
from pathpack.duality import Expansion
from pathpack.flows import Multiflow, TPath, check_capacity
from pathpack.netmodel import Multigraph, Network
from pathpack.solve import BUDGET_ENV, solve_fractional

C4 = """# 4-cycle
terminal s1
terminal s2
terminal t1
terminal t2
edge s1 s2
edge s2 t1
edge t1 t2
edge t2 s1
demand s1 t1
demand s2 t2
"""
SXT = "terminal s\nterminal t\nedge s x\nedge x t\ndemand s t"
STAR = "terminal a\nterminal b\nterminal d\nedge c a\nedge c b\nedge c d\ndemand a b\n"
# needs branching for the integer W-problem
BRANCHY = """terminal t1
terminal t2
terminal t3
terminal t4
terminal t5
terminal t6
edge t1 t6
edge t1 v1
edge t2 t3
edge t2 v1
edge t3 t4
edge t3 v1
edge t4 t6
edge t4 v1
edge t5 v1
edge t6 v1
demand t1 t2
demand t1 t3
demand t1 t5
demand t1 t6
demand t2 t3
demand t4 t5
demand t4 t6
demand t5 t6
"""


def test_parse_examples():
    net, k = parse_network(SXT)
    assert k is None
    assert net.terminals == {"s", "t"} and net.inner == {"x"}
    assert net.demands == {("s", "t")} and net.graph.c("s", "x") == 1
    with pytest.raises(ParseError) as err:
        parse_network("edge a")
    assert err.value.line == 1
    with pytest.raises(InconsistentStyle):
        parse_network("terminal a\nterminal b\ndemand a b\nanticlique a")
    with pytest.raises(InconsistentStyle):
        parse_network("terminal a\nterminal b\nanticlique a\nanticlique b\ndemand a b")


@pytest.mark.parametrize("text, line", [
    ("terminal a\nfrobnicate a b", 2),
    ("terminal a\nedge a b 0", 2),
    ("edge a b x", 1),
    ("edge a a", 1),
    ("terminal a\n\n# c\ndemand a b", 4),
    ("terminal a\nanticlique a b", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_network(text)
    assert err.value.line == line


def test_anticlique_style():
    text = "terminal s1\nterminal s2\nterminal t1\nterminal t2\nedge s1 t1\n" \
           "anticlique s1 s2\nanticlique s1 t2\nanticlique s2 t1\nanticlique t1 t2\n"
    net, k = parse_network(text)
    assert net.demands == {("s1", "t1"), ("s2", "t2")}
    assert k == anticliques(net.terminals, net.demands)
    assert parse_network(print_network(net, k)) == (net, k)


def without_isolated_inner(net):
    used = {x for e in net.graph.mult for x in e} | net.terminals
    return Network(Multigraph(frozenset(used), net.graph.mult), net.terminals, net.demands)


@given(k_networks(max_nodes=8, eulerian=False))
def test_network_round_trip(inst):
    net, k = inst
    net = without_isolated_inner(net)
    text = print_network(net)
    assert parse_network(text) == (net, None)
    assert print_network(parse_network(text)[0]) == text
    assert parse_network(print_network(net, k)) == (net, k)


@settings(max_examples=20)
@given(k_networks(max_nodes=7), st.sampled_from("sw"))
def test_solution_round_trip(inst, problem):
    net, k = inst
    res = solve_fractional(net, k, problem)
    cuts = [lambda_(net, {t}) for t in net.sorted_terminals()]
    exp = [(res.value, Expansion.of({t: () for t in net.terminals}))]
    sol = SolutionFile(problem, res.mode, res.value, res.flow, cuts, exp)
    text = print_solution(sol)
    back = parse_solution(text)
    assert back == sol
    assert print_solution(back) == text
    assert check_capacity(net, back.flow) == []


def test_solution_format():
    f = Multiflow({TPath.of("s", "x", "t"): Fraction(1, 2)})
    text = print_solution(SolutionFile("w", "scaled:2", Fraction(1, 2), f))
    assert text == "problem w\nmode scaled:2\nvalue 1/2\npath 1/2 s x t\n"
    with pytest.raises(ParseError):
        parse_solution(text.replace("1/2 s", "2/4 s"))
    with pytest.raises(ParseError):
        parse_solution("mode lp\nvalue 1/1\n")


def run(capsys, tmp_path, text, *args):
    p = tmp_path / "net.txt"
    p.write_text(text)
    code = cli.main([*args, str(p)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_command(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, C4, "validate")
    assert code == 0 and "K-network" in out
    code, out, _ = run(capsys, tmp_path, STAR, "validate")
    assert code == 1 and "inner node c has odd degree 3" in out
    code, _, err = run(capsys, tmp_path, "edge a", "validate")
    assert code == 2 and "line 1" in err


def test_solve_command(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, C4, "solve", "--problem", "s", "--mode", "lp")
    assert code == 0 and "value 2/1" in out
    code, out, _ = run(capsys, tmp_path, C4, "solve", "--problem", "s", "--mode", "integer")
    assert code == 0 and parse_solution(out).value == 2
    code, out, _ = run(capsys, tmp_path, SXT, "solve", "--problem", "w", "--mode", "half", "--min-size")
    sol = parse_solution(out)
    assert code == 0 and sol.value == 1 and len(sol.flow) == 1
    code, out, _ = run(capsys, tmp_path, C4, "solve", "--problem", "w", "--mode", "frac:3")
    assert code == 0 and parse_solution(out).mode == "scaled:3"
    code, _, _ = run(capsys, tmp_path, C4, "solve", "--problem", "w", "--mode", "frac:0")
    assert code == 2


def test_budget_exit_code(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "1")
    code, _, err = run(capsys, tmp_path, BRANCHY, "solve", "--problem", "w", "--mode", "integer")
    assert code == 3 and "budget" in err
    monkeypatch.delenv(BUDGET_ENV)
    code, out, _ = run(capsys, tmp_path, BRANCHY, "solve", "--problem", "w", "--mode", "integer")
    assert code == 0 and parse_solution(out).value == Fraction(13, 2)


def test_duality_and_cuts_commands(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, SXT, "duality")
    assert code == 0 and "equality at 1/1" in out
    code, out, _ = run(capsys, tmp_path, C4, "cuts")
    assert code == 0
    betas = [l for l in out.splitlines() if l.startswith("beta") and len(l.split()) == 4]
    assert len(betas) == 4 and all(l.endswith(" 1/1") for l in betas)
    assert "cut s1 s2 | s1 s2 2" in out


def test_common_command(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, C4, "common")
    assert code == 0 and parse_solution(out).value == 2 and "# eta 2/1" in out


def test_gen_is_deterministic(capsys):
    assert cli.main(["gen", "--seed", "7"]) == 0
    a = capsys.readouterr().out
    assert cli.main(["gen", "--seed", "7"]) == 0
    b = capsys.readouterr().out
    assert a == b
    assert validate_k_network(*parse_network(a)).is_k_network
    assert cli.main(["gen", "--seed", "8"]) == 0
    assert capsys.readouterr().out != a


def test_falsifier_artifact(capsys, tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise cli.Falsifier("synthetic")
    monkeypatch.setattr(cli, "min_size_w_solution", boom)
    target = tmp_path / "falsifiers"
    p = tmp_path / "net.txt"
    p.write_text(SXT)
    code = cli.main(["--falsifier-dir", str(target), "solve", "--problem", "w", "--mode", "half",
                     "--min-size", "--simple-only", str(p)])
    assert code == 1
    (written,) = target.iterdir()
    assert parse_network(written.read_text())[0] == parse_network(SXT)[0]
