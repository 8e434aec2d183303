"""Run the theorem checks over a seeded corpus of random networks and
tabulate how often each holds.  Violating instances are written out.

    python scripts/corpus_check.py --count 300 --nodes 8 --terminals 6
    python scripts/corpus_check.py --non-eulerian --count 100
"""
import argparse
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from pathpack.cli import print_network
from pathpack.cuts import beta, lambda_
from pathpack.demand import compress_atoms
from pathpack.duality import verify_maxmin
from pathpack.generate import GenConfig, corpus
from pathpack.solve import (Falsifier, common_solution_search, max_size, max_size_w_solution,
                            min_size_w_solution, solve_fractional, solve_scaled_integer)


@dataclass
class CheckConfig:
    seed: int = 1
    count: int = 200
    nodes: int = 8
    terminals: int = 6
    max_mult: int = 3
    eulerian: bool = True
    out: str = "corpus-failures"


def _locks(net, h, k):
    return all(h.between(A, net.terminals - A) == lambda_(net, A).value for A in k.members)


def _beta_ok(net, h, k):
    return all(h.within(A) >= beta(net, A) for A in k.members)


def eulerian_checks(net, k) -> dict[str, bool]:
    theta = solve_fractional(net, k, "w").value
    eta = solve_fractional(net, k, "s").value
    out = {
        "W half-integral (simple)": solve_scaled_integer(net, k, "w", 2, simple_only=True).value == theta,
        "S half-integral": solve_scaled_integer(net, k, "s", 2).value == eta,
        "2 theta integral": (2 * theta).denominator == 1,
        "max |f| = LC value": max_size(net) == Fraction(sum(lambda_(net, {t}).value for t in net.terminals), 2),
        "max-min equality": verify_maxmin(net, k).equality_holds,
    }
    try:
        common_solution_search(net, k)
        out["common solution"] = True
    except Falsifier:
        out["common solution"] = False
    n2, k2 = compress_atoms(net, k, zero_only=True)
    h = min_size_w_solution(n2, k2).flow
    g = max_size_w_solution(n2, k2, D=2, simple_only=True).flow
    out["least-size h locks K"] = _locks(n2, h, k2)
    out["least-size h[A] >= beta"] = _beta_ok(n2, h, k2)
    out["maximum h locks K"] = _locks(n2, g, k2)
    out["maximum h[A] >= beta"] = _beta_ok(n2, g, k2)
    return out


def general_checks(net, k) -> dict[str, bool]:
    return {f"{p.upper()} quarter-integral": solve_scaled_integer(net, k, p, 4).value
            == solve_fractional(net, k, p).value for p in "sw"}


def run(cfg: CheckConfig) -> Counter:
    gen = GenConfig(nodes=cfg.nodes, terminals=cfg.terminals, max_mult=cfg.max_mult, eulerian=cfg.eulerian)
    check = eulerian_checks if cfg.eulerian else general_checks
    held, seen = Counter(), 0
    out = Path(cfg.out)
    t0 = time.perf_counter()
    for s, net, k in corpus(cfg.seed, cfg.count, gen):
        seen += 1
        for name, ok in check(net, k).items():
            held[name] += ok
            if not ok:
                out.mkdir(exist_ok=True)
                slug = name.replace(" ", "_").replace(">=", "ge").replace("|", "")
                (out / f"{slug}-{s}.net").write_text(print_network(net, k, [f"seed {s}: {name} fails"]))
    width = max(len(n) for n in held)
    for name, n in held.items():
        print(f"{name:<{width}}  {n:>4}/{seen}")
    print(f"{seen} instances in {time.perf_counter() - t0:.1f}s")
    return held


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    d = CheckConfig()
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--count", type=int, default=d.count)
    ap.add_argument("--nodes", type=int, default=d.nodes)
    ap.add_argument("--terminals", type=int, default=d.terminals)
    ap.add_argument("--max-mult", type=int, default=d.max_mult)
    ap.add_argument("--non-eulerian", action="store_true")
    ap.add_argument("--out", default=d.out)
    a = ap.parse_args()
    run(CheckConfig(a.seed, a.count, a.nodes, a.terminals, a.max_mult, not a.non_eulerian, a.out))


if __name__ == "__main__":
    main()
