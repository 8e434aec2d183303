"""Search for a 6-terminal Eulerian network over the clutter {{s_i, t_j}}
where integer flows carry at most 2 S-paths but a half-integer flow reaches 3.

    python scripts/gap_search.py --max-seeds 10000 --out gap.net
"""
import argparse
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from pathpack.cli import fmt, print_network
from pathpack.generate import search_gap_instance


@dataclass
class SearchConfig:
    max_seeds: int = 10_000
    seed: int = 0
    out: Optional[str] = None


def run(cfg: SearchConfig) -> int:
    t0 = time.perf_counter()
    inst = search_gap_instance(cfg.max_seeds, cfg.seed)
    if inst is None:
        print(f"no instance in {cfg.max_seeds} seeds")
        return 1
    text = print_network(inst.net, inst.k, [
        f"seed {inst.seed}, found after {inst.tries} instances",
        f"S-problem: integer {fmt(inst.integer_eta)}, half-integer {fmt(inst.half_eta)}",
        f"W-problem: integer {fmt(inst.integer_theta)}, half-integer {fmt(inst.half_theta)}",
    ])
    print(text, end="")
    print(f"# {time.perf_counter() - t0:.1f}s")
    if cfg.out:
        Path(cfg.out).write_text(text)
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--max-seeds", type=int, default=SearchConfig.max_seeds)
    ap.add_argument("--seed", type=int, default=SearchConfig.seed)
    ap.add_argument("--out")
    a = ap.parse_args()
    return run(SearchConfig(a.max_seeds, a.seed, a.out))


if __name__ == "__main__":
    raise SystemExit(main())
