"""Run every randomized verification suite for a range of seeds.

Prints one line per (suite, law) with instance and failure counts summed over
seeds. ``--json PATH`` also writes the per-seed reports.

    python3 scripts/run_suites.py --seeds 3 --iters 20
"""

from __future__ import annotations

import argparse
import json
import time
from collections import defaultdict
from dataclasses import dataclass

from ordcal import suites
from ordcal.products import verify_axioms


@dataclass
class Config:
    seeds: int = 3
    iters: int = 20
    cap: int = 4
    floor: int = -3


def suite_table(cfg: Config) -> dict:
    return {
        "mg": lambda s: verify_axioms(seed=s, iterations=cfg.iters, cap=cfg.cap),
        "growth": lambda s: suites.growth_suite(s, cfg.iters, cfg.floor),
        "chain": lambda s: suites.chain_suite(s, cfg.iters, cfg.floor - 2),
        "roundtrip": lambda s: suites.roundtrip_suite(s, cfg.iters, cfg.floor),
        "coherence": lambda s: suites.coherence_suite(s, cfg.iters, cfg.floor),
        "precision": lambda s: suites.precision_suite(s, max(cfg.iters // 4, 1), (cfg.floor, 2 * cfg.floor)),
    }


def run(cfg: Config):
    totals = defaultdict(lambda: [0, 0])
    raw = defaultdict(list)
    timings = {}
    for name, suite in suite_table(cfg).items():
        t0 = time.perf_counter()
        for seed in range(cfg.seeds):
            report = suite(seed)
            raw[name].append(report.to_json())
            for r in report.results:
                totals[(name, r.axiom)][0] += r.instances
                totals[(name, r.axiom)][1] += r.failures
        timings[name] = time.perf_counter() - t0
    return totals, raw, timings


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    ap.add_argument("--iters", type=int, default=Config.iters)
    ap.add_argument("--cap", type=int, default=Config.cap)
    ap.add_argument("--floor", type=int, default=Config.floor)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args()
    cfg = Config(args.seeds, args.iters, args.cap, args.floor)
    totals, raw, timings = run(cfg)
    bad = 0
    for (name, law), (n, f) in totals.items():
        bad += f
        print(f"{name:>10}  {law:<28} {n:>5} instances  {f:>3} failures")
    for name, t in timings.items():
        print(f"{name:>10}  {t:.2f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(raw, fh, indent=2)
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
