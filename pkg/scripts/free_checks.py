"""Timed membership checks in the truncated free algebra.

For each alphabet size and cap, checks that log(OP_I) lies in the Lie algebra
generated by the log(1 + X_i), and that the chain-rule residual lies in the
relation ideal. Prints one row per (n, cap).

    python3 scripts/free_checks.py --max-vars 3 --max-cap 4
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from ordcal.chain import check_lemma51, ideal_dimension
from ordcal.free import FreeSeries, lie_span_contains, log_series, op_series


@dataclass
class Config:
    max_vars: int = 3
    max_cap: int = 4


def lie_membership(n: int, cap: int) -> bool:
    I = list(range(n))
    gens = [log_series(FreeSeries.one(cap) + FreeSeries.var(i, cap)) for i in I]
    return lie_span_contains(log_series(op_series(I, cap)), gens, cap)


def run(cfg: Config):
    rows = []
    for n in range(1, cfg.max_vars + 1):
        for cap in range(2, cfg.max_cap + 1):
            t0 = time.perf_counter()
            lie = lie_membership(n, cap)
            t1 = time.perf_counter()
            chain = check_lemma51(list(range(n)), cap)
            dim = ideal_dimension(list(range(n)), cap)
            t2 = time.perf_counter()
            rows.append((n, cap, lie, t1 - t0, chain, dim, t2 - t1))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vars", type=int, default=Config.max_vars)
    ap.add_argument("--max-cap", type=int, default=Config.max_cap)
    args = ap.parse_args()
    rows = run(Config(args.max_vars, args.max_cap))
    print(f"{'n':>2} {'cap':>3}  {'lie':>5} {'sec':>7}  {'chain':>5} {'ideal dim':>9} {'sec':>7}")
    for n, cap, lie, tl, chain, dim, tc in rows:
        print(f"{n:>2} {cap:>3}  {str(lie):>5} {tl:7.3f}  {str(chain):>5} {dim:>9} {tc:7.3f}")


if __name__ == "__main__":
    main()
