"""Decompose a few transseries-like elements of x + o(x) against both scales.

Prints the (exponent, coefficient) sequence for every sign stream and checks
that recomposing gives the input back at the working floor.

    python3 scripts/decomposition_table.py --floor -3
    python3 scripts/decomposition_table.py "x + x^(1/2) - 3" --signs alt
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ordcal.hahn import format_term, parse_series
from ordcal.tgroup import SCALES, TElement, decompose, recompose

DEFAULT_INPUTS = [
    "x + 1",
    "x + x^(1/2)",
    "x + 2*x^(2/3) - x^(-1)",
    "x - 1/2*x^(1/3) + 5 + x^(-1/2)",
]


@dataclass
class Config:
    inputs: list = field(default_factory=lambda: list(DEFAULT_INPUTS))
    floor: Fraction = Fraction(-3)
    scales: tuple = ("S0", "S1")
    streams: tuple = ("left", "right", "alt")


def run(cfg: Config):
    for text in cfg.inputs:
        a = TElement(parse_series(text))
        print(f"a = {a}")
        for name in cfg.scales:
            for stream in cfg.streams:
                t0 = time.perf_counter()
                d = decompose(a, SCALES[name], stream, cfg.floor)
                ok = recompose(d, cfg.floor).agrees_with(a)
                dt = time.perf_counter() - t0
                steps = ", ".join(format_term(e, c) for e, c in zip(d.e, d.c))
                print(f"  {name} {stream:>5}  len {len(d):>2}  round trip {'ok' if ok else 'FAIL'}"
                      f"  {dt:6.3f}s  [{steps}]")
        print()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("inputs", nargs="*", default=None)
    ap.add_argument("--floor", type=Fraction, default=Fraction(-3))
    ap.add_argument("--signs", action="append", choices=["left", "right", "alt"])
    args = ap.parse_args()
    cfg = Config(floor=args.floor)
    if args.inputs:
        cfg.inputs = args.inputs
    if args.signs:
        cfg.streams = tuple(args.signs)
    run(cfg)


if __name__ == "__main__":
    main()
