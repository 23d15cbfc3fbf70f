"""Randomized verification suites over Hahn series and the composition group.

Each suite returns an ``AxiomReport`` (one ``AxiomResult`` per law) so the CLI can
print or serialize every suite the same way.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .hahn import HahnSeries, Indeterminate, field_inverse, mul, power, refine_check, derivative
from .orders import TreeOrder
from .products import AxiomReport, AxiomResult
from .tgroup import (S0, S1, TElement, chain_rule_check, compose, decompose, group_compose,
                     growth_order, homogeneity_check, invert, iterate, ordered_product_T,
                     product_via_operator_expansion, recompose, Decomposition, X)

DENOMS = (1, 2, 3, 4)


@dataclass
class SeriesGen:
    """Random exponents are k/q with q in ``denoms`` and lo <= k/q <= hi."""

    lo: Fraction = Fraction(-2)
    hi: Fraction = Fraction(2, 3)
    max_terms: int = 3
    max_coef: int = 3
    denoms: tuple = DENOMS

    def exponent(self, rng: random.Random, lo=None, hi=None) -> Fraction:
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        q = rng.choice(self.denoms)
        ks = range(int(lo * q) - 1, int(hi * q) + 2)
        opts = [Fraction(k, q) for k in ks if lo <= Fraction(k, q) <= hi]
        return rng.choice(opts)

    def coef(self, rng: random.Random) -> Fraction:
        c = rng.randint(1, self.max_coef) * rng.choice((1, -1))
        return Fraction(c, rng.choice((1, 1, 2)))

    def series(self, rng: random.Random, lo=None, hi=None, min_terms: int = 1) -> HahnSeries:
        while True:
            n = rng.randint(min_terms, self.max_terms)
            s = HahnSeries({self.exponent(rng, lo, hi): self.coef(rng) for _ in range(n)})
            if len(s) >= min_terms:
                return s

    def telement(self, rng: random.Random, lo=None, hi=None) -> TElement:
        return TElement(X + self.series(rng, lo, hi))

    def positive(self, rng: random.Random, lo=None, hi=None) -> HahnSeries:
        s = self.series(rng, lo, hi)
        e, c = s.leading()
        return s if c > 0 else -s


def _record(res: AxiomResult, ok: bool, witness):
    res.instances += 1
    if not ok:
        res.failures += 1
        if res.witness is None:
            res.witness = {k: str(v) for k, v in witness.items()}


def classify_growth(a: TElement, b: TElement, work_floor) -> tuple[str, bool]:
    """Which growth law applies to ``a o b`` and whether it holds."""
    ga, gb = growth_order(a), growth_order(b)
    ab = group_compose(a, b, work_floor)
    if ga.e != gb.e:
        want = ga if ga.e > gb.e else gb
        return "dominant", growth_order(ab) == want
    s = ga.c + gb.c
    if s:
        return "sum", growth_order(ab) == type(ga)(s, ga.e)
    # cancellation: whatever survives is dominated by both
    delta = ab.delta
    return "cancel", all(e < ga.e for e in delta.exponents())


def growth_suite(seed: int = 0, iterations: int = 100, work_floor=-3,
                 gen: SeriesGen | None = None) -> AxiomReport:
    rng = random.Random(seed)
    gen = gen or SeriesGen(lo=Fraction(-2))
    F = Fraction(work_floor)
    report = AxiomReport()
    results = {k: AxiomResult(k) for k in ("go-dominant", "go-sum", "go-cancel", "go-iterate")}
    for k in range(iterations):
        a = gen.telement(rng, lo=F + 1)
        mode = k % 3
        if mode == 0:
            b = gen.telement(rng, lo=F + 1)
        else:
            # share the leading exponent of a; mode 2 cancels it exactly
            ga = growth_order(a)
            c = -ga.c if mode == 2 else gen.coef(rng)
            rest = gen.series(rng, lo=F + 1, hi=ga.e - Fraction(1, 4)) if ga.e - Fraction(1, 4) > F + 1 else HahnSeries.zero()
            b = TElement(X + HahnSeries.monomial(ga.e, c) + rest)
        law, ok = classify_growth(a, b, F)
        _record(results["go-" + law], ok, {"a": a, "b": b})
        e = gen.coef(rng)
        ae = iterate(a, e, F)
        try:
            ok = growth_order(ae) == growth_order(a).scaled(e)
        except Indeterminate:
            ok = False
        _record(results["go-iterate"], ok, {"a": a, "e": e})
    report.results.extend(results.values())
    return report


def chain_suite(seed: int = 0, iterations: int = 100, work_floor=-5,
                gen: SeriesGen | None = None) -> AxiomReport:
    rng = random.Random(seed)
    gen = gen or SeriesGen(lo=Fraction(-2))
    F = Fraction(work_floor)
    chain = AxiomResult("chain-rule")
    homog = AxiomResult("homogeneity")
    for _ in range(iterations):
        a = gen.series(rng, hi=Fraction(2))
        b = gen.telement(rng)
        _record(chain, chain_rule_check(a, b, F), {"a": a, "b": b})
        # monic, so every power has a rational leading coefficient
        p = HahnSeries.monomial(gen.exponent(rng, Fraction(1, 2), Fraction(2))) + gen.series(rng, hi=Fraction(1, 4))
        n = rng.choice((2, 3, -1, Fraction(1, 2)))
        try:
            ok = homogeneity_check(p, n, b, F)
        except ArithmeticError:
            ok = False
        _record(homog, ok, {"a": p, "n": n, "b": b})
    return AxiomReport([chain, homog])


def random_sign_stream(rng: random.Random, n: int = 16) -> list:
    return [rng.choice((1, -1)) for _ in range(n)]


def random_decomposition(rng: random.Random, scale, max_len: int = 6, work_floor=-3,
                         gen: SeriesGen | None = None) -> Decomposition:
    gen = gen or SeriesGen()
    F = Fraction(work_floor)
    n = rng.randint(0, max_len)
    es = sorted({gen.exponent(rng, F + Fraction(1, 2), Fraction(2, 3)) for _ in range(n)}, reverse=True)
    n = len(es)
    cs = [gen.coef(rng) for _ in es]
    signs = random_sign_stream(rng, max(n - 1, 0))
    return Decomposition(scale, TreeOrder(n, tuple(signs)), tuple(es), tuple(cs), F)


def roundtrip_suite(seed: int = 0, iterations: int = 20, work_floor=-3,
                    gen: SeriesGen | None = None, max_len: int = 6) -> AxiomReport:
    rng = random.Random(seed)
    gen = gen or SeriesGen(lo=Fraction(-2))
    F = Fraction(work_floor)
    down = AxiomResult("decompose-recompose")
    up = AxiomResult("recompose-decompose")
    for k in range(iterations):
        scale = (S0, S1)[k % 2]
        streams = ["left", "right", "alt", random_sign_stream(rng)]
        signs = streams[(k // 2) % 4]
        a = gen.telement(rng, lo=F + Fraction(1, 2))
        d = decompose(a, scale, signs, F)
        _record(down, recompose(d, F).agrees_with(a),
                {"a": a, "scale": scale.name, "signs": signs})
        d = random_decomposition(rng, scale, max_len, F, gen)
        stream = list(d.signs.signs) + [1]
        back = decompose(recompose(d, F), scale, stream, F)
        ok = back.e == d.e and back.c == d.c and back.signs == d.signs
        _record(up, ok, {"d": d.to_json(), "got": back.to_json()})
    return AxiomReport([down, up])


def coherence_suite(seed: int = 0, iterations: int = 20, work_floor=-3, max_members: int = 3,
                    gen: SeriesGen | None = None) -> AxiomReport:
    rng = random.Random(seed)
    gen = gen or SeriesGen(lo=Fraction(-2))
    F = Fraction(work_floor)
    res = AxiomResult("operator-expansion")
    for _ in range(iterations):
        n = rng.randint(1, max_members)
        fam = [gen.telement(rng) for _ in range(n)]
        order = TreeOrder(n, tuple(random_sign_stream(rng, max(n - 1, 0))))
        direct = ordered_product_T(fam, order, F)
        expanded = product_via_operator_expansion(fam, order, F)
        _record(res, direct.agrees_with(expanded), {"fam": [str(f) for f in fam], "signs": order.signs})
    return AxiomReport([res])


# precision soundness: each operation evaluated at a coarse and a fine floor


def _ops(gen: SeriesGen, rng: random.Random):
    a = gen.series(rng, hi=Fraction(2))
    pos = gen.positive(rng, hi=Fraction(2))
    pos = pos.scale(1 / pos.leading()[1])  # monic keeps fractional powers rational
    b = gen.telement(rng)
    c = gen.telement(rng)
    e = gen.coef(rng)
    k = rng.choice((2, -1, -2, Fraction(1, 2)))
    inexact = a.with_floor(Fraction(-3, 2))
    return {
        "add": lambda F: (a + inexact).truncate(F),
        "mul": lambda F: mul(a, inexact, F),
        "deriv": lambda F: derivative(inexact).truncate(F),
        "inverse": lambda F: field_inverse(pos, F),
        "power": lambda F: power(pos, k, F),
        "compose": lambda F: compose(a, b, F),
        "group_compose": lambda F: group_compose(b, c, F).series,
        "invert": lambda F: invert(b, F).series,
        "iterate": lambda F: iterate(b, e, F).series,
        "operator_expansion": lambda F: product_via_operator_expansion([b, c], [0, 1], F).series,
        "decompose": lambda F: recompose(decompose(b, S1, "alt", F), F).series,
    }


def precision_suite(seed: int = 0, iterations: int = 20, floors=(-3, -6),
                    gen: SeriesGen | None = None) -> AxiomReport:
    rng = random.Random(seed)
    gen = gen or SeriesGen(lo=Fraction(-2))
    coarse, fine = (Fraction(f) for f in floors)
    results: dict = {}
    for _ in range(iterations):
        for name, op in _ops(gen, rng).items():
            res = results.setdefault(name, AxiomResult("refine-" + name))
            _record(res, refine_check(op(coarse), op(fine)), {"op": name})
    return AxiomReport(list(results.values()))
