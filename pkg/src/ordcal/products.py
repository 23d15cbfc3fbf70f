"""Ordered products in the group 1 + m of the truncated free algebra.

The product of a family ``f`` along a finite linear order is the evaluation of the
formal ordered product at ``f - 1``.  ``verify_axioms`` drives randomized checks of
the multipliability axioms MG1-MG7 and Fullness against this definition.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .free import FreeSeries, evaluate, format_series, inverse_unit, op_series


@dataclass(frozen=True)
class OrderedFamily:
    index_order: tuple
    members: Mapping

    def __post_init__(self):
        order = tuple(self.index_order)
        object.__setattr__(self, "index_order", order)
        if len(set(order)) != len(order):
            raise ValueError("indices must be distinct")
        if set(self.members) != set(order):
            raise ValueError("members must be indexed by exactly the index order")
        for i, m in self.members.items():
            if m.constant != 1:
                raise ValueError(f"member {i!r} does not have constant term 1")

    def __len__(self):
        return len(self.index_order)

    @property
    def cap(self) -> int:
        caps = {m.cap for m in self.members.values()}
        if not caps:
            return None
        if len(caps) > 1:
            raise ValueError(f"members have different caps {sorted(caps)}")
        return caps.pop()

    def __getitem__(self, i) -> FreeSeries:
        return self.members[i]

    def restrict(self, indices) -> "OrderedFamily":
        keep = set(indices)
        order = tuple(i for i in self.index_order if i in keep)
        return OrderedFamily(order, {i: self.members[i] for i in order})

    def reordered(self, order) -> "OrderedFamily":
        return OrderedFamily(tuple(order), dict(self.members))

    def reversed(self) -> "OrderedFamily":
        return self.reordered(self.index_order[::-1])

    def map(self, fn: Callable[[FreeSeries], FreeSeries]) -> "OrderedFamily":
        return OrderedFamily(self.index_order, {i: fn(m) for i, m in self.members.items()})

    def pointwise(self, other: "OrderedFamily") -> "OrderedFamily":
        if other.index_order != self.index_order:
            raise ValueError("index order mismatch")
        return OrderedFamily(self.index_order,
                             {i: self.members[i] * other.members[i] for i in self.index_order})


def ordered_product(fam: OrderedFamily, cap: int | None = None) -> FreeSeries:
    if cap is None:
        cap = fam.cap or 0
    if not len(fam):
        return FreeSeries.one(cap)
    op = op_series(fam.index_order, cap)
    return evaluate(op, {i: m - 1 for i, m in fam.members.items()}, cap)


def plain_product(fam: OrderedFamily, cap: int | None = None) -> FreeSeries:
    """Left-to-right product of the members, the finite-support value."""
    if cap is None:
        cap = fam.cap or 0
    out = FreeSeries.one(cap)
    for i in fam.index_order:
        out = out * fam[i]
    return out


def twist(f: OrderedFamily, g: OrderedFamily) -> OrderedFamily:
    """The family ``f[g]`` with ``prod(f * g) == prod(f) * prod(f[g])``."""
    if f.index_order != g.index_order:
        raise ValueError("index order mismatch")
    cap = f.cap
    out = {}
    order = f.index_order
    for k, i in enumerate(order):
        tail = order[k + 1:]
        tail_f = f.restrict(tail)
        back = ordered_product(tail_f.map(inverse_unit).reversed(), cap)
        fwd = ordered_product(tail_f, cap)
        out[i] = back * g[i] * fwd
    return OrderedFamily(order, out)


# randomized axiom harness


def random_member(rng: random.Random, alphabet, cap: int, max_terms: int = 3) -> FreeSeries:
    """1 + (at most ``max_terms`` random words of degree 1..cap, coefficients in [-3, 3])."""
    c = {(): Fraction(1)}
    for _ in range(rng.randint(0, max_terms)):
        n = rng.randint(1, cap)
        w = tuple(rng.choice(alphabet) for _ in range(n))
        a = rng.choice([-3, -2, -1, 1, 2, 3])
        c[w] = c.get(w, 0) + a
    return FreeSeries(c, cap)


def random_family(rng: random.Random, n: int, alphabet, cap: int, labels=None) -> OrderedFamily:
    labels = list(range(n)) if labels is None else list(labels)
    return OrderedFamily(tuple(labels), {i: random_member(rng, alphabet, cap) for i in labels})


def _ser(x):
    if isinstance(x, FreeSeries):
        return format_series(x)
    if isinstance(x, OrderedFamily):
        return {"order": [repr(i) for i in x.index_order],
                "members": {repr(i): format_series(m) for i, m in x.members.items()}}
    if isinstance(x, dict):
        return {str(k): _ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_ser(v) for v in x]
    return x


@dataclass
class AxiomResult:
    axiom: str
    instances: int = 0
    failures: int = 0
    witness: object = None

    @property
    def status(self) -> str:
        return "fail" if self.failures else "pass"

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "status": self.status, "instances": self.instances,
                "witness": self.witness}


@dataclass
class AxiomReport:
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def to_json(self) -> list:
        return [r.to_json() for r in self.results]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _mg1(rng, n, alphabet, cap):
    f = random_family(rng, n, alphabet, cap)
    g = random_family(rng, n, alphabet, cap)
    lhs = ordered_product(f.pointwise(g), cap)
    rhs = ordered_product(f, cap) * ordered_product(twist(f, g), cap)
    # dom is a subgroup: f * g^{-1} stays in 1 + m
    sub = f.pointwise(g.map(inverse_unit))
    ok = lhs == rhs and ordered_product(sub, cap).constant == 1
    return ok, {"f": f, "g": g, "lhs": lhs, "rhs": rhs}


def _mg2(rng, n, alphabet, cap):
    f = random_family(rng, n, alphabet, cap)
    # knock out some members to exercise finite support
    members = {i: (FreeSeries.one(cap) if rng.random() < 0.3 else m) for i, m in f.members.items()}
    f = OrderedFamily(f.index_order, members)
    support = f.restrict([i for i in f.index_order if f[i] != 1])
    lhs = ordered_product(f, cap)
    rhs = plain_product(support, cap)
    return lhs == rhs, {"f": f, "lhs": lhs, "rhs": rhs}


def _mg3(rng, n, alphabet, cap):
    g = random_family(rng, n, alphabet, cap)
    # order isomorphism onto fresh labels
    offsets = sorted(rng.sample(range(100, 200), n))
    relabel = dict(zip(g.index_order, (f"j{k}" for k in offsets)))
    h = OrderedFamily(tuple(relabel[i] for i in g.index_order),
                      {relabel[i]: g[i] for i in g.index_order})
    lhs, rhs = ordered_product(h, cap), ordered_product(g, cap)
    return lhs == rhs, {"g": g, "lhs": lhs, "rhs": rhs}


def random_blocks(rng, order) -> list[tuple]:
    """Random ordered partition of ``order`` into consecutive non-empty blocks."""
    order = list(order)
    if not order:
        return []
    cuts = sorted(rng.sample(range(1, len(order)), rng.randint(0, len(order) - 1))) if len(order) > 1 else []
    bounds = [0] + cuts + [len(order)]
    return [tuple(order[a:b]) for a, b in zip(bounds, bounds[1:])]


def _mg4(rng, n, alphabet, cap):
    g = random_family(rng, n, alphabet, cap)
    blocks = random_blocks(rng, g.index_order)
    inner = OrderedFamily(tuple(range(len(blocks))),
                          {j: ordered_product(g.restrict(b), cap) for j, b in enumerate(blocks)})
    lhs, rhs = ordered_product(inner, cap), ordered_product(g, cap)
    return lhs == rhs, {"g": g, "blocks": [list(b) for b in blocks], "lhs": lhs, "rhs": rhs}


def _mg5(rng, n, alphabet, cap):
    k = rng.randint(0, n)
    g = random_family(rng, k, alphabet, cap, labels=[("a", i) for i in range(k)])
    h = random_family(rng, n - k, alphabet, cap, labels=[("b", i) for i in range(n - k)])
    joined = OrderedFamily(g.index_order + h.index_order, {**g.members, **h.members})
    lhs = ordered_product(joined, cap)
    rhs = ordered_product(g, cap) * ordered_product(h, cap)
    return lhs.constant == 1 and lhs == rhs, {"g": g, "h": h, "lhs": lhs, "rhs": rhs}


def _mg6(rng, n, alphabet, cap):
    g = random_family(rng, n, alphabet, cap)
    g0 = random_member(rng, alphabet, cap)
    g0inv = inverse_unit(g0)
    lhs = ordered_product(g.map(lambda m: g0 * m * g0inv), cap)
    rhs = g0 * ordered_product(g, cap) * g0inv
    return lhs == rhs, {"g": g, "g0": g0, "lhs": lhs, "rhs": rhs}


def _mg7(rng, n, alphabet, cap):
    g = random_family(rng, n, alphabet, cap)
    lhs = ordered_product(g.map(inverse_unit).reversed(), cap)
    rhs = inverse_unit(ordered_product(g, cap))
    # applying the reversal twice returns the original product
    back = ordered_product(g.map(inverse_unit).reversed().map(inverse_unit).reversed(), cap)
    return lhs == rhs and back == ordered_product(g, cap), {"g": g, "lhs": lhs, "rhs": rhs}


def _fullness(rng, n, alphabet, cap):
    g = random_family(rng, n, alphabet, cap)
    order = list(g.index_order)
    rng.shuffle(order)
    p = ordered_product(g.reordered(order), cap)
    return p.constant == 1, {"g": g, "order": order, "product": p}


AXIOMS = {
    "MG1": _mg1, "MG2": _mg2, "MG3": _mg3, "MG4": _mg4,
    "MG5": _mg5, "MG6": _mg6, "MG7": _mg7, "Fullness": _fullness,
}


def verify_axioms(seed: int = 0, iterations: int = 50, cap: int = 4, max_indices: int = 4,
                  alphabet=(0, 1, 2), min_indices: int = 0) -> AxiomReport:
    """Randomized check of every axiom; each failure records its first witness."""
    rng = random.Random(seed)
    report = AxiomReport()
    for name, check in AXIOMS.items():
        res = AxiomResult(name)
        for _ in range(iterations):
            n = rng.randint(min_indices, max_indices)
            ok, witness = check(rng, n, list(alphabet), cap)
            res.instances += 1
            if not ok:
                res.failures += 1
                if res.witness is None:
                    res.witness = _ser(witness)
        report.results.append(res)
    return report
