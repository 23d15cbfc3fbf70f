"""The group T of series ``x + (smaller terms)`` under composition.

Composition is the Taylor sum ``a o b = sum_p (d^p a / p!) (b - x)^p``; every other
operation (inversion, fractional iteration, ordered products along tree orders,
scale decompositions) is built from it.  All of them accept a ``work_floor`` and
return results that are exact strictly above the recorded floor.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .chain import big_multiplier, tag
from .hahn import (HahnSeries, Indeterminate, Q, _Binom, _maxf, derivative, format_term,
                   mul, parse_series, power)
from .orders import TreeOrder

X = HahnSeries.x()
DEFAULT_ITER_CAP = 10_000
_EXACT_LIMIT = 500


class TElement:
    """A series ``x + delta`` whose correction ``delta`` has only exponents below 1."""

    __slots__ = ("series",)

    def __init__(self, series):
        if isinstance(series, str):
            series = parse_series(series)
        if isinstance(series, TElement):
            series = series.series
        if series.floor is not None and series.floor >= 1:
            raise ValueError("floor must lie below 1 to pin the x coefficient")
        if series.coefficient(1) != 1:
            raise ValueError(f"coefficient of x must be 1 in {series}")
        if any(e > 1 for e in series.exponents()):
            raise ValueError(f"{series} has terms dominating x")
        self.series = series

    @classmethod
    def identity(cls) -> "TElement":
        return cls(X)

    @property
    def delta(self) -> HahnSeries:
        return self.series - X

    @property
    def floor(self):
        return self.series.floor

    def is_identity(self) -> bool:
        return self.series == X

    def with_floor(self, floor) -> "TElement":
        return TElement(self.series.with_floor(floor))

    def truncate(self, floor) -> "TElement":
        return TElement(self.series.truncate(floor))

    def agrees_with(self, other: "TElement", above=None) -> bool:
        return self.series.agrees_with(_series(other), above)

    def __eq__(self, other):
        if isinstance(other, TElement):
            return self.series == other.series
        if isinstance(other, HahnSeries):
            return self.series == other
        return NotImplemented

    def __hash__(self):
        return hash(self.series)

    def __repr__(self):
        f = "" if self.floor is None else f", floor={self.floor}"
        return f"TElement({str(self.series)!r}{f})"

    def __str__(self):
        return str(self.series)


def _series(a) -> HahnSeries:
    return a.series if isinstance(a, TElement) else a


def _gap(b: TElement):
    """Lower bound on 1 - v(b - x), the per-step contraction of b; None if b = x."""
    d = b.delta.valuation_bound()
    return None if d is None else 1 - d


def compose(a: HahnSeries, b: TElement, work_floor=None) -> HahnSeries:
    """``a o b`` by the Taylor formula, exact above the returned floor."""
    a = _series(a)
    if not isinstance(b, TElement):
        b = TElement(b)
    F = None if work_floor is None else Q(work_floor)
    delta = b.delta
    if delta.is_exact_zero or a.is_exact_zero:
        return a.truncate(F)
    gap = 1 - delta.valuation_bound()
    va = a.valuation_bound()
    cut = _maxf(F, a.floor, None if b.floor is None else b.floor + va - 1)
    total = a
    dp = a  # d^p a / p!
    dpow = HahnSeries.const(1)
    p = 0
    complete = False
    while True:
        p += 1
        if cut is not None and va - p * gap <= cut:
            break
        dp = derivative(dp).scale(Fraction(1, p))
        if dp.is_exact_zero:
            complete = True
            break
        if cut is None and p > _EXACT_LIMIT:
            raise ValueError("composition is an infinite series; pass a work floor")
        dpow = mul(dpow, delta, None if cut is None else cut - (va - p))
        total = total + mul(dp, dpow, cut)
    if not complete:
        total = total.with_floor(cut)
    return total.truncate(cut)


def group_compose(a: TElement, b: TElement, work_floor=None) -> TElement:
    return TElement(compose(_series(a), b, work_floor))


def invert(b: TElement, work_floor=None) -> TElement:
    """Compositional inverse by the fixed point ``g = x - (b - x) o g``.

    The error of the n-th iterate is dominated by ``x^(d - n * gap)``, so each step
    only needs that much precision.
    """
    if not isinstance(b, TElement):
        b = TElement(b)
    delta = b.delta
    if delta.is_exact_zero:
        return TElement.identity()
    if delta.is_exact and delta.exponents() == [0]:
        return TElement(X - delta)
    F = None if work_floor is None else Q(work_floor)
    gap = 1 - delta.valuation_bound()
    frontier = delta.valuation_bound()
    g = TElement.identity()
    n = 0
    while True:
        frontier -= gap
        step_floor = None if F is None else max(F, frontier)
        nxt = TElement(X - compose(delta, g, step_floor))
        n += 1
        if nxt == g and nxt.floor is None:
            return nxt
        g = nxt
        if F is not None and frontier <= F:
            return g.with_floor(F) if g.floor is None or g.floor < F else g
        if F is None and n > _EXACT_LIMIT:
            raise ValueError("inverse is an infinite series; pass a work floor")


def iterate(a: TElement, e, work_floor=None) -> TElement:
    """Fractional iterate ``a^[e] = sum_p C(e, p) phi^p(x)`` with ``phi = (. o a) - id``."""
    if not isinstance(a, TElement):
        a = TElement(a)
    e = Q(e)
    F = None if work_floor is None else Q(work_floor)
    if e == 0 or a.delta.is_exact_zero:
        return TElement.identity()
    binom = _Binom(e)
    total = X
    u = X
    p = 0
    complete = False
    while True:
        p += 1
        if binom.stop is not None and p >= binom.stop:
            complete = True
            break
        u = compose(u, a, F) - u
        if u.is_exact_zero:
            complete = True
            break
        ub = u.valuation_bound()
        if F is not None and ub <= F:
            break
        if F is None and p > _EXACT_LIMIT:
            raise ValueError("iterate is an infinite series; pass a work floor")
        total = total + u.scale(binom(p))
    if not complete:
        total = total.with_floor(F)
    return TElement(total.truncate(F))


@dataclass(frozen=True)
class GrowthOrder:
    """The leading term ``c x^e`` of ``a - x``; ``c == 0`` encodes the zero growth order."""

    c: Fraction
    e: Fraction | None = None

    @property
    def is_zero(self) -> bool:
        return self.c == 0

    def series(self) -> HahnSeries:
        return HahnSeries.zero() if self.is_zero else HahnSeries.monomial(self.e, self.c)

    def scaled(self, k) -> "GrowthOrder":
        k = Q(k)
        return ZERO if self.is_zero or k == 0 else GrowthOrder(self.c * k, self.e)

    def __str__(self):
        return "0" if self.is_zero else format_term(self.e, self.c)


ZERO = GrowthOrder(Fraction(0))


def growth_order(a: TElement) -> GrowthOrder:
    if not isinstance(a, TElement):
        a = TElement(a)
    delta = a.delta
    if delta.is_exact_zero:
        return ZERO
    if not delta.is_determinate:
        raise Indeterminate("indeterminate: refine floor")
    e, c = delta.leading()
    return GrowthOrder(c, e)


# ordered products along tree orders


def _linear(order, n: int) -> tuple:
    lin = order.linearization if isinstance(order, TreeOrder) else tuple(order)
    if sorted(lin) != list(range(n)):
        raise ValueError(f"order {lin} does not index a family of {n}")
    return tuple(lin)


def ordered_product_T(fam: Sequence[TElement], order, work_floor=None) -> TElement:
    """Compose members along ``order``: the least index is the leftmost factor."""
    lin = _linear(order, len(fam))
    if not lin:
        return TElement.identity()
    r = _telem(fam[lin[-1]])
    for i in reversed(lin[:-1]):
        r = group_compose(_telem(fam[i]), r, work_floor)
    return r.truncate(work_floor)


def _telem(a) -> TElement:
    return a if isinstance(a, TElement) else TElement(a)


def product_via_operator_expansion(fam: Sequence[TElement], order, work_floor=None,
                                   term_bound: int | None = None) -> TElement:
    """Sum over increasing position words of ``phi_{j_k}(...phi_{j_1}(x))``.

    ``phi_j(y) = y o a_j - y`` where ``a_j`` is the member at position ``j`` of the
    linearization; this expands ``(1 + phi_{n-1}) ... (1 + phi_0)`` applied to x.
    """
    lin = _linear(order, len(fam))
    members = [_telem(fam[i]) for i in lin]
    n = len(members)
    bound = n if term_bound is None else term_bound
    F = None if work_floor is None else Q(work_floor)
    total = HahnSeries.zero()
    lost = False
    stack = [(X, 0, 0)]
    while stack:
        y, start, depth = stack.pop()
        total = total + y
        for j in range(start, n):
            z = compose(y, members[j], F) - y
            if z.is_exact_zero:
                continue
            ub = z.valuation_bound()
            if F is not None and ub <= F:
                lost = True
                continue
            if depth >= bound:
                lost = True
                continue
            stack.append((z, j + 1, depth + 1))
    if lost:
        total = total.with_floor(F)
    return TElement(total.truncate(F))


# identities


def chain_rule_check(a: HahnSeries, b: TElement, work_floor=None,
                     compose_fn: Callable = compose) -> bool:
    """``(a o b)' == b' * (a' o b)`` above the propagated floors."""
    b = _telem(b)
    lhs = derivative(compose_fn(_series(a), b, work_floor))
    rhs = mul(derivative(b.series), compose_fn(derivative(_series(a)), b, work_floor))
    return lhs.agrees_with(rhs)


def homogeneity_check(a: HahnSeries, n, b: TElement, work_floor=None,
                      compose_fn: Callable = compose) -> bool:
    """``(a^n) o b == (a o b)^n`` above the propagated floors."""
    b = _telem(b)
    lhs = compose_fn(power(a, n, work_floor), b, work_floor)
    rhs = power(compose_fn(a, b, work_floor), n, work_floor)
    return lhs.agrees_with(rhs)


def centralizer_check(a: TElement, e, e2, work_floor=None) -> bool:
    lhs = iterate(a, Q(e) + Q(e2), work_floor)
    rhs = group_compose(iterate(a, e, work_floor), iterate(a, e2, work_floor), work_floor)
    return lhs.agrees_with(rhs)


def chain_multiplier(fam: Sequence[TElement], work_floor=None) -> HahnSeries:
    """``prod_i (b_i' o (b_{i-1} o ... o b_0))``, the derivative of ``b_{n-1} o ... o b_0``."""
    m = HahnSeries.const(1)
    inner = TElement.identity()
    for b in fam:
        b = _telem(b)
        m = mul(m, compose(derivative(b.series), inner, work_floor), work_floor)
        inner = group_compose(b, inner, work_floor)
    return m


def formal_multiplier(fam: Sequence[TElement], work_floor, cap: int | None = None) -> HahnSeries:
    """Evaluate the formal big multiplier on operators and apply it to 1.

    Base variable ``i`` acts as ``f -> f o b_i - f``, the tagged copy of ``i`` as
    multiplication by ``b_i' - 1``.  Both lower the dominant exponent by at least
    ``1 - v(b_i - x)``, so words longer than ``cap`` fall below the floor.
    """
    F = Q(work_floor)
    fam = [_telem(b) for b in fam]
    gaps = [g for g in (_gap(b) for b in fam) if g is not None]
    if cap is None:
        g = min(gaps) if gaps else Fraction(1)
        cap = max(1, int(-F / g) + 1)
    M = big_multiplier(list(range(len(fam))), cap)
    deriv_minus_one = {i: derivative(b.series) - 1 for i, b in enumerate(fam)}

    def act(var, f: HahnSeries) -> HahnSeries:
        if isinstance(var, tuple):
            return mul(deriv_minus_one[var[0]], f, F)
        return compose(f, fam[var], F) - f

    cache: dict = {(): HahnSeries.const(1)}

    def image(word):
        if word not in cache:
            cache[word] = act(word[0], image(word[1:]))
        return cache[word]

    total = HahnSeries.zero()
    for word, c in M.items():
        total = total + image(word).scale(c)
    return total.with_floor(F)


def composite_multiplier_check(fam: Sequence[TElement], work_floor, cap: int | None = None) -> bool:
    """Derivative of ``b_{n-1} o ... o b_0`` against both multiplier constructions."""
    fam = [_telem(b) for b in fam]
    composite = ordered_product_T(fam, list(range(len(fam)))[::-1], work_floor)
    d = derivative(composite.series)
    direct = chain_multiplier(fam, work_floor)
    formal = formal_multiplier(fam, work_floor, cap)
    return d.agrees_with(direct) and d.agrees_with(formal) and direct.agrees_with(formal)


# scales


@dataclass(frozen=True)
class Scale:
    name: str
    func: Callable = field(compare=False)
    # optional shortcut for the compositional inverse of S(e, c)
    inverse_func: Callable | None = field(default=None, compare=False)

    def __call__(self, e, c, work_floor=None) -> TElement:
        e, c = Q(e), Q(c)
        if e >= 1:
            raise ValueError("scale exponents must be below 1")
        return self.func(e, c, work_floor)

    def inverse(self, e, c, work_floor=None) -> TElement:
        if self.inverse_func is None:
            return invert(self(e, c, work_floor), work_floor)
        return self.inverse_func(Q(e), Q(c), work_floor)


def _s0(e, c, work_floor):
    return TElement(X + HahnSeries.monomial(e, c))


def _s1(e, c, work_floor):
    if c == 0:
        return TElement.identity()
    return iterate(TElement(X + HahnSeries.monomial(e)), c, work_floor)


S0 = Scale("S0", _s0)
# flows invert by running backwards
S1 = Scale("S1", _s1, lambda e, c, work_floor: _s1(e, -c, work_floor))
SCALES = {"S0": S0, "S1": S1}


def scale_eval(s: Scale, e, c, work_floor=None) -> TElement:
    return s(e, c, work_floor)


@dataclass
class ScaleReport:
    scale: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"scale": self.scale, "status": "pass" if self.ok else "fail",
                "checks": self.checks, "failures": self.failures}


def scale_validity(s: Scale, samples: Iterable, work_floor=None) -> ScaleReport:
    """Sampled checks: S(e, 0) = x, go(S(e, c)) = c x^e, decreasing leading exponents."""
    rep = ScaleReport(s.name)
    samples = [(Q(e), Q(c)) for e, c in samples]
    leads = {}
    for e, c in samples:
        rep.checks += 2
        if not s(e, 0, work_floor).is_identity():
            rep.failures.append({"condition": "S(e,0)=x", "e": str(e)})
        el = s(e, c, work_floor)
        try:
            go = growth_order(el)
        except Indeterminate:
            go = None
        want = GrowthOrder(c, e) if c else ZERO
        if go != want:
            rep.failures.append({"condition": "go(S(e,c))=c*x^e", "e": str(e), "c": str(c),
                                 "got": str(go)})
        if c and go is not None and not go.is_zero:
            leads.setdefault(e, go.e)
    es = sorted(leads, reverse=True)
    rep.checks += 1
    for e1, e2 in zip(es, es[1:]):
        if not leads[e1] > leads[e2]:
            rep.failures.append({"condition": "decreasing", "e": [str(e1), str(e2)]})
    return rep


# decomposition


def iteration_cap() -> int:
    raw = os.environ.get("ORDCAL_ITER_CAP")
    return int(raw) if raw else DEFAULT_ITER_CAP


def sign_stream(spec) -> Callable[[int], int]:
    """Sign for each step: ``left`` (+1), ``right`` (-1), ``alt``, or a cycled sequence."""
    if callable(spec):
        return spec
    if isinstance(spec, str):
        named = {"left": lambda g: 1, "right": lambda g: -1, "alt": lambda g: 1 if g % 2 == 0 else -1}
        if spec in named:
            return named[spec]
        spec = [int(s) for s in spec.split(",") if s.strip()]
    seq = [int(s) for s in spec]
    if not seq or any(s not in (1, -1) for s in seq):
        raise ValueError("signs must be a non-empty list of +1/-1")
    return lambda g: seq[g % len(seq)]


@dataclass(frozen=True)
class Decomposition:
    scale: Scale
    signs: TreeOrder
    e: tuple
    c: tuple
    floor: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(Q(v) for v in self.e))
        object.__setattr__(self, "c", tuple(Q(v) for v in self.c))
        if not (len(self.e) == len(self.c) == self.signs.length):
            raise ValueError("e, c and signs must have the same length")
        if any(a <= b for a, b in zip(self.e, self.e[1:])):
            raise ValueError("exponents must be strictly decreasing")
        if any(e >= 1 for e in self.e) or any(c == 0 for c in self.c):
            raise ValueError("exponents must be below 1 and coefficients nonzero")
        if self.floor is not None:
            object.__setattr__(self, "floor", Q(self.floor))

    def __len__(self):
        return len(self.e)

    def to_json(self) -> dict:
        return {"scale": self.scale.name,
                "floor": None if self.floor is None else str(self.floor),
                "signs": list(self.signs.signs),
                "steps": [{"e": str(e), "c": str(c)} for e, c in zip(self.e, self.c)]}

    @classmethod
    def from_json(cls, obj: dict) -> "Decomposition":
        steps = obj["steps"]
        signs = list(obj.get("signs", []))
        n = len(steps)
        signs = (signs + [1] * n)[:max(n - 1, 0)]
        return cls(SCALES[obj["scale"]], TreeOrder(n, tuple(signs)),
                   tuple(Fraction(s["e"]) for s in steps), tuple(Fraction(s["c"]) for s in steps),
                   None if obj.get("floor") is None else Fraction(obj["floor"]))


def decompose(a: TElement, s: Scale, signs="left", work_floor=None,
              max_steps: int | None = None) -> Decomposition:
    """Peel growth orders: sign +1 strips ``S`` on the left, -1 on the right."""
    a = _telem(a)
    stream = sign_stream(signs)
    F = None if work_floor is None else Q(work_floor)
    limit = iteration_cap() if max_steps is None else max_steps
    r = a
    es, cs, ns = [], [], []
    while True:
        delta = r.delta.truncate(F)
        if not delta.is_determinate:
            break
        if len(es) >= limit:
            raise RuntimeError(f"decomposition exceeded {limit} steps")
        go = growth_order(r)
        sinv = s.inverse(go.e, go.c, F)
        sign = stream(len(es))
        if sign == 1:
            r = group_compose(sinv, r, F)
        else:
            r = group_compose(r, sinv, F)
        es.append(go.e)
        cs.append(go.c)
        ns.append(sign)
    n = len(es)
    return Decomposition(s, TreeOrder(n, tuple(ns[:max(n - 1, 0)])), tuple(es), tuple(cs), F)


def recompose(d: Decomposition, work_floor=None) -> TElement:
    F = d.floor if work_floor is None else Q(work_floor)
    members = [d.scale(e, c, F) for e, c in zip(d.e, d.c)]
    return ordered_product_T(members, d.signs, F)
