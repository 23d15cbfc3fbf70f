"""Finitely supported series in x with rational exponents and coefficients.

A ``HahnSeries`` stores its terms by descending exponent together with an optional
precision floor.  With a floor ``f`` the value stands for every true series that
agrees with the stored terms on all exponents strictly above ``f``; without one
the value is exact.  Operations propagate floors conservatively, and operations
whose exact result would be an infinite sum take an explicit ``work_floor``.

The dominant exponent (largest exponent present) is the valuation; ``a < b`` in
dominance means the dominant exponent of ``a`` is smaller than that of ``b``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from operator import itemgetter
from typing import Iterable, Mapping


class Indeterminate(ArithmeticError):
    """The floor hides the information needed to answer the query."""


class NonRepresentable(ArithmeticError):
    """A coefficient power that is not a rational number."""


def Q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _maxf(*fs):
    fs = [f for f in fs if f is not None]
    return max(fs) if fs else None


class HahnSeries:
    __slots__ = ("terms", "floor", "_d")

    def __init__(self, terms: Mapping | Iterable = (), floor=None):
        if isinstance(terms, Mapping):
            pairs = terms.items()
        else:
            pairs = terms
        d: dict = {}
        for e, c in pairs:
            e, c = Q(e), Q(c)
            if c:
                d[e] = d.get(e, 0) + c
        floor = None if floor is None else Q(floor)
        self._set(d, floor)

    def _set(self, d: dict, floor):
        if floor is not None:
            d = {e: c for e, c in d.items() if c and e > floor}
        else:
            d = {e: c for e, c in d.items() if c}
        self._d = d
        self.terms = tuple(sorted(d.items(), key=itemgetter(0), reverse=True))
        self.floor = floor

    @classmethod
    def _make(cls, d: dict, floor=None) -> "HahnSeries":
        s = cls.__new__(cls)
        s._set(d, floor)
        return s

    # constructors
    @classmethod
    def monomial(cls, e, c=1) -> "HahnSeries":
        return cls._make({Q(e): Q(c)})

    @classmethod
    def const(cls, c) -> "HahnSeries":
        return cls._make({Fraction(0): Q(c)})

    @classmethod
    def x(cls) -> "HahnSeries":
        return cls.monomial(1)

    @classmethod
    def zero(cls) -> "HahnSeries":
        return cls._make({})

    # queries
    @property
    def is_exact(self) -> bool:
        return self.floor is None

    @property
    def is_exact_zero(self) -> bool:
        return not self._d and self.floor is None

    @property
    def is_determinate(self) -> bool:
        return bool(self._d)

    def coefficient(self, e) -> Fraction:
        return self._d.get(Q(e), Fraction(0))

    def exponents(self) -> list:
        return [e for e, _ in self.terms]

    def leading(self) -> tuple[Fraction, Fraction]:
        """(dominant exponent, its coefficient)."""
        if not self._d:
            if self.floor is None:
                raise Indeterminate("zero series has no leading term")
            raise Indeterminate(f"zero or indeterminate: no terms above floor {self.floor}")
        return self.terms[0]

    def valuation_bound(self):
        """Upper bound on the true dominant exponent (None for exact zero)."""
        if self._d:
            return self.terms[0][0]
        return self.floor

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HahnSeries.const(other)
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self._d == other._d and self.floor == other.floor

    def __hash__(self):
        return hash((self.terms, self.floor))

    def __repr__(self):
        f = "" if self.floor is None else f", floor={self.floor}"
        return f"HahnSeries({format_series(self)!r}{f})"

    def __str__(self):
        return format_series(self)

    # precision handling
    def with_floor(self, floor) -> "HahnSeries":
        """Forget everything at or below ``floor`` (never lowers an existing floor)."""
        if floor is None:
            return self
        return HahnSeries._make(self._d, _maxf(self.floor, Q(floor)))

    def truncate(self, floor) -> "HahnSeries":
        """Like ``with_floor`` but an exact series with nothing to drop stays exact."""
        if floor is None:
            return self
        floor = Q(floor)
        if self.floor is None and all(e > floor for e in self._d):
            return self
        return self.with_floor(floor)

    def agrees_with(self, other: "HahnSeries", above=None) -> bool:
        """Equality on every exponent above both floors (and ``above``)."""
        cut = _maxf(self.floor, other.floor, None if above is None else Q(above))
        keys = set(self._d) | set(other._d)
        if cut is not None:
            keys = {e for e in keys if e > cut}
        return all(self._d.get(e, 0) == other._d.get(e, 0) for e in keys)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, HahnSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return HahnSeries.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._d)
        for e, c in other._d.items():
            d[e] = d.get(e, 0) + c
        return HahnSeries._make(d, _maxf(self.floor, other.floor))

    __radd__ = __add__

    def __neg__(self):
        return HahnSeries._make({e: -c for e, c in self._d.items()}, self.floor)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "HahnSeries":
        c = Q(c)
        if not c:
            return HahnSeries.zero()
        return HahnSeries._make({e: c * a for e, a in self._d.items()}, self.floor)

    def shift(self, e) -> "HahnSeries":
        """Multiply by x^e."""
        e = Q(e)
        return HahnSeries._make({k + e: a for k, a in self._d.items()},
                                None if self.floor is None else self.floor + e)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise TypeError("use power() for negative or rational exponents")
        out = HahnSeries.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out


def mul(a: HahnSeries, b: HahnSeries, floor=None) -> HahnSeries:
    """Product, optionally keeping only exponents above ``floor``."""
    if a.is_exact_zero or b.is_exact_zero:
        return HahnSeries.zero()
    va, vb = a.valuation_bound(), b.valuation_bound()
    if floor is not None:
        floor = Q(floor)
        a = a.truncate(floor - vb)
        b = b.truncate(floor - va)
    f = None
    if a.floor is not None:
        f = a.floor + vb
    if b.floor is not None:
        f = _maxf(f, b.floor + va)
    cut = _maxf(f, floor)
    d: dict = {}
    dropped = False
    for e1, c1 in a.terms:
        for e2, c2 in b.terms:
            e = e1 + e2
            if cut is not None and e <= cut:
                # terms are sorted descending, the rest of this row is lower still
                dropped = True
                break
            d[e] = d.get(e, 0) + c1 * c2
    if dropped:
        f = _maxf(f, floor)
    return HahnSeries._make(d, f)


def monomial(e, c=1) -> HahnSeries:
    return HahnSeries.monomial(e, c)


def valuation(a: HahnSeries) -> Fraction:
    return a.leading()[0]


def dominance(a: HahnSeries, b: HahnSeries) -> int:
    """-1 if a is dominated by b, 0 if same dominant exponent, +1 if a dominates b."""
    va, vb = valuation(a), valuation(b)
    return (va > vb) - (va < vb)


def is_positive(a: HahnSeries) -> bool:
    return a.leading()[1] > 0


def in_G(a: HahnSeries) -> bool:
    """Positive and infinitely large (dominates every constant)."""
    e, c = a.leading()
    return c > 0 and e > 0


def derivative(a: HahnSeries) -> HahnSeries:
    return HahnSeries._make({e - 1: e * c for e, c in a._d.items() if e},
                            None if a.floor is None else a.floor - 1)


def _series_sum(eps: HahnSeries, coef, floor) -> tuple[HahnSeries, bool]:
    """sum_m coef(m) eps^m for eps with negative dominant exponent, above ``floor``.

    Returns (sum, finite) where ``finite`` says the sum terminated on its own.
    """
    acc = HahnSeries.const(coef(0))
    if eps.is_exact_zero:
        return acc, True
    ve = eps.valuation_bound()
    term = HahnSeries.const(1)
    m = 0
    while True:
        m += 1
        c = coef(m)
        if floor is not None and m * ve <= floor:
            return acc, False
        term = mul(term, eps, floor)
        if term.is_exact_zero:
            return acc, True
        if c:
            acc = acc + term.scale(c)
        elif coef_vanishes_from(coef, m):
            return acc, True
        if floor is None and m > 10_000:
            raise RuntimeError("series did not terminate; pass a work floor")


def coef_vanishes_from(coef, m) -> bool:
    # binomial coefficients of a non-negative integer vanish from some point on
    return getattr(coef, "stop", None) is not None and m >= coef.stop


class _Binom:
    def __init__(self, e):
        self.e = Q(e)
        self.stop = int(self.e) + 1 if self.e.denominator == 1 and self.e >= 0 else None

    def __call__(self, m):
        out = Fraction(1)
        for k in range(m):
            out *= (self.e - k) / (k + 1)
        return out


def _normalize(a: HahnSeries) -> tuple[Fraction, Fraction, HahnSeries]:
    """Write a = lead * x^v * (1 + eps) with eps dominated by 1."""
    v, lead = a.leading()
    eps = a.shift(-v).scale(1 / lead) - 1
    return v, lead, eps


def field_inverse(a: HahnSeries, work_floor=None) -> HahnSeries:
    v, lead, eps = _normalize(a)
    g = _maxf(None if work_floor is None else Q(work_floor) + v, eps.floor)
    if g is None and not eps.is_exact_zero:
        raise ValueError("inverse is an infinite series; pass a work floor")
    s, finite = _series_sum(-eps, lambda m: 1, g)
    if not finite:
        s = s.with_floor(g)
    return s.shift(-v).scale(1 / lead)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k + 1)
    # Newton refinement from above
    r = max(r, 1)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def rational_power(c: Fraction, e: Fraction) -> Fraction:
    """c^e for c > 0 when the result is rational."""
    c, e = Q(c), Q(e)
    if e.denominator == 1:
        return c ** int(e)
    if c <= 0:
        raise NonRepresentable(f"{c}^({e}) is not a positive rational")
    q = e.denominator
    rn, rd = _iroot(c.numerator, q), _iroot(c.denominator, q)
    if rn is None or rd is None:
        raise NonRepresentable(f"non-representable coefficient power {c}^({e})")
    return Fraction(rn, rd) ** e.numerator


def power(a: HahnSeries, e, work_floor=None) -> HahnSeries:
    """a^e = lead^e x^(e v) sum_m C(e, m) eps^m for positive a."""
    e = Q(e)
    v, lead = a.leading()
    if lead <= 0:
        raise ValueError("power needs a positive series")
    if e == 0:
        return HahnSeries.const(1)
    if e.denominator == 1 and e > 0:
        return a ** int(e)
    factor = rational_power(lead, e)
    _, _, eps = _normalize(a)
    g = _maxf(None if work_floor is None else Q(work_floor) - e * v, eps.floor)
    if g is None and not eps.is_exact_zero:
        raise ValueError("power is an infinite series; pass a work floor")
    s, finite = _series_sum(eps, _Binom(e), g)
    if not finite:
        s = s.with_floor(g)
    return s.shift(e * v).scale(factor)


def refine_check(coarse: HahnSeries, fine: HahnSeries) -> bool:
    """Whether ``fine`` confirms every claim ``coarse`` makes above its floor."""
    if fine.floor is not None and (coarse.floor is None or fine.floor > coarse.floor):
        return False
    cut = coarse.floor
    keys = set(coarse._d) | set(fine._d)
    if cut is not None:
        keys = {k for k in keys if k > cut}
    return all(coarse._d.get(k, 0) == fine._d.get(k, 0) for k in keys)


# text and JSON forms


def format_rat(q: Fraction) -> str:
    return str(Q(q))


def _format_monomial(e: Fraction) -> str:
    return "x" if e == 1 else f"x^({format_rat(e)})"


def format_term(e, c, first: bool = True) -> str:
    e, c = Q(e), Q(c)
    if first:
        mag = c
        lead = ""
    else:
        mag = abs(c)
        lead = " - " if c < 0 else " + "
    if e == 0:
        return lead + format_rat(mag)
    if mag == 1:
        return lead + _format_monomial(e)
    if mag == -1:
        return lead + "-" + _format_monomial(e)
    return lead + f"{format_rat(mag)}*{_format_monomial(e)}"


def format_series(a: HahnSeries) -> str:
    if not a.terms:
        return "0"
    return "".join(format_term(e, c, k == 0) for k, (e, c) in enumerate(a.terms))


class ParseError(ValueError):
    def __init__(self, msg, offset):
        super().__init__(f"syntax error at offset {offset}: {msg}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # trailing whitespace
                break
            if m.group(1) is not None:
                self.toks.append(("int", int(m.group(1)), m.start(1)))
            else:
                ch = m.group(2)
                if ch.isspace():
                    pos = m.end()
                    continue
                self.toks.append((ch, ch, m.start(2)))
            pos = m.end()
        self.toks.append(("end", None, len(text.rstrip()) if text.strip() else len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def rat(self) -> Fraction:
        neg = False
        if self.peek()[0] == "-":
            self.take("-")
            neg = True
        n = Fraction(self.take("int")[1])
        if self.peek()[0] == "/":
            self.take("/")
            _, d, off = self.take("int")
            if d == 0:
                raise ParseError("zero denominator", off)
            n = n / d
        return -n if neg else n

    def xpart(self) -> Fraction:
        self.take("x")
        if self.peek()[0] == "^":
            self.take("^")
            self.take("(")
            e = self.rat()
            self.take(")")
            return e
        return Fraction(1)

    def term(self) -> tuple[Fraction, Fraction]:
        kind, _, off = self.peek()
        if kind == "x":
            return self.xpart(), Fraction(1)
        if kind == "-" and self.toks[self.i + 1][0] == "x":
            self.take("-")
            return self.xpart(), Fraction(-1)
        if kind in ("-", "int"):
            c = self.rat()
            if self.peek()[0] == "*":
                self.take("*")
                return self.xpart(), c
            return Fraction(0), c
        what = "end of input" if kind == "end" else repr(self.peek()[1])
        raise ParseError(f"expected a term, found {what}", off)

    def series(self) -> HahnSeries:
        d: dict = {}

        def put(ec, sign=1):
            e, c = ec
            d[e] = d.get(e, 0) + sign * c

        put(self.term())
        while self.peek()[0] in ("+", "-"):
            sign = 1 if self.take(self.peek()[0])[0] == "+" else -1
            put(self.term(), sign)
        if self.peek()[0] != "end":
            raise ParseError(f"unexpected {self.peek()[1]!r}", self.peek()[2])
        return HahnSeries(d)


def parse_series(text: str, floor=None) -> HahnSeries:
    s = _Parser(text).series()
    return s if floor is None else s.with_floor(floor)


def to_json(a: HahnSeries) -> dict:
    return {"terms": [{"exp": format_rat(e), "coef": format_rat(c)} for e, c in a.terms],
            "floor": None if a.floor is None else format_rat(a.floor)}


def from_json(obj) -> HahnSeries:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return HahnSeries({Fraction(t["exp"]): Fraction(t["coef"]) for t in obj["terms"]},
                      None if obj.get("floor") is None else Fraction(obj["floor"]))
