"""Truncated formal power series in non-commuting variables over the rationals.

A series is a finitely supported map from words (tuples of variable labels) to
``Fraction`` coefficients, together with a cap: words longer than the cap are
dropped.  Every identity checked with these objects is an exact statement about
the quotient of the full algebra by the ideal of words longer than the cap.

Variable labels are small integers, the marker ``SIGMA`` or tagged pairs
``(i, SIGMA)``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as cartesian
from math import factorial
from typing import Iterable, Mapping

SIGMA = "s"

Word = tuple


def var_key(v):
    if isinstance(v, tuple):
        return (2, var_key(v[0]), str(v[1]))
    if v == SIGMA:
        return (1, 0)
    if isinstance(v, int):
        return (0, v)
    return (3, str(v))


def word_key(w: Word):
    return (len(w), tuple(var_key(v) for v in w))


def format_var(v) -> str:
    if isinstance(v, tuple):
        return "X(" + ",".join(str(p) for p in v) + ")"
    return f"X{v}"


def format_word(w: Word) -> str:
    return ".".join(format_var(v) for v in w) if w else "1"


class CapMismatch(ValueError):
    pass


class FreeSeries:
    """Element of the truncated algebra k<<J>> / (words longer than cap)."""

    __slots__ = ("cap", "_c", "_hash")

    def __init__(self, coeffs: Mapping[Word, object] | None = None, cap: int = 4):
        self.cap = int(cap)
        c = {}
        if coeffs:
            for w, a in coeffs.items():
                w = tuple(w)
                if len(w) > self.cap:
                    continue
                a = Fraction(a)
                if a:
                    c[w] = c.get(w, 0) + a
            c = {w: a for w, a in c.items() if a}
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict, cap: int) -> "FreeSeries":
        s = cls.__new__(cls)
        s.cap = cap
        s._c = c
        s._hash = None
        return s

    # constructors
    @classmethod
    def zero(cls, cap) -> "FreeSeries":
        return cls._raw({}, cap)

    @classmethod
    def one(cls, cap) -> "FreeSeries":
        return cls.scalar(1, cap)

    @classmethod
    def scalar(cls, a, cap) -> "FreeSeries":
        a = Fraction(a)
        return cls._raw({(): a} if a else {}, cap)

    @classmethod
    def var(cls, v, cap) -> "FreeSeries":
        return cls.word((v,), cap)

    @classmethod
    def word(cls, w: Iterable, cap, coef=1) -> "FreeSeries":
        return cls({tuple(w): coef}, cap)

    # accessors
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, w) -> Fraction:
        return self._c.get(tuple(w), Fraction(0))

    def support(self) -> set:
        return set(self._c)

    @property
    def constant(self) -> Fraction:
        return self._c.get((), Fraction(0))

    def min_degree(self) -> int | None:
        return min((len(w) for w in self._c), default=None)

    def variables(self) -> set:
        return {v for w in self._c for v in w}

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FreeSeries.scalar(other, self.cap)
        if not isinstance(other, FreeSeries):
            return NotImplemented
        return self.cap == other.cap and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.cap, frozenset(self._c.items())))
        return self._hash

    def with_cap(self, cap: int) -> "FreeSeries":
        """Reinterpret at another cap (lowering drops words, raising keeps them)."""
        return FreeSeries._raw({w: a for w, a in self._c.items() if len(w) <= cap}, cap)

    # arithmetic
    def _coerce(self, other) -> "FreeSeries":
        if isinstance(other, FreeSeries):
            if other.cap != self.cap:
                raise CapMismatch(f"cap mismatch: {self.cap} vs {other.cap}")
            return other
        if isinstance(other, (int, Fraction)):
            return FreeSeries.scalar(other, self.cap)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for w, a in other._c.items():
            b = c.get(w, 0) + a
            if b:
                c[w] = b
            else:
                c.pop(w, None)
        return FreeSeries._raw(c, self.cap)

    __radd__ = __add__

    def __neg__(self):
        return FreeSeries._raw({w: -a for w, a in self._c.items()}, self.cap)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a) -> "FreeSeries":
        a = Fraction(a)
        if not a:
            return FreeSeries.zero(self.cap)
        return FreeSeries._raw({w: a * b for w, b in self._c.items()}, self.cap)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return cauchy_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return inverse_unit(self) ** (-n)
        out = FreeSeries.one(self.cap)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"FreeSeries({format_series(self)!r}, cap={self.cap})"

    def __str__(self):
        return format_series(self)


def format_series(p: FreeSeries) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for w in sorted(p._c, key=word_key):
        a = p._c[w]
        parts.append((a, w))
    out = []
    for k, (a, w) in enumerate(parts):
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        body = str(mag) if not w else (format_word(w) if mag == 1 else f"{mag}*{format_word(w)}")
        if k == 0:
            out.append(("-" if a < 0 else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def cauchy_mul(p: FreeSeries, q: FreeSeries) -> FreeSeries:
    """Cauchy product, dropping words longer than the shared cap."""
    if p.cap != q.cap:
        raise CapMismatch(f"cap mismatch: {p.cap} vs {q.cap}")
    cap = p.cap
    by_len: dict[int, list] = {}
    for w, b in q._c.items():
        by_len.setdefault(len(w), []).append((w, b))
    c: dict = {}
    for w1, a in p._c.items():
        room = cap - len(w1)
        for n in range(room + 1):
            for w2, b in by_len.get(n, ()):
                w = w1 + w2
                c[w] = c.get(w, 0) + a * b
    return FreeSeries._raw({w: a for w, a in c.items() if a}, cap)


def lie_bracket(p: FreeSeries, q: FreeSeries) -> FreeSeries:
    return p * q - q * p


def restrict(p: FreeSeries, variables) -> FreeSeries:
    """Keep exactly the coefficients on words using only the given variables."""
    vs = set(variables)
    return FreeSeries._raw({w: a for w, a in p._c.items() if all(v in vs for v in w)}, p.cap)


class OrderedAlphabet(tuple):
    """Distinct variable labels listed in increasing order."""

    def __new__(cls, variables=()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variables in ordered alphabet")
        return super().__new__(cls, variables)

    def predecessors(self, v) -> "OrderedAlphabet":
        return OrderedAlphabet(self[: self.index(v)])

    def successors(self, v) -> "OrderedAlphabet":
        return OrderedAlphabet(self[self.index(v) + 1 :])

    def reversed(self) -> "OrderedAlphabet":
        return OrderedAlphabet(self[::-1])


def increasing_words(alphabet, cap: int):
    """All strictly increasing words of length <= cap, in the alphabet's order."""
    alphabet = tuple(alphabet)
    out = [()]
    frontier = [((), -1)]
    for _ in range(cap):
        nxt = []
        for w, last in frontier:
            for k in range(last + 1, len(alphabet)):
                u = w + (alphabet[k],)
                out.append(u)
                nxt.append((u, k))
        frontier = nxt
    return out


def op_series(alphabet, cap: int) -> FreeSeries:
    """Sum of all strictly increasing words: the formal ordered product."""
    return FreeSeries._raw({w: Fraction(1) for w in increasing_words(alphabet, cap)}, cap)


def evaluate(p: FreeSeries, family: Mapping, cap: int | None = None) -> FreeSeries:
    """Substitute ``family[v]`` for each variable ``v`` of ``p``.

    Every substituted series must have zero constant term so that a word of
    length ``n`` only contributes at degree ``>= n``.
    """
    if cap is None:
        caps = {f.cap for f in family.values()}
        if len(caps) > 1:
            raise CapMismatch(f"family caps differ: {sorted(caps)}")
        cap = caps.pop() if caps else p.cap
    for v, f in family.items():
        if f.cap != cap:
            raise CapMismatch(f"family member {v!r} has cap {f.cap}, expected {cap}")
        if f.constant:
            raise ValueError(f"family member {v!r} has non-zero constant term")
    if p.cap < cap:
        raise CapMismatch(f"series cap {p.cap} below evaluation cap {cap}")
    prefix: dict[Word, FreeSeries] = {(): FreeSeries.one(cap)}

    def image(w):
        got = prefix.get(w)
        if got is None:
            head = image(w[:-1])
            try:
                tail = family[w[-1]]
            except KeyError:
                raise KeyError(f"no substitution for variable {w[-1]!r}") from None
            got = head * tail if head else head
            prefix[w] = got
        return got

    acc: dict = {}
    for w, a in sorted(p._c.items(), key=lambda t: word_key(t[0])):
        if len(w) > cap:
            continue
        for u, b in image(w)._c.items():
            acc[u] = acc.get(u, 0) + a * b
    return FreeSeries._raw({u: b for u, b in acc.items() if b}, cap)


def inverse_unit(p: FreeSeries) -> FreeSeries:
    c = p.constant
    if not c:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    u = p.scale(1 / c) - 1
    term = FreeSeries.one(p.cap)
    acc = FreeSeries.one(p.cap)
    for _ in range(p.cap):
        term = -(term * u)
        if not term:
            break
        acc = acc + term
    return acc.scale(1 / c)


def _power_sum(eps: FreeSeries, coef) -> FreeSeries:
    """sum_m coef(m) * eps^m for m = 0..cap (eps must have zero constant term)."""
    if eps.constant:
        raise ValueError("expected zero constant term")
    acc = FreeSeries.scalar(coef(0), eps.cap)
    term = FreeSeries.one(eps.cap)
    for m in range(1, eps.cap + 1):
        term = term * eps
        if not term:
            break
        acc = acc + term.scale(coef(m))
    return acc


def log_series(p: FreeSeries) -> FreeSeries:
    if p.constant != 1:
        raise ValueError("log needs constant term 1")
    return _power_sum(p - 1, lambda m: Fraction((-1) ** (m - 1), m) if m else 0)


def exp_series(p: FreeSeries) -> FreeSeries:
    if p.constant:
        raise ValueError("exp needs constant term 0")
    return _power_sum(p, lambda m: Fraction(1, factorial(m)))


def binomial(c, m: int) -> Fraction:
    c = Fraction(c)
    out = Fraction(1)
    for k in range(m):
        out *= (c - k) / (k + 1)
    return out


def binom_power(p: FreeSeries, c) -> FreeSeries:
    """(1 + eps)^[c] = sum_m C(c, m) eps^m."""
    if p.constant != 1:
        raise ValueError("binomial power needs constant term 1")
    return _power_sum(p - 1, lambda m: binomial(c, m))


# exact span membership over word coordinates


class RowSpace:
    """Incremental row echelon form over Q with word-indexed coordinates.

    Each stored row has a pivot equal to its least word (in ``word_key`` order);
    reduction processes pivots in ascending order, which never reintroduces an
    already processed pivot.
    """

    def __init__(self):
        self._rows: dict = {}
        self._order: list = []
        self._sorted = True

    def __len__(self):
        return len(self._rows)

    def reduce(self, vec: dict) -> dict:
        v = dict(vec)
        if not self._sorted:
            self._order.sort(key=lambda t: t[0])
            self._sorted = True
        for _, piv in self._order:
            a = v.get(piv)
            if not a:
                continue
            row = self._rows[piv]
            for w, b in row.items():
                nb = v.get(w, 0) - a * b
                if nb:
                    v[w] = nb
                else:
                    v.pop(w, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return whether it was independent."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v, key=word_key)
        lead = v[piv]
        self._rows[piv] = {w: a / lead for w, a in v.items()}
        self._order.append((word_key(piv), piv))
        self._sorted = False
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def lie_closure(generators: list[FreeSeries], cap: int) -> tuple[RowSpace, list[FreeSeries]]:
    """Basis of the Lie subalgebra generated by ``generators`` (truncated at cap)."""
    gens = [g.with_cap(cap) for g in generators]
    space = RowSpace()
    basis: list[FreeSeries] = []
    queue = []
    for g in gens:
        if space.add(g._c):
            basis.append(g)
            queue.append(g)
    while queue:
        e = queue.pop()
        for g in gens:
            b = lie_bracket(g, e)
            if b and space.add(b._c):
                basis.append(b)
                queue.append(b)
    return space, basis


def lie_span_contains(target: FreeSeries, generators: list[FreeSeries], cap: int) -> bool:
    """Whether ``target`` lies in the Lie algebra generated by ``generators``, mod cap."""
    target = target.with_cap(cap)
    if not target:
        return True
    space, _ = lie_closure(generators, cap)
    return space.contains(target._c)


def words_upto(alphabet, n: int):
    alphabet = list(alphabet)
    for k in range(n + 1):
        yield from cartesian(alphabet, repeat=k)


def ideal_span(relations: list[FreeSeries], cap: int, alphabet=None) -> RowSpace:
    """Span of the truncations of u*r*v for words u, v and relations r."""
    rels = [r.with_cap(cap) for r in relations]
    if alphabet is None:
        alphabet = set()
        for r in rels:
            alphabet |= r.variables()
    alphabet = sorted(set(alphabet), key=var_key)
    space = RowSpace()
    for r in rels:
        d = r.min_degree()
        if d is None:
            continue
        room = cap - d
        lefts = list(words_upto(alphabet, room))
        for u in lefts:
            ur = FreeSeries.word(u, cap) * r
            if not ur:
                continue
            for v in words_upto(alphabet, room - len(u)):
                urv = ur * FreeSeries.word(v, cap)
                if urv:
                    space.add(urv._c)
    return space


def ideal_span_contains(target: FreeSeries, relations: list[FreeSeries], cap: int,
                        alphabet=None) -> bool:
    target = target.with_cap(cap)
    if not target:
        return True
    if alphabet is None:
        alphabet = target.variables()
        for r in relations:
            alphabet |= r.variables()
    return ideal_span(relations, cap, alphabet).contains(target._c)
