"""Formal chain-rule apparatus over the tagged alphabet.

For an ordered alphabet ``I`` the tagged alphabet has the base variables ``i``, the
single variable ``SIGMA`` and one tagged copy ``(i, SIGMA)`` per base variable.
Each relation encodes ``X_s (1 + X_i) = (1 + X_(i,s)) (1 + X_i) X_s``; the
multipliers conjugate ``1 + X_(i,s)`` by the ordered product of the predecessors
of ``i``, and their ordered product ``M_I`` moves ``X_s`` across ``OP_I``.
"""

from __future__ import annotations

from .free import (SIGMA, FreeSeries, OrderedAlphabet, ideal_span, ideal_span_contains,
                   inverse_unit, op_series)
from .products import OrderedFamily, ordered_product


def tag(i):
    return (i, SIGMA)


def tagged_alphabet(I) -> list:
    I = OrderedAlphabet(I)
    return list(I) + [SIGMA] + [tag(i) for i in I]


def relations(I, cap: int = 3) -> list[FreeSeries]:
    one = FreeSeries.one(cap)
    s = FreeSeries.var(SIGMA, cap)
    out = []
    for i in OrderedAlphabet(I):
        a = one + FreeSeries.var(i, cap)
        b = one + FreeSeries.var(tag(i), cap)
        out.append(s * a - b * a * s)
    return out


def multiplier_family(I, cap: int) -> dict:
    I = OrderedAlphabet(I)
    one = FreeSeries.one(cap)
    out = {}
    for i in I:
        pre = op_series(I.predecessors(i), cap)
        out[i] = pre * (one + FreeSeries.var(tag(i), cap)) * inverse_unit(pre)
    return out


def big_multiplier(I, cap: int) -> FreeSeries:
    I = OrderedAlphabet(I)
    return ordered_product(OrderedFamily(tuple(I), multiplier_family(I, cap)), cap)


def lemma51_residual(I, cap: int) -> FreeSeries:
    """``M_I * OP_I * X_s - X_s * OP_I``, expected to lie in the relation ideal."""
    I = OrderedAlphabet(I)
    op = op_series(I, cap)
    s = FreeSeries.var(SIGMA, cap)
    return big_multiplier(I, cap) * op * s - s * op


def check_lemma51(I, cap: int) -> bool:
    I = OrderedAlphabet(I)
    residual = lemma51_residual(I, cap)
    return ideal_span_contains(residual, relations(I, cap), cap, alphabet=tagged_alphabet(I))


def ideal_dimension(I, cap: int) -> int:
    I = OrderedAlphabet(I)
    return len(ideal_span(relations(I, cap), cap, alphabet=tagged_alphabet(I)))
