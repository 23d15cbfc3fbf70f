import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ordcal.hahn import HahnSeries, Indeterminate, derivative, monomial, parse_series, power
from ordcal.orders import TreeOrder
from ordcal.suites import SeriesGen, classify_growth
from ordcal.tgroup import (S0, S1, ZERO, Decomposition, GrowthOrder, Scale, TElement,
                           centralizer_check, chain_multiplier, chain_rule_check, compose,
                           composite_multiplier_check, decompose, formal_multiplier,
                           group_compose, growth_order, homogeneity_check, invert, iterate,
                           ordered_product_T, product_via_operator_expansion, recompose,
                           scale_eval, scale_validity, sign_stream)

P = parse_series
H = Fraction
T = TElement
GEN = SeriesGen()
seeds = st.integers(0, 10**6)


def t_series(expr, n_terms):
    """Laurent expansion in t of a sympy expression, read back with t^k = x^(-k/2)."""
    t = sympy.symbols("t")
    e = sympy.series(expr(t), t, 0, n_terms).removeO()
    return HahnSeries({H(-k, 2): H(str(e.coeff(t, k))) for k in range(-2, n_terms)})


def sqrt_b():
    # (x + x^(1/2))^(1/2) = t^-1 (1 + t)^(1/2)
    return t_series(lambda t: sympy.sqrt(1 + t) / t, 8)


# composition


def test_compose_examples():
    assert compose(P("x^(2)"), T("x + 1")) == P("x^(2) + 2*x + 1")
    a = P("x^(1/2) - 3*x^(-2)")
    assert compose(a, T("x")) == a


def test_compose_sqrt_against_sympy():
    got = compose(monomial(H(1, 2)), T("x + x^(1/2)"), -1)
    assert got.floor == -1
    assert got.agrees_with(sqrt_b())
    assert got.agrees_with(power(P("x + x^(1/2)"), H(1, 2), -1))


def test_group_compose_examples():
    assert group_compose(T("x + 1"), T("x + 1")) == T("x + 2")
    b = T("x + x^(1/2)")
    got = group_compose(b, b, -2)
    assert got.agrees_with(P("x + x^(1/2)") + sqrt_b())


def test_telement_validation():
    for bad in ("2*x", "x^(2) + x", "x^(1/2)"):
        with pytest.raises(ValueError):
            T(bad)
    with pytest.raises(ValueError):
        T(P("x").with_floor(1))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_associativity(seed):
    rng = random.Random(seed)
    a, b, c = (GEN.telement(rng) for _ in range(3))
    F = -3
    lhs = group_compose(a, group_compose(b, c, F), F)
    rhs = group_compose(group_compose(a, b, F), c, F)
    assert lhs.agrees_with(rhs)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_compose_multiplicative(seed):
    rng = random.Random(seed)
    a, c = GEN.series(rng, hi=H(2)), GEN.series(rng, hi=H(2))
    b = GEN.telement(rng)
    F = -3
    assert compose(a * c, b, F).agrees_with(compose(a, b, F) * compose(c, b, F))


def test_compose_matches_power_on_monic():
    b = T("x - 2*x^(1/3) + 1")
    for e in (H(1, 2), H(-1), H(2, 3)):
        assert compose(monomial(e), b, -3).agrees_with(power(b.series, e, -3))


# inversion and iteration


def test_invert_examples():
    assert invert(T("x + 1")) == T("x - 1")
    b = T("x + x^(1/2)")
    inv = invert(b, -1)
    # x + 1/2 - x^(1/2) (1 + 1/(4x))^(1/2), with x = t^-2
    oracle = P("x + 1/2") - t_series(lambda t: sympy.sqrt(1 + t**2 / 4) / t, 6)
    assert inv.agrees_with(oracle)
    residue = compose(b.series, inv, -1) - P("x")
    assert all(e <= -1 for e in residue.exponents())
    assert inv.floor == -1


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_invert_involution_and_iterate(seed):
    rng = random.Random(seed)
    a = GEN.telement(rng)
    F = -3
    inv = invert(a, F)
    assert invert(inv, F).agrees_with(a)
    assert group_compose(a, inv, F).agrees_with(P("x"))
    assert group_compose(inv, a, F).agrees_with(P("x"))
    assert iterate(a, -1, F).agrees_with(inv)


def test_iterate_examples():
    assert iterate(T("x + 1"), H(2, 7)) == T("x + 2/7")
    a = T("x + 3*x^(1/2) - x^(-1)")
    assert iterate(a, 1, -3).agrees_with(a)
    assert iterate(a, 0, -3) == T("x")
    assert iterate(a, 2, -3).agrees_with(group_compose(a, a, -3))


def test_half_iterate_squares_back():
    a = T("x + x^(1/2)")
    h = iterate(a, H(1, 2), -3)
    assert group_compose(h, h, -3).agrees_with(a)


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from([H(1, 2), H(-1, 3), H(2), H(3, 2)]), st.sampled_from([H(1), H(-1, 2), H(0)]))
def test_centralizer(seed, e, f):
    a = GEN.telement(random.Random(seed))
    assert centralizer_check(a, e, f, -3)


def test_centralizer_examples():
    assert centralizer_check(T("x + 1"), H(1, 3), H(5, 2))
    a = T("x + 2*x^(1/3)")
    assert centralizer_check(a, H(3, 4), 0, -3)
    assert centralizer_check(a, H(3, 4), H(-3, 4), -3)


# growth orders


def test_growth_order_examples():
    assert growth_order(T("x + 3*x^(1/2) + x^(-1)")) == GrowthOrder(3, H(1, 2))
    assert growth_order(T("x")) == ZERO and str(ZERO) == "0"
    with pytest.raises(Indeterminate, match="indeterminate: refine floor"):
        growth_order(T(P("x").with_floor(-2)))
    assert str(GrowthOrder(H(-1, 2), H(1, 3))) == "-1/2*x^(1/3)"


@pytest.mark.parametrize("a,b,law", [
    ("x + x^(1/2)", "x + 5", "dominant"),
    ("x + 1", "x + 2*x^(1/3)", "dominant"),
    ("x + x^(1/2)", "x + 2*x^(1/2) + x^(-1)", "sum"),
    ("x + x^(1/2) + 1", "x - x^(1/2)", "cancel"),
])
def test_growth_laws_examples(a, b, law):
    assert classify_growth(T(a), T(b), -3) == (law, True)


def test_cancellation_really_cancels():
    ab = group_compose(T("x + x^(1/2) + 1"), T("x - x^(1/2)"), -3)
    # x^(1/2) o (x - x^(1/2)) = x^(1/2) - 1/2 - ..., so the constant survives
    assert growth_order(ab) == GrowthOrder(H(1, 2), H(0))


@settings(max_examples=40, deadline=None)
@given(seeds, st.fractions(-3, 3, max_denominator=3).filter(bool))
def test_iterate_scales_growth_order(seed, e):
    a = GEN.telement(random.Random(seed), lo=H(-1))
    assert growth_order(iterate(a, e, -3)) == growth_order(a).scaled(e)


# ordered products along tree orders


def test_ordered_product_examples():
    a, b = T("x + x^(1/2)"), T("x + 1")
    assert ordered_product_T([a, b], TreeOrder(2, (1,)), -3) == group_compose(a, b, -3)
    assert ordered_product_T([a, b], TreeOrder(2, (-1,)), -3) == group_compose(b, a, -3)
    assert ordered_product_T([], TreeOrder(0)) == T("x")
    s = [T("x + 1"), T("x + x^(1/3)"), T("x + x^(-1)")]
    want = group_compose(s[2], group_compose(s[1], s[0], -3), -3)
    assert ordered_product_T(s, TreeOrder(3, (-1, -1)), -3).agrees_with(want)


def test_ordered_product_rejects_bad_order():
    with pytest.raises(ValueError):
        ordered_product_T([T("x")], [0, 1])


def test_operator_expansion_examples():
    a = T("x + 2*x^(1/2)")
    assert product_via_operator_expansion([a], [0], -3).agrees_with(a)
    assert product_via_operator_expansion([T("x + 1")] * 2, [0, 1]) == T("x + 2")


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_operator_expansion_matches_product(seed, n):
    rng = random.Random(seed)
    fam = [GEN.telement(rng) for _ in range(n)]
    order = TreeOrder(n, tuple(rng.choice((1, -1)) for _ in range(n - 1)))
    direct = ordered_product_T(fam, order, -3)
    assert product_via_operator_expansion(fam, order, -3).agrees_with(direct)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4))
def test_dominant_member_sets_growth_order(seed, n):
    rng = random.Random(seed)
    es = sorted({GEN.exponent(rng, H(-2), H(2, 3)) for _ in range(n)}, reverse=True)
    fam = [T(P("x") + monomial(e, GEN.coef(rng)) + GEN.series(rng, lo=H(-3), hi=e - 1)) for e in es]
    order = TreeOrder(len(fam), tuple(rng.choice((1, -1)) for _ in range(len(fam) - 1)))
    assert growth_order(ordered_product_T(fam, order, -4)) == growth_order(fam[0])


# identities


def test_chain_rule_examples():
    assert chain_rule_check(P("x^(2)"), T("x + 1"))

    def corrupted(a, b, F=None):
        return compose(a, b, F) + monomial(-1)

    assert not chain_rule_check(P("x^(2)"), T("x + 1"), -3, compose_fn=corrupted)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([-2, -4, -5]))
def test_chain_rule_random(seed, F):
    rng = random.Random(seed)
    assert chain_rule_check(GEN.series(rng, hi=H(2)), GEN.telement(rng), F)


def test_homogeneity_examples():
    assert homogeneity_check(P("x"), 2, T("x + 1"))
    assert homogeneity_check(P("x + 3*x^(1/2)"), H(1, 2), T("x - x^(1/3)"), -3)

    def corrupted(a, b, F=None):
        return compose(a, b, F) + monomial(-1, 5)

    assert not homogeneity_check(P("x"), 2, T("x + 1"), -3, compose_fn=corrupted)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_homogeneity_and_chain_rule_together(seed):
    rng = random.Random(seed)
    a = monomial(GEN.exponent(rng, H(1, 2), H(2))) + GEN.series(rng, hi=H(1, 4))
    b = GEN.telement(rng)
    assert homogeneity_check(a, H(1, 2), b, -3)
    assert chain_rule_check(a, b, -3)


def test_chain_multiplier_two_members():
    b0, b1 = T("x + x^(1/2)"), T("x + 2*x^(1/3) + 1")
    composite = group_compose(b1, b0, -3)
    m = chain_multiplier([b0, b1], -3)
    assert derivative(composite.series).agrees_with(m)
    assert formal_multiplier([b0, b1], -3).agrees_with(m)


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(1, 2))
def test_formal_multiplier_random(seed, n):
    rng = random.Random(seed)
    gen = SeriesGen(hi=H(1, 3))
    fam = [gen.telement(rng) for _ in range(n)]
    assert composite_multiplier_check(fam, -2)


# scales


def test_scale_examples():
    assert scale_eval(S0, H(1, 2), 3) == T("x + 3*x^(1/2)")
    assert S1(H(1, 2), 0, -3) == T("x") and S0(H(-2), 0) == T("x")
    assert growth_order(S1(H(1, 2), 3, -3)) == GrowthOrder(3, H(1, 2))
    with pytest.raises(ValueError):
        S0(1, 2)


def test_scale_validity():
    grid = [(H(1, 2), 2), (0, -1), (-1, 5)]
    assert scale_validity(S0, grid, -3).ok
    assert scale_validity(S1, grid, -3).ok
    broken = Scale("broken", lambda e, c, F: T(P("x") + HahnSeries({0: c})))
    rep = scale_validity(broken, grid, -3)
    assert not rep.ok
    assert {f["condition"] for f in rep.failures} >= {"go(S(e,c))=c*x^e"}
    assert all(f["e"] != "0" for f in rep.failures if f["condition"] == "go(S(e,c))=c*x^e")


# decompositions


def test_sign_streams():
    assert [sign_stream("alt")(g) for g in range(4)] == [1, -1, 1, -1]
    assert sign_stream("right")(7) == -1 and sign_stream("left")(7) == 1
    assert [sign_stream("1,-1,-1")(g) for g in range(4)] == [1, -1, -1, 1]
    with pytest.raises(ValueError):
        sign_stream([1, 0])


@pytest.mark.parametrize("signs", ["left", "right", "alt"])
def test_single_peel(signs):
    d = decompose(T("x + 3*x^(1/2)"), S0, signs, -3)
    assert (d.e, d.c) == ((H(1, 2),), (3,))
    assert decompose(T("x"), S0, signs, -3).e == ()


def test_three_term_peel():
    a = T("x + x^(1/2) + x^(1/4)")
    d = decompose(a, S0, "right", 0)
    assert (d.e[0], d.c[0]) == (H(1, 2), 1)
    assert list(d.e) == sorted(set(d.e), reverse=True)
    r1 = group_compose(a, invert(T("x + x^(1/2)"), 0), 0)
    assert growth_order(r1) == GrowthOrder(d.c[1], d.e[1])
    assert recompose(d, 0).agrees_with(a)


def test_recompose_examples():
    empty = Decomposition(S1, TreeOrder(0), (), (), -3)
    assert recompose(empty) == T("x")
    one = Decomposition(S1, TreeOrder(1), (H(1, 2),), (2,), -3)
    assert recompose(one) == S1(H(1, 2), 2, -3)


def test_decomposition_json_round_trip():
    d = decompose(T("x + 2*x^(1/2) - x^(-1/3)"), S1, "alt", -2)
    obj = d.to_json()
    assert list(obj) == ["scale", "floor", "signs", "steps"]
    assert obj["scale"] == "S1" and obj["floor"] == "-2"
    assert obj["steps"][0] == {"e": "1/2", "c": "2"}
    back = Decomposition.from_json(obj)
    assert back == d


def test_decomposition_validation():
    with pytest.raises(ValueError):
        Decomposition(S0, TreeOrder(2, (1,)), (0, H(1, 2)), (1, 1))
    with pytest.raises(ValueError):
        Decomposition(S0, TreeOrder(1), (H(1, 2),), (0,))


def test_iteration_cap(monkeypatch):
    monkeypatch.setenv("ORDCAL_ITER_CAP", "1")
    with pytest.raises(RuntimeError):
        decompose(T("x + x^(1/2) + x^(1/4)"), S0, "left", -1)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(["left", "right", "alt", "1,1,-1"]), st.sampled_from(["S0", "S1"]))
def test_round_trip_from_series(seed, signs, scale):
    s = {"S0": S0, "S1": S1}[scale]
    a = GEN.telement(random.Random(seed), lo=H(-5, 2))
    d = decompose(a, s, signs, -3)
    assert list(d.e) == sorted(set(d.e), reverse=True)
    assert recompose(d, -3).agrees_with(a)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(["S0", "S1"]))
def test_round_trip_from_decomposition(seed, scale):
    from ordcal.suites import random_decomposition

    s = {"S0": S0, "S1": S1}[scale]
    d = random_decomposition(random.Random(seed), s, 5, -3)
    back = decompose(recompose(d, -3), s, list(d.signs.signs) + [1], -3)
    assert (back.e, back.c, back.signs) == (d.e, d.c, d.signs)


@pytest.mark.parametrize("e,c", [(H(1, 2), 3), (0, H(-1, 2)), (H(-1, 3), 2)])
def test_s1_inverse_shortcut(e, c):
    assert S1.inverse(e, c, -3).agrees_with(invert(S1(e, c, -3), -3))
    assert S0.inverse(e, c, -3).agrees_with(invert(S0(e, c), -3))
