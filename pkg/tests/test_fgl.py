from fractions import Fraction
from math import factorial, prod

import pytest

from esigma.errors import DomainError, StructuralError
from esigma.fgl import (
    FormalGroupLaw,
    QuotientContext,
    divisor_from_points,
    euler_class_U_minus_1,
    honda_logarithm,
    linear_coefficient,
    make_additive,
    make_honda,
    make_multiplicative,
    r_series,
    regular_rep_euler_class,
    regular_rep_valuation,
    socle_nonvanishing_check,
    subgroup_divisor_closure_check,
    torsion_points,
    unit_normalized,
)
from esigma.pseries import TruncSeries, compose, series_ring, weierstrass_degree
from esigma.rings import cyclic_ring, finite_field, prime_field

HONDA_GRID = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]


def _pmul(a, b, order):
    out = [Fraction(0)] * order
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b[: order - i]):
                out[i + j] += x * y
    return out


def _log_coeffs(p, n, order):
    f = [Fraction(0)] * order
    i = 0
    while p ** (n * i) < order:
        f[p ** (n * i)] = Fraction(1, p**i)
        i += 1
    return f


def _apply(f, g, order):
    """f(g) for univariate truncated lists, g(0) = 0."""
    out = [Fraction(0)] * order
    for c in reversed(f):
        out = _pmul(out, g, order)
        out[0] += c
    return out


def _inverse_log(f, order):
    # fixed point g = x - (f(g) - g), one new correct degree per pass
    g = [Fraction(0)] * order
    g[1] = Fraction(1)
    for _ in range(order):
        fg = _apply(f, g, order)
        g = [(1 if i == 1 else 0) - (fg[i] - g[i]) for i in range(order)]
    return g


def _reduce(c, p):
    assert c.denominator % p != 0
    return c.numerator * pow(c.denominator, -1, p) % p


def oracle_honda_p_series(p, n, order):
    """[p](x) = f^{-1}(p f(x)) over Q, reduced mod p."""
    f = _log_coeffs(p, n, order)
    g = _inverse_log(f, order)
    ps = _apply(g, [p * c for c in f], order)
    return {i: _reduce(c, p) for i, c in enumerate(ps) if c and _reduce(c, p)}


def oracle_honda_law(p, n, order):
    """F(x, y) = f^{-1}(f(x) + f(y)); bivariate series as {(i, j): coeff}."""
    f = _log_coeffs(p, n, order)
    g = _inverse_log(f, order)

    def bmul(a, b):
        out = {}
        for (i, j), x in a.items():
            for (k, l), y in b.items():
                if i + j + k + l < order:
                    out[i + k, j + l] = out.get((i + k, j + l), 0) + x * y
        return out

    inner = {}
    for d, c in enumerate(f):
        if c:
            inner[d, 0] = inner.get((d, 0), 0) + c
            inner[0, d] = inner.get((0, d), 0) + c
    total, power = {}, {(0, 0): Fraction(1)}
    for c in g:
        if c:
            for e, v in power.items():
                total[e] = total.get(e, 0) + c * v
        power = bmul(power, inner)
    return {e: _reduce(c, p) for e, c in total.items() if c and _reduce(c, p)}


def test_additive_and_multiplicative_examples():
    F2 = prime_field(2)
    A = make_additive(F2, 6)
    assert r_series(A, 2).is_zero()
    Z4 = cyclic_ring(2, 2)
    M = make_multiplicative(Z4, 6)
    assert r_series(M, 2) == TruncSeries.from_coeffs(Z4, "x", 6, [0, 2, 1])
    M3 = make_multiplicative(prime_field(3), 6)
    assert r_series(M3, 3) == TruncSeries.from_coeffs(prime_field(3), "x", 6, [0, 0, 0, 1])
    Z8 = cyclic_ring(2, 3)
    assert r_series(make_multiplicative(Z8, 6), 3) == TruncSeries.from_coeffs(Z8, "x", 6, [0, 3, 3, 1])


def test_non_law_rejected():
    x, y = series_ring(prime_field(3), "xy", 5)
    with pytest.raises(DomainError):
        FormalGroupLaw(x + y + x * x)
    with pytest.raises(DomainError):
        FormalGroupLaw(x + y + x * y * y)
    with pytest.raises(StructuralError):
        FormalGroupLaw(series_ring(prime_field(3), "ab", 5)[0])


def test_honda_logarithm_shape():
    f = honda_logarithm(3, 1, 10)
    assert sorted(e[0] for e in f.terms) == [1, 3, 9]


@pytest.mark.parametrize("p,n,order", [(2, 1, 8), (2, 2, 20), (3, 1, 12), (2, 1, 16)])
def test_honda_p_series_matches_rational_oracle(p, n, order):
    F = make_honda(p, n, ring=prime_field(p), order=order)
    want = oracle_honda_p_series(p, n, order)
    got = {e[0]: c for e, c in r_series(F, p).terms.items()}
    assert got == want


@pytest.mark.parametrize("p,n,order", [(2, 1, 8), (3, 1, 7), (2, 2, 9)])
def test_honda_law_matches_rational_oracle(p, n, order):
    F = make_honda(p, n, ring=prime_field(p), order=order)
    assert F.series.terms == oracle_honda_law(p, n, order)


def test_honda_examples():
    F = make_honda(2, 1, order=8)
    x, y = F.series.gens()
    zero = x * 0
    assert compose(F.series, [x, zero]) == x
    (t,) = series_ring(F.ring, "x", 8)
    assert r_series(F, 2) == t * t
    G = make_honda(2, 2, order=20)
    assert weierstrass_degree(r_series(G, 2)) == 4
    H = make_honda(3, 1)
    assert linear_coefficient(r_series(H, 2)) == 2


@pytest.mark.parametrize("p,n", HONDA_GRID)
def test_honda_axioms_and_height(p, n):
    F = make_honda(p, n, check=False)
    assert F.order >= p**n + p
    assert F.axiom_failures() == []
    assert weierstrass_degree(r_series(F, p)) == p**n


@pytest.mark.parametrize("p,n", HONDA_GRID)
def test_r_series_linear_term(p, n):
    F = make_honda(p, n)
    for r in range(11):
        assert linear_coefficient(r_series(F, r)) == F.ring.from_int(r)


def test_r_series_is_iterated_sum():
    F = make_honda(3, 2)
    (x,) = series_ring(F.ring, "x", F.order)
    acc = x * 0
    for r in range(8):
        assert r_series(F, r) == acc
        acc = F.add(acc, x)


def test_euler_class_examples():
    assert euler_class_U_minus_1(make_honda(2, 1)) == series_ring(finite_field(2, 1), "x", 4)[0]
    e = euler_class_U_minus_1(make_honda(3, 1))
    assert weierstrass_degree(e) == 2 and e.coeff(2) == 2
    e = euler_class_U_minus_1(make_multiplicative(prime_field(5), 10))
    assert weierstrass_degree(e) == 4 and e.coeff(4) == 24 % 5


@pytest.mark.parametrize("p,n", HONDA_GRID)
def test_euler_class_is_unit_multiple_of_power(p, n):
    F = make_honda(p, n)
    e = euler_class_U_minus_1(F)
    assert weierstrass_degree(e) == p - 1
    assert e.coeff(p - 1) == F.ring.from_int(factorial(p - 1))
    assert e.coeff(p - 1) == F.ring.from_int(-1)  # Wilson
    # x^{p-1} = unit * e(U-1): dividing off the leading coefficient leaves x^{p-1}(1 + ...)
    x = series_ring(F.ring, "x", F.order)[0]
    normalized = unit_normalized(e)
    assert normalized.coeff(p - 1) == 1
    rest = weierstrass_degree(normalized - x ** (p - 1))
    assert rest is None or rest > p - 1


@pytest.mark.parametrize("p,n,exponent", [(2, 1, 1), (2, 2, 3), (3, 2, 4), (2, 3, 7), (3, 1, 1), (3, 3, 13)])
def test_socle_nonvanishing(p, n, exponent):
    F = make_honda(p, n)
    assert socle_nonvanishing_check(F, p, n) == (exponent, True)
    # and one more power does vanish in F_q[x]/x^{p^n}
    c = euler_class_U_minus_1(F, order=p**n)
    assert (c ** (exponent + 1)).is_zero()


def test_torsion_points_examples():
    F = make_honda(2, 1)
    ctx, pts = torsion_points(F, 0)
    assert ctx.modulus == 1 and len(pts) == 1 and pts[0].is_zero()
    ctx, pts = torsion_points(F, 1)
    assert str(ctx) == "F_2[t]/t^2"
    assert [str(a) for a in pts] == ["0", "t"]
    G = make_honda(2, 2)
    ctx, pts = torsion_points(G, 1)
    assert str(ctx) == "F_4[t]/t^4"
    assert [str(a) for a in pts] == ["0", "t"]
    assert G.add(pts[1], pts[1]).is_zero()
    with pytest.raises(StructuralError):
        torsion_points(G, 2)


@pytest.mark.parametrize("p,n,k", [(2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 1, 2), (3, 2, 1), (2, 3, 1)])
def test_torsion_points_form_a_subgroup(p, n, k):
    F = make_honda(p, n, order=max(p ** (k * n), p**n + p))
    ctx, pts = torsion_points(F, k)
    assert len(pts) == p**k
    assert len({tuple(sorted(a.terms.items())) for a in pts}) == p**k
    assert subgroup_divisor_closure_check(pts, F)
    assert r_series(F, p**k, order=ctx.modulus, var="t").is_zero()


def test_closure_negative_cases():
    F = make_honda(2, 1)
    ctx, pts = torsion_points(F, 1)
    assert subgroup_divisor_closure_check([ctx.zero()], F)
    assert not subgroup_divisor_closure_check([pts[1]], F)
    G = make_honda(2, 2)
    ctx, pts = torsion_points(G, 1)
    t = ctx.gen()
    assert not subgroup_divisor_closure_check([ctx.zero(), t, t * t], G)


def test_divisor_examples():
    F2 = prime_field(2)
    ctx = QuotientContext(F2, 2)
    D = divisor_from_points([ctx.zero()], ctx)
    assert D.degree == 1 and D.coefficient(1) == 1 and D.coefficient(0).is_zero()
    F = make_honda(2, 1)
    ctx, pts = torsion_points(F, 1)
    D = divisor_from_points(pts, ctx)
    assert [str(D.coefficient(k)) for k in (2, 1, 0)] == ["1", "t", "0"]
    assert D.a_prime == ctx.gen()


def elementary_symmetric(points, i, ctx):
    from itertools import combinations

    total = ctx.zero()
    for combo in combinations(points, i):
        term = ctx.one()
        for a in combo:
            term = term * a
        total = total + term
    return total


@pytest.mark.parametrize("p,n,k", [(2, 1, 2), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 1, 2), (3, 2, 1)])
def test_divisor_of_torsion(p, n, k):
    F = make_honda(p, n, order=max(p ** (k * n), p**n + p))
    ctx, pts = torsion_points(F, k)
    D = divisor_from_points(pts, ctx)
    m = p**k
    assert D.degree == m
    for a in pts:
        assert D.evaluate(a).is_zero()
    assert D.coefficient(0).is_zero()
    nonzero = prod(pts[1:], start=ctx.one())
    assert D.a_prime == nonzero == regular_rep_euler_class(F, k)
    # Chern classes are signed elementary symmetric functions
    for i in range(m + 1):
        e = elementary_symmetric(pts, i, ctx)
        assert D.chern[i] == (e if i % 2 == 0 else -e)


def test_divisor_rejects_units():
    ctx = QuotientContext(prime_field(3), 3)
    with pytest.raises(DomainError):
        divisor_from_points([ctx.one()], ctx)


def test_regular_rep_examples():
    assert str(regular_rep_euler_class(make_honda(2, 1), 1)) == "t"
    boundary = regular_rep_euler_class(make_honda(2, 1), 2)
    assert boundary.is_zero()
    assert regular_rep_valuation(2, 1, 2) == 4 == boundary.order
    c = regular_rep_euler_class(make_honda(2, 2), 1)
    assert weierstrass_degree(c) == 1
    assert weierstrass_degree(c**3) == 3


@pytest.mark.parametrize("p,n,k", [(2, 2, 2), (3, 1, 1), (3, 2, 1), (2, 3, 1), (3, 1, 2), (2, 1, 3)])
def test_regular_rep_valuation(p, n, k):
    F = make_honda(p, n, order=max(p ** (k * n), p**n + p))
    c = regular_rep_euler_class(F, k)
    v = regular_rep_valuation(p, n, k)
    if v < p ** (k * n):
        assert weierstrass_degree(c) == v
    else:
        assert c.is_zero()


@pytest.mark.parametrize("law", ["honda2", "honda3", "mult"])
def test_negation(law):
    if law == "honda2":
        F = make_honda(2, 2, order=12)
    elif law == "honda3":
        F = make_honda(3, 1, order=12)
    else:
        F = make_multiplicative(cyclic_ring(3, 2), 8)
    inv = F.negation()
    x = series_ring(F.ring, "x", F.order)[0]
    assert F.add(x, inv).is_zero()
    assert F.negate(inv) == x
    if law == "mult":
        # -x/(1+x)
        assert inv == TruncSeries.from_coeffs(F.ring, "x", 8, [0] + [(-1) ** k for k in range(1, 8)])


def test_honda_negation_is_not_identity_in_char_2():
    # [2](x) = x^4 != 0, so [-1](x) cannot be x
    F = make_honda(2, 2, order=12)
    x = series_ring(F.ring, "x", 12)[0]
    assert F.negation() != x
    assert F.add(F.negation(), x).is_zero()
