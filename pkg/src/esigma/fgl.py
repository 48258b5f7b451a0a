"""Formal group laws and Euler-class / divisor computations over them.

The Honda law of height n is built from its logarithm
f(x) = sum_i x^{p^{ni}} / p^i as F = f^{-1}(f(x) + f(y)) over Q, checked to
be p-integral, and reduced mod p.  Torsion points live in the quotient ring
F_q[t]/t^{p^{kn}}, modelled as one-variable series truncated at p^{kn}.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import DomainError, StructuralError
from .exact_arith import check_prime, vp
from .pseries import TruncSeries, compose, reversion, weierstrass_degree
from .rings import CoeffRing, finite_field, prime_field, rationals

XY = ("x", "y")


@dataclass(frozen=True)
class QuotientContext:
    """The ring R[t]/t^modulus, with elements stored as truncated series."""

    ring: CoeffRing
    modulus: int
    var: str = "t"

    def zero(self) -> TruncSeries:
        return TruncSeries.zero(self.ring, (self.var,), self.modulus)

    def one(self) -> TruncSeries:
        return TruncSeries.constant(self.ring, (self.var,), self.modulus, self.ring.one)

    def gen(self) -> TruncSeries:
        if self.modulus < 2:
            return self.zero()
        return TruncSeries.gen(self.ring, (self.var,), self.modulus, self.var)

    def scalar(self, c) -> TruncSeries:
        return TruncSeries.constant(self.ring, (self.var,), self.modulus, c)

    def __str__(self):
        if self.modulus == 1:
            return str(self.ring)
        return f"{self.ring}[{self.var}]/{self.var}^{self.modulus}"


class FormalGroupLaw:
    def __init__(self, series: TruncSeries, label: str = "custom", check: bool = True):
        if series.vars != XY:
            raise StructuralError(f"formal group law must be a series in {XY}, got {series.vars}")
        self.series = series
        self.label = label
        self._negation = None
        if check:
            failures = self.axiom_failures()
            if failures:
                raise DomainError(f"not a formal group law up to O({self.order}): {', '.join(failures)}")

    @property
    def ring(self) -> CoeffRing:
        return self.series.ring

    @property
    def order(self) -> int:
        return self.series.order

    def __repr__(self):
        return f"FormalGroupLaw({self.label}, {self.ring}, O({self.order}))"

    def axiom_failures(self) -> list:
        """Names of the axioms (unit, commutativity, associativity) that fail."""
        F, ring, N = self.series, self.ring, self.order
        x, y = F.gens()
        zero = TruncSeries.zero(ring, XY, N)
        out = []
        if compose(F, [x, zero]) != x or compose(F, [zero, y]) != y:
            out.append("unit")
        if compose(F, [y, x]) != F:
            out.append("commutativity")
        xyz = ("x", "y", "z")
        X, Y, Z = (TruncSeries.gen(ring, xyz, N, v) for v in xyz)
        Fxy = F.embed(xyz)
        Fyz = compose(F, [Y, Z])
        if compose(F, [Fxy, Z]) != compose(F, [X, Fyz]):
            out.append("associativity")
        return out

    def add(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        """Formal sum a +_F b of two elements of a common series context."""
        if a.ring != self.ring:
            raise StructuralError(f"ring mismatch: {a.ring} vs {self.ring}")
        if a.order > self.order:
            raise StructuralError(f"context order {a.order} exceeds the law's truncation {self.order}")
        return compose(self.series, [a, b])

    def negation(self) -> TruncSeries:
        """The series i(x) with F(x, i(x)) = 0, by Newton iteration."""
        if self._negation is None:
            F, ring, N = self.series, self.ring, self.order
            x = TruncSeries.gen(ring, ("x",), N, "x")
            dFy = F.derivative("y")
            inv = x.scale(ring.neg(ring.one))
            precision = 2
            while precision < N:
                inv = inv - compose(F, [x, inv]) * compose(dFy, [x, inv]).inverse()
                precision *= 2
            if compose(F, [x, inv]):
                raise ArithmeticError("negation series did not converge")
            self._negation = inv
        return self._negation

    def negate(self, a: TruncSeries) -> TruncSeries:
        neg = self.negation()
        if a.order > self.order:
            raise StructuralError(f"context order {a.order} exceeds the law's truncation {self.order}")
        return compose(neg, [a])


def make_additive(ring: CoeffRing, order: int) -> FormalGroupLaw:
    if order < 2:
        raise DomainError("truncation order must be >= 2")
    x, y = (TruncSeries.gen(ring, XY, order, v) for v in XY)
    return FormalGroupLaw(x + y, "additive")


def make_multiplicative(ring: CoeffRing, order: int) -> FormalGroupLaw:
    if order < 2:
        raise DomainError("truncation order must be >= 2")
    x, y = (TruncSeries.gen(ring, XY, order, v) for v in XY)
    return FormalGroupLaw(x + y + x * y, "multiplicative")


def honda_logarithm(p: int, n: int, order: int) -> TruncSeries:
    """sum_{i>=0} x^{p^{ni}} / p^i over Q, truncated."""
    Q = rationals(p)
    terms = {}
    i = 0
    while p ** (n * i) < order:
        terms[(p ** (n * i),)] = Fraction(1, p**i)
        i += 1
    return TruncSeries(Q, ("x",), order, terms)


@lru_cache(maxsize=None)
def _honda_integral(p: int, n: int, order: int) -> TruncSeries:
    """The Honda law over Q, asserted p-integral, as an F_p series."""
    f = honda_logarithm(p, n, order)
    g = reversion(f)
    fx = f.embed(XY)
    fy = f.rename(("y",)).embed(XY)
    F = compose(g, [fx + fy])
    for e, c in F.terms.items():
        if c.denominator % p == 0:
            raise AssertionError(f"Honda coefficient {c} at {e} is not {p}-integral")
    Fp = prime_field(p)
    return F.map_coefficients(Fp, Fp.from_fraction)


def default_honda_order(p: int, n: int, requested: Optional[int] = None) -> int:
    base = p**n + p
    return base if requested is None else max(base, requested)


def make_honda(p: int, n: int, ring: Optional[CoeffRing] = None, order: Optional[int] = None, check: bool = True) -> FormalGroupLaw:
    """Height-n Honda formal group law over F_q (default q = p^n)."""
    check_prime(p)
    if n < 1:
        raise DomainError(f"height must be >= 1, got {n}")
    if ring is None:
        ring = finite_field(p, n)
    if ring.kind not in ("Fp", "Fq") or ring.p != p:
        raise DomainError(f"Honda law needs a field of characteristic {p}, got {ring}")
    if order is None:
        order = default_honda_order(p, n)
    if order < 2:
        raise DomainError("truncation order must be >= 2")
    base = _honda_integral(p, n, order)
    # F_p sits inside F_q as the constant residues, which share their encoding
    series = TruncSeries(ring, XY, order, base.terms)
    return FormalGroupLaw(series, f"honda({n})", check=check)


def _context(F: FormalGroupLaw, order, var):
    order = F.order if order is None else order
    if order > F.order:
        raise StructuralError(f"requested order {order} exceeds the law's truncation {F.order}")
    return TruncSeries.gen(F.ring, (var,), order, var) if order > 1 else TruncSeries.zero(F.ring, (var,), order)


def r_series_at(F: FormalGroupLaw, r: int, a: TruncSeries) -> TruncSeries:
    """[r](a) by a binary addition chain."""
    if r < 0:
        return F.negate(r_series_at(F, -r, a))
    result = None
    for bit in bin(r)[2:] if r else "":
        result = F.add(result, result) if result is not None else None
        if bit == "1":
            result = a if result is None else F.add(result, a)
    return result if result is not None else a * 0


def r_series(F: FormalGroupLaw, r: int, order: Optional[int] = None, var: str = "x") -> TruncSeries:
    """The r-series [r](x), the r-fold formal sum of x with itself."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    return r_series_at(F, r, _context(F, order, var))


def euler_class_U_minus_1(F: FormalGroupLaw, order: Optional[int] = None, var: str = "x") -> TruncSeries:
    """prod_{r=1}^{p-1} [r](x), the Euler class of the reduced regular representation of C_p."""
    p = F.ring.p
    x = _context(F, order, var)
    out = TruncSeries.constant(F.ring, (var,), x.order, F.ring.one)
    for r in range(1, p):
        out = out * r_series_at(F, r, x)
    return out


def socle_nonvanishing_check(F: FormalGroupLaw, p: int, n: int):
    """Return ((p^n-1)/(p-1), whether e(U-1)^that is nonzero in F_q[x]/x^{p^n})."""
    if F.ring.p != p:
        raise DomainError(f"law is over {F.ring}, not characteristic {p}")
    exponent = (p**n - 1) // (p - 1)
    c = euler_class_U_minus_1(F, order=p**n)
    return exponent, not (c**exponent).is_zero()


def torsion_context(F: FormalGroupLaw, k: int, n: int) -> QuotientContext:
    p = F.ring.p
    modulus = p ** (k * n)
    if modulus > F.order:
        raise StructuralError(f"need truncation >= {modulus} for level {k}, law has {F.order}")
    return QuotientContext(F.ring, modulus)


def torsion_points(F: FormalGroupLaw, k: int, n: Optional[int] = None):
    """The p^k-torsion points [j](t), 0 <= j < p^k, in F_q[t]/t^{p^{kn}}."""
    if k < 0:
        raise DomainError("level must be nonnegative")
    n = _height(F, n)
    ctx = torsion_context(F, k, n)
    t = ctx.gen()
    points = [ctx.zero()]
    for _ in range(1, F.ring.p**k):
        points.append(F.add(points[-1], t))
    return ctx, points


def _height(F, n):
    if n is not None:
        return n
    if F.label.startswith("honda("):
        return int(F.label[6:-1])
    raise DomainError("height must be given for a non-Honda law")


def regular_rep_euler_class(F: FormalGroupLaw, k: int, n: Optional[int] = None) -> TruncSeries:
    """prod_{j=1}^{p^k-1} [j](t) in F_q[t]/t^{p^{kn}}."""
    _, points = torsion_points(F, k, n)
    out = points[0] * 0 + 1
    for a in points[1:]:
        out = out * a
    return out


def regular_rep_valuation(p: int, n: int, k: int) -> int:
    """sum_{j=1}^{p^k-1} p^{n v_p(j)}, the t-adic valuation of the product above over Q-free ground."""
    return sum(p ** (n * vp(j, p)) for j in range(1, p**k))


@dataclass
class Divisor:
    """Monic polynomial sum_{k=0}^m chern[m-k] x^k with chern[0] = 1.

    chern[i] is the i-th elementary symmetric function of the points up to
    the sign (-1)^i, i.e. the i-th Chern class.
    """

    context: QuotientContext
    chern: list

    @property
    def degree(self) -> int:
        return len(self.chern) - 1

    def coefficient(self, k: int) -> TruncSeries:
        """Coefficient of x^k."""
        return self.chern[self.degree - k]

    @property
    def a_prime(self) -> TruncSeries:
        """Coefficient of x."""
        if self.degree < 1:
            raise DomainError("a degree-0 divisor has no x coefficient")
        return self.coefficient(1)

    def evaluate(self, a: TruncSeries) -> TruncSeries:
        out = self.context.zero()
        for c in self.chern:
            out = out * a + c
        return out

    def to_json_obj(self):
        return {
            "context": str(self.context),
            "degree": self.degree,
            "coefficients": [self.coefficient(k).to_json_obj() for k in range(self.degree, -1, -1)],
        }


def divisor_from_points(points, context: QuotientContext) -> Divisor:
    """The equation prod_i (x - a_i) of the divisor with the given points."""
    for a in points:
        if a.ring != context.ring or a.order != context.modulus:
            raise StructuralError("point does not live in the given context")
        if a.constant_term() != a.ring.zero:
            raise DomainError("points must be nilpotent (zero constant term)")
    # coefficients of x^m, x^{m-1}, ..., x^0
    poly = [context.one()]
    for a in points:
        new = poly + [context.zero()]
        for i, c in enumerate(poly):
            new[i + 1] = new[i + 1] - c * a
        poly = new
    return Divisor(context, poly)


def subgroup_divisor_closure_check(points, F: FormalGroupLaw) -> bool:
    """True iff the points contain 0 and are closed under formal sum and negation."""
    points = list(points)
    if not points:
        return False
    keys = [tuple(sorted(a.terms.items())) for a in points]
    present = set(keys)
    if () not in present:
        return False
    for a in points:
        if tuple(sorted(F.negate(a).terms.items())) not in present:
            return False
        for b in points:
            if tuple(sorted(F.add(a, b).terms.items())) not in present:
                return False
    return True


def linear_coefficient(s: TruncSeries):
    return s.coeff((1,))


def unit_normalized(s: TruncSeries) -> TruncSeries:
    """s divided by its leading coefficient, for comparing 'unit multiple' claims."""
    d = weierstrass_degree(s)
    if d is None:
        return s
    return s.scale(s.ring.inv(s.coeff((d,))))
