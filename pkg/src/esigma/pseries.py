"""Sparse truncated multivariate power series over a CoeffRing.

A series carries an ordered tuple of variable names and a truncation order
N: only monomials of total degree < N are kept.  Truncating by total degree
(rather than per variable) makes the discarded part an ideal, so every
operation below is well defined, including substitution of series with zero
constant term.
"""

import json
from operator import add as _add

from .errors import DomainError, StructuralError
from .rings import CoeffRing


class TruncSeries:
    __slots__ = ("ring", "vars", "order", "terms")

    def __init__(self, ring: CoeffRing, vars, order: int, terms=None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise StructuralError(f"duplicate variable names in {vars}")
        if order < 1:
            raise StructuralError(f"truncation order must be >= 1, got {order}")
        self.ring = ring
        self.vars = vars
        self.order = order
        clean = {}
        if terms:
            zero = ring.zero
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != len(vars):
                    raise StructuralError(f"exponent {exp} does not match variables {vars}")
                if c != zero and sum(exp) < order:
                    clean[exp] = c
        self.terms = clean

    # construction helpers

    @classmethod
    def zero(cls, ring, vars, order):
        return cls(ring, vars, order)

    @classmethod
    def constant(cls, ring, vars, order, c):
        vars = tuple(vars)
        return cls(ring, vars, order, {(0,) * len(vars): c})

    @classmethod
    def gen(cls, ring, vars, order, name):
        vars = tuple(vars)
        exp = tuple(1 if v == name else 0 for v in vars)
        if sum(exp) != 1:
            raise StructuralError(f"{name!r} is not one of {vars}")
        return cls(ring, vars, order, {exp: ring.one})

    @classmethod
    def monomial(cls, ring, vars, order, exp, c=None):
        return cls(ring, vars, order, {tuple(exp): ring.one if c is None else c})

    @classmethod
    def from_coeffs(cls, ring, var, order, coeffs):
        """One-variable series sum coeffs[i] * var^i; coefficients given as ints."""
        return cls(ring, (var,), order, {(i,): ring.from_int(c) for i, c in enumerate(coeffs)})

    def _new(self, terms):
        out = TruncSeries.__new__(TruncSeries)
        out.ring, out.vars, out.order, out.terms = self.ring, self.vars, self.order, terms
        return out

    def gens(self):
        return [TruncSeries.gen(self.ring, self.vars, self.order, v) for v in self.vars]

    # structure

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            raise StructuralError(f"expected TruncSeries, got {type(other).__name__}")
        if other.ring != self.ring:
            raise StructuralError(f"ring mismatch: {self.ring} vs {other.ring}")
        if other.vars != self.vars:
            raise StructuralError(f"variable mismatch: {self.vars} vs {other.vars}")
        if other.order != self.order:
            raise StructuralError(f"truncation mismatch: {self.order} vs {other.order}")

    def _coerce(self, other):
        if isinstance(other, int):
            return TruncSeries.constant(self.ring, self.vars, self.order, self.ring.from_int(other))
        self._check(other)
        return other

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.vars == other.vars
            and self.order == other.order
            and self.terms == other.terms
        )

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exp):
        if isinstance(exp, int):
            exp = (exp,)
        return self.terms.get(tuple(exp), self.ring.zero)

    def constant_term(self):
        return self.coeff((0,) * len(self.vars))

    def valuation(self):
        """Lowest total degree present, or None for the zero series."""
        return min((sum(e) for e in self.terms), default=None)

    def sorted_terms(self):
        return sorted(self.terms.items())

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        ring = self.ring
        terms = dict(self.terms)
        zero = ring.zero
        for e, c in other.terms.items():
            s = ring.add(terms.get(e, zero), c)
            if s == zero:
                terms.pop(e, None)
            else:
                terms[e] = s
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: self.ring.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            c = self.ring.from_int(other)
            return self.scale(c)
        other = self._coerce(other)
        ring, order = self.ring, self.order
        zero = ring.zero
        a = sorted(((sum(e), e, c) for e, c in self.terms.items()), key=lambda t: t[0])
        b = sorted(((sum(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0])
        terms = {}
        rmul, radd = ring.mul, ring.add
        for da, ea, ca in a:
            room = order - da
            for db, eb, cb in b:
                if db >= room:
                    break
                e = tuple(map(_add, ea, eb))
                v = rmul(ca, cb)
                if e in terms:
                    v = radd(terms[e], v)
                terms[e] = v
        return self._new({e: c for e, c in terms.items() if c != zero})

    __rmul__ = __mul__

    def scale(self, c):
        zero = self.ring.zero
        out = {}
        for e, v in self.terms.items():
            w = self.ring.mul(c, v)
            if w != zero:
                out[e] = w
        return self._new(out)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncSeries.constant(self.ring, self.vars, self.order, self.ring.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self):
        """Multiplicative inverse of a series with unit constant term."""
        c0 = self.constant_term()
        if not self.ring.is_unit(c0):
            raise DomainError("series with non-unit constant term is not invertible")
        h = TruncSeries.constant(self.ring, self.vars, self.order, self.ring.inv(c0))
        precision = 1
        while True:
            # Newton: h <- h (2 - s h), doubling the correct precision
            h = h * (2 - self * h)
            precision *= 2
            if precision >= self.order:
                return h

    def derivative(self, var=None):
        i = self._var_index(var)
        ring = self.ring
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = ring.mul(ring.from_int(e[i]), c)
                if v != ring.zero:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return self._new(out)

    def _var_index(self, var):
        if var is None:
            if len(self.vars) != 1:
                raise StructuralError(f"series in {self.vars} needs an explicit variable")
            return 0
        if var not in self.vars:
            raise StructuralError(f"{var!r} is not one of {self.vars}")
        return self.vars.index(var)

    # change of context

    def truncate(self, order: int):
        return TruncSeries(self.ring, self.vars, order, self.terms)

    def map_coefficients(self, ring: CoeffRing, fn):
        return TruncSeries(ring, self.vars, self.order, {e: fn(c) for e, c in self.terms.items()})

    def embed(self, vars, order=None):
        """The same series viewed in a larger (or reordered) set of variables."""
        vars = tuple(vars)
        missing = [v for v in self.vars if v not in vars]
        if missing:
            raise StructuralError(f"variables {missing} are absent from {vars}")
        pos = [vars.index(v) for v in self.vars]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, x in zip(pos, e):
                ne[i] = x
            terms[tuple(ne)] = c
        return TruncSeries(self.ring, vars, self.order if order is None else order, terms)

    def rename(self, vars):
        vars = tuple(vars)
        if len(vars) != len(self.vars):
            raise StructuralError("rename needs the same number of variables")
        return TruncSeries(self.ring, vars, self.order, self.terms)

    # printing and serialization

    def to_json_obj(self):
        return [{"exp": list(e), "coeff": self.ring.to_str(c)} for e, c in self.sorted_terms()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0]))):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            cs = self.ring.to_str(c)
            if not mono:
                parts.append(cs)
            elif c == self.ring.one:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TruncSeries({self}; {self.ring}, {self.vars}, O({self.order}))"


def series_from_json(ring, vars, order, data):
    if isinstance(data, str):
        data = json.loads(data)
    terms = {}
    for item in data:
        coeff = item["coeff"]
        if ring.kind == "Fq":
            digits = [0] * ring.degree
            for part in coeff.split("+"):
                if "*w" in part:
                    c, _, rest = part.partition("*w")
                    digits[int(rest[1:]) if rest else 1] = int(c)
                else:
                    digits[0] = int(part)
            value = ring.from_digits(digits)
        else:
            value = ring.from_int(int(coeff))
        terms[tuple(item["exp"])] = value
    return TruncSeries(ring, vars, order, terms)


def add(s1: TruncSeries, s2: TruncSeries) -> TruncSeries:
    return s1 + s2


def negate(s: TruncSeries) -> TruncSeries:
    return -s


def mul(s1: TruncSeries, s2: TruncSeries) -> TruncSeries:
    return s1 * s2


def compose(outer: TruncSeries, inner) -> TruncSeries:
    """Substitute inner[i] for the i-th variable of outer.

    The inner series share one ring, variable set and order, which the result
    inherits.  Each must have zero constant term.
    """
    inner = list(inner)
    if len(inner) != len(outer.vars):
        raise StructuralError(f"need {len(outer.vars)} inner series, got {len(inner)}")
    if not inner:
        raise StructuralError("compose needs at least one inner series")
    first = inner[0]
    for s in inner[1:]:
        first._check(s)
    if outer.ring != first.ring:
        raise StructuralError(f"ring mismatch: {outer.ring} vs {first.ring}")
    for s in inner:
        if s.constant_term() != s.ring.zero:
            raise DomainError("inner series must have zero constant term")
    ring, vars, order = first.ring, first.vars, first.order

    if len(inner) == 1:
        # Horner, from the top degree down
        g = inner[0]
        degs = sorted((e[0] for e in outer.terms), reverse=True)
        result = TruncSeries.zero(ring, vars, order)
        prev = None
        for d in degs:
            if prev is not None:
                result = result * g ** (prev - d)
            result = result + TruncSeries.constant(ring, vars, order, outer.terms[(d,)])
            prev = d
        if prev:
            result = result * g**prev
        return result

    powers = [[TruncSeries.constant(ring, vars, order, ring.one)] for _ in inner]

    def power(i, k):
        cache = powers[i]
        while len(cache) <= k:
            cache.append(cache[-1] * inner[i])
        return cache[k]

    terms = {}
    zero = ring.zero
    for e, c in outer.sorted_terms():
        if sum(e) >= order:
            continue
        prod = None
        for i, k in enumerate(e):
            if k:
                f = power(i, k)
                prod = f if prod is None else prod * f
        if prod is None:
            prod = TruncSeries.constant(ring, vars, order, ring.one)
        for me, mc in prod.terms.items():
            v = ring.mul(c, mc)
            if me in terms:
                v = ring.add(terms[me], v)
            terms[me] = v
    return TruncSeries(ring, vars, order, {e: c for e, c in terms.items() if c != zero})


def reversion(s: TruncSeries) -> TruncSeries:
    """Compositional inverse g of s = c x + ..., with c a unit.

    Newton iteration g <- g - (s(g) - x) / s'(g); each step doubles the
    number of correct coefficients.
    """
    if len(s.vars) != 1:
        raise StructuralError("reversion needs a one-variable series")
    if s.constant_term() != s.ring.zero:
        raise DomainError("reversion needs zero constant term")
    c = s.coeff((1,))
    if not s.ring.is_unit(c):
        raise DomainError(f"linear coefficient {s.ring.to_str(c)} is not a unit")
    x = TruncSeries.gen(s.ring, s.vars, s.order, s.vars[0])
    ds = s.derivative()
    g = x.scale(s.ring.inv(c))
    precision = 2
    while precision < s.order:
        g = g - (compose(s, [g]) - x) * compose(ds, [g]).inverse()
        precision *= 2
    return g


def weierstrass_degree(s: TruncSeries):
    """Lowest exponent with a nonzero coefficient; None for the zero series."""
    if len(s.vars) != 1:
        raise StructuralError("Weierstrass degree needs a one-variable series")
    return s.valuation()


def leading_coefficient(s: TruncSeries):
    d = weierstrass_degree(s)
    return None if d is None else s.coeff((d,))


def quotient_ring_reduce(s: TruncSeries, d: int, var=None) -> TruncSeries:
    """Image of s in R[[...]]/(var^d): drop every term with var-exponent >= d."""
    if d > s.order:
        raise StructuralError(f"modulus exponent {d} exceeds truncation order {s.order}")
    if d < 0:
        raise DomainError("modulus exponent must be nonnegative")
    i = s._var_index(var)
    return s._new({e: c for e, c in s.terms.items() if e[i] < d})


def series_ring(ring: CoeffRing, vars, order: int):
    """Generators of the truncated series ring, e.g. ``x, y = series_ring(F, "xy", 5)``."""
    vars = tuple(vars)
    return [TruncSeries.gen(ring, vars, order, v) for v in vars]
