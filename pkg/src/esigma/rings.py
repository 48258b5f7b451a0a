"""Finite coefficient rings: F_p, Z/p^a and F_q = F_p[w]/f(w).

Ring elements are stored as plain Python ints in canonical form.  For F_q an
element c_0 + c_1 w + ... is encoded as the integer sum c_i p^i, so the
series code can treat every ring uniformly.  A rational "ring" is kept for
internal use only: formal group logarithms have p-power denominators and
are built over Q before being reduced.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, StructuralError
from .exact_arith import check_prime

# Irreducible (Conway) polynomials, coefficients listed from w^0 up to the
# leading 1.  Reproducible output depends on this table never changing.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}

_TABLE_LIMIT = 1024


def _poly_mulmod(a, b, f, p):
    """Product of coefficient lists a*b mod the monic f, over F_p."""
    d = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for top in range(len(prod) - 1, d - 1, -1):
        c = prod[top]
        if c:
            for i in range(d + 1):
                prod[top - d + i] = (prod[top - d + i] - c * f[i]) % p
    return (prod + [0] * d)[:d]


def _poly_rem(a, f, p):
    """Remainder of a by the (not necessarily monic) f over F_p, trimmed."""
    a = list(a)
    inv = pow(f[-1], -1, p)
    df = len(f) - 1
    while len(a) - 1 >= df and any(a):
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i in range(df + 1):
            a[shift + i] = (a[shift + i] - c * f[i]) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible(f, p) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg(f)/2."""
    d = len(f) - 1
    if d < 1 or f[-1] % p == 0:
        return False
    if d == 1:
        return True
    for dg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=dg):
            if not _poly_rem(f, list(low) + [1], p):
                return False
    return True


def find_irreducible(p, d):
    """Lexicographically first monic irreducible of degree d."""
    for low in itertools.product(range(p), repeat=d):
        f = tuple(reversed(low)) + (1,)
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True, eq=False)
class CoeffRing:
    kind: str  # "Fp", "Zpa", "Fq" or "QQ"
    p: int
    a: int = 1
    modulus: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, CoeffRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        return (self.kind, self.p, self.a, self.modulus)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1 if self.kind == "Fq" else 1

    @property
    def size(self):
        if self.kind == "QQ":
            return None
        if self.kind == "Fq":
            return self.p**self.degree
        return self.p**self.a

    @property
    def characteristic(self) -> int:
        if self.kind == "QQ":
            return 0
        return self.p**self.a if self.kind == "Zpa" else self.p

    @property
    def is_field(self) -> bool:
        return self.kind in ("Fp", "Fq", "QQ") or self.a == 1

    def __str__(self):
        if self.kind == "Fp":
            return f"F_{self.p}"
        if self.kind == "Zpa":
            return f"Z/{self.p}^{self.a}"
        if self.kind == "Fq":
            return f"F_{self.size}"
        return "Q"

    # element constructors

    @property
    def zero(self):
        return Fraction(0) if self.kind == "QQ" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "QQ" else 1

    def from_int(self, n: int):
        if self.kind == "QQ":
            return Fraction(n)
        return n % self.characteristic

    def from_fraction(self, c: Fraction):
        """Reduce a p-integral rational into the ring."""
        c = Fraction(c)
        if self.kind == "QQ":
            return c
        if c.denominator % self.p == 0:
            raise DomainError(f"{c} is not p-integral for p={self.p}")
        m = self.characteristic
        return c.numerator * pow(c.denominator, -1, m) % m

    def from_digits(self, digits):
        """F_q element c_0 + c_1 w + ... from its coefficient list."""
        if self.kind != "Fq":
            if len(digits) > 1 and any(digits[1:]):
                raise StructuralError(f"{self} has no generator w")
            return self.from_int(digits[0] if digits else 0)
        digits = list(digits)
        if len(digits) > self.degree:
            digits = _poly_rem(digits, list(self.modulus), self.p)
        return sum((c % self.p) * self.p**i for i, c in enumerate(digits))

    def digits(self, x):
        out = []
        for _ in range(self.degree):
            out.append(x % self.p)
            x //= self.p
        return out

    def gen(self):
        """The class of w in F_q."""
        if self.kind != "Fq":
            raise StructuralError(f"{self} has no generator w")
        return self.from_digits([0, 1])

    # arithmetic

    def add(self, x, y):
        if self.kind == "Fq":
            if self.p == 2:
                return x ^ y
            t = self._add_table()
            if t is not None:
                return t[x][y]
            return self._fq_add(x, y)
        if self.kind == "QQ":
            return x + y
        return (x + y) % self.characteristic

    def neg(self, x):
        if self.kind == "Fq":
            if self.p == 2:
                return x
            return self.from_digits([-c for c in self.digits(x)])
        if self.kind == "QQ":
            return -x
        return -x % self.characteristic

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.kind == "Fq":
            if not x or not y:
                return 0
            log, exp = self._log_tables()
            if log is not None:
                return exp[(log[x] + log[y]) % (self.size - 1)]
            return self._fq_mul(x, y)
        if self.kind == "QQ":
            return x * y
        return x * y % self.characteristic

    def is_unit(self, x) -> bool:
        if self.kind == "Zpa":
            return x % self.p != 0
        return x != 0

    def inv(self, x):
        if not self.is_unit(x):
            raise DomainError(f"{self.to_str(x)} is not a unit in {self}")
        if self.kind == "Fq":
            log, exp = self._log_tables()
            if log is not None:
                return exp[(-log[x]) % (self.size - 1)]
            return self.pow(x, self.size - 2)
        if self.kind == "QQ":
            return 1 / x
        return pow(x, -1, self.characteristic)

    def pow(self, x, e: int):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def to_str(self, x) -> str:
        if self.kind == "Fq":
            parts = []
            for i, c in enumerate(self.digits(x)):
                if c:
                    parts.append(str(c) if i == 0 else f"{c}*w" if i == 1 else f"{c}*w^{i}")
            return "+".join(parts) if parts else "0"
        return str(x)

    def elements(self):
        if self.kind == "QQ":
            raise StructuralError("Q is infinite")
        return range(self.size)

    # F_q internals

    def _fq_add(self, x, y):
        out, place = 0, 1
        for _ in range(self.degree):
            out += ((x % self.p + y % self.p) % self.p) * place
            x //= self.p
            y //= self.p
            place *= self.p
        return out

    def _fq_mul(self, x, y):
        return self.from_digits(_poly_mulmod(self.digits(x), self.digits(y), list(self.modulus), self.p))

    def _add_table(self):
        if "add" not in self._cache:
            q = self.size
            self._cache["add"] = (
                [[self._fq_add(x, y) for y in range(q)] for x in range(q)] if q <= _TABLE_LIMIT else None
            )
        return self._cache["add"]

    def _log_tables(self):
        if "log" not in self._cache:
            q = self.size
            if q > 2**16:
                self._cache["log"] = (None, None)
            else:
                self._cache["log"] = self._build_log_tables(q)
        return self._cache["log"]

    def _build_log_tables(self, q):
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._fq_mul(x, g)
            if len(exp) == q - 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                return log, exp
        raise AssertionError(f"no primitive element in {self}")


def validate_modulus(p, f):
    f = tuple(c % p for c in f)
    if len(f) < 2 or f[-1] != 1:
        raise DomainError("modulus must be monic of degree >= 1")
    if len(f) - 1 > 8:
        raise DomainError("irreducibility is only checked for degree <= 8")
    if not is_irreducible(f, p):
        raise DomainError(f"{f} is reducible over F_{p}")
    return f


@lru_cache(maxsize=None)
def prime_field(p: int) -> CoeffRing:
    check_prime(p)
    return CoeffRing("Fp", p)


@lru_cache(maxsize=None)
def cyclic_ring(p: int, a: int) -> CoeffRing:
    """Z/p^a."""
    check_prime(p)
    if a < 1:
        raise DomainError(f"need a >= 1, got {a}")
    return CoeffRing("Zpa", p, a)


@lru_cache(maxsize=None)
def finite_field(p: int, d: int, modulus=None) -> CoeffRing:
    """F_{p^d} = F_p[w]/f(w) with f taken from the Conway table unless given."""
    check_prime(p)
    if d < 1:
        raise DomainError(f"need degree >= 1, got {d}")
    if modulus is None:
        modulus = CONWAY.get((p, d)) or find_irreducible(p, d)
    f = validate_modulus(p, modulus)
    if len(f) - 1 != d:
        raise DomainError(f"modulus has degree {len(f) - 1}, expected {d}")
    return CoeffRing("Fq", p, 1, f)


@lru_cache(maxsize=None)
def rationals(p: int) -> CoeffRing:
    """Q, tagged with the prime whose integrality is tracked."""
    return CoeffRing("QQ", p)


class RingElem:
    """An element of a CoeffRing with operator syntax."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: CoeffRing, value):
        self.ring = ring
        self.value = value

    def _wrap(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise StructuralError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other.value
        return self.ring.from_int(other)

    def __add__(self, other):
        return RingElem(self.ring, self.ring.add(self.value, self._wrap(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElem(self.ring, self.ring.sub(self.value, self._wrap(other)))

    def __rsub__(self, other):
        return RingElem(self.ring, self.ring.sub(self._wrap(other), self.value))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.value))

    def __mul__(self, other):
        return RingElem(self.ring, self.ring.mul(self.value, self._wrap(other)))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return RingElem(self.ring, self.ring.pow(self.ring.inv(self.value), -e))
        return RingElem(self.ring, self.ring.pow(self.value, e))

    def inverse(self):
        return RingElem(self.ring, self.ring.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ring.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __bool__(self):
        return bool(self.value)

    def __repr__(self):
        return f"RingElem({self.ring}, {self.ring.to_str(self.value)})"

    def __str__(self):
        return self.ring.to_str(self.value)
