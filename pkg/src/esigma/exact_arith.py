"""p-adic valuations, Legendre/Kummer formulas and Gaussian binomials.

Everything here is exact integer arithmetic on Python ints.
"""

from dataclasses import dataclass

from .errors import DomainError

# Miller-Rabin with these bases is deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in _MR_BASES:
        if p % q == 0:
            return p == q
    if p >= _MR_LIMIT:
        raise DomainError(f"primality of {p} is outside the deterministic range")
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def check_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")
    return p


@dataclass(frozen=True)
class PrimePower:
    p: int
    exponent: int = 1

    def __post_init__(self):
        check_prime(self.p)
        if self.exponent < 0:
            raise DomainError("exponent must be nonnegative")

    @property
    def value(self) -> int:
        return self.p**self.exponent


@dataclass(frozen=True)
class GaussianParams:
    """Prime ``p``, height ``n`` and subgroup exponent ``k``."""

    p: int
    n: int
    k: int

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise DomainError(f"height n must be >= 1, got {self.n}")
        if self.k < 0:
            raise DomainError(f"k must be >= 0, got {self.k}")


def vp(m: int, p: int) -> int:
    """Largest e with p**e dividing m."""
    if m == 0:
        raise DomainError("valuation of 0 is infinite")
    m = abs(m)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def vp_factorial(m: int, p: int) -> int:
    """Legendre: v_p(m!) = sum_i floor(m / p^i)."""
    if m < 0:
        raise DomainError("factorial of a negative number")
    total = 0
    q = p
    while q <= m:
        total += m // q
        q *= p
    return total


def vp_binomial(m: int, i: int, p: int) -> int:
    """Kummer: v_p(C(m, i)) is the number of carries adding i and m-i in base p."""
    if not 0 <= i <= m:
        raise DomainError(f"need 0 <= i <= m, got i={i}, m={m}")
    a, b = i, m - i
    carry = carries = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def q_binomial(top: int, bottom: int, q: int) -> int:
    """Gaussian binomial [top over bottom]_q evaluated at an integer q."""
    if bottom < 0 or bottom > top:
        return 0
    num = den = 1
    for j in range(1, bottom + 1):
        num *= q ** (top - bottom + j) - 1
        den *= q**j - 1
    assert num % den == 0
    return num // den


def gaussian_binomial(params: GaussianParams) -> int:
    """Number of index-p^k lattices in Z_p^n: prod_{j=1}^{n-1} (p^{k+j}-1)/(p^j-1).

    Divided factor by factor; the running product is always an integer
    because it is itself a Gaussian binomial [k+j over j]_p.
    """
    p, n, k = params.p, params.n, params.k
    result = 1
    for j in range(1, n):
        result *= p ** (k + j) - 1
        den = p**j - 1
        if result % den:
            raise ArithmeticError(f"inexact division at j={j} for {params}")
        result //= den
    return result


def dbar(p: int, n: int, k: int) -> int:
    return gaussian_binomial(GaussianParams(p, n, k))


def is_power_of(m: int, p: int) -> bool:
    if m < 1:
        return False
    while m % p == 0:
        m //= p
    return m == 1


def ilog_ceil(m: int, p: int) -> int:
    """Smallest e >= 0 with p**e >= m."""
    e, q = 0, 1
    while q < m:
        q *= p
        e += 1
    return e
