"""Ranks d(k) of E^0 B Sigma_k and the transfer-ideal valuation combinatorics.

d(k) counts isomorphism classes of finite Z_p^n-sets of order k.  A
transitive such set of order p^j is Z_p^n / L for a lattice L of index p^j,
so d(k) is the number of multisets of lattices with sum of indices k.  The
independent route counts conjugacy classes of commuting n-tuples of p-power
order permutations in Sigma_k directly.
"""

import itertools
from dataclasses import dataclass
from math import comb, factorial, lcm
from typing import NamedTuple, Optional

from .errors import BudgetExceeded, DomainError
from .exact_arith import check_prime, dbar, ilog_ceil, is_power_of, vp_binomial, vp_factorial

HOM_COUNT_MAX_K = 7
ORBIT_TYPE_BUDGET = 10**5


@dataclass(frozen=True)
class OrbitTypeMultiset:
    """Orbits as (exponent j, lattice class index), canonically ordered."""

    entries: tuple

    def order(self, p: int) -> int:
        return sum(p**j for j, _ in self.entries)

    def tolist(self):
        return [list(e) for e in self.entries]


@dataclass(frozen=True)
class PartitionSubgroup:
    i: int
    j: int

    def __post_init__(self):
        if self.i <= 0 or self.j <= 0:
            raise DomainError("partition subgroup needs i, j > 0")

    @property
    def m(self) -> int:
        return self.i + self.j


def _check(k, p, n):
    check_prime(p)
    if n < 1:
        raise DomainError(f"height must be >= 1, got {n}")
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")


def rank_series(kmax: int, p: int, n: int) -> list:
    """Coefficients d(0..kmax) of prod_j (1 - t^{p^j})^{-dbar(j)}."""
    _check(kmax, p, n)
    coeffs = [1] + [0] * kmax
    j = 0
    while p**j <= kmax:
        step, c = p**j, dbar(p, n, j)
        # multiply by (1 - t^step)^{-c} = sum_i C(c+i-1, i) t^{step*i}
        factor = [comb(c + i - 1, i) for i in range(kmax // step + 1)]
        new = [0] * (kmax + 1)
        for deg, a in enumerate(coeffs):
            if a:
                for i, b in enumerate(factor):
                    if deg + step * i > kmax:
                        break
                    new[deg + step * i] += a * b
        coeffs = new
        j += 1
    return coeffs


def rank_d(k: int, p: int, n: int) -> int:
    return rank_series(k, p, n)[k]


def _orbit_kinds(k, p, n):
    kinds = []
    j = 0
    while p**j <= k:
        kinds.extend((j, c) for c in range(dbar(p, n, j)))
        j += 1
    # exponents descending, class indices ascending
    kinds.sort(key=lambda e: (-e[0], e[1]))
    return kinds


def enumerate_orbit_types(k: int, p: int, n: int, budget=ORBIT_TYPE_BUDGET) -> list:
    _check(k, p, n)
    total = rank_d(k, p, n)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"orbit types (k={k}, p={p}, n={n})", total, budget)
    kinds = _orbit_kinds(k, p, n)
    out = []

    def rec(start, remaining, chosen):
        if remaining == 0:
            out.append(OrbitTypeMultiset(tuple(chosen)))
            return
        for idx in range(start, len(kinds)):
            size = p ** kinds[idx][0]
            if size <= remaining:
                chosen.append(kinds[idx])
                rec(idx, remaining - size, chosen)
                chosen.pop()

    rec(0, k, [])
    return out


def _perm_order(perm):
    seen = [False] * len(perm)
    order = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        order = lcm(order, length)
    return order


def _compose(a, b):
    """(a * b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def _conjugate(g, x):
    """g x g^{-1}."""
    out = [0] * len(x)
    for i, xi in enumerate(x):
        out[g[i]] = g[xi]
    return tuple(out)


def hom_count_oracle(k: int, p: int, n: int, M: Optional[int] = None, max_k=HOM_COUNT_MAX_K) -> int:
    """Conjugacy classes of commuting n-tuples in Sigma_k of order dividing p^M.

    Brute force: every commuting tuple is listed, and orbits under
    simultaneous conjugation are swept out one at a time.
    """
    _check(k, p, n)
    if k > max_k:
        raise BudgetExceeded("hom-count oracle (k! permutations)", factorial(k), factorial(max_k))
    if M is None:
        M = ilog_ceil(k, p)
    if p**M < k:
        raise DomainError(f"depth M={M} too small: need p^M >= k")
    exponent = p**M
    group = list(itertools.permutations(range(k)))
    pelts = [g for g in group if exponent % _perm_order(g) == 0]

    commutes = {}

    def comm(a, b):
        key = (a, b)
        if key not in commutes:
            commutes[key] = _compose(a, b) == _compose(b, a)
        return commutes[key]

    tuples = []

    def rec(chosen):
        if len(chosen) == n:
            tuples.append(tuple(chosen))
            return
        for g in pelts:
            if all(comm(g, h) for h in chosen):
                chosen.append(g)
                rec(chosen)
                chosen.pop()

    rec([])
    seen = set()
    classes = 0
    for t in tuples:
        if t in seen:
            continue
        classes += 1
        for g in group:
            seen.add(tuple(_conjugate(g, x) for x in t))
    return classes


def transfer_unit_witness(m: int, p: int) -> Optional[PartitionSubgroup]:
    """A partition subgroup Sigma_i x Sigma_j of index prime to p, if one exists.

    Such a subgroup exists exactly when m is not a power of p.
    """
    check_prime(p)
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    for i in range(1, m):
        if vp_binomial(m, i, p) == 0:
            return PartitionSubgroup(i, m - i)
    return None


class SylowRow(NamedTuple):
    i: int
    s: int
    lhs: int
    rhs: int


def sylow_valuation_check(k: int, p: int, check=True) -> list:
    """Compare v_p|H cap L| with v_p|L| for H = Sigma_{p^{k-1}}^p, L = Sigma_i x Sigma_{p^k-i}.

    Writing i = p^{k-1} r + s with 0 <= s < p^{k-1}, the intersection has
    the same order as Sigma_{p^{k-1}}^{p-1} x Sigma_s x Sigma_{p^{k-1}-s}.
    """
    check_prime(p)
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    block = p ** (k - 1)
    rows = []
    for i in range(1, p**k):
        s = i % block
        lhs = (p - 1) * vp_factorial(block, p) + vp_factorial(s, p) + vp_factorial(block - s, p)
        rhs = vp_factorial(i, p) + vp_factorial(p**k - i, p)
        if check and lhs != rhs:
            raise ArithmeticError(f"Sylow valuation mismatch at k={k}, p={p}, i={i}: {lhs} != {rhs}")
        rows.append(SylowRow(i, s, lhs, rhs))
    return rows


def is_p_power(m: int, p: int) -> bool:
    return is_power_of(m, p)
