"""Monomial bases C and C_{kl} for the subgroup-scheme ring and its quotients.

Monomials are exponent vectors over a_0, ..., a_{m-1}, where a_j stands for
the (p^m - p^j)-th Chern class.  Each monomial is b * a^alpha for a pair of
sequences (mu, nu):

    l = mu_0 < ... < mu_r <= n,   k <= nu_0 < ... < nu_r = m,
    b = prod_{i<r} a_{nu_i}^{sigma(mu_i, mu_{i+1})},
    0 <= alpha_j < rho_j,

with rho_j = p^{mu_i} (or 1 when mu_i = n) for the unique i with
nu_{i-1} <= j < nu_i, reading nu_{-1} as k.  For j < k the generator a_j
is absent and alpha_j is pinned to 0.
"""

import itertools
from collections import Counter
from dataclasses import dataclass

from .errors import DomainError, StructuralError
from .exact_arith import check_prime, dbar


def sigma(u: int, v: int, p: int) -> int:
    """sum_{i=u}^{v-1} p^i = (p^v - p^u)/(p - 1)."""
    if u < 0 or v < u:
        raise DomainError(f"sigma needs 0 <= u <= v, got u={u}, v={v}")
    return (p**v - p**u) // (p - 1)


@dataclass(frozen=True, order=True)
class MuNuPair:
    mu: tuple
    nu: tuple

    @property
    def r(self) -> int:
        return len(self.mu) - 1

    def validate(self, k: int, l: int, m: int, n: int):
        mu, nu = self.mu, self.nu
        if not mu or len(mu) != len(nu):
            raise StructuralError(f"mu and nu must be nonempty of equal length: {self}")
        if mu[0] != l or mu[-1] > n or any(a >= b for a, b in zip(mu, mu[1:])):
            raise StructuralError(f"need {l} = mu_0 < ... < mu_r <= {n}, got mu={mu}")
        if nu[0] < k or nu[-1] != m or any(a >= b for a, b in zip(nu, nu[1:])):
            raise StructuralError(f"need {k} <= nu_0 < ... < nu_r = {m}, got nu={nu}")
        return self


@dataclass(frozen=True)
class BasisMonomial:
    provenance: MuNuPair
    b_exponents: tuple
    alpha: tuple
    total: tuple

    def __str__(self):
        return monomial_string(self.total)

    def chern_string(self, p: int) -> str:
        m = len(self.total)
        return monomial_string(self.total, [f"c{p**m - p**j}" for j in range(m)])

    def weight(self, p: int) -> int:
        m = len(self.total)
        return sum(e * (p**m - p**j) for j, e in enumerate(self.total))

    def to_json_obj(self):
        return {
            "mu": list(self.provenance.mu),
            "nu": list(self.provenance.nu),
            "alpha": list(self.alpha),
            "total": list(self.total),
            "string": str(self),
        }


def monomial_string(exps, names=None) -> str:
    if names is None:
        names = [f"a{j}" for j in range(len(exps))]
    parts = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e]
    return "*".join(parts) if parts else "1"


def _check_params(k, l, m, n, p):
    check_prime(p)
    if n < 1:
        raise DomainError(f"height must be >= 1, got {n}")
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    if not 0 <= k <= m:
        raise DomainError(f"need 0 <= k <= m, got k={k}, m={m}")
    if not 0 < l <= n:
        raise DomainError(f"need 0 < l <= n, got l={l}, n={n}")


def rho_vector(pair: MuNuPair, m: int, n: int, p: int, k: int = 0, l: int = 1) -> list:
    """rho_0, ..., rho_{m-1}; entries below k are 0."""
    pair.validate(k, l, m, n)
    rho = [0] * m
    lo = k
    for mu_i, hi in zip(pair.mu, pair.nu):
        for j in range(lo, hi):
            rho[j] = p**mu_i if mu_i < n else 1
        lo = hi
    return rho


def b_exponents(pair: MuNuPair, m: int, p: int) -> tuple:
    exps = [0] * m
    for i in range(pair.r):
        exps[pair.nu[i]] += sigma(pair.mu[i], pair.mu[i + 1], p)
    return tuple(exps)


def iter_pairs(k: int, l: int, m: int, n: int):
    """All (mu, nu) pairs for C_{kl}, in lexicographic order."""
    pairs = []
    upper_mu = range(l + 1, n + 1)
    lower_nu = range(k, m)
    for r in range(0, min(len(upper_mu), len(lower_nu)) + 1):
        for mu_tail in itertools.combinations(upper_mu, r):
            for nu_head in itertools.combinations(lower_nu, r):
                pairs.append(MuNuPair((l,) + mu_tail, nu_head + (m,)))
    pairs.sort()
    return pairs


def piece(pair: MuNuPair, k: int, l: int, m: int, n: int, p: int) -> list:
    """C_{kl}(mu, nu) in lexicographic alpha order."""
    rho = rho_vector(pair, m, n, p, k, l)
    b = b_exponents(pair, m, p)
    out = []
    for alpha in itertools.product(*(range(max(r, 1)) for r in rho)):
        total = tuple(x + y for x, y in zip(b, alpha))
        out.append(BasisMonomial(pair, b, alpha, total))
    return out


def _assert_disjoint(monomials, what):
    seen = {}
    for mono in monomials:
        if mono.total in seen:
            other = seen[mono.total]
            raise AssertionError(
                f"{what} is not disjoint: {mono} arises from {mono.provenance} and {other.provenance}"
            )
        seen[mono.total] = mono


def generate_basis_kl(k: int, l: int, m: int, n: int, p: int, check_disjoint: bool = True) -> list:
    _check_params(k, l, m, n, p)
    out = []
    for pair in iter_pairs(k, l, m, n):
        out.extend(piece(pair, k, l, m, n, p))
    if check_disjoint:
        _assert_disjoint(out, f"C_{{{k},{l}}} (m={m}, n={n}, p={p})")
    return out


def generate_basis(m: int, n: int, p: int, check_disjoint: bool = True) -> list:
    """The basis C of the rank-d̄(m) ring, as monomials in a_0..a_{m-1}."""
    return generate_basis_kl(0, 1, m, n, p, check_disjoint)


def _shift(monos, j, power):
    out = []
    for mono in monos:
        t = list(mono.total)
        t[j] += power
        out.append(tuple(t))
    return out


def _totals(monos):
    return [mono.total for mono in monos]


def reindex_second_piece(pair: MuNuPair, k: int, l: int) -> MuNuPair:
    """(mu', nu') for a piece of C_{k,l+1}, so that a_k^{p^l} C_{k,l+1}(mu,nu) = C_{kl}(mu',nu')."""
    if pair.nu[0] == k:
        return MuNuPair((l,) + pair.mu[1:], pair.nu)
    return MuNuPair((l,) + pair.mu, (k,) + pair.nu)


def recursion_report(k: int, l: int, m: int, n: int, p: int) -> dict:
    """Check C'_{kl} = C_{kl}, as a whole and piece by piece.

    Returns a dict of named boolean sub-checks.
    """
    _check_params(k, l, m, n, p)
    if k == m or l == n:
        base = Counter(_totals(generate_basis_kl(k, l, m, n, p)))
        return {"base_case": base == Counter([(0,) * m])}
    target_pairs = {pair: piece(pair, k, l, m, n, p) for pair in iter_pairs(k, l, m, n)}
    target = Counter(t for monos in target_pairs.values() for t in _totals(monos))
    report = {}

    first = []
    first_ok = True
    for pair in iter_pairs(k + 1, l, m, n):
        monos = piece(pair, k + 1, l, m, n, p)
        shifted = [t for j in range(p**l) for t in _shift(monos, k, j)]
        first.extend(shifted)
        want = target_pairs.get(pair)
        if want is None or Counter(shifted) != Counter(_totals(want)):
            first_ok = False
    report["first_piece"] = first_ok

    second = []
    second_ok = True
    for pair in iter_pairs(k, l + 1, m, n):
        monos = piece(pair, k, l + 1, m, n, p)
        shifted = _shift(monos, k, p**l)
        second.extend(shifted)
        want = target_pairs.get(reindex_second_piece(pair, k, l))
        if want is None or Counter(shifted) != Counter(_totals(want)):
            second_ok = False
    report["second_piece"] = second_ok

    union = Counter(first) + Counter(second)
    report["disjoint"] = all(c == 1 for c in union.values())
    report["union"] = union == target
    return report


def verify_recursion(k: int, l: int, m: int, n: int, p: int) -> bool:
    return all(recursion_report(k, l, m, n, p).values())


def cardinality_check(m: int, n: int, p: int):
    size = len(generate_basis(m, n, p))
    expected = dbar(p, n, m)
    return size, expected, size == expected


def top_weight(m: int, n: int, p: int):
    """(max weight, monomials attaining it) with a_j weighted by p^m - p^j."""
    basis = generate_basis(m, n, p)
    best = max(mono.weight(p) for mono in basis)
    return best, [mono for mono in basis if mono.weight(p) == best]
