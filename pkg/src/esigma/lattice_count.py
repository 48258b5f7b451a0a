"""Enumeration of index-p^k sublattices of Z^n in Hermite normal form.

Convention: a lattice is given by an upper-triangular integer matrix whose
rows are a basis.  Diagonal entries are powers of p, and the entry in row i,
column j > i lies in [0, H[j][j]).  With this convention every sublattice of
p-power index has exactly one representative.
"""

import itertools
import json
from dataclasses import dataclass

from .errors import BudgetExceeded, DomainError, StructuralError
from .exact_arith import check_prime

DEFAULT_BUDGET = 2**16


@dataclass(frozen=True)
class LatticeIndexSpec:
    p: int
    n: int
    k: int

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise DomainError(f"dimension must be >= 1, got {self.n}")
        if self.k < 0:
            raise DomainError(f"k must be >= 0, got {self.k}")


@dataclass(frozen=True)
class HnfLattice:
    matrix: tuple  # tuple of row tuples

    def __post_init__(self):
        n = len(self.matrix)
        for i, row in enumerate(self.matrix):
            if len(row) != n:
                raise StructuralError("HNF matrix must be square")
            if row[i] < 1:
                raise StructuralError(f"diagonal entry {i} must be positive")
            for j in range(n):
                if j < i and row[j] != 0:
                    raise StructuralError("HNF matrix must be upper triangular")
                if j > i and not 0 <= row[j] < self.matrix[j][j]:
                    raise StructuralError(f"entry ({i},{j}) not reduced")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def index(self) -> int:
        out = 1
        for i in range(self.dim):
            out *= self.matrix[i][i]
        return out

    def flat(self) -> tuple:
        return tuple(x for row in self.matrix for x in row)

    def tolist(self) -> list:
        return [list(row) for row in self.matrix]

    def contains(self, v) -> bool:
        """Membership of an integer vector, by back-substitution."""
        v = list(v)
        for i in range(self.dim):
            d = self.matrix[i][i]
            if v[i] % d:
                return False
            c = v[i] // d
            for j in range(i, self.dim):
                v[j] -= c * self.matrix[i][j]
        return all(x == 0 for x in v)


def _diagonal_exponents(n, k):
    """Compositions of k into n nonnegative parts, lexicographic order."""
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _diagonal_exponents(n - 1, k - first):
            yield (first,) + rest


def hnf_count_bound(spec: LatticeIndexSpec) -> int:
    """Number of matrices the enumeration will produce, from the digit ranges alone."""
    total = 0
    for exps in _diagonal_exponents(spec.n, spec.k):
        # column j has j free entries above the diagonal
        cell = 1
        for j, e in enumerate(exps):
            cell *= (spec.p**e) ** j
        total += cell
    return total


def _check_budget(spec, budget):
    if budget is None:
        return
    needed = hnf_count_bound(spec)
    if needed > budget:
        raise BudgetExceeded(
            f"sublattice enumeration (p={spec.p}, n={spec.n}, k={spec.k})",
            needed,
            budget,
        )


def iter_sublattices(spec: LatticeIndexSpec, budget=DEFAULT_BUDGET):
    """Yield every HNF lattice of index p^k (unsorted)."""
    _check_budget(spec, budget)
    n, p = spec.n, spec.p
    free = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for exps in _diagonal_exponents(n, spec.k):
        diag = [p**e for e in exps]
        ranges = [range(diag[j]) for _, j in free]
        for values in itertools.product(*ranges):
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = diag[i]
            for (i, j), x in zip(free, values):
                m[i][j] = x
            yield HnfLattice(tuple(tuple(row) for row in m))


def enumerate_sublattices(spec: LatticeIndexSpec, budget=DEFAULT_BUDGET) -> list:
    """All HNF lattices of index p^k, sorted by flattened entries."""
    return sorted(iter_sublattices(spec, budget), key=HnfLattice.flat)


def count_sublattices(spec: LatticeIndexSpec, budget=DEFAULT_BUDGET) -> int:
    return sum(1 for _ in iter_sublattices(spec, budget))


def lattices_json(spec: LatticeIndexSpec, lattices) -> str:
    doc = {
        "p": spec.p,
        "n": spec.n,
        "k": spec.k,
        "lattices": [lat.tolist() for lat in lattices],
    }
    return json.dumps(doc, separators=(",", ":"))
