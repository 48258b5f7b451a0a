"""The verification grid: named checks over parameter ranges, with a report."""

import time
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

from . import exact_arith as ea
from . import fgl as fg
from . import lattice_count as lc
from . import subgroup_basis as sb
from . import sym_rank as sr
from .errors import BudgetExceeded, EsigmaError
from .pseries import weierstrass_degree
from .rings import cyclic_ring, prime_field

SUITES = ("arith", "lattices", "ranks", "fgl", "basis")
BASIS_BUDGET = 10**5


@dataclass
class Cell:
    suite: str
    check: str
    params: dict
    passed: bool = False
    witness: str = ""
    seconds: float = 0.0

    @property
    def key(self):
        return (SUITES.index(self.suite), self.check, tuple(sorted(self.params.items())))

    def label(self):
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.suite}/{self.check}({args})"


@dataclass
class VerificationReport:
    cells: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.cells)

    @property
    def failed(self) -> int:
        return len(self.cells) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def sorted_cells(self):
        return sorted(self.cells, key=lambda c: c.key)

    def to_text(self, timings=False) -> str:
        lines = []
        for c in self.sorted_cells():
            line = f"{'PASS' if c.passed else 'FAIL'} {c.label()}"
            if c.witness:
                line += f" -- {c.witness}"
            if timings:
                line += f" [{c.seconds:.3f}s]"
            lines.append(line)
        lines.append(f"summary: {self.passed} passed, {self.failed} failed, {len(self.cells)} total")
        return "\n".join(lines)

    def to_json_obj(self, timings=False):
        cells = []
        for c in self.sorted_cells():
            d = {"suite": c.suite, "check": c.check, "params": c.params, "passed": c.passed}
            if c.witness:
                d["witness"] = c.witness
            if timings:
                d["seconds"] = f"{c.seconds:.3f}"
            cells.append(d)
        return {"cells": cells, "passed": self.passed, "failed": self.failed}


@dataclass
class GridOptions:
    primes: Optional[tuple] = None
    heights: Optional[tuple] = None
    extended: bool = False
    budget: Optional[int] = None

    @property
    def explicit(self) -> bool:
        return self.primes is not None


def run_cell(suite, check, params, fn) -> Cell:
    """Run fn() -> (passed, witness) and time it; errors become failed cells."""
    cell = Cell(suite, check, dict(params))
    start = time.perf_counter()
    try:
        passed, witness = fn()
        cell.passed, cell.witness = bool(passed), witness or ""
    except BudgetExceeded as exc:
        cell.witness = f"budget error: {exc}"
    except (EsigmaError, ArithmeticError, AssertionError) as exc:
        cell.witness = f"{type(exc).__name__}: {exc}"
    cell.seconds = time.perf_counter() - start
    return cell


def _eq(got, want):
    return got == want, "" if got == want else f"got {got}, expected {want}"


# arithmetic


def arith_cells(opts: GridOptions):
    primes = opts.primes or (2, 3)
    kmax = 6 if opts.extended else 5
    cells = []
    for p in primes:
        for k in range(kmax + 1):

            def fact(p=p, k=k):
                return _eq(ea.vp_factorial(p**k, p), (p**k - 1) // (p - 1))

            def binom(p=p, k=k):
                for i in range(1, p**k):
                    if ea.vp_binomial(p**k, i, p) != k - ea.vp(i, p):
                        return False, f"i={i}"
                return True, ""

            cells.append(run_cell("arith", "vp_factorial_p_power", {"p": p, "k": k}, fact))
            cells.append(run_cell("arith", "vp_binomial_p_power", {"p": p, "k": k}, binom))
        for k in range(1, 4):

            def sylow(p=p, k=k):
                bad = [row for row in sr.sylow_valuation_check(k, p, check=False) if row.lhs != row.rhs]
                return not bad, f"rows {bad}" if bad else ""

            cells.append(run_cell("arith", "sylow_valuation", {"p": p, "k": k}, sylow))
    for p in opts.primes or (2, 3, 5):

        def kummer_legendre(p=p):
            for m in range(1, 201):
                for i in range(m + 1):
                    lhs = ea.vp_binomial(m, i, p)
                    rhs = ea.vp_factorial(m, p) - ea.vp_factorial(i, p) - ea.vp_factorial(m - i, p)
                    if lhs != rhs:
                        return False, f"m={m}, i={i}"
            return True, ""

        def witness(p=p):
            for m in range(2, 201):
                has = sr.transfer_unit_witness(m, p) is not None
                if has == ea.is_power_of(m, p):
                    return False, f"m={m}"
            return True, ""

        cells.append(run_cell("arith", "kummer_legendre", {"p": p, "mmax": 200}, kummer_legendre))
        cells.append(run_cell("arith", "transfer_unit_witness", {"p": p, "mmax": 200}, witness))
    return cells


# lattices


def lattice_cells(opts: GridOptions):
    primes = opts.primes or (2, 3, 5)
    nmax = max(opts.heights) if opts.heights else 3
    heights = opts.heights or tuple(range(1, nmax + 1))
    kmax = 5 if opts.extended else 4
    budget = opts.budget or (2**18 if opts.extended else lc.DEFAULT_BUDGET)
    cells = []
    for p in primes:
        for n in heights:
            for k in range(kmax + 1):
                spec = lc.LatticeIndexSpec(p, n, k)
                if not opts.explicit and lc.hnf_count_bound(spec) > budget:
                    continue

                def fn(spec=spec):
                    return _eq(lc.count_sublattices(spec, budget), ea.gaussian_binomial(ea.GaussianParams(spec.p, spec.n, spec.k)))

                cells.append(run_cell("lattices", "count_equals_gaussian", {"p": p, "n": n, "k": k}, fn))
    return cells


# ranks


def rank_cells(opts: GridOptions):
    if opts.primes:
        grid = [(p, n, 6) for p in opts.primes for n in (opts.heights or (1, 2))]
    else:
        grid = [(2, 1, 6), (2, 2, 6), (3, 1, 4)]
        if opts.extended:
            grid = [(2, 1, 7), (2, 2, 7), (3, 1, 6), (3, 2, 4), (2, 3, 4)]
    max_k = 7
    if opts.budget is not None:
        while max_k > 0 and factorial(max_k) > opts.budget:
            max_k -= 1
    cells = []
    for p, n, kmax in grid:
        for k in range(kmax + 1):

            def fn(p=p, n=n, k=k):
                want = sr.hom_count_oracle(k, p, n, 3, max_k=max_k)
                got = sr.rank_d(k, p, n)
                if got != want:
                    return False, f"rank_d={got}, oracle={want}"
                witnesses = len(sr.enumerate_orbit_types(k, p, n))
                return _eq(witnesses, got)

            cells.append(run_cell("ranks", "rank_equals_hom_count", {"p": p, "n": n, "k": k}, fn))
    return cells


# formal group laws


def fgl_grid(opts: GridOptions):
    limit = 81 if opts.extended else 27
    out = []
    for p in opts.primes or (2, 3):
        heights = opts.heights or tuple(n for n in range(1, 5) if p**n <= limit)
        out.extend((p, n) for n in heights)
    return out


def fgl_cells(opts: GridOptions):
    cells = []
    for p, n in fgl_grid(opts):
        params = {"p": p, "n": n}
        order = fg.default_honda_order(p, n)
        state = {}

        def build(p=p, n=n, order=order, state=state):
            F = fg.make_honda(p, n, order=order, check=False)
            state["F"] = F
            failures = F.axiom_failures()
            return not failures, ", ".join(failures)

        cells.append(run_cell("fgl", "honda_axioms", params, build))
        F = state.get("F")
        if F is None:
            continue

        def height(F=F, p=p, n=n):
            return _eq(weierstrass_degree(fg.r_series(F, p)), p**n)

        cells.append(run_cell("fgl", "p_series_degree", params, height))
        if p == 2 and n == 1:

            def square(F=F):
                s = fg.r_series(F, 2)
                x = s.gens()[0]
                return s == x * x, "" if s == x * x else f"[2](x) = {s}"

            cells.append(run_cell("fgl", "[2](x)=x^2", params, square))

        def euler(F=F, p=p):
            e = fg.euler_class_U_minus_1(F)
            d = weierstrass_degree(e)
            lead = e.coeff((d,)) if d is not None else None
            want = F.ring.from_int(factorial(p - 1))
            ok = d == p - 1 and lead == want
            return ok, "" if ok else f"degree {d}, leading {lead}"

        cells.append(run_cell("fgl", "euler_class_U_minus_1", params, euler))

        def linear(F=F):
            for r in range(11):
                if fg.linear_coefficient(fg.r_series(F, r)) != F.ring.from_int(r):
                    return False, f"r={r}"
            return True, ""

        cells.append(run_cell("fgl", "r_series_linear_term", params, linear))

        def socle(F=F, p=p, n=n):
            exponent, nonzero = fg.socle_nonvanishing_check(F, p, n)
            return nonzero, "" if nonzero else f"c^{exponent} vanishes"

        cells.append(run_cell("fgl", "socle_nonvanishing", params, socle))

        for k in range(0, 3):
            if p ** (k * n) > (81 if opts.extended else 27):
                continue

            def divisor(p=p, n=n, k=k, order=order):
                G = fg.make_honda(p, n, order=max(order, p ** (k * n)), check=False)
                ctx, points = fg.torsion_points(G, k, n)
                D = fg.divisor_from_points(points, ctx)
                for j, a in enumerate(points):
                    if not D.evaluate(a).is_zero():
                        return False, f"f([{j}](t)) != 0"
                if not fg.subgroup_divisor_closure_check(points, G):
                    return False, "torsion points not closed"
                return True, ""

            cells.append(run_cell("fgl", "divisor_roots_and_closure", {"p": p, "n": n, "k": k}, divisor))

    for p in opts.primes or (2, 3, 5):
        for label, ring in (("F_p", prime_field(p)), ("Z/p^3", cyclic_ring(p, 3))):

            def mult(p=p, ring=ring):
                M = fg.make_multiplicative(ring, max(12, p + 2))
                fg.make_additive(ring, max(12, p + 2))
                for r in range(11):
                    if fg.linear_coefficient(fg.r_series(M, r)) != ring.from_int(r):
                        return False, f"r={r}"
                if ring.is_field:
                    e = fg.euler_class_U_minus_1(M)
                    d = weierstrass_degree(e)
                    if d != p - 1 or e.coeff((d,)) != ring.from_int(factorial(p - 1)):
                        return False, f"e(U-1) degree {d}"
                return True, ""

            cells.append(run_cell("fgl", "multiplicative_additive", {"p": p, "ring": label}, mult))
    return cells


# basis


def basis_grid(opts: GridOptions):
    mmax = 5 if opts.extended else 4
    out = []
    for p in opts.primes or (2, 3):
        for n in opts.heights or (1, 2, 3):
            for m in range(mmax + 1):
                if not opts.explicit and ea.dbar(p, n, m) > BASIS_BUDGET:
                    continue
                out.append((p, n, m))
    return out


def basis_cells(opts: GridOptions):
    cells = []
    for p, n, m in basis_grid(opts):
        params = {"p": p, "n": n, "m": m}

        def card(p=p, n=n, m=m):
            size = ea.dbar(p, n, m)
            if size > BASIS_BUDGET:
                raise BudgetExceeded(f"basis (p={p}, n={n}, m={m})", size, BASIS_BUDGET)
            got, want, ok = sb.cardinality_check(m, n, p)
            return ok, "" if ok else f"|C|={got}, dbar={want}"

        cells.append(run_cell("basis", "cardinality", params, card))
        if not cells[-1].passed:
            continue

        def rec(p=p, n=n, m=m):
            for k in range(m + 1):
                for l in range(1, n + 1):
                    report = sb.recursion_report(k, l, m, n, p)
                    if not all(report.values()):
                        return False, f"k={k}, l={l}: {report}"
            return True, ""

        cells.append(run_cell("basis", "recursion", params, rec))

        def top(p=p, n=n, m=m):
            weight, monos = sb.top_weight(m, n, p)
            return len(monos) == 1, f"weight {weight}, {len(monos)} monomials"

        cells.append(run_cell("basis", "unique_top_weight", params, top))
    return cells


BUILDERS = {
    "arith": arith_cells,
    "lattices": lattice_cells,
    "ranks": rank_cells,
    "fgl": fgl_cells,
    "basis": basis_cells,
}


def run_verification(suite: str = "all", opts: Optional[GridOptions] = None) -> VerificationReport:
    opts = opts or GridOptions()
    names = SUITES if suite == "all" else (suite,)
    report = VerificationReport()
    for name in names:
        report.cells.extend(BUILDERS[name](opts))
    return report
