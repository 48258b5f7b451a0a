"""Acceptance criteria, one test per criterion.

Each test checks its identity exactly over the stated grid, enforces the
stated wall-clock bound, and prints a single PASS/FAIL line (visible even
when pytest captures output).
"""

import time
from contextlib import contextmanager
from math import factorial

import pytest

from esigma.exact_arith import dbar, gaussian_binomial, GaussianParams, is_power_of, vp, vp_binomial, vp_factorial
from esigma.fgl import (
    divisor_from_points,
    euler_class_U_minus_1,
    linear_coefficient,
    make_additive,
    make_honda,
    make_multiplicative,
    r_series,
    socle_nonvanishing_check,
    subgroup_divisor_closure_check,
    torsion_points,
)
from esigma.lattice_count import DEFAULT_BUDGET, LatticeIndexSpec, count_sublattices, hnf_count_bound
from esigma.pseries import weierstrass_degree
from esigma.rings import cyclic_ring, finite_field, prime_field
from esigma.subgroup_basis import generate_basis, recursion_report
from esigma.sym_rank import hom_count_oracle, rank_d, sylow_valuation_check, transfer_unit_witness

HONDA = [(p, n) for p in (2, 3) for n in (1, 2, 3) if p**n <= 27]
BASIS_GRID = [(p, n, m) for p in (2, 3) for n in (1, 2, 3) for m in range(5) if dbar(p, n, m) <= 10**5]


@contextmanager
def criterion(capsys, number, title, bound):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed < bound:
            status = "PASS"
        else:
            detail = " (over time bound)"
        assert elapsed < bound, f"criterion {number} took {elapsed:.2f}s, bound {bound}s"
    except Exception as exc:
        if not detail:
            detail = f" ({type(exc).__name__}: {exc})"
        raise
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {title} [{elapsed:.2f}s < {bound}s]{detail}")


def test_criterion_01_lattice_count(capsys):
    with criterion(capsys, 1, "sublattice count equals Gaussian binomial", 10):
        cells = 0
        for p in (2, 3, 5):
            for n in (1, 2, 3):
                for k in range(5):
                    spec = LatticeIndexSpec(p, n, k)
                    if hnf_count_bound(spec) > DEFAULT_BUDGET:
                        continue
                    closed = 1
                    for j in range(1, n):
                        closed = closed * (p ** (k + j) - 1) // (p**j - 1)
                    assert count_sublattices(spec) == gaussian_binomial(GaussianParams(p, n, k)) == closed, (p, n, k)
                    cells += 1
        assert cells >= 40


def test_criterion_02_rank_identity(capsys):
    with criterion(capsys, 2, "d(k) equals homomorphism orbit count", 60):
        cases = [(2, 1, k) for k in range(7)] + [(2, 2, k) for k in range(7)] + [(3, 1, k) for k in range(5)]
        for p, n, k in cases:
            assert rank_d(k, p, n) == hom_count_oracle(k, p, n, 3), (p, n, k)


def test_criterion_03_valuations(capsys):
    with criterion(capsys, 3, "Legendre, Kummer and Sylow valuation identities", 1):
        for p in (2, 3):
            for k in range(1, 6):
                assert vp_factorial(p**k, p) == (p**k - 1) // (p - 1)
                for i in range(1, p**k):
                    assert vp_binomial(p**k, i, p) == k - vp(i, p)
            for k in range(1, 4):
                rows = sylow_valuation_check(k, p)
                assert len(rows) == p**k - 1
                assert all(row.lhs == row.rhs for row in rows)


def test_criterion_04_kummer_witness(capsys):
    with criterion(capsys, 4, "index-prime-to-p partition subgroup iff not a p-power", 1):
        for p in (2, 3, 5):
            for m in range(1, 201):
                assert (transfer_unit_witness(m, p) is not None) == (not is_power_of(m, p)), (m, p)


def test_criterion_05_fgl_axioms_and_height(capsys):
    with criterion(capsys, 5, "FGL axioms and Honda p-series height", 30):
        for p, n in HONDA:
            F = make_honda(p, n, check=False)
            assert F.order >= p**n + p
            assert F.axiom_failures() == [], (p, n)
            assert weierstrass_degree(r_series(F, p)) == p**n, (p, n)
        for ring in (prime_field(2), prime_field(3), cyclic_ring(2, 3), cyclic_ring(3, 2), finite_field(2, 2)):
            for law in (make_additive(ring, 8), make_multiplicative(ring, 8)):
                assert law.axiom_failures() == [], law.label


def test_criterion_06_euler_class(capsys):
    with criterion(capsys, 6, "e(U-1) leading term and [r](x) linear term", 5):
        laws = [(make_honda(p, n), p) for p, n in HONDA]
        laws += [(make_multiplicative(prime_field(p), p + 2), p) for p in (5, 7)]
        for F, p in laws:
            e = euler_class_U_minus_1(F)
            assert weierstrass_degree(e) == p - 1
            assert e.coeff(p - 1) == F.ring.from_int(factorial(p - 1))
            for r in range(11):
                assert linear_coefficient(r_series(F, r)) == F.ring.from_int(r)


def test_criterion_07_socle(capsys):
    with criterion(capsys, 7, "socle power of the Euler class is nonzero", 5):
        for p, n in HONDA:
            exponent, nonzero = socle_nonvanishing_check(make_honda(p, n), p, n)
            assert exponent == (p**n - 1) // (p - 1) and nonzero, (p, n)


def test_criterion_08_basis_cardinality(capsys):
    with criterion(capsys, 8, "basis size equals Gaussian binomial", 30):
        for p, n, m in BASIS_GRID:
            assert len(generate_basis(m, n, p)) == dbar(p, n, m), (p, n, m)
        assert [len(generate_basis(m, 2, 2)) for m in (1, 2, 3)] == [3, 7, 15]


def test_criterion_09_basis_recursion(capsys):
    with criterion(capsys, 9, "basis recursion C'_kl = C_kl", 30):
        for p, n, m in BASIS_GRID:
            for k in range(m + 1):
                for l in range(1, n + 1):
                    report = recursion_report(k, l, m, n, p)
                    assert all(report.values()), (p, n, m, k, l, report)
                    if k < m and l < n:
                        assert report["disjoint"] and report["union"]


def test_criterion_10_divisor_roots(capsys):
    with criterion(capsys, 10, "divisor root identity and subgroup closure", 10):
        cells = 0
        for p, n in HONDA:
            k = 0
            while p ** (k * n) <= 27:
                F = make_honda(p, n, order=max(p ** (k * n), p**n + p))
                ctx, points = torsion_points(F, k)
                D = divisor_from_points(points, ctx)
                assert D.degree == p**k
                assert all(D.evaluate(a).is_zero() for a in points), (p, n, k)
                assert subgroup_divisor_closure_check(points, F), (p, n, k)
                cells += 1
                k += 1
        assert cells >= 10
