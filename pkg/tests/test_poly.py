"""Polynomial arithmetic, root finding, and combinatorial utilities."""

import math
from itertools import combinations

import numpy as np
import pytest

from polytrack.errors import NonConvergence
from polytrack.poly import (
    RealPolynomial,
    binomial_power,
    falling_factorial,
    poly_mul,
    poly_roots,
    root_multiplicity_at,
    stirling_second,
    ztransform_power_numerator,
)

RHO2 = 0.618034  # squared pole location of the order-4 worked example


def P(*ascending):
    return RealPolynomial.from_coeffs(ascending)


class TestArithmetic:
    def test_mul_binomial_square(self):
        z1 = P(-1.0, 1.0)
        assert poly_mul(z1, z1).coeffs == (1.0, -2.0, 1.0)

    def test_mul_identity(self):
        p = P(3.0, 0.0, -2.0, 1.0)
        assert poly_mul(p, P(1.0)).coeffs == p.coeffs

    def test_mul_worked_example_degree7(self):
        # (z - rho^2)^4 (z - 1)^3: the z^6 coefficient collects one factor
        # root from each binomial, so it equals -(4 rho^2 + 3).
        prod = poly_mul(binomial_power(RHO2, 4), binomial_power(1.0, 3))
        assert prod.degree == 7
        assert prod.coeffs[6] == pytest.approx(-(4 * RHO2 + 3), rel=1e-12)
        assert prod.coeffs[6] == pytest.approx(-5.472136, abs=1e-6)

    def test_mul_matches_numpy_convolve(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            a = rng.normal(size=rng.integers(1, 9))
            b = rng.normal(size=rng.integers(1, 9))
            got = poly_mul(RealPolynomial.from_coeffs(a), RealPolynomial.from_coeffs(b))
            ref = np.convolve(a, b)
            assert np.allclose(got.coeffs, ref[: len(got.coeffs)], rtol=1e-12)

    def test_degree_adds(self):
        a, b = P(1.0, 2.0, 1.0), P(-3.0, 1.0)
        assert poly_mul(a, b).degree == a.degree + b.degree

    def test_trim_leading_dust(self):
        p = RealPolynomial.from_coeffs([1.0, 2.0, 1e-18])
        assert p.degree == 1

    def test_horner_evaluation(self):
        p = P(1.0, -2.0, 3.0)
        for z in (0.0, 1.0, -2.5, 0.5):
            assert p(z) == pytest.approx(1.0 - 2.0 * z + 3.0 * z * z, rel=1e-15)

    def test_derivative_matches_central_differences(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = RealPolynomial.from_coeffs(rng.normal(size=rng.integers(2, 8)))
            dp = p.derivative()
            x = float(rng.uniform(-1.5, 1.5))
            h = 1e-6
            fd = (p(x + h) - p(x - h)) / (2 * h)
            if abs(fd) > 1e-8:
                assert dp(x) == pytest.approx(fd, rel=1e-6)


class TestBinomialPower:
    def test_square(self):
        assert binomial_power(1.0, 2).coeffs == (1.0, -2.0, 1.0)

    def test_pure_power(self):
        assert binomial_power(0.0, 5).coeffs == (0.0,) * 5 + (1.0,)

    def test_constant_term(self):
        p = binomial_power(RHO2, 4)
        assert p.coeffs[0] == pytest.approx(RHO2 ** 4, rel=1e-14)
        assert p.coeffs[0] == pytest.approx(0.145898, abs=1e-6)

    def test_matches_repeated_multiplication(self):
        lin = P(-0.37, 1.0)
        acc = P(1.0)
        for n in range(5):
            assert np.allclose(binomial_power(0.37, n).coeffs, acc.coeffs, rtol=1e-13)
            acc = poly_mul(acc, lin)


class TestRoots:
    def test_difference_of_squares(self):
        rs = poly_roots(P(-1.0, 0.0, 1.0))
        got = sorted(r.real for r, _ in rs.roots)
        assert got == pytest.approx([-1.0, 1.0], abs=1e-12)

    def test_triple_root_clusters(self):
        rs = poly_roots(binomial_power(1.0, 3))
        assert len(rs.roots) == 1
        root, mult = rs.roots[0]
        assert mult == 3
        assert root == pytest.approx(1.0, abs=1e-8)

    def test_momentum_edge_case_against_dense_eigensolver(self):
        # closed-loop quadratic at the upper curvature edge (m=1, L=9):
        # (z-1)(z-1/4) + 9/4 z; reference is a literal 2x2 companion eigensolve
        cp = P(0.25, 1.0, 1.0)
        comp = np.array([[0.0, 1.0], [-0.25, -1.0]])
        ref = np.max(np.abs(np.linalg.eigvals(comp)))
        assert poly_roots(cp).max_modulus() == pytest.approx(ref, abs=1e-12)
        assert poly_roots(cp).max_modulus() == pytest.approx(0.5, abs=1e-10)

    def test_root_count_and_residual(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            deg = int(rng.integers(1, 13))
            p = RealPolynomial.from_coeffs(np.r_[rng.normal(size=deg), 1.0])
            rs = poly_roots(p)
            assert sum(m for _, m in rs.roots) == p.degree
            assert rs.residual <= 1e-8

    def test_root_product_reconstruction(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            deg = int(rng.integers(2, 13))
            coeffs = np.r_[rng.normal(size=deg), 1.0]
            p = RealPolynomial.from_coeffs(coeffs)
            acc = np.array([1.0 + 0.0j])
            for root, mult in poly_roots(p).roots:
                for _ in range(mult):
                    acc = np.convolve(acc, [-root, 1.0])
            scale = np.max(np.abs(coeffs))
            assert np.max(np.abs(acc.real - coeffs)) <= 1e-8 * scale
            assert np.max(np.abs(acc.imag)) <= 1e-8 * scale

    def test_conjugate_pairs_for_real_input(self):
        p = P(2.0, 0.5, 1.0)  # complex pair
        roots = poly_roots(p).all_roots()
        assert len(roots) == 2
        assert roots[0].conjugate() == roots[1]

    def test_degree_zero_rejected(self):
        with pytest.raises(ValueError):
            poly_roots(P(3.0))

    def test_nonconvergence_surfaces(self):
        p = binomial_power(1.0, 6)
        with pytest.raises(NonConvergence):
            poly_roots(p, tol=1e-300)


class TestMultiplicity:
    def test_double_root(self):
        assert root_multiplicity_at(binomial_power(1.0, 2), 1.0, 1e-7) == 2

    def test_non_root(self):
        assert root_multiplicity_at(P(-0.5, 1.0), 1.0, 1e-7) == 0

    def test_mixed_factor_polynomial(self):
        p = poly_mul(binomial_power(RHO2, 4), binomial_power(1.0, 3))
        assert root_multiplicity_at(p, 1.0, 1e-7) == 3
        assert root_multiplicity_at(p, RHO2, 1e-7) == 4

    def test_tol_must_be_positive(self):
        with pytest.raises(ValueError):
            root_multiplicity_at(P(1.0, 1.0), 1.0, 0.0)


class TestCombinatorics:
    def test_falling_factorial_cases(self):
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(3, 4) == 0
        for x in (-3, 0, 2, 9):
            assert falling_factorial(x, 0) == 1

    def test_stirling_edges(self):
        for n in range(1, 9):
            assert stirling_second(n, n) == 1
            assert stirling_second(n, 0) == 0
        assert stirling_second(0, 0) == 1

    def test_stirling_3_2_by_enumeration(self):
        # count partitions of {0,1,2} into 2 nonempty blocks directly
        items = (0, 1, 2)
        count = 0
        for size in (1, 2):
            for block in combinations(items, size):
                rest = tuple(i for i in items if i not in block)
                if rest and block < rest:
                    count += 1
        assert count == 3
        assert stirling_second(3, 2) == count

    def test_monomial_falling_factorial_identity(self):
        # t^r = sum_s S(r, s) (t)_s, exactly in integers
        for r in range(9):
            for t in range(13):
                total = sum(
                    stirling_second(r, s) * falling_factorial(t, s)
                    for s in range(r + 1)
                )
                assert total == t ** r


class TestPowerTransformNumerator:
    def test_base_cases(self):
        assert ztransform_power_numerator(0).coeffs == (0.0, 1.0)
        assert ztransform_power_numerator(1).coeffs == (0.0, 1.0)
        assert ztransform_power_numerator(2).coeffs == (0.0, 1.0, 1.0)
        assert ztransform_power_numerator(2)(1.0) == 2.0

    def test_value_at_one_is_factorial(self):
        for r in range(11):
            nr = ztransform_power_numerator(r)
            assert nr(1.0) == float(math.factorial(r))  # exact in binary64
            assert nr(1.0) == pytest.approx(math.factorial(r), rel=1e-9)

    def test_degree_bound(self):
        for r in range(11):
            assert ztransform_power_numerator(r).degree <= r + 1

    @pytest.mark.parametrize("z", [1.5, 2.0, 3.0])
    def test_against_series_summation(self, z):
        # independent oracle: sum_{t>=0} t^r z^-t must equal N_r(z)/(z-1)^(r+1)
        for r in range(9):
            series = sum(t ** r * z ** (-t) for t in range(400))
            nr = ztransform_power_numerator(r)
            assert nr(z) / (z - 1.0) ** (r + 1) == pytest.approx(series, rel=1e-12)
