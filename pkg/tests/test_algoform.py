"""Recursion model: validation, transfer construction, integrator counting,
and the tracking identity."""

import json

import numpy as np
import pytest

from conftest import beta_from_denominator, random_stable_monic
from polytrack.algoform import (
    AlgorithmParams,
    build_transfer,
    characteristic_polynomial,
    integrator_count,
    params_from_transfer,
    tracking_condition_holds,
    validate,
)
from polytrack.errors import BadSector, LengthMismatch, ZeroAlphaSum
from polytrack.poly import RealPolynomial, binomial_power, poly_mul
from polytrack.rate import heavy_ball_params


def make_params(alpha, beta, m=1.0, L=9.0):
    return AlgorithmParams(k=len(beta), alpha=tuple(alpha), beta=tuple(beta),
                           m=m, L=L)


class TestValidate:
    def test_heavy_ball_ok(self):
        validate(make_params((0.25, 0.0), (0.25,)))

    def test_zero_alpha_sum(self):
        with pytest.raises(ZeroAlphaSum):
            validate(make_params((0.5, -0.5), (0.1,)))

    def test_bad_sector(self):
        with pytest.raises(BadSector):
            validate(make_params((0.25, 0.0), (0.25,), m=2.0, L=1.0))
        with pytest.raises(BadSector):
            validate(make_params((0.25, 0.0), (0.25,), m=0.0, L=1.0))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            validate(AlgorithmParams(k=2, alpha=(0.1, 0.2), beta=(0.3, 0.4),
                                     m=1.0, L=2.0))
        with pytest.raises(LengthMismatch):
            validate(AlgorithmParams(k=1, alpha=(0.1, 0.2), beta=(), m=1.0, L=2.0))


class TestTrackingCondition:
    def test_order_one_always_holds(self):
        assert tracking_condition_holds(make_params((0.25, 0.0), (0.25,)), 1)
        assert tracking_condition_holds(make_params((0.1,), ()), 1)

    def test_unit_weight_sum_holds_at_order_two(self):
        assert tracking_condition_holds(make_params((0.2, 0.1), (1.0,)), 2)

    def test_heavy_ball_fails_at_order_two(self):
        assert not tracking_condition_holds(heavy_ball_params(1.0, 9.0), 2)

    def test_constructed_higher_order(self):
        # denom (z-1)^2 (z - 0.3): three momentum weights supporting order 3
        denom = poly_mul(binomial_power(1.0, 2), binomial_power(0.3, 1))
        beta = beta_from_denominator(denom)
        params = make_params((0.1, 0.0, 0.0, 0.0), beta)
        assert tracking_condition_holds(params, 3)
        assert not tracking_condition_holds(params, 4)


class TestBuildTransfer:
    def test_momentum_step(self):
        model = build_transfer(make_params((0.3, 0.0), (0.2,)))
        assert model.denom.coeffs == (-0.2, 1.0)
        assert model.numer.coeffs == (0.0, 0.3)

    def test_plain_gradient(self):
        model = build_transfer(make_params((0.4,), ()))
        assert model.denom.coeffs == (1.0,)
        assert model.numer.coeffs == (0.4,)

    def test_two_step(self):
        model = build_transfer(make_params((0.5, 0.25, -0.1), (1.0, 0.0)))
        assert model.denom.coeffs == (0.0, -1.0, 1.0)
        assert model.numer.coeffs == (-0.1, 0.25, 0.5)

    def test_full_denominator_has_unit_root(self):
        model = build_transfer(make_params((0.3, 0.0), (0.2,)))
        assert model.denom_full(1.0) == pytest.approx(0.0, abs=1e-15)
        assert model.denom_full.degree == model.k + 1

    def test_roundtrip_exact(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            k = int(rng.integers(0, 9))
            alpha = tuple(rng.normal(size=k + 1))
            if abs(sum(alpha)) < 1e-6:
                continue
            beta = tuple(rng.normal(size=k))
            params = make_params(alpha, beta, m=1.0, L=3.0)
            back = params_from_transfer(build_transfer(params), 1.0, 3.0)
            assert back == params


class TestCharacteristicPolynomial:
    def test_gradient_term_vanishes_at_zero_gain(self):
        params = make_params((0.3, 0.1), (0.2,))
        model = build_transfer(params)
        assert characteristic_polynomial(model, 0.0).coeffs == model.denom_full.coeffs

    def test_momentum_double_root(self):
        model = build_transfer(make_params((0.25, 0.0), (0.25,)))
        cp = characteristic_polynomial(model, 1.0)
        assert np.allclose(cp.coeffs, (0.25, -1.0, 1.0), rtol=1e-15)

    def test_scalar_gradient_step(self):
        model = build_transfer(make_params((0.2,), ()))
        cp = characteristic_polynomial(model, 9.0)
        assert np.allclose(cp.coeffs, (0.8, 1.0), rtol=1e-15)

    def test_value_at_one_is_gain_times_numer(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            k = int(rng.integers(0, 7))
            alpha = tuple(rng.normal(size=k + 1))
            if abs(sum(alpha)) < 1e-6:
                continue
            params = make_params(alpha, tuple(rng.normal(size=k)))
            model = build_transfer(params)
            lam = float(rng.uniform(0.5, 9.0))
            cp = characteristic_polynomial(model, lam)
            expected = lam * model.numer(1.0)
            assert cp(1.0) == pytest.approx(expected, rel=1e-12, abs=1e-12)


class TestIntegratorCount:
    def test_plain_gradient_has_one(self):
        assert integrator_count(build_transfer(make_params((0.4,), ()))) == 1

    def test_momentum_step_has_one(self):
        assert integrator_count(build_transfer(make_params((0.25, 0.0), (0.25,)))) == 1

    def test_designed_denominator_has_four(self):
        rho2 = 0.618034
        denom = poly_mul(binomial_power(1.0, 3), binomial_power(rho2, 4))
        beta = beta_from_denominator(denom)
        params = make_params((0.1,) + (0.0,) * 7, beta, m=1.0, L=5.0)
        assert integrator_count(build_transfer(params)) == 4


class TestConditionCountEquivalence:
    def test_condition_and_integrator_count_agree(self):
        # positives carry an exact (z-1)^(n-1) factor; negatives perturb one
        # weight or use partial factors; both tests must agree on every case
        rng = np.random.default_rng(12)
        checked = 0
        while checked < 150:
            n = int(rng.integers(1, 6))
            extra = int(rng.integers(0, 5))
            k = (n - 1) + extra
            if k == 0:
                params = AlgorithmParams(k=0, alpha=(0.1,), beta=(), m=1.0, L=2.0)
                assert tracking_condition_holds(params, n) == (
                    integrator_count(build_transfer(params)) >= n
                )
                checked += 1
                continue
            q = random_stable_monic(rng, extra, 0.8)
            if abs(q(1.0)) < 0.05:
                continue
            denom = poly_mul(binomial_power(1.0, n - 1), q)
            beta = list(beta_from_denominator(denom))
            if rng.random() < 0.5 and beta:
                # negative instance: break the identity by a visible margin
                beta[int(rng.integers(0, len(beta)))] += float(
                    rng.choice([-1.0, 1.0]) * rng.uniform(1e-3, 0.5)
                )
            params = AlgorithmParams(
                k=k, alpha=(0.1,) + (0.0,) * k, beta=tuple(beta), m=1.0, L=2.0
            )
            cond = tracking_condition_holds(params, n)
            count_ok = integrator_count(build_transfer(params)) >= n
            assert cond == count_ok
            checked += 1


class TestSerialization:
    def test_json_field_names(self):
        params = make_params((0.25, 0.0), (0.25,))
        doc = json.loads(json.dumps(params.to_dict()))
        assert set(doc) == {"k", "alpha", "beta", "m", "L"}
        assert AlgorithmParams.from_dict(doc) == params
