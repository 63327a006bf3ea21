"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the code paths they check: the block
closed-loop matrix is assembled from the raw weight layout and fed to a dense
eigensolver, the reference simulator advances the recursion literally in
original coordinates, the closed-form Pick determinant uses the factored
product expression, and the steady-state predictor solves the scalar
recursion's polynomial particular solution directly.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from polytrack.algoform import AlgorithmParams, TransferModel, params_from_transfer
from polytrack.poly import RealPolynomial, binomial_power, poly_mul
from polytrack.sim import QuadraticCostSpec, optimum_at
from polytrack.synth import heavy_ball_rate


# ---------------------------------------------------------------------------
# block closed-loop matrix (brute-force spectral-radius oracle)

def companion_state_matrix(params: AlgorithmParams) -> np.ndarray:
    """State matrix of the recursion with the gradient path removed: shift
    structure on top, momentum differences in the last row."""
    k = params.k
    a = np.zeros((k + 1, k + 1))
    for i in range(k):
        a[i, i + 1] = 1.0
    beta = params.beta
    if k > 0:
        a[k, 0] = -beta[k - 1]
        for idx in range(1, k):
            a[k, idx] = beta[k - idx] - beta[k - idx - 1]
        a[k, k] = 1.0 + beta[0]
    else:
        a[0, 0] = 1.0
    return a


def gradient_input_matrix(params: AlgorithmParams) -> np.ndarray:
    k = params.k
    b = np.zeros((k + 1, k + 1))
    b[k, :] = list(params.alpha[::-1])
    return b


def block_closed_loop(params: AlgorithmParams, curvatures) -> np.ndarray:
    """Full closed-loop matrix for a diagonal curvature matrix, built by
    Kronecker products; its eigenvalues are the brute-force reference."""
    delta = np.diag(np.asarray(curvatures, dtype=float))
    p = delta.shape[0]
    a0 = companion_state_matrix(params)
    b0 = gradient_input_matrix(params)
    return np.kron(a0, np.eye(p)) - np.kron(b0, delta)


def block_spectral_radius(params: AlgorithmParams, curvatures) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(block_closed_loop(params, curvatures)))))


def scalar_closed_loop(params: AlgorithmParams, lam: float) -> np.ndarray:
    return companion_state_matrix(params) - lam * gradient_input_matrix(params)


# ---------------------------------------------------------------------------
# literal simulation of the recursion in original coordinates

def raw_recursion_reference(params: AlgorithmParams, spec: QuadraticCostSpec,
                            T: int, init: np.ndarray) -> np.ndarray:
    """Advance the recursion exactly as written, in original coordinates.

    Valid as a reference only at short horizons / small trajectory values,
    where the cancellation x(t) - xstar(t) stays benign.
    """
    k, p = params.k, spec.p
    x = np.zeros((T + 1, p))
    x[: k + 1] = init
    for t in range(k, T):
        acc = x[t].copy()
        for j, b in enumerate(params.beta):
            acc += b * (x[t - j] - x[t - j - 1])
        for j, a in enumerate(params.alpha):
            if a != 0.0:
                grad = spec.delta @ (x[t - j] - optimum_at(spec, t - j))
                acc -= a * grad
        x[t + 1] = acc
    return x


# ---------------------------------------------------------------------------
# closed-form scalar steady state for plain gradient descent

def gd_particular_solution(rho0: float, a_coeffs) -> np.ndarray:
    """Polynomial coefficients (ascending in t) of the particular solution of

        e(t+1) = rho0 e(t) - (xstar(t+1) - xstar(t))

    for a scalar polynomial trajectory xstar with coefficients a_coeffs."""
    a = np.asarray(a_coeffs, dtype=float).ravel()
    n = len(a)
    if n == 1:
        return np.zeros(1)
    # dx(s) = xstar(s) - xstar(s-1), degree n-2
    d = np.zeros(n - 1)
    for u in range(n - 1):
        for i in range(u + 1, n):
            d[u] += a[i] * math.comb(i, u) * (-1.0) ** (i - u + 1)
    deg = n - 2
    # rhs(t) = -dx(t+1) expanded in powers of t
    rhs = np.zeros(deg + 1)
    for r in range(deg + 1):
        for u in range(r + 1):
            rhs[u] -= d[r] * math.comb(r, u)
    # matching coefficients of e_p(t+1) - rho0 e_p(t)
    mat = np.zeros((deg + 1, deg + 1))
    for u in range(deg + 1):
        for v in range(u + 1):
            mat[v, u] += math.comb(u, v)
        mat[u, u] -= rho0
    return np.linalg.solve(mat, rhs)


def poly_eval_coeffs(coeffs, t):
    out = 0.0
    for c in coeffs[::-1]:
        out = out * t + c
    return out


# ---------------------------------------------------------------------------
# closed-form Pick determinant (factored product form)

def closed_form_pick_det(rho: float, n: int, m: float, L: float, eps) -> float:
    theta1 = heavy_ball_rate(m, L)
    eps = list(eps)
    u1 = float(np.prod([rho ** 2 / (1 + e) for e in eps])
               - theta1 ** 2 * np.prod([1 + e for e in eps]))
    u2 = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            u2 *= rho ** 2 * (eps[i] - eps[j]) ** 2 / ((1 + eps[i]) * (1 + eps[j]))
    den = 1.0
    for i in range(n):
        for j in range(n):
            den *= (1 + eps[i]) - rho ** 2 / (1 + eps[j])
    return u1 * u2 / den


# ---------------------------------------------------------------------------
# random algorithm constructions

def random_stable_monic(rng, deg: int, radius: float) -> RealPolynomial:
    """Monic real polynomial with all roots inside the given radius."""
    poly = RealPolynomial((1.0,))
    left = deg
    while left > 0:
        if left >= 2 and rng.random() < 0.5:
            r = radius * math.sqrt(rng.random())
            th = rng.uniform(0.0, math.pi)
            re, im = r * math.cos(th), r * math.sin(th)
            poly = poly_mul(poly, RealPolynomial((re * re + im * im, -2 * re, 1.0)))
            left -= 2
        else:
            root = rng.uniform(-radius, radius)
            poly = poly_mul(poly, RealPolynomial((-root, 1.0)))
            left -= 1
    return poly


def beta_from_denominator(denom: RealPolynomial) -> tuple[float, ...]:
    k = denom.degree
    return tuple(-denom.coeffs[k - 1 - j] for j in range(k))


def integrator_design_candidate(rng, n: int, m: float, L: float):
    """Random algorithm whose momentum denominator carries the (z-1)^(n-1)
    factor, with gradient weights chosen by pole placement at the midpoint
    gain.  Returns None when the draw is degenerate; stability over the whole
    sector is NOT guaranteed and must be checked by the caller."""
    qdeg = int(rng.integers(0, 3))
    k = (n - 1) + qdeg + 1
    q = random_stable_monic(rng, k - (n - 1), rng.uniform(0.3, 0.75))
    if abs(q(1.0)) < 0.05:
        return None
    denom = poly_mul(binomial_power(1.0, n - 1), q)
    target = random_stable_monic(rng, k + 1, rng.uniform(0.4, 0.8))
    lam0 = 0.5 * (m + L)
    denom_full = poly_mul(RealPolynomial((-1.0, 1.0)), denom)
    numer = (target - denom_full).scale(1.0 / lam0)
    if numer.degree > k or abs(numer(1.0)) < 1e-6:
        return None
    model = TransferModel(numer=numer, denom=denom, denom_full=denom_full, k=k)
    return params_from_transfer(model, m, L)


# ---------------------------------------------------------------------------
# worked-example fixtures (m=1, L=5, order 4, cubic trajectory)

CUBIC_A = [[0.0], [1.0], [0.0], [-1.0 / 3.0]]


@pytest.fixture
def cubic_spec() -> QuadraticCostSpec:
    return QuadraticCostSpec.from_diag([1.0], CUBIC_A)


@pytest.fixture
def sector15():
    return 1.0, 5.0
