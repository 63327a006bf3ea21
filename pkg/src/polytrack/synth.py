"""Synthesis of the rate-optimal tracking algorithm for a sector [m, L] and
tracking order n (polynomial optima of degree n-1).

The construction places the loop numerator and denominator at

    numer(z) = K1 (z - rho^2)^(2n) + K2 (z - 1)^(2n) - K3 (z - rho^2)^n (z - 1)^n
    denom(z) = (z - rho^2)^n (z - 1)^(n-1)

with rho = rho_hb^(1/n) the achieved worst-case rate and rho_hb the classical
heavy-ball rate (sqrt(kappa)-1)/(sqrt(kappa)+1).  Because K3 = K1 + K2 the
z^(2n) term of the numerator cancels, so the emitted history depth is
k = 2n - 1 with k+1 gradient weights and k momentum weights.

Coefficients are produced by two independent routes - explicit binomial sums
and direct polynomial products - and cross-checked; disagreement is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algoform import AlgorithmParams, validate
from .errors import BadSector, DegenerateSector, IllConditioned
from .poly import binomial_power, poly_mul

ROUTE_RTOL = 1e-10
CANCEL_RTOL = 1e-8


@dataclass(frozen=True)
class SynthesisReport:
    """Synthesized parameters plus the scalar constants of the construction."""

    params: AlgorithmParams
    rho: float
    rho_hb: float
    k1: float
    k2: float
    k3: float
    n: int
    cancellation_residual: float

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "rho": self.rho,
            "rho_hb": self.rho_hb,
            "k1": self.k1,
            "k2": self.k2,
            "k3": self.k3,
            "n": self.n,
            "cancellation_residual": self.cancellation_residual,
        }


def _check_sector(m: float, L: float) -> None:
    if not (m > 0 and L >= m):
        raise BadSector(f"need L >= m > 0, got m={m}, L={L}")


def heavy_ball_rate(m: float, L: float) -> float:
    """(sqrt(L) - sqrt(m)) / (sqrt(L) + sqrt(m))."""
    _check_sector(m, L)
    sl, sm = math.sqrt(L), math.sqrt(m)
    return (sl - sm) / (sl + sm)


def compensator_constants(m: float, L: float) -> tuple[float, float, float]:
    """Numerator mixing constants of the construction:

        K1 = (sqrt(L)+sqrt(m))^2 / (4 L m)
        K2 = (sqrt(L)-sqrt(m))^2 / (4 L m)
        K3 = (L + m) / (2 L m)

    K3 is returned as the exact floating-point sum K1 + K2 so the identity
    K3 = K1 + K2 that drives the leading-term cancellation holds exactly.
    """
    _check_sector(m, L)
    sl, sm = math.sqrt(L), math.sqrt(m)
    k1 = (sl + sm) ** 2 / (4.0 * L * m)
    k2 = (sl - sm) ** 2 / (4.0 * L * m)
    return k1, k2, k1 + k2


def optimal_rate(m: float, L: float, n: int) -> float:
    """Optimal worst-case geometric rate rho_hb^(1/n); 0 when L == m."""
    _check_sector(m, L)
    if n < 1:
        raise ValueError("tracking order must be >= 1")
    if L == m:
        return 0.0
    return math.exp(math.log(heavy_ball_rate(m, L)) / n)


def _alpha_binomial(j: int, n: int, rho2: float,
                    k1: float, k2: float, k3: float) -> float:
    # Coefficient of z^(2n-j) in the three-term numerator, by binomial sums.
    cross = 0.0
    for i in range(j + 1):
        if i > n or j - i > n:
            continue
        cross += (math.comb(n, i) * math.comb(n, j - i)
                  * (-rho2) ** i * (-1.0) ** (j - i))
    return (k1 * math.comb(2 * n, j) * (-rho2) ** j
            + k2 * math.comb(2 * n, j) * (-1.0) ** j) - k3 * cross


def _beta_binomial(j: int, n: int, rho2: float) -> float:
    # Momentum weight from the expansion of (z - rho^2)^n (z - 1)^(n-1).
    total = 0.0
    for i in range(j + 2):
        if i > n or j + 1 - i > n - 1:
            continue
        total += (math.comb(n, i) * math.comb(n - 1, j + 1 - i)
                  * (-rho2) ** i * (-1.0) ** (j + 1 - i))
    return -total


def synthesize(m: float, L: float, n: int) -> SynthesisReport:
    """Construct the rate-optimal order-n tracking algorithm for [m, L].

    Raises DegenerateSector when L == m, BadSector on invalid bounds, and
    IllConditioned when the two coefficient routes disagree beyond tolerance
    or the cancelled leading term fails to vanish numerically.
    """
    _check_sector(m, L)
    if n < 1:
        raise ValueError("tracking order must be >= 1")
    if L == m:
        raise DegenerateSector("sector is a single point; rate is 0 and no "
                               "nontrivial synthesis is defined")

    rho_hb = heavy_ball_rate(m, L)
    rho = math.exp(math.log(rho_hb) / n)
    # rho^2 from the log form directly, avoiding compounded root extraction.
    rho2 = math.exp(2.0 * math.log(rho_hb) / n)
    k1, k2, k3 = compensator_constants(m, L)
    k = 2 * n - 1

    # Route A: explicit binomial sums.  Index 0 of the raw numerator carries
    # the cancelled z^(2n) term; the emitted weights start at index 1.
    lead_a = _alpha_binomial(0, n, rho2, k1, k2, k3)
    alpha_a = [_alpha_binomial(j + 1, n, rho2, k1, k2, k3) for j in range(2 * n)]
    beta_a = [_beta_binomial(j, n, rho2) for j in range(2 * n - 1)]

    # Route B: direct polynomial products.
    p_rho = binomial_power(rho2, 2 * n)
    p_one = binomial_power(1.0, 2 * n)
    p_mix = poly_mul(binomial_power(rho2, n), binomial_power(1.0, n))
    nf = [0.0] * (2 * n + 1)
    for i in range(2 * n + 1):
        nf[i] = (k1 * p_rho.coeffs[i] + k2 * p_one.coeffs[i]) - k3 * p_mix.coeffs[i]
    lead_b = nf[2 * n]
    alpha_b = [nf[2 * n - 1 - j] for j in range(2 * n)]
    denom = poly_mul(binomial_power(rho2, n), binomial_power(1.0, n - 1))
    beta_b = [-denom.coeffs[k - 1 - j] for j in range(k)]

    scale_alpha = max(abs(a) for a in alpha_b)
    scale_beta = max(abs(b) for b in beta_b)
    for a, b in zip(alpha_a, alpha_b):
        if abs(a - b) > ROUTE_RTOL * scale_alpha:
            raise IllConditioned(
                f"coefficient routes disagree: {a!r} vs {b!r} "
                f"(scale {scale_alpha:.3e})"
            )
    for a, b in zip(beta_a, beta_b):
        if abs(a - b) > ROUTE_RTOL * scale_beta:
            raise IllConditioned(
                f"momentum routes disagree: {a!r} vs {b!r} "
                f"(scale {scale_beta:.3e})"
            )

    residual = max(abs(lead_a), abs(lead_b))
    if residual > CANCEL_RTOL * scale_alpha:
        raise IllConditioned(
            f"leading-term cancellation residual {residual:.3e} exceeds "
            f"{CANCEL_RTOL:.1e} * {scale_alpha:.3e}; precision exhausted"
        )

    params = AlgorithmParams(k=k, alpha=tuple(alpha_b), beta=tuple(beta_b),
                             m=float(m), L=float(L))
    validate(params)
    return SynthesisReport(
        params=params,
        rho=rho,
        rho_hb=rho_hb,
        k1=k1,
        k2=k2,
        k3=k3,
        n=n,
        cancellation_residual=residual,
    )
