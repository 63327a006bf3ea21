"""Worst-case convergence-rate analysis over a curvature sector [m, L].

The asymptotic rate of an algorithm is the supremum over lam in [m, L] of the
spectral radius of its closed-loop recursion at curvature lam, computed here
as the maximum root modulus of the characteristic polynomial.  The curve
lam -> spectral radius has kinks where the dominant root changes, so the
supremum is located by a dense grid followed by golden-section refinement of
every grid-local maximum rather than by a smooth optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algoform import AlgorithmParams, TransferModel, characteristic_polynomial
from .errors import BadSector
from .synth import heavy_ball_rate, optimal_rate

STABILITY_MARGIN = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RateReport:
    """Supremum rate, its location, the sampled curve, and the order-n bound."""

    sup_rate: float
    argmax_lambda: float
    samples: tuple[tuple[float, float], ...]
    stable: bool
    marginal: bool
    bound: float | None = None
    meets_bound: bool | None = None

    def to_dict(self, include_samples: bool = False) -> dict:
        d = {
            "sup_rate": self.sup_rate,
            "argmax_lambda": self.argmax_lambda,
            "stable": self.stable,
            "marginal": self.marginal,
            "bound": self.bound,
            "meets_bound": self.meets_bound,
            "n_samples": len(self.samples),
        }
        if include_samples:
            d["samples"] = [[lam, r] for lam, r in self.samples]
        return d


def spectral_radius_at(model: TransferModel, lam: float) -> float:
    """Max root modulus of the characteristic polynomial at curvature lam."""
    from .poly import poly_roots

    cp = characteristic_polynomial(model, lam)
    return poly_roots(cp).max_modulus()


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    # Golden-section search for a maximum on [a, b].
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def sup_rate(model: TransferModel, m: float, L: float, grid: int = 2001,
             declared_n: int | None = None,
             bound_tol: float = 1e-6) -> RateReport:
    """Worst-case rate over lam in [m, L].

    Evaluates the spectral radius on a uniform grid (default 2001 points),
    then refines around every grid-local maximum by golden section until the
    lam-bracket is below 1e-9 * (L - m).  When declared_n is given the report
    also carries the order-n lower bound and whether the rate meets it.
    """
    if not (m > 0 and L >= m):
        raise BadSector(f"need L >= m > 0, got m={m}, L={L}")
    if grid < 2:
        grid = 2

    if L == m:
        r = spectral_radius_at(model, m)
        samples = ((m, r),)
        best_lam, best = m, r
    else:
        lams = [m + (L - m) * i / (grid - 1) for i in range(grid)]
        vals = [spectral_radius_at(model, lam) for lam in lams]
        samples = tuple(zip(lams, vals))

        candidates = []  # index list of local maxima, endpoints included
        for i in range(grid):
            left = vals[i - 1] if i > 0 else -math.inf
            right = vals[i + 1] if i < grid - 1 else -math.inf
            if vals[i] >= left and vals[i] >= right:
                candidates.append(i)
        candidates.sort(key=lambda i: vals[i], reverse=True)
        candidates = candidates[:12]

        best_lam, best = max(zip(lams, vals), key=lambda p: p[1])
        tol = 1e-9 * (L - m)
        f = lambda lam: spectral_radius_at(model, lam)
        for i in candidates:
            a = lams[max(i - 1, 0)]
            b = lams[min(i + 1, grid - 1)]
            lam_r, val_r = _golden_max(f, a, b, tol)
            if val_r > best:
                best_lam, best = lam_r, val_r

    stable = best < 1.0 - STABILITY_MARGIN
    marginal = abs(best - 1.0) <= STABILITY_MARGIN
    bound = meets = None
    if declared_n is not None:
        bound = rate_lower_bound(m, L, declared_n)
        meets = best >= bound - bound_tol
    return RateReport(
        sup_rate=best,
        argmax_lambda=best_lam,
        samples=samples,
        stable=stable,
        marginal=marginal,
        bound=bound,
        meets_bound=meets,
    )


def heavy_ball_params(m: float, L: float) -> AlgorithmParams:
    """Classical momentum step sizes: alpha = 4/(sqrt(L)+sqrt(m))^2 and
    beta = ((sqrt(L)-sqrt(m))/(sqrt(L)+sqrt(m)))^2, as a k=1 instance."""
    if not (m > 0 and L >= m):
        raise BadSector(f"need L >= m > 0, got m={m}, L={L}")
    sl, sm = math.sqrt(L), math.sqrt(m)
    alpha = 4.0 / (sl + sm) ** 2
    beta = heavy_ball_rate(m, L) ** 2
    return AlgorithmParams(k=1, alpha=(alpha, 0.0), beta=(beta,),
                           m=float(m), L=float(L))


def rate_lower_bound(m: float, L: float, n: int) -> float:
    """Necessary rate floor for any order-n exact-tracking algorithm; shares
    its value with optimal_rate but names the bound role."""
    return optimal_rate(m, L, n)
