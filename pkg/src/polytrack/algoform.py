"""Model of the k-step momentum/gradient recursion

    x(t+1) = x(t) + sum_{j=0}^{k-1} beta_j (x(t-j) - x(t-j-1))
                  - sum_{j=0}^{k}   alpha_j grad f(x(t-j), t-j)

as a loop transfer function.  The closed-loop characteristic polynomial at a
scalar curvature lam is (z-1) * denom(z) + lam * numer(z), where

    numer(z) = sum_j alpha_j z^(k-j)        (gradient path)
    denom(z) = z^k - sum_j beta_j z^(k-j-1) (momentum feedback, monic)

and denom_full = (z-1) * denom carries the loop integrators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadSector, LengthMismatch, ZeroAlphaSum
from .poly import (
    RealPolynomial,
    falling_factorial,
    poly_mul,
    root_multiplicity_at,
)

_Z_MINUS_1 = RealPolynomial((-1.0, 1.0))


@dataclass(frozen=True)
class AlgorithmParams:
    """One instance of the recursion: history depth, weights, sector bounds."""

    k: int
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    m: float
    L: float

    @property
    def kappa(self) -> float:
        return self.L / self.m

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "m": self.m,
            "L": self.L,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AlgorithmParams":
        return cls(
            k=int(d["k"]),
            alpha=tuple(float(a) for a in d["alpha"]),
            beta=tuple(float(b) for b in d["beta"]),
            m=float(d["m"]),
            L=float(d["L"]),
        )


def validate(params: AlgorithmParams) -> None:
    """Raise a typed error unless params satisfies all structural invariants."""
    if params.k < 0:
        raise LengthMismatch("history depth k must be nonnegative")
    if len(params.alpha) != params.k + 1:
        raise LengthMismatch(
            f"expected {params.k + 1} gradient weights, got {len(params.alpha)}"
        )
    if len(params.beta) != params.k:
        raise LengthMismatch(
            f"expected {params.k} momentum weights, got {len(params.beta)}"
        )
    if not (params.m > 0 and params.L >= params.m):
        raise BadSector(f"need L >= m > 0, got m={params.m}, L={params.L}")
    total = sum(params.alpha)
    scale = sum(abs(a) for a in params.alpha)
    if scale == 0.0 or abs(total) <= 1e-12 * scale:
        raise ZeroAlphaSum("gradient weights must not sum to zero")


@dataclass(frozen=True)
class TransferModel:
    """Loop numerator/denominator polynomials of one algorithm instance."""

    numer: RealPolynomial
    denom: RealPolynomial
    denom_full: RealPolynomial
    k: int


def build_transfer(params: AlgorithmParams) -> TransferModel:
    """Construct the transfer model; denom is monic of degree k."""
    validate(params)
    k = params.k
    d = [0.0] * (k + 1)
    d[k] = 1.0
    for j, b in enumerate(params.beta):
        d[k - j - 1] -= b
    n = [0.0] * (k + 1)
    for j, a in enumerate(params.alpha):
        n[k - j] = a
    denom = RealPolynomial(tuple(d))  # monic by construction, no trim needed
    numer = RealPolynomial.from_coeffs(n)
    return TransferModel(
        numer=numer,
        denom=denom,
        denom_full=poly_mul(_Z_MINUS_1, denom),
        k=k,
    )


def params_from_transfer(model: TransferModel, m: float, L: float) -> AlgorithmParams:
    """Invert build_transfer; exact round trip on valid inputs."""
    k = model.k
    alpha = [0.0] * (k + 1)
    for j in range(k + 1):
        i = k - j
        alpha[j] = model.numer.coeffs[i] if i < len(model.numer.coeffs) else 0.0
    beta = [0.0] * k
    for j in range(k):
        beta[j] = -model.denom.coeffs[k - j - 1]
    return AlgorithmParams(k=k, alpha=tuple(alpha), beta=tuple(beta), m=m, L=L)


def characteristic_polynomial(model: TransferModel, lam: float) -> RealPolynomial:
    """Closed-loop characteristic polynomial (z-1) * denom + lam * numer."""
    return model.denom_full + model.numer.scale(lam)


def integrator_count(model: TransferModel, tol: float = 1e-7) -> int:
    """Multiplicity of the root z=1 in the full loop denominator (always >= 1)."""
    return root_multiplicity_at(model.denom_full, 1.0, tol)


def tracking_condition_holds(params: AlgorithmParams, order: int,
                             rtol: float = 1e-7) -> bool:
    """Check the momentum-weight identity required for exact tracking of
    polynomial optima of degree order-1:

        sum_j beta_j (khat - j - 1)_r = (khat)_r   for 0 <= r <= order-2,

    where (.)_r is the falling factorial.  Both sides are degree-r polynomials
    in khat, so the identity over all khat >= k follows from its truth on the
    finite witness set khat in {k, ..., k + order}.
    """
    if order < 1:
        raise ValueError("tracking order must be >= 1")
    k = params.k
    for r in range(order - 1):
        for khat in range(k, k + order + 1):
            terms = [
                b * falling_factorial(khat - j - 1, r)
                for j, b in enumerate(params.beta)
            ]
            lhs = sum(terms)
            rhs = falling_factorial(khat, r)
            scale = sum(abs(t) for t in terms) + abs(rhs) + 1.0
            if abs(lhs - rhs) > rtol * scale:
                return False
    return True
