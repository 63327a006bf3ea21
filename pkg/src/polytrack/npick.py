"""Interpolation-feasibility layer for the disk pole-placement problem.

An n-integrator loop with uncertain gain lam in [m, L] admits poles confined
to |z| < rho only if a bounded-analytic interpolant exists on the unit disk;
this module provides the conformal map theta carrying the admissible gain
region onto the disk, its inverse, the extremal Blaschke interpolant, the Pick
matrix of the perturbed-pole problem, and the closed-form determinant limit
whose sign decides feasibility (nonnegative iff rho^n >= theta(1) = classical
heavy-ball rate).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadPerturbations, BadSector, DomainViolation, Singularity
from .synth import heavy_ball_rate

_EDGE_TOL = 1e-12


def _check_sector(m: float, L: float) -> None:
    if not (m > 0 and L > m):
        raise BadSector(f"need L > m > 0, got m={m}, L={L}")


def gain_region_cut(m: float, L: float) -> tuple[float, float]:
    """Real-axis branch-cut endpoints: the map is undefined on
    (-inf, 2m/(m-L)] and [2L/(L-m), +inf)."""
    return 2.0 * m / (m - L), 2.0 * L / (L - m)


def sector_disk_map(z, m: float, L: float) -> complex:
    """Conformal map of the admissible-gain region into the unit disk:

        theta(z) = (1 - w) / (1 + w),
        w = sqrt((1 - z (L-m)/(2L)) / (1 - z (m-L)/(2m)))

    using the principal square root, which pins theta(0) = 0 and
    theta(1) = (sqrt(L)-sqrt(m))/(sqrt(L)+sqrt(m)).  Real arguments on the
    branch cut raise DomainViolation.
    """
    _check_sector(m, L)
    zc = complex(z)
    lo, hi = gain_region_cut(m, L)
    if abs(zc.imag) <= _EDGE_TOL * (1.0 + abs(zc)):
        x = zc.real
        if x <= lo + _EDGE_TOL or x >= hi - _EDGE_TOL:
            raise DomainViolation(
                f"z={z} lies on the real branch cut (-inf, {lo:g}] u [{hi:g}, inf)"
            )
    num = 1.0 - zc * (L - m) / (2.0 * L)
    den = 1.0 - zc * (m - L) / (2.0 * m)
    w = cmath.sqrt(num / den)
    return (1.0 - w) / (1.0 + w)


def sector_disk_map_inverse(w, m: float, L: float) -> complex:
    """Inverse of sector_disk_map:

        theta_inv(w) = 8 L m w / ((L-m) (L (w-1)^2 + m (w+1)^2)).

    Raises Singularity when the denominator vanishes within tolerance.
    """
    _check_sector(m, L)
    wc = complex(w)
    den = (L - m) * (L * (wc - 1.0) ** 2 + m * (wc + 1.0) ** 2)
    scale = (L - m) * (L * (abs(wc) + 1.0) ** 2 + m * (abs(wc) + 1.0) ** 2)
    if abs(den) <= 1e-14 * scale:
        raise Singularity(f"inverse map denominator vanishes at w={w}")
    return 8.0 * L * m * wc / den


def blaschke_interpolant(z, rho: float, n: int, m: float, L: float) -> complex:
    """Extremal disk interpolant with an n-fold zero at rho and value
    theta(1) at the origin:

        S_hat(z) = (theta(1) / rho^n) * ((rho - z) / (1 - rho z))^n.

    When rho^n equals theta(1) this is a scaled finite Blaschke product with
    |S_hat| <= 1 on the closed unit disk.
    """
    _check_sector(m, L)
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be >= 1")
    zc = complex(z)
    if abs(1.0 - rho * zc) <= 1e-14 * (1.0 + abs(zc)):
        raise Singularity(f"interpolant pole at z={z}")
    theta1 = heavy_ball_rate(m, L)
    return (theta1 / rho ** n) * ((rho - zc) / (1.0 - rho * zc)) ** n


@dataclass(frozen=True)
class GainMarginProblem:
    """Disk pole-placement feasibility instance: sector, integrator order,
    target radius, and the distinct positive pole perturbations."""

    m: float
    L: float
    n: int
    rho: float
    epsilons: tuple[float, ...]

    def __post_init__(self):
        _check_sector(self.m, self.L)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if len(self.epsilons) != self.n:
            raise BadPerturbations(
                f"need {self.n} perturbations, got {len(self.epsilons)}"
            )
        if any(e <= 0.0 for e in self.epsilons):
            raise BadPerturbations("perturbations must be positive")
        if len(set(self.epsilons)) != self.n:
            raise BadPerturbations("perturbations must be pairwise distinct")

    @classmethod
    def with_default_perturbations(cls, m: float, L: float, n: int, rho: float,
                                   delta: float = 1e-3) -> "GainMarginProblem":
        # Any distinct positive values serve; delta * (1, ..., n) is canonical.
        return cls(m=m, L=L, n=n, rho=rho,
                   epsilons=tuple(delta * (i + 1) for i in range(n)))


@dataclass(frozen=True)
class PickMatrixReport:
    """Assembled Pick matrix with its determinant, extremal eigenvalue, and
    positive-semidefiniteness verdict."""

    matrix: tuple[tuple[float, ...], ...]
    min_eigenvalue: float
    determinant: float
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "matrix": [list(row) for row in self.matrix],
            "min_eigenvalue": self.min_eigenvalue,
            "determinant": self.determinant,
            "feasible": self.feasible,
        }


def _fraction_det(mat: list[list[Fraction]]) -> Fraction:
    # Exact Gaussian elimination; pivots are nonzero for these matrices or the
    # determinant is exactly zero.
    n = len(mat)
    a = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] / inv
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    return det


def pick_matrix(problem: GainMarginProblem) -> PickMatrixReport:
    """Assemble the (n+1) x (n+1) Pick matrix

        M = [[P, 1], [1^T, R]],
        P_ij = 1 / (1 - rho^2 / ((1+eps_i)(1+eps_j))),  R = 1 - theta(1)^2.

    The determinant is computed in exact rational arithmetic because the true
    value scales like the product of squared perturbation gaps and is far
    below what floating-point elimination can resolve for n >= 3; the
    eigenvalue-based PSD verdict uses a threshold scaled by the matrix norm.
    """
    n = problem.n
    theta1 = heavy_ball_rate(problem.m, problem.L)
    rho2 = Fraction(problem.rho) ** 2
    eps = [Fraction(e) for e in problem.epsilons]
    t2 = Fraction(theta1) ** 2

    size = n + 1
    exact: list[list[Fraction]] = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            exact[i][j] = 1 / (1 - rho2 / ((1 + eps[i]) * (1 + eps[j])))
        exact[i][n] = Fraction(1)
        exact[n][i] = Fraction(1)
    exact[n][n] = 1 - t2

    det = float(_fraction_det(exact))
    mat = np.array([[float(v) for v in row] for row in exact])
    eigs = np.linalg.eigvalsh(mat)
    min_eig = float(eigs[0])
    norm = float(np.max(np.abs(eigs)))
    feasible = min_eig >= -1e-10 * max(norm, 1.0)
    return PickMatrixReport(
        matrix=tuple(tuple(row) for row in mat.tolist()),
        min_eigenvalue=min_eig,
        determinant=det,
        feasible=feasible,
    )


def feasibility_limit(rho: float, n: int, m: float, L: float) -> float:
    """Zero-perturbation limit of det(M) normalized by the perturbation-gap
    factor:

        (rho^(2n) - theta(1)^2) / (1 - rho^2)^(n^2),

    nonnegative exactly when rho^n >= theta(1)."""
    _check_sector(m, L)
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    theta1 = heavy_ball_rate(m, L)
    return (rho ** (2 * n) - theta1 ** 2) / (1.0 - rho ** 2) ** (n * n)
