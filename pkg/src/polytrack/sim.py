"""Online tracking simulator for time-varying quadratic costs.

Costs have the form f(x, t) = 0.5 (x - xstar(t))' Delta (x - xstar(t)) + c
with a polynomial optimum trajectory xstar(t) = a_0 + a_1 t + ... and a
curvature matrix Delta whose spectrum lies in the algorithm's sector [m, L].

Because xstar grows like t^(n-1), simulating the raw recursion in original
coordinates loses the tracking error to cancellation at long horizons (the
roundoff of each update scales with |xstar|, which can exceed the 1e-8 error
floor well before t = 300).  run() therefore advances the algebraically
identical error-coordinate recursion

    e(t+1) = e(t) + sum_j beta_j (e(t-j) - e(t-j-1))
                  - sum_j alpha_j Delta e(t-j) + f0(t)

where the forcing f0(t) = sum_j beta_j dx(t-j) - dx(t+1), with dx the first
difference of xstar, is collapsed once into a low-degree polynomial in t so
 its evaluation stays at the forcing's own tiny scale.  f0 vanishes
identically exactly when the momentum weights satisfy the polynomial-tracking
identity; run_shifted() drops it and is the time-invariant form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algoform import AlgorithmParams, tracking_condition_holds, validate
from .errors import (
    BadSector,
    Condition1Violated,
    DimensionMismatch,
    Divergence,
)

DIVERGENCE_LIMIT = 1e12
ERROR_FLOOR = 1e-13
RATE_FIT_BAND = (1e-12, 1e-2)


@dataclass(frozen=True)
class QuadraticCostSpec:
    """Curvature matrix, polynomial optimum trajectory, and cost offset.

    a has shape (n, p): row i is the coefficient vector of t^i.  Trailing
    all-zero rows are trimmed so the last row defines the true order.
    """

    p: int
    delta: np.ndarray
    a: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        delta = np.atleast_2d(np.asarray(self.delta, dtype=float))
        if delta.shape != (self.p, self.p):
            raise DimensionMismatch(
                f"curvature matrix shape {delta.shape} != ({self.p}, {self.p})"
            )
        if not np.allclose(delta, delta.T, atol=1e-12 * max(1.0, float(np.max(np.abs(delta))))):
            raise DimensionMismatch("curvature matrix must be symmetric")
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        if a.shape[1] != self.p:
            raise DimensionMismatch(
                f"trajectory coefficients have dimension {a.shape[1]}, expected {self.p}"
            )
        while a.shape[0] > 1 and not np.any(a[-1]):
            a = a[:-1]
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "a", a)

    @classmethod
    def from_diag(cls, diag, a, c: float = 0.0) -> "QuadraticCostSpec":
        diag = np.asarray(diag, dtype=float).ravel()
        return cls(p=len(diag), delta=np.diag(diag), a=np.atleast_2d(a), c=c)

    @property
    def order(self) -> int:
        """Tracking order n: one plus the trajectory degree."""
        return self.a.shape[0]

    def eig_range(self) -> tuple[float, float]:
        eigs = np.linalg.eigvalsh(self.delta)
        return float(eigs[0]), float(eigs[-1])

    def check_sector(self, m: float, L: float, tol: float = 1e-9) -> None:
        lo, hi = self.eig_range()
        slack = tol * max(1.0, abs(L))
        if lo < m - slack or hi > L + slack:
            raise BadSector(
                f"curvature spectrum [{lo:g}, {hi:g}] outside sector [{m:g}, {L:g}]"
            )


@dataclass(frozen=True)
class TrajectoryTrace:
    """Time series of a tracking run plus fitted summary statistics."""

    times: np.ndarray
    iterates: np.ndarray
    optima: np.ndarray
    errors: np.ndarray
    fitted_rate: float | None
    steady_state_error: float
    converged_to_floor: bool

    def summary_dict(self) -> dict:
        return {
            "T": int(self.times[-1]),
            "fitted_rate": self.fitted_rate,
            "steady_state_error": self.steady_state_error,
            "converged_to_floor": self.converged_to_floor,
            "final_error": float(self.errors[-1]),
        }


def optimum_at(spec: QuadraticCostSpec, t: int) -> np.ndarray:
    """Trajectory value a_0 + a_1 t + ... by coordinatewise Horner."""
    out = np.zeros(spec.p)
    for row in spec.a[::-1]:
        out = out * t + row
    return out


def cost_at(spec: QuadraticCostSpec, x: np.ndarray, t: int) -> float:
    d = np.asarray(x, dtype=float) - optimum_at(spec, t)
    return 0.5 * float(d @ spec.delta @ d) + spec.c


def gradient(spec: QuadraticCostSpec, x: np.ndarray, t: int) -> np.ndarray:
    """Cost gradient Delta (x - xstar(t))."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.p,):
        raise DimensionMismatch(f"iterate shape {x.shape} != ({spec.p},)")
    return spec.delta @ (x - optimum_at(spec, t))


def gradient_descent_params(m: float, L: float) -> AlgorithmParams:
    """Plain gradient step with the classical 2/(L+m) step size (k = 0)."""
    if not (m > 0 and L >= m):
        raise BadSector(f"need L >= m > 0, got m={m}, L={L}")
    return AlgorithmParams(k=0, alpha=(2.0 / (L + m),), beta=(), m=float(m), L=float(L))


def default_init_offset(p: int) -> np.ndarray:
    """Deterministic generic start: a unit vector shared by all histories."""
    return np.ones(p) / math.sqrt(p)


def default_init(params: AlgorithmParams, spec: QuadraticCostSpec,
                 offset: np.ndarray | None = None) -> np.ndarray:
    """x(0..k) all equal to xstar(0) plus a fixed unit offset."""
    if offset is None:
        offset = default_init_offset(spec.p)
    offset = np.asarray(offset, dtype=float)
    if offset.shape != (spec.p,):
        raise DimensionMismatch(f"init offset shape {offset.shape} != ({spec.p},)")
    x0 = optimum_at(spec, 0) + offset
    return np.tile(x0, (params.k + 1, 1))


def _difference_coeffs(a: np.ndarray) -> np.ndarray:
    # Coefficients (in t) of dx(t) = xstar(t) - xstar(t-1); degree n-2.
    n, p = a.shape
    if n == 1:
        return np.zeros((0, p))
    d = np.zeros((n - 1, p))
    for u in range(n - 1):
        for i in range(u + 1, n):
            d[u] += a[i] * math.comb(i, u) * (-1.0) ** (i - u + 1)
    return d


FORCING_SNAP_RTOL = 1e-9


def _forcing_coeffs(params: AlgorithmParams, spec: QuadraticCostSpec) -> np.ndarray:
    # Collapsed polynomial coefficients of
    #   f0(t) = sum_j beta_j dx(t-j) - dx(t+1)
    # computed once so per-step evaluation carries no large-magnitude
    # cancellation.  g_q = sum_j beta_j (-j)^q - 1 vanishes for q <= n-2
    # exactly when the tracking identity holds; weights that satisfy it only
    # up to their own float rounding leave g_q residue at the 1e-14 scale,
    # which the loop's low-frequency gain (1 / numer(1), easily 1e3..1e5)
    # would amplify into a false error floor.  Residues below the rounding
    # scale of the weights are therefore snapped to exact zero, reproducing
    # the exact-arithmetic recursion.
    d = _difference_coeffs(spec.a)
    deg = d.shape[0]
    if deg == 0:
        return np.zeros((0, spec.p))
    g = np.zeros(deg)
    for q in range(deg):
        acc = 0.0
        scale = 1.0
        for j, b in enumerate(params.beta):
            term = b * ((-float(j)) ** q if q > 0 else 1.0)
            acc += term
            scale += abs(term)
        residue = acc - 1.0
        g[q] = 0.0 if abs(residue) <= FORCING_SNAP_RTOL * scale else residue
    coeffs = np.zeros((deg, spec.p))
    for u in range(deg):
        for r in range(u, deg):
            coeffs[u] += d[r] * math.comb(r, u) * g[r - u]
    return coeffs


def _poly_eval_rows(coeffs: np.ndarray, t: float, p: int) -> np.ndarray:
    out = np.zeros(p)
    for row in coeffs[::-1]:
        out = out * t + row
    return out


def _fit_rate(errors: np.ndarray) -> tuple[float | None, bool]:
    # Geometric-rate fit: log10 least squares over the final 40% of the steps
    # whose error lies inside RATE_FIT_BAND (transient and floor excluded).
    lo, hi = RATE_FIT_BAND
    idx = np.flatnonzero((errors > lo) & (errors < hi))
    converged = bool(len(errors) and errors[-1] <= ERROR_FLOOR)
    if len(idx) < 5:
        return None, converged
    tail = idx[-max(5, int(0.4 * len(idx))):]
    t = tail.astype(float)
    y = np.log10(errors[tail])
    slope = np.polyfit(t, y, 1)[0]
    return float(10.0 ** slope), converged


def _advance(params: AlgorithmParams, spec: QuadraticCostSpec, T: int,
             err0: np.ndarray, forcing: np.ndarray | None) -> np.ndarray:
    k, p = params.k, spec.p
    e = np.zeros((T + 1, p))
    e[: k + 1] = err0
    delta = spec.delta
    for t in range(k, T):
        acc = e[t].copy()
        for j, b in enumerate(params.beta):
            acc += b * (e[t - j] - e[t - j - 1])
        for j, a in enumerate(params.alpha):
            if a != 0.0:
                acc -= a * (delta @ e[t - j])
        if forcing is not None and forcing.size:
            acc += _poly_eval_rows(forcing, float(t), p)
        e[t + 1] = acc
        err_norm = float(np.linalg.norm(acc))
        if not math.isfinite(err_norm) or err_norm > DIVERGENCE_LIMIT:
            raise Divergence(t + 1, err_norm)
    return e


def _make_trace(e: np.ndarray, spec: QuadraticCostSpec, T: int,
                add_back: bool, ss_window: int | None) -> TrajectoryTrace:
    times = np.arange(T + 1)
    optima = np.array([optimum_at(spec, int(t)) for t in times])
    errors = np.linalg.norm(e, axis=1)
    iterates = e + optima if add_back else e.copy()
    fitted, converged = _fit_rate(errors)
    if ss_window is None:
        ss_window = max(1, (T + 1) // 10)
    sse = float(np.mean(errors[-ss_window:]))
    return TrajectoryTrace(
        times=times,
        iterates=iterates,
        optima=optima,
        errors=errors,
        fitted_rate=fitted,
        steady_state_error=sse,
        converged_to_floor=converged,
    )


def _check_init(params: AlgorithmParams, spec: QuadraticCostSpec, T: int,
                init: np.ndarray | None) -> np.ndarray:
    if T <= params.k:
        raise DimensionMismatch(f"horizon T={T} must exceed history depth k={params.k}")
    if init is None:
        init = default_init(params, spec)
    init = np.atleast_2d(np.asarray(init, dtype=float))
    if init.shape != (params.k + 1, spec.p):
        raise DimensionMismatch(
            f"init shape {init.shape} != ({params.k + 1}, {spec.p})"
        )
    return init


def run(params: AlgorithmParams, spec: QuadraticCostSpec, T: int,
        init: np.ndarray | None = None,
        ss_window: int | None = None) -> TrajectoryTrace:
    """Simulate the recursion for T steps from x(0..k) = init.

    Iterates are reported in original coordinates; internally the error
    coordinates are advanced together with the collapsed forcing polynomial,
    which is algebraically identical to the raw recursion but keeps the error
    at its own scale at long horizons.
    """
    validate(params)
    spec.check_sector(params.m, params.L)
    init = _check_init(params, spec, T, init)
    err0 = init - np.array([optimum_at(spec, s) for s in range(params.k + 1)])
    forcing = _forcing_coeffs(params, spec)
    e = _advance(params, spec, T, err0, forcing)
    return _make_trace(e, spec, T, add_back=True, ss_window=ss_window)


def run_shifted(params: AlgorithmParams, spec: QuadraticCostSpec, T: int,
                init: np.ndarray | None = None,
                ss_window: int | None = None) -> TrajectoryTrace:
    """Time-invariant form: advance xtilde = x - xstar with no forcing term.

    Valid only when the momentum weights satisfy the polynomial-tracking
    identity at the trajectory's order (otherwise Condition1Violated); init is
    given in original coordinates and shifted internally.  Adding xstar(t)
    back to the reported iterates reproduces run() up to roundoff.
    """
    validate(params)
    spec.check_sector(params.m, params.L)
    if not tracking_condition_holds(params, spec.order):
        raise Condition1Violated(
            f"momentum weights do not support exact tracking at order {spec.order}"
        )
    init = _check_init(params, spec, T, init)
    err0 = init - np.array([optimum_at(spec, s) for s in range(params.k + 1)])
    e = _advance(params, spec, T, err0, forcing=None)
    return _make_trace(e, spec, T, add_back=False, ss_window=ss_window)


def steady_state_error(trace: TrajectoryTrace, window: int) -> float:
    """Mean tracking error over the final `window` steps."""
    if window < 1 or window > len(trace.errors):
        raise ValueError("window must be in [1, T+1]")
    return float(np.mean(trace.errors[-window:]))
