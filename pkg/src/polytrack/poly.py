"""Real-coefficient polynomial arithmetic, root finding, and combinatorial utilities.

Coefficients are stored in ascending degree order (index i holds the coefficient
of z^i) and every operation returns a canonical trimmed form: leading
coefficients smaller than TRIM_REL times the largest coefficient magnitude are
dropped.  All arithmetic is 64-bit floating point; the documented validity
envelope is tracking orders n <= 6 and condition numbers kappa <= 100, beyond
which repeated-root conditioning degrades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

TRIM_REL = 1e-14


def _trim(coeffs) -> tuple[float, ...]:
    cs = [float(c) for c in coeffs]
    if not cs:
        return ()
    top = max(abs(c) for c in cs)
    if top == 0.0:
        return ()
    cut = TRIM_REL * top
    end = len(cs)
    while end > 0 and abs(cs[end - 1]) <= cut:
        end -= 1
    return tuple(cs[:end])


@dataclass(frozen=True)
class RealPolynomial:
    """Dense real polynomial in canonical trimmed form.

    The zero polynomial stores an empty coefficient tuple and reports
    degree -1.
    """

    coeffs: tuple[float, ...]

    @classmethod
    def from_coeffs(cls, coeffs) -> "RealPolynomial":
        return cls(_trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        # Horner evaluation; works for real and complex arguments.
        acc = 0.0 if not isinstance(z, complex) else 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "RealPolynomial":
        return RealPolynomial.from_coeffs(
            [i * c for i, c in enumerate(self.coeffs)][1:]
        )

    def scale(self, s: float) -> "RealPolynomial":
        return RealPolynomial.from_coeffs([s * c for c in self.coeffs])

    def __add__(self, other: "RealPolynomial") -> "RealPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [0.0] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return RealPolynomial.from_coeffs(out)

    def __sub__(self, other: "RealPolynomial") -> "RealPolynomial":
        return self + other.scale(-1.0)

    def __mul__(self, other: "RealPolynomial") -> "RealPolynomial":
        return poly_mul(self, other)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = [f"{c:g}*z^{i}" for i, c in enumerate(self.coeffs) if c != 0.0]
        return " + ".join(parts)


ZERO = RealPolynomial(())
ONE = RealPolynomial((1.0,))


@dataclass(frozen=True)
class RootSet:
    """Clustered roots of a polynomial with multiplicity estimates.

    roots holds (root, multiplicity) pairs; multiplicities sum to the
    polynomial degree.  residual is max |p(root)| over all roots divided by
    the largest coefficient magnitude.
    """

    roots: tuple[tuple[complex, int], ...]
    residual: float

    def all_roots(self) -> list[complex]:
        out = []
        for r, mult in self.roots:
            out.extend([r] * mult)
        return out

    def max_modulus(self) -> float:
        return max(abs(r) for r, _ in self.roots)


def poly_mul(a: RealPolynomial, b: RealPolynomial) -> RealPolynomial:
    """Convolution product of two polynomials."""
    if a.is_zero() or b.is_zero():
        return ZERO
    out = [0.0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ca in enumerate(a.coeffs):
        for j, cb in enumerate(b.coeffs):
            out[i + j] += ca * cb
    return RealPolynomial.from_coeffs(out)


def binomial_power(c: float, n: int) -> RealPolynomial:
    """(z - c)^n expanded by the binomial theorem.

    The coefficient of z^(n-j) is C(n, j) * (-c)^j, with binomials computed
    exactly as integers.
    """
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    out = [0.0] * (n + 1)
    power = 1.0  # (-c)^j, accumulated multiplicatively
    for j in range(n + 1):
        out[n - j] = math.comb(n, j) * power
        power *= -c
    return RealPolynomial.from_coeffs(out)


def _companion_eigvals(monic: list[float]) -> np.ndarray:
    # monic ascending coefficients c0..c[d-1], 1; LAPACK balances internally.
    d = len(monic) - 1
    a = np.zeros((d, d))
    idx = np.arange(d - 1)
    a[idx, idx + 1] = 1.0
    a[d - 1, :] = [-c for c in monic[:d]]
    return np.linalg.eigvals(a)


def _newton_polish(p: RealPolynomial, dp: RealPolynomial, root: complex,
                   max_iter: int = 20) -> complex:
    best = complex(root)
    best_val = abs(p(best))
    x = best
    for _ in range(max_iter):
        d = dp(x)
        if abs(d) == 0.0:
            break
        step = p(x) / d
        x = x - step
        v = abs(p(x))
        if v < best_val:
            best, best_val = x, v
        if abs(step) <= 1e-16 * (1.0 + abs(x)):
            break
    return best


def _pair_conjugates(roots: list[complex]) -> list[complex]:
    # Symmetrize near-conjugate pairs so real-input output comes in exact pairs.
    reals, upper, lower = [], [], []
    for r in roots:
        if abs(r.imag) <= 1e-10 * (1.0 + abs(r)):
            reals.append(complex(r.real, 0.0))
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)
    out = list(reals)
    lower_left = list(lower)
    for u in upper:
        if lower_left:
            j = min(range(len(lower_left)), key=lambda i: abs(lower_left[i].conjugate() - u))
            v = lower_left.pop(j)
            w = (u + v.conjugate()) / 2.0
            out.extend([w, w.conjugate()])
        else:
            out.append(u)
    out.extend(lower_left)
    return out


def poly_roots(p: RealPolynomial, tol: float = 1e-8,
               cluster_radius: float | None = None) -> RootSet:
    """All complex roots of p via companion-matrix eigenvalues plus Newton polish.

    Nearby roots (within cluster_radius, default 1e-4 * (1 + max |root|)) are
    merged into a single entry whose location is the cluster centroid and whose
    multiplicity is the cluster size; the centroid of a perturbed multiple root
    is substantially more accurate than any individual member.

    Raises NonConvergence when the scaled residual max|p(root)| / max|coeff|
    stays above tol after polishing.
    """
    if p.degree < 1:
        raise ValueError("root finding requires degree >= 1")
    lead = p.coeffs[-1]
    monic = [c / lead for c in p.coeffs]
    raw = list(_companion_eigvals(monic))

    dp = p.derivative()
    polished = [_newton_polish(p, dp, r) for r in raw]
    polished = _pair_conjugates(polished)

    scale = max(abs(c) for c in p.coeffs)
    residual = max(abs(p(r)) for r in polished) / scale
    if residual > tol:
        raise NonConvergence(
            f"root residual {residual:.3e} above tolerance {tol:.1e}; "
            "input polynomial is likely ill-conditioned"
        )

    if cluster_radius is None:
        cluster_radius = 1e-4 * (1.0 + max(abs(r) for r in polished))
    clusters: list[list[complex]] = []
    for r in sorted(polished, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            centroid = sum(cl) / len(cl)
            if abs(r - centroid) <= cluster_radius:
                cl.append(r)
                break
        else:
            clusters.append([r])
    entries = []
    for cl in clusters:
        centroid = sum(cl) / len(cl)
        if len(cl) > 1:
            # A root of multiplicity s is a simple root of the (s-1)-th
            # derivative; Newton there recovers it to full precision, while
            # the centroid of polished cluster members does not.
            q = p
            for _ in range(len(cl) - 1):
                q = q.derivative()
            refined = _newton_polish(q, q.derivative(), centroid)
            if abs(refined - centroid) <= cluster_radius:
                centroid = refined
        if abs(centroid.imag) <= 1e-10 * (1.0 + abs(centroid)):
            centroid = complex(centroid.real, 0.0)
        entries.append((centroid, len(cl)))
    entries.sort(key=lambda e: (e[0].real, e[0].imag))
    return RootSet(roots=tuple(entries), residual=residual)


def root_multiplicity_at(p: RealPolynomial, z0: float, tol: float = 1e-7) -> int:
    """Largest r such that |p^(s)(z0)| <= tol * max|coeff| * s! for all s < r.

    Returns 0 when p(z0) already exceeds the scaled tolerance.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.is_zero():
        return 0
    scale = max(abs(c) for c in p.coeffs)
    q = p
    r = 0
    while r <= p.degree:
        if abs(q(z0)) > tol * scale * math.factorial(r):
            return r
        q = q.derivative()
        r += 1
    return p.degree


def falling_factorial(x: int, r: int) -> int:
    """(x)_r = x (x-1) ... (x-r+1); empty product is 1."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    out = 1
    for i in range(r):
        out *= x - i
    return out


def stirling_second(n: int, s: int) -> int:
    """Stirling number of the second kind via the triangular recurrence."""
    if not 0 <= s <= n:
        raise ValueError("need 0 <= s <= n")
    row = [1]  # S(0, 0)
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for j in range(1, m + 1):
            upper = row[j] if j < len(row) else 0
            new[j] = j * upper + row[j - 1]
        row = new
    return row[s]


def _power_numerator_int(r: int) -> list[int]:
    # Exact integer coefficients via the recurrence
    # N_{q+1}(z) = z (q+1) N_q(z) - z (z-1) N_q'(z), N_0(z) = z.
    b = [0, 1]
    for q in range(r):
        db = [i * c for i, c in enumerate(b)][1:]
        t1 = [0] + [(q + 1) * c for c in b]                     # z (q+1) B
        zz = [0, 0] + db                                        # z^2 B'
        z1 = [0] + db                                           # z B'
        n = max(len(t1), len(zz), len(z1))
        out = [0] * n
        for i, c in enumerate(t1):
            out[i] += c
        for i, c in enumerate(zz):
            out[i] -= c
        for i, c in enumerate(z1):
            out[i] += c
        while out and out[-1] == 0:
            out.pop()
        b = out
    return b


def ztransform_power_numerator(r: int) -> RealPolynomial:
    """Numerator N_r of the one-sided z-transform of t^r, i.e.

        sum_{t>=0} t^r z^{-t} = N_r(z) / (z-1)^(r+1).

    Computed with exact integer arithmetic; satisfies N_r(1) = r! and
    deg N_r <= r + 1.
    """
    if r < 0:
        raise ValueError("power must be nonnegative")
    return RealPolynomial.from_coeffs(_power_numerator_int(r))
