"""Exact rational linear algebra primitives.

Scalars are `fractions.Fraction`; vectors and matrices are plain sequences of
Fractions (or ints, treated as denominator-1 rationals).  The one dedicated
container is `GridVector`, a vector whose entries all share one denominator
and are deliberately kept unreduced, because the exact solver's rounding
scheme needs "every denominator equals Q" to be literally true.

When gmpy2 is importable its mpz/mpq types are used inside the elimination
kernels; results are always converted back to Fraction at the interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

try:
    from gmpy2 import divexact as _divexact
    from gmpy2 import mpq as _mpq
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int
    _mpq = Fraction

    def _divexact(a, b):
        return a // b

Rational = Fraction


class SingularMatrix(Exception):
    """A pivot vanished (exact mode) or a factorization failed (float mode)."""


class NonPositiveInput(ValueError):
    """An argument that must be strictly positive was not."""


@dataclass(frozen=True)
class GridVector:
    """Vector of rationals nums[i] / den with one shared, unreduced denominator."""

    nums: tuple[int, ...]
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError(f"grid denominator must be >= 1, got {self.den}")

    def __len__(self) -> int:
        return len(self.nums)

    def __iter__(self):
        return iter(self.entries())

    def entry(self, i: int) -> Fraction:
        return Fraction(self.nums[i], self.den)

    def entries(self) -> list[Fraction]:
        return [Fraction(n, self.den) for n in self.nums]

    def all_positive(self) -> bool:
        return all(n > 0 for n in self.nums)

    def scale_den(self, factor: int) -> "GridVector":
        """Divide the vector by `factor` by growing the shared denominator."""
        return GridVector(self.nums, self.den * factor)


def as_fraction_list(v) -> list[Fraction]:
    """Coerce a GridVector / Fraction sequence / numpy array to Fractions."""
    if isinstance(v, GridVector):
        return v.entries()
    if isinstance(v, np.ndarray):
        return [Fraction(float(x)) for x in v]
    return [x if isinstance(x, Fraction) else Fraction(x) for x in v]


def as_float_array(v) -> np.ndarray:
    if isinstance(v, GridVector):
        return np.array([n / v.den for n in v.nums], dtype=float)
    if isinstance(v, np.ndarray):
        return v.astype(float)
    return np.array([float(x) for x in v], dtype=float)


def _row_denominator_lcm(row, rhs) -> int:
    l = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            l = math.lcm(l, x.denominator)
    if isinstance(rhs, Fraction) and rhs.denominator != 1:
        l = math.lcm(l, rhs.denominator)
    return l


def _solve_spd_exact(H, g) -> list[Fraction]:
    n = len(g)
    # Clear denominators row by row (solutions are unchanged), then pull one
    # global denominator out of the right-hand side so the elimination runs
    # on integers only.  Fraction-free (Bareiss) elimination keeps every
    # intermediate value a minor of the integer matrix, so bit sizes stay
    # polynomial; plain Gaussian elimination would not.
    rows = []
    rhs = []
    for i in range(n):
        m = _row_denominator_lcm(H[i], 0)
        rows.append([int(x * m) if isinstance(x, Fraction) else x * m for x in H[i]])
        gi = g[i] if isinstance(g[i], Fraction) else Fraction(g[i])
        rhs.append(gi * m)
    c = 1
    for x in rhs:
        c = math.lcm(c, x.denominator)
    aug = [
        [_mpz(x) for x in rows[i]] + [_mpz(rhs[i].numerator * (c // rhs[i].denominator))]
        for i in range(n)
    ]

    prev = _mpz(1)
    for k in range(n):
        piv = aug[k][k]
        if piv == 0:
            raise SingularMatrix(f"zero pivot at elimination step {k}")
        row_k = aug[k]
        for i in range(k + 1, n):
            row_i = aug[i]
            lik = row_i[k]
            aug[i] = row_i[:k + 1] + [
                _divexact(row_i[j] * piv - lik * row_k[j], prev)
                for j in range(k + 1, n + 1)
            ]
        prev = piv

    x = [None] * n
    for i in range(n - 1, -1, -1):
        s = _mpq(aug[i][n])
        for j in range(i + 1, n):
            s -= aug[i][j] * x[j]
        x[i] = s / aug[i][i]
    scale = _mpq(1, c)
    return [Fraction(int((xi * scale).numerator), int((xi * scale).denominator)) for xi in x]


def _solve_spd_float(H, g) -> np.ndarray:
    Hf = np.asarray(H, dtype=float)
    gf = np.asarray(g, dtype=float)
    try:
        factor = scipy.linalg.cho_factor(Hf, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    d = scipy.linalg.cho_solve(factor, gf, check_finite=False)
    # one refinement pass, then enforce the residual contract
    resid = gf - Hf @ d
    d = d + scipy.linalg.cho_solve(factor, resid, check_finite=False)
    resid = gf - Hf @ d
    bound = 1e-8 * (1.0 + float(np.max(np.abs(gf))) if gf.size else 1.0)
    if resid.size and float(np.max(np.abs(resid))) > bound:
        raise SingularMatrix("float factorization residual exceeds tolerance")
    return d


def solve_spd(H, g, mode: str = "exact"):
    """Solve H d = g for symmetric positive-definite H.

    Exact mode takes Fraction/int entries and returns the unique rational
    solution; float mode takes anything ndarray-like and returns a float
    vector from a Cholesky factorization.
    """
    if len(H) != len(g):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    if mode == "exact":
        return _solve_spd_exact(H, g)
    if mode == "float":
        return _solve_spd_float(H, g)
    raise ValueError(f"unknown mode {mode!r}")


def _two_pow_le(e: int, p: int, q: int) -> bool:
    """Exact test 2**e <= p/q for positive integers p, q."""
    if e >= 0:
        return (q << e) <= p
    return q <= (p << (-e))


def floor_log2(rho: Fraction) -> int:
    """The unique integer e with 2**e <= rho < 2**(e+1), by exponent bisection."""
    if rho <= 0:
        raise NonPositiveInput(f"floor_log2 requires a positive argument, got {rho}")
    rho = Fraction(rho)
    p, q = rho.numerator, rho.denominator
    lo = p.bit_length() - q.bit_length() - 1
    hi = lo + 2
    while not _two_pow_le(lo, p, q):  # widen; at most a couple of iterations
        lo -= 1
    while _two_pow_le(hi, p, q):
        hi += 1
    # invariant: 2**lo <= rho < 2**hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _two_pow_le(mid, p, q):
            lo = mid
        else:
            hi = mid
    return lo


def isqrt_factor2(rho) -> Fraction:
    """A power of two mu with mu <= sqrt(rho) <= 2*mu, for rational rho > 0.

    Only integer comparisons are used: the binary exponent of rho is located
    by bisection and halved.  Loose by design; a factor-2 witness is all the
    solver's step-size and rescaling logic needs.
    """
    rho = Fraction(rho)
    if rho <= 0:
        raise NonPositiveInput(f"isqrt_factor2 requires a positive argument, got {rho}")
    e = floor_log2(rho)
    k = e // 2  # floor also for negative exponents
    if k >= 0:
        return Fraction(1 << k)
    return Fraction(1, 1 << (-k))


def sqrt_upper_witness(rho) -> Fraction:
    """A power-of-two upper bound on sqrt(rho): mu when rho == mu**2, else 2*mu."""
    mu = isqrt_factor2(rho)
    if mu * mu == rho:
        return mu
    return 2 * mu


def ceil_to_grid(v, q: int) -> GridVector:
    """Round v up onto the grid (1/q)*Z: each entry becomes floor(q*v + 1)/q.

    The result is strictly above v componentwise (even on grid points) and
    exceeds it by less than 2/q; all denominators are exactly q, unreduced.
    """
    if q < 1:
        raise ValueError(f"grid denominator must be >= 1, got {q}")
    if isinstance(v, GridVector):
        if not v.all_positive():
            raise NonPositiveInput("ceil_to_grid requires a positive vector")
        if v.den == q:
            return GridVector(tuple(n + 1 for n in v.nums), q)
        nums = tuple((q * n) // v.den + 1 for n in v.nums)
        return GridVector(nums, q)
    fracs = as_fraction_list(v)
    if any(x <= 0 for x in fracs):
        raise NonPositiveInput("ceil_to_grid requires a positive vector")
    nums = tuple((q * x.numerator) // x.denominator + 1 for x in fracs)
    return GridVector(nums, q)


def dot_fractions(u: Sequence, v: Sequence) -> Fraction:
    s = Fraction(0)
    for a, b in zip(u, v):
        s += Fraction(a) * Fraction(b)
    return s
