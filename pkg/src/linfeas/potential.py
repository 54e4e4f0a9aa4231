"""The barrier potential driving the feasibility solver.

An instance is an integer matrix whose rows have exactly-integer Euclidean
norms, so the row-normalized matrix A = diag(1/rho) * rows exists over the
rationals.  The potential

    P(v) = v^T A A^T v / 2  -  sum_m log(v_m),        v > 0,

is evaluated in floating point only (the logs are irrational); gradients,
Hessians and residuals are available exactly.  The normalized Gram matrix is
never formed in floating point for exact work: the integer Gram rows*rows^T
is computed once and the 1/(rho_i*rho_j) scaling is applied on use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .qlinalg import GridVector, as_float_array, as_fraction_list

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int


class NonPositiveIterate(ValueError):
    """The dual iterate left the open positive orthant."""


class RayLeavesDomain(ValueError):
    """v + t*w has a non-positive component."""


@dataclass(frozen=True)
class NormalizedInstance:
    """Integer constraint rows with exact integer row norms.

    rows[m] has squared Euclidean norm row_norms[m]**2, an integer identity
    checked at construction.  `source_cols` records how many leading
    coordinates map back to the originating system when this instance was
    built by a reduction; `origin` is a free-form provenance tag.
    """

    rows: tuple[tuple[int, ...], ...]
    row_norms: tuple[int, ...]
    origin: str = "direct"
    source_cols: int | None = None

    def __post_init__(self):
        if not self.rows:
            raise ValueError("instance needs at least one row")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged row widths")
        if len(self.row_norms) != len(self.rows):
            raise ValueError("row_norms length mismatch")
        for m, (row, rho) in enumerate(zip(self.rows, self.row_norms)):
            if rho < 1:
                raise ValueError(f"row norm {rho} < 1 at row {m}")
            if rho * rho != sum(e * e for e in row):
                raise ValueError(f"row {m}: squared norm is not row_norms[{m}]**2")

    @classmethod
    def from_integer_rows(cls, rows, origin: str = "direct",
                          source_cols: int | None = None) -> "NormalizedInstance":
        """Build an instance from rows whose squared norms are perfect squares."""
        rows = tuple(tuple(int(e) for e in r) for r in rows)
        norms = []
        for m, row in enumerate(rows):
            s = sum(e * e for e in row)
            r = math.isqrt(s)
            if r * r != s:
                raise ValueError(f"row {m} has irrational norm (squared norm {s})")
            norms.append(r)
        return cls(rows, tuple(norms), origin=origin, source_cols=source_cols)

    @property
    def m_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        """Integer Gram matrix rows * rows^T, computed once."""
        rows = self.rows
        m = len(rows)
        g = [[0] * m for _ in range(m)]
        for i in range(m):
            ri = rows[i]
            for j in range(i, m):
                s = sum(a * b for a, b in zip(ri, rows[j]))
                g[i][j] = s
                g[j][i] = s
        return tuple(tuple(r) for r in g)

    @cached_property
    def norm_lcm(self) -> int:
        return math.lcm(*self.row_norms)

    @cached_property
    def norm_weights(self) -> tuple[int, ...]:
        l = self.norm_lcm
        return tuple(l // rho for rho in self.row_norms)

    @cached_property
    def weighted_gram(self):
        """gram[i][j] * (lcm / rho_j), as fast integers, for exact matvecs."""
        w = self.norm_weights
        return [[_mpz(gij * wj) for gij, wj in zip(grow, w)] for grow in self.gram]

    @cached_property
    def float_rows(self) -> np.ndarray:
        rho = np.array(self.row_norms, dtype=float)
        return np.array(self.rows, dtype=float) / rho[:, None]

    @cached_property
    def float_gram(self) -> np.ndarray:
        g = np.array([[float(x) for x in row] for row in self.gram])
        rho = np.array(self.row_norms, dtype=float)
        return g / np.outer(rho, rho)


@dataclass(frozen=True)
class DualIterate:
    """Current dual point v > 0.

    Exact mode carries either a shared-denominator GridVector (the normal
    state between iterations) or a plain Fraction tuple (mid-iteration, after
    a Newton step and before rounding re-grids it); float mode carries a
    dense array.
    """

    mode: str
    grid: GridVector | None = None
    dense: np.ndarray | None = None
    fracs: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.mode == "exact":
            if (self.grid is None) == (self.fracs is None):
                raise ValueError("exact iterate needs exactly one rational payload")
            if self.grid is not None and not self.grid.all_positive():
                raise NonPositiveIterate("exact iterate must be strictly positive")
            if self.fracs is not None and any(x <= 0 for x in self.fracs):
                raise NonPositiveIterate("exact iterate must be strictly positive")
        elif self.mode == "float":
            if self.dense is None:
                raise ValueError("float iterate needs a dense payload")
            if not np.all(self.dense > 0):
                raise NonPositiveIterate("float iterate must be strictly positive")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    def __len__(self) -> int:
        if self.mode == "float":
            return len(self.dense)
        return len(self.grid) if self.grid is not None else len(self.fracs)

    @property
    def q(self) -> int | None:
        return self.grid.den if self.grid is not None else None

    def vector(self):
        if self.mode == "float":
            return self.dense
        return self.grid if self.grid is not None else self.fracs


def _unwrap(v):
    return v.vector() if isinstance(v, DualIterate) else v


def scaled_gram_apply(inst: NormalizedInstance, nums) -> list:
    """z_i = sum_j gram[i][j] * (lcm/rho_j) * nums[j], over integers.

    For v = nums/den this gives (A A^T v)_i = z_i / (rho_i * lcm * den).
    """
    u = [_mpz(n) for n in nums]
    return [sum(gij * uj for gij, uj in zip(row, u)) for row in inst.weighted_gram]


def potential_value(inst: NormalizedInstance, v) -> float:
    """P(v) in floating point; observational only, never steers exact runs."""
    vf = as_float_array(_unwrap(v))
    if not np.all(vf > 0):
        raise NonPositiveIterate("potential is only defined for v > 0")
    x = vf @ inst.float_rows
    return 0.5 * float(x @ x) - float(np.sum(np.log(vf)))


def potential_gradient(inst: NormalizedInstance, v, mode: str = "exact"):
    """grad P(v) = A A^T v - (1/v_m)_m, exact Fractions or a float array."""
    v = _unwrap(v)
    if mode == "float":
        vf = as_float_array(v)
        if not np.all(vf > 0):
            raise NonPositiveIterate("gradient needs v > 0")
        return inst.float_gram @ vf - 1.0 / vf
    if isinstance(v, GridVector):
        if not v.all_positive():
            raise NonPositiveIterate("gradient needs v > 0")
        z = scaled_gram_apply(inst, v.nums)
        lq = inst.norm_lcm * v.den
        return [
            Fraction(int(zi), rho * lq) - Fraction(v.den, n)
            for zi, rho, n in zip(z, inst.row_norms, v.nums)
        ]
    vv = as_fraction_list(v)
    if any(x <= 0 for x in vv):
        raise NonPositiveIterate("gradient needs v > 0")
    s = [x / rho for x, rho in zip(vv, inst.row_norms)]
    out = []
    for i, row in enumerate(inst.gram):
        acc = Fraction(0)
        for gij, sj in zip(row, s):
            acc += gij * sj
        out.append(acc / inst.row_norms[i] - 1 / vv[i])
    return out


def potential_hessian(inst: NormalizedInstance, v, mode: str = "exact"):
    """hess P(v) = A A^T + diag(1/v_m^2), symmetric positive definite."""
    v = _unwrap(v)
    if mode == "float":
        vf = as_float_array(v)
        if not np.all(vf > 0):
            raise NonPositiveIterate("hessian needs v > 0")
        h = inst.float_gram.copy()
        h[np.diag_indices_from(h)] += 1.0 / vf**2
        return h
    vv = as_fraction_list(v)
    if any(x <= 0 for x in vv):
        raise NonPositiveIterate("hessian needs v > 0")
    rho = inst.row_norms
    h = [
        [Fraction(gij, rho[i] * rho[j]) for j, gij in enumerate(row)]
        for i, row in enumerate(inst.gram)
    ]
    for i, x in enumerate(vv):
        h[i][i] += 1 / (x * x)
    return h


def ray_derivatives(inst: NormalizedInstance, v, w, t: float):
    """(p'(t), p''(t), p'''(t)) for p(t) = P(v + t*w), analytic formulas."""
    vf = as_float_array(_unwrap(v))
    wf = as_float_array(w)
    u = vf + t * wf
    if not np.all(u > 0):
        raise RayLeavesDomain("v + t*w leaves the positive orthant")
    gram = inst.float_gram
    gw = gram @ wf
    d1 = float(u @ gw) - float(np.sum(wf / u))
    d2 = float(wf @ gw) + float(np.sum(wf**2 / u**2))
    d3 = -2.0 * float(np.sum(wf**3 / u**3))
    return d1, d2, d3


@dataclass(frozen=True)
class ResidualReport:
    values: tuple
    min_entry: object
    strictly_positive: bool


def residual(inst: NormalizedInstance, v, mode: str = "exact") -> ResidualReport:
    """r = A A^T v with its minimum entry and an exact/float positivity flag."""
    v = _unwrap(v)
    if mode == "float":
        vf = as_float_array(v)
        r = inst.float_gram @ vf
        mn = float(np.min(r))
        return ResidualReport(tuple(float(x) for x in r), mn, mn > 0)
    if isinstance(v, GridVector):
        z = scaled_gram_apply(inst, v.nums)
        lq = inst.norm_lcm * v.den
        vals = tuple(Fraction(int(zi), rho * lq) for zi, rho in zip(z, inst.row_norms))
    else:
        vv = as_fraction_list(v)
        s = [x / rho for x, rho in zip(vv, inst.row_norms)]
        vals = []
        for i, row in enumerate(inst.gram):
            acc = Fraction(0)
            for gij, sj in zip(row, s):
                acc += gij * sj
            vals.append(acc / inst.row_norms[i])
        vals = tuple(vals)
    mn = min(vals)
    return ResidualReport(vals, mn, mn > 0)


def quad_form(inst: NormalizedInstance, v) -> Fraction:
    """v^T A A^T v exactly (v rational)."""
    v = _unwrap(v)
    if isinstance(v, GridVector):
        z = scaled_gram_apply(inst, v.nums)
        num = sum(int(zi) * w * n for zi, w, n in zip(z, inst.norm_weights, v.nums))
        return Fraction(num, (inst.norm_lcm * v.den) ** 2)
    vv = as_fraction_list(v)
    r = residual(inst, vv, mode="exact").values
    s = Fraction(0)
    for a, b in zip(vv, r):
        s += a * b
    return s


def scalar_lemmas(alpha: float, t: float) -> tuple[float, float]:
    """The two one-variable comparison functions behind the step-decrease bound.

    Returns (0.5*alpha*t**2 - log(1+t), 0.5*(alpha+1)*t**2 - t); the first is
    bounded above by the second for alpha, t >= 0.  Exists to back property
    tests, nothing in the solver calls it.
    """
    curved = 0.5 * alpha * t * t - math.log1p(t)
    quadratic = 0.5 * (alpha + 1.0) * t * t - t
    return curved, quadratic
