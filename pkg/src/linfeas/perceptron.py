"""Classical perceptron baseline on row-normalized instances.

Each step adds the lowest-index violated normalized row to x, so after t
steps x is an exact nonnegative rational combination of normalized rows and
the usual norm/margin ladder (x.x <= t, witness.x >= t) holds exactly.
Convergence takes at most ceil(|w|^2) steps for any witness w with
normalized margin >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .potential import NormalizedInstance

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int


class CapExceeded(RuntimeError):
    """The step cap ran out: cap < true inverse-squared-margin, or infeasible."""


@dataclass(frozen=True)
class PerceptronState:
    """x = sum_m v_counts[m] * rows[m] / row_norms[m], exactly."""

    x: tuple[Fraction, ...]
    t: int
    v_counts: tuple[int, ...]

    @classmethod
    def initial(cls, inst: NormalizedInstance) -> "PerceptronState":
        return cls(x=(Fraction(0),) * inst.n_cols, t=0,
                   v_counts=(0,) * inst.m_rows)


@dataclass(frozen=True)
class PerceptronReport:
    x: tuple[Fraction, ...]
    steps: int
    v_counts: tuple[int, ...]


def _lowest_violated(inst: NormalizedInstance, x) -> int | None:
    """Lowest row index with row . x <= 0 (signs match the normalized rows)."""
    for i, row in enumerate(inst.rows):
        s = Fraction(0)
        for e, xj in zip(row, x):
            if e:
                s += e * xj
        if s <= 0:
            return i
    return None


def perceptron_step(inst: NormalizedInstance,
                    state: PerceptronState) -> PerceptronState | None:
    """One update x += rows[i]/row_norms[i] for the lowest violated row i.

    Returns None when every normalized row already has strictly positive
    inner product with x (converged).
    """
    i = _lowest_violated(inst, state.x)
    if i is None:
        return None
    rho = inst.row_norms[i]
    x2 = tuple(xj + Fraction(e, rho) for xj, e in zip(state.x, inst.rows[i]))
    counts = list(state.v_counts)
    counts[i] += 1
    return PerceptronState(x=x2, t=state.t + 1, v_counts=tuple(counts))


def perceptron_solve(inst: NormalizedInstance, step_cap: int) -> PerceptronReport:
    """Iterate from x = 0 until all rows are strictly satisfied.

    Internally x is carried as an integer vector over the common denominator
    lcm(row_norms) and the residual rows . x is updated incrementally through
    the integer Gram matrix, so each step costs M integer multiply-adds; the
    result is identical to iterating perceptron_step.
    """
    if step_cap < 1:
        raise ValueError("step_cap must be >= 1")
    m = inst.m_rows
    weights = [int(w) for w in inst.norm_weights]  # lcm / rho_i
    # adding rows[i]/rho_i to x shifts the scaled residual rows . (lcm * x)
    # by the integer column w_i * gram[i]
    updates = [[_mpz(w * gij) for gij in grow]
               for w, grow in zip(weights, inst.gram)]
    resid = [_mpz(0)] * m
    counts = [0] * m
    steps = 0
    while True:
        violated = None
        for i in range(m):
            if resid[i] <= 0:
                violated = i
                break
        if violated is None:
            break
        if steps >= step_cap:
            raise CapExceeded(f"no convergence within {step_cap} steps")
        col = updates[violated]
        for j in range(m):
            resid[j] += col[j]
        counts[violated] += 1
        steps += 1

    l = inst.norm_lcm
    x = []
    for j in range(inst.n_cols):
        s = 0
        for c, w, row in zip(counts, weights, inst.rows):
            if c:
                s += c * w * row[j]
        x.append(Fraction(s, l))
    return PerceptronReport(x=tuple(x), steps=steps, v_counts=tuple(counts))
