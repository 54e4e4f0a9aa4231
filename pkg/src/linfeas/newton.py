"""Damped Newton descent on the barrier potential, in exact or float arithmetic.

The loop per iteration: check the residual sign (exact in exact mode) and
stop as soon as A A^T v > 0; re-scale v down when the quadratic form grows
past 4*M; take one damped Newton step with a factor-2 upper estimate of the
Newton decrement; in exact mode, ceil the iterate back onto the common
denominator grid so bit sizes stay bounded.

Exact mode never evaluates the potential to make decisions: all control flow
runs on rational quantities (residual signs, g^T d, v^T A A^T v).  Float
observations of the potential are recorded for diagnostics and tests only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .potential import (
    DualIterate,
    NormalizedInstance,
    potential_gradient,
    potential_hessian,
    potential_value,
    quad_form,
    residual,
    scaled_gram_apply,
)
from .qlinalg import (
    GridVector,
    SingularMatrix,
    ceil_to_grid,
    floor_log2,
    isqrt_factor2,
    solve_spd,
    sqrt_upper_witness,
)

# Guaranteed decrease of one full damped Newton step while the decrement is
# >= 1/4; the factor-2 decrement estimate halves it, and grid rounding is
# budgeted to eat at most half of what remains.
DECREASE_PHASE1 = 0.25 - math.log(1.25)
# Rational upper bound on 1/DECREASE_PHASE1 (4/149 < 1/4 - log(5/4)), so grid
# denominators can be chosen without real arithmetic.
DELTA_INV_UPPER = Fraction(149, 4)


class DomainExit(Exception):
    """A Newton step produced a non-positive component (float-mode failure)."""


class SolveStatus(enum.Enum):
    SOLVED = "solved"
    STEP_BUDGET_EXCEEDED = "step_budget_exceeded"
    NUMERIC_FAILURE = "numeric_failure"


@dataclass(frozen=True)
class QPolicy:
    """How the shared denominator Q is chosen in exact mode."""

    kind: str = "adaptive"  # "fixed" | "from-omega" | "adaptive"
    fixed_q: int | None = None
    start_q: int = 1024
    growth: int = 2

    def __post_init__(self):
        if self.kind not in ("fixed", "from-omega", "adaptive"):
            raise ValueError(f"unknown q policy {self.kind!r}")
        if self.kind == "fixed" and (self.fixed_q is None or self.fixed_q < 1):
            raise ValueError("fixed policy needs a positive denominator")
        if self.kind == "adaptive" and self.start_q < 2:
            raise ValueError("adaptive policy needs start_q >= 2")

    @classmethod
    def fixed(cls, q: int) -> "QPolicy":
        return cls(kind="fixed", fixed_q=q)

    @classmethod
    def from_omega(cls) -> "QPolicy":
        return cls(kind="from-omega")

    @classmethod
    def adaptive(cls, start_q: int = 1024, growth: int = 2) -> "QPolicy":
        return cls(kind="adaptive", start_q=start_q, growth=growth)


@dataclass(frozen=True)
class SolverConfig:
    mode: str = "exact"
    omega_bound: Fraction = Fraction(1)
    q_policy: QPolicy = QPolicy()
    max_steps: int | None = None
    trace: bool = False
    exact_fallback: bool = True  # float mode: retry exactly on numeric trouble

    def __post_init__(self):
        object.__setattr__(self, "omega_bound", Fraction(self.omega_bound))
        if self.omega_bound < 1:
            raise ValueError("omega_bound must be >= 1")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SolverState:
    """Mutable per-solve state; v stays strictly positive throughout."""

    v: DualIterate
    step_index: int = 0
    lambda_hat: Fraction | float | None = None
    last_decrease: float | None = None
    phase: int = 1
    quad_form: Fraction | float | None = None


@dataclass(frozen=True)
class TraceRecord:
    """One record per Newton iteration.

    `min_residual` is observed at the iteration start, `lambda_hat` and
    `quad_form` right after the Newton step, `potential_observed` after the
    full composite (rescale + step + rounding).  `den`/`max_num_bits`
    describe the exact iterate after rounding; `gap_bound` is the certified
    distance to the minimum, decrement**2 / (2*(1-decrement)), once the
    decrement estimate drops below 1/4.
    """

    step: int
    lambda_hat: float
    quad_form: float
    min_residual: float
    rescaled: bool
    rounded: bool
    potential_observed: float
    den: int | None = None
    max_num_bits: int | None = None
    gap_bound: float | None = None

    def to_wire(self) -> dict:
        return {
            "step": self.step,
            "lambda_hat": self.lambda_hat,
            "quad_form": self.quad_form,
            "min_residual": self.min_residual,
            "rescaled": self.rescaled,
            "rounded": self.rounded,
            "F_float_observed": self.potential_observed,
        }


@dataclass(frozen=True)
class SolveReport:
    status: SolveStatus
    x: tuple[Fraction, ...] | None
    steps_total: int
    phase1_steps: int
    trace: tuple[TraceRecord, ...]
    exact_check: bool | None
    mode_used: str
    q_used: int | None = None
    omega_used: Fraction | None = None
    attempts: int = 1
    start_potential: float | None = None
    fell_back: bool = False


def choose_denominator(m_rows: int, omega_bound, policy: QPolicy | None = None) -> int:
    """Smallest power of two >= 16 * M * sqrt(M * omega_bound) / delta.

    With that choice the per-step rounding penalty (2/Q) * 1^T A A^T v stays
    below a quarter of the guaranteed phase-1 decrease as long as
    1^T v <= 2*sqrt(M*omega_bound), which down-rescaling maintains.  The
    square root is replaced by its power-of-two upper witness; fixed and
    adaptive policies bypass the formula.
    """
    if policy is not None:
        if policy.kind == "fixed":
            return policy.fixed_q
        if policy.kind == "adaptive":
            return policy.start_q
    omega_bound = Fraction(omega_bound)
    if omega_bound < 1:
        raise ValueError("omega_bound must be >= 1")
    need = 16 * m_rows * sqrt_upper_witness(m_rows * omega_bound) * DELTA_INV_UPPER
    e = floor_log2(need)
    if Fraction(2) ** e == need:
        return 1 << max(e, 0)
    return 1 << max(e + 1, 0)


def step_budget(m_rows: int, omega_bound) -> int:
    """Phase-1 step budget: ceil(4*(M log M + 1 + M log omega)/delta) + 16."""
    omega_bound = Fraction(omega_bound)
    log_omega = math.log(omega_bound.numerator) - math.log(omega_bound.denominator)
    gap = m_rows * math.log(m_rows) + 1.0 + m_rows * log_omega
    return math.ceil(4.0 * gap / DECREASE_PHASE1) + 16


def rescale_down(inst: NormalizedInstance, state: SolverState) -> SolverState:
    """Divide v by a factor-2 witness of sqrt(quad/M) once quad >= 4*M.

    Scaling down toward the minimizer of t -> P(t*v) never increases the
    potential, and afterwards M <= v^T A A^T v <= 4*M, which keeps iterate
    magnitudes (and exact-mode bit sizes) bounded.
    """
    m = inst.m_rows
    quad = state.quad_form
    if quad is None:
        quad = quad_form(inst, state.v) if state.v.mode == "exact" else None
        if quad is None:
            vf = state.v.dense
            quad = float(vf @ (inst.float_gram @ vf))
    if quad < 4 * m:
        if state.quad_form is None:
            return replace_state(state, quad_form=quad)
        return state
    nu = isqrt_factor2(Fraction(quad) / m)
    assert nu.denominator == 1 and nu >= 2
    factor = int(nu)
    if state.v.mode == "exact":
        vec = state.v.vector()
        if isinstance(vec, GridVector):
            v2 = DualIterate("exact", grid=vec.scale_den(factor))
        else:
            v2 = DualIterate("exact", fracs=tuple(x / factor for x in vec))
        new_quad = Fraction(quad) / (factor * factor)
    else:
        v2 = DualIterate("float", dense=state.v.dense / factor)
        new_quad = float(quad) / (factor * factor)
    return replace_state(state, v=v2, quad_form=new_quad)


def replace_state(state: SolverState, **kw) -> SolverState:
    out = SolverState(
        v=state.v,
        step_index=state.step_index,
        lambda_hat=state.lambda_hat,
        last_decrease=state.last_decrease,
        phase=state.phase,
        quad_form=state.quad_form,
    )
    for k, v in kw.items():
        setattr(out, k, v)
    return out


def _exact_newton_direction(inst: NormalizedInstance, grid: GridVector):
    """Solve hess * d = grad exactly via the row-norm-rescaled system.

    Substituting d = diag(rho) y turns the system into
    (gram + diag(rho_i^2 Q^2 / n_i^2)) y = rho_i * grad_i with an integer
    matrix, which keeps the fraction-free elimination's intermediate values
    small; d and g^T d are recovered exactly.
    """
    nums, den = grid.nums, grid.den
    z = scaled_gram_apply(inst, nums)
    lq = inst.norm_lcm * den
    rho = inst.row_norms
    g2 = [
        Fraction(int(zi), lq) - Fraction(r * den, n)
        for zi, r, n in zip(z, rho, nums)
    ]
    if all(x == 0 for x in g2):
        return None, None, Fraction(0), z
    h = []
    for i, row in enumerate(inst.gram):
        hrow = list(row)
        hrow[i] = Fraction(row[i]) + Fraction(rho[i] * rho[i] * den * den, nums[i] * nums[i])
        h.append(hrow)
    y = solve_spd(h, g2, mode="exact")
    d = [r * yi for r, yi in zip(rho, y)]
    lam2 = Fraction(0)
    for gi, yi in zip(g2, y):
        lam2 += gi * yi
    return d, y, lam2, z


def damped_newton_step(inst: NormalizedInstance, state: SolverState,
                       config: SolverConfig) -> SolverState:
    """One damped Newton step v <- v - d/(1 + lambda_hat), d = hess^{-1} grad.

    Float mode uses the true decrement lambda = sqrt(g^T d); exact mode uses
    the factor-2 power-of-two upper witness lambda_hat = 2*isqrt_factor2(g^T d),
    so the step size 1/(1+lambda_hat) lands in [1/(2(1+lambda)), 1/(1+lambda)]
    and at least half of the full step's guaranteed decrease is kept.
    """
    mode = config.mode
    f_before = potential_value(inst, state.v)
    if mode == "float":
        vf = state.v.dense
        g = potential_gradient(inst, vf, mode="float")
        h = potential_hessian(inst, vf, mode="float")
        d = solve_spd(h, g, mode="float")
        lam2 = float(g @ d)
        if lam2 <= 0.0:
            return replace_state(state, lambda_hat=0.0, phase=2, last_decrease=0.0)
        lam = math.sqrt(lam2)
        v2 = vf - d / (1.0 + lam)
        if not np.all(v2 > 0):
            raise DomainExit("float Newton step left the positive orthant")
        new_quad = float(v2 @ (inst.float_gram @ v2))
        f_after = potential_value(inst, v2)
        return replace_state(
            state,
            v=DualIterate("float", dense=v2),
            step_index=state.step_index + 1,
            lambda_hat=lam,
            last_decrease=f_before - f_after,
            phase=1 if lam >= 0.25 else 2,
            quad_form=new_quad,
        )

    vec = state.v.vector()
    if not isinstance(vec, GridVector):
        # mid-iteration fractions: fall back to the generic exact assembly
        g = potential_gradient(inst, vec, mode="exact")
        h = potential_hessian(inst, vec, mode="exact")
        if all(x == 0 for x in g):
            return replace_state(state, lambda_hat=Fraction(0), phase=2,
                                 last_decrease=0.0)
        d = solve_spd(h, g, mode="exact")
        lam2 = Fraction(0)
        for gi, di in zip(g, d):
            lam2 += gi * di
        vv = list(vec)
        den = None
        quad_before = quad_form(inst, vec)
    else:
        d, _y, lam2, _z = _exact_newton_direction(inst, vec)
        if d is None:
            return replace_state(state, lambda_hat=Fraction(0), phase=2,
                                 last_decrease=0.0)
        vv = vec.entries()
        den = vec.den
        quad_before = state.quad_form
        if quad_before is None:
            quad_before = quad_form(inst, vec)

    assert lam2 > 0
    lam_hat = 2 * isqrt_factor2(lam2)
    theta = Fraction(1, 1) / (1 + lam_hat)
    v2 = tuple(x - theta * di for x, di in zip(vv, d))
    if any(x <= 0 for x in v2):
        raise DomainExit("exact Newton step left the positive orthant "
                         "(internal error: this contradicts self-concordance)")
    # quad(v - theta*d) from O(M) identities: d^T A A^T v = g^T d + sum d_i/v_i
    # and d^T A A^T d = g^T d - sum d_i^2/v_i^2, both because hess*d = grad.
    s1 = Fraction(0)
    s2 = Fraction(0)
    for di, vi in zip(d, vv):
        s1 += di / vi
        s2 += (di / vi) ** 2
    quad_after = Fraction(quad_before) - 2 * theta * (lam2 + s1) \
        + theta * theta * (lam2 - s2)
    f_after = potential_value(inst, v2)
    return replace_state(
        state,
        v=DualIterate("exact", fracs=v2),
        step_index=state.step_index + 1,
        lambda_hat=lam_hat,
        last_decrease=f_before - f_after,
        phase=1 if lam_hat >= Fraction(1, 4) else 2,
        quad_form=quad_after,
    )


def round_iterate(state: SolverState, q: int) -> SolverState:
    """Ceil the exact iterate onto the grid (1/q)*Z (exact mode only).

    Rounding up never increases the log terms; the quadratic penalty is
    bounded by (2/q) * 1^T A A^T v + M^2/(2 q^2), which choose_denominator
    budgets below a quarter of the guaranteed step decrease.
    """
    if state.v.mode != "exact":
        raise ValueError("round_iterate applies to exact iterates only")
    grid = ceil_to_grid(state.v.vector(), q)
    return replace_state(state, v=DualIterate("exact", grid=grid), quad_form=None)


def _combine_solution(inst: NormalizedInstance, v) -> tuple[Fraction, ...]:
    """x = (row-normalized rows)^T v as exact Fractions."""
    if isinstance(v, GridVector):
        scale = inst.norm_lcm * v.den
        coeff = [w * n for w, n in zip(inst.norm_weights, v.nums)]
        cols = inst.n_cols
        out = []
        for j in range(cols):
            s = 0
            for c, row in zip(coeff, inst.rows):
                s += c * row[j]
            out.append(Fraction(s, scale))
        return tuple(out)
    vv = [x if isinstance(x, Fraction) else Fraction(x) for x in v]
    cols = inst.n_cols
    out = []
    for j in range(cols):
        s = Fraction(0)
        for x, row, rho in zip(vv, inst.rows, inst.row_norms):
            s += x * Fraction(row[j], rho)
        out.append(s)
    return tuple(out)


def verify_rows_strict(inst: NormalizedInstance, x) -> bool:
    """Exact check rows * x > 0 on the instance's integer rows."""
    for row in inst.rows:
        s = Fraction(0)
        for e, xj in zip(row, x):
            if e:
                s += e * xj
        if s <= 0:
            return False
    return True


def _start_iterate(inst: NormalizedInstance, mode: str, q: int | None) -> DualIterate:
    m = inst.m_rows
    if mode == "float":
        return DualIterate("float", dense=np.full(m, 1.0 / m))
    grid = ceil_to_grid([Fraction(1, m)] * m, q)
    return DualIterate("exact", grid=grid)


def solve_feasibility(inst: NormalizedInstance, config: SolverConfig) -> SolveReport:
    """Run the damped Newton loop from v0 = (1/M) * 1 until A A^T v > 0.

    Every iteration checks the residual sign first (exactly, in exact mode),
    then rescales, steps, and (exact mode) rounds back onto the grid.  The
    adaptive policy doubles Q and omega_bound and restarts on budget
    exhaustion, at most 8 times.  Solved reports always carry x that passed
    the exact integer check on the instance rows; float solves that fail that
    check fall back to an exact run.
    """
    policy = config.q_policy
    attempts = 9 if policy.kind == "adaptive" else 1
    omega = config.omega_bound
    q = choose_denominator(inst.m_rows, omega, policy) if config.mode == "exact" else None
    m = inst.m_rows
    total_steps = 0
    phase1_steps = 0
    records: list[TraceRecord] = []
    start_pot = None

    for attempt in range(attempts):
        budget = config.max_steps if config.max_steps is not None \
            else step_budget(m, omega)
        state = SolverState(v=_start_iterate(inst, config.mode, q))
        if start_pot is None:
            start_pot = potential_value(inst, state.v)
        attempt_steps = 0
        numeric_trouble = False
        while True:
            if config.mode == "exact":
                state.quad_form = quad_form(inst, state.v)
            else:
                vf = state.v.dense
                state.quad_form = float(vf @ (inst.float_gram @ vf))
            res = residual(inst, state.v, mode=config.mode)
            if res.strictly_positive:
                if config.mode == "exact":
                    x = _combine_solution(inst, state.v.vector())
                else:
                    x = _combine_solution(inst, [Fraction(float(t))
                                                 for t in state.v.dense])
                if verify_rows_strict(inst, x):
                    return SolveReport(
                        status=SolveStatus.SOLVED, x=x, steps_total=total_steps,
                        phase1_steps=phase1_steps, trace=tuple(records),
                        exact_check=True, mode_used=config.mode, q_used=q,
                        omega_used=omega, attempts=attempt + 1,
                        start_potential=start_pot,
                    )
                if config.mode == "exact":
                    raise AssertionError("exact residual positive but check failed")
                numeric_trouble = True  # float false positive: rerun exactly
                break
            if attempt_steps >= budget:
                break
            min_res = float(res.min_entry)
            rescaled = state.quad_form >= 4 * m
            try:
                state = rescale_down(inst, state)
                state = damped_newton_step(inst, state, config)
            except (DomainExit, SingularMatrix):
                if config.mode == "exact":
                    raise
                numeric_trouble = True
                break
            lam = float(state.lambda_hat)
            quad_after_step = float(state.quad_form)
            if config.mode == "exact":
                state = round_iterate(state, q)
            attempt_steps += 1
            total_steps += 1
            if state.phase == 1:
                phase1_steps += 1
            if config.trace:
                gap = lam * lam / (2.0 * (1.0 - lam)) if 0.0 < lam < 0.25 else None
                grid = state.v.grid if config.mode == "exact" else None
                records.append(TraceRecord(
                    step=total_steps,
                    lambda_hat=lam,
                    quad_form=quad_after_step,
                    min_residual=min_res,
                    rescaled=bool(rescaled),
                    rounded=config.mode == "exact",
                    potential_observed=potential_value(inst, state.v),
                    den=grid.den if grid is not None else None,
                    max_num_bits=max(n.bit_length() for n in grid.nums)
                    if grid is not None else None,
                    gap_bound=gap,
                ))

        if numeric_trouble:
            if config.exact_fallback:
                rep = solve_feasibility(inst, replace(config, mode="exact"))
                return replace(rep, fell_back=True,
                               steps_total=rep.steps_total + total_steps)
            return SolveReport(
                status=SolveStatus.NUMERIC_FAILURE, x=None,
                steps_total=total_steps, phase1_steps=phase1_steps,
                trace=tuple(records), exact_check=None, mode_used=config.mode,
                q_used=q, omega_used=omega, attempts=attempt + 1,
                start_potential=start_pot,
            )
        if policy.kind == "adaptive" and attempt + 1 < attempts:
            omega = omega * 2
            if q is not None:
                q = q * policy.growth
            continue
        break

    return SolveReport(
        status=SolveStatus.STEP_BUDGET_EXCEEDED, x=None, steps_total=total_steps,
        phase1_steps=phase1_steps, trace=tuple(records), exact_check=None,
        mode_used=config.mode, q_used=q, omega_used=omega,
        attempts=min(attempts, attempt + 1), start_potential=start_pot,
    )
