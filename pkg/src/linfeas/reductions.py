"""Reduction chain from strict homogeneous feasibility to full LP.

Layer by layer: row normalization (so row norms are integers), strict
inhomogeneous systems via homogenization, weak systems via a slack variable
driven to zero by exact vertex purification, feasibility certificates via a
primal-dual system, and optimal LP solving with exact duality certificates.
Everything downstream of the core solver is exact rational arithmetic, so
every returned solution or certificate is verified with zero tolerance
before it leaves this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .instances import ZeroRow
from .newton import SolverConfig, SolveStatus, solve_feasibility
from .potential import NormalizedInstance

__all__ = [
    "Certificate",
    "InternalInconsistency",
    "LiftCheckFailed",
    "Lp",
    "PurificationFailed",
    "StepBudgetExceeded",
    "UnboundedRay",
    "feasibility_certificate",
    "hadamard_det_bound",
    "lift_solution",
    "normalize_rows",
    "omega_bound",
    "purify_min_t",
    "solve_lp",
    "solve_strict",
    "solve_strict_homogeneous",
    "solve_weak",
]


class LiftCheckFailed(RuntimeError):
    """A normalized-system solution did not project to a source solution."""


class PurificationFailed(RuntimeError):
    """The slack did not purify to zero: the weak system has no solution."""


class UnboundedRay(RuntimeError):
    """No constraint blocked a purification ray (internal error)."""


class StepBudgetExceeded(RuntimeError):
    """The core solver exhausted its budget (infeasible or bad omega bound)."""


class InternalInconsistency(RuntimeError):
    """A structurally feasible primal-dual system failed to solve."""


@dataclass(frozen=True)
class Lp:
    """min c^T x subject to A x >= b; c may be absent (pure feasibility)."""

    a: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    c: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.a:
            raise ValueError("empty constraint matrix")
        n = len(self.a[0])
        if any(len(r) != n for r in self.a):
            raise ValueError("ragged constraint matrix")
        if len(self.b) != len(self.a):
            raise ValueError("rhs length mismatch")
        if self.c is not None and len(self.c) != n:
            raise ValueError("objective length mismatch")


@dataclass(frozen=True)
class Certificate:
    """Outcome of a feasibility or LP query, exact and self-verified.

    kind "solution": x solves the query (and for LPs, witness is an exact
    optimal dual vector).  kind "infeasible": witness y >= 0 has A^T y = 0
    and b^T y > 0.  kind "unbounded": witness r has A r >= 0 and c^T r < 0.
    """

    kind: str
    x: tuple[Fraction, ...] | None = None
    witness: tuple[Fraction, ...] | None = None
    detail: str = ""


def _default_config(config: SolverConfig | None) -> SolverConfig:
    if config is not None:
        return config
    return SolverConfig(mode="float")


# ---------------------------------------------------------------------------
# normalization and lifting

def normalize_rows(a) -> NormalizedInstance:
    """Expand each row r (with s = r.r) into the four rows (2r, ±1, ±2s).

    Each emitted row has squared norm 4s + 1 + 4s^2 = (2s+1)^2, so its norm
    is the integer 2s+1 and the matrix can be row-normalized over Q.  A
    strict solution of the original system extends by two zeros; conversely
    dropping the last two coordinates of any solution solves the original.
    """
    rows = []
    norms = []
    width = len(a[0])
    for i, row in enumerate(a):
        if len(row) != width:
            raise ValueError(f"row {i} has {len(row)} entries, expected {width}")
        if all(e == 0 for e in row):
            raise ZeroRow(f"row {i} is zero; A x > 0 is infeasible")
        s = sum(int(e) * int(e) for e in row)
        doubled = tuple(2 * int(e) for e in row)
        for sign_one, sign_s in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            rows.append(doubled + (sign_one, sign_s * 2 * s))
            norms.append(2 * s + 1)
    return NormalizedInstance(tuple(rows), tuple(norms),
                              origin="normalize-rows", source_cols=width)


def lift_solution(inst: NormalizedInstance, chi) -> tuple[Fraction, ...]:
    """Drop the two homogenization coordinates and re-check exactly."""
    if inst.source_cols is None or inst.m_rows % 4 != 0:
        raise ValueError("instance was not produced by normalize_rows")
    n = inst.source_cols
    chi = [x if isinstance(x, Fraction) else Fraction(x) for x in chi]
    for row in inst.rows:
        s = sum((e * x for e, x in zip(row, chi) if e), Fraction(0))
        if s <= 0:
            raise LiftCheckFailed("input does not strictly satisfy the normalized rows")
    x = tuple(chi[:n])
    for g in range(inst.m_rows // 4):
        row = inst.rows[4 * g]
        dot = sum((Fraction(e, 2) * xj for e, xj in zip(row[:n], x) if e), Fraction(0))
        if dot <= 0:
            raise LiftCheckFailed(f"lifted solution fails source row {g}")
    return x


# ---------------------------------------------------------------------------
# strict solvers (homogeneous, then with a right-hand side)

def solve_strict_homogeneous(a, config: SolverConfig | None = None) -> tuple[Fraction, ...]:
    """x with A x > 0 for integer A, assuming such x exists."""
    inst = normalize_rows(a)
    report = solve_feasibility(inst, _default_config(config))
    if report.status is not SolveStatus.SOLVED:
        raise StepBudgetExceeded(f"core solver returned {report.status.value}")
    return lift_solution(inst, report.x)


def solve_strict(a, b, config: SolverConfig | None = None) -> tuple[Fraction, ...]:
    """x with A x > b, via the homogenization [A | -b; 0 | 1] (x, t) > 0."""
    aug = [tuple(int(e) for e in row) + (-int(bi),) for row, bi in zip(a, b)]
    n = len(a[0])
    aug.append((0,) * n + (1,))
    chi = solve_strict_homogeneous(aug, config)
    t = chi[n]
    return tuple(x / t for x in chi[:n])


# ---------------------------------------------------------------------------
# determinant and separator-norm bounds

def hadamard_det_bound(a) -> int:
    """An integer D >= |det S| for every square submatrix S of A.

    Uses ceil(n^(n/2)) * 2^(n*B) with n = min(rows, cols) and B the largest
    entry bit length; Hadamard's inequality (|det| <= product of row norms)
    makes this an over-estimate for every submatrix order.
    """
    m = len(a)
    n = min(m, len(a[0]))
    bits = max((abs(int(e)).bit_length() for row in a for e in row), default=0)
    nn = n ** n
    r = math.isqrt(nn)
    if r * r < nn:
        r += 1
    return r << (n * bits)


def omega_bound(n_vars: int, entry_exp: int) -> int:
    """Bound N * 2^(2*N*B*ceil(log2 N)) on the squared separator norm.

    `entry_exp` is B in the convention |entry| <= 2^B; the degenerate
    N = 1 case uses ceil(log2 1) = 0 so the bound is just N.
    """
    if n_vars < 1 or entry_exp < 0:
        raise ValueError("need n_vars >= 1 and entry_exp >= 0")
    ceil_log = (n_vars - 1).bit_length()
    return n_vars << (2 * n_vars * entry_exp * ceil_log)


# ---------------------------------------------------------------------------
# exact polyhedral machinery (small dimensions, Fractions throughout)

def _dot(u, v) -> Fraction:
    s = Fraction(0)
    for a_, b_ in zip(u, v):
        if a_ and b_:
            s += Fraction(a_) * Fraction(b_)
    return s


def _rref(mat):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [[Fraction(x) for x in r] for r in mat]
    if not rows:
        return [], []
    ncols = len(rows[0])
    piv_cols = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], piv_cols


def _rank(mat) -> int:
    return len(_rref(mat)[1])


def _null_space(mat, dim):
    """Canonical rational basis of {w : mat w = 0} in R^dim."""
    if not mat:
        basis = []
        for i in range(dim):
            v = [Fraction(0)] * dim
            v[i] = Fraction(1)
            basis.append(tuple(v))
        return basis
    rr, piv = _rref(mat)
    free = [c for c in range(dim) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for ri, pc in enumerate(piv):
            v[pc] = -rr[ri][f]
        basis.append(tuple(v))
    return basis


def _solve_square(mat, rhs):
    """Exact solution of a square system, or None if singular."""
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])]
           for i, row in enumerate(mat)]
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if aug[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return None
        aug[c], aug[pivot_row] = aug[pivot_row], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def _ray_limit(rows, rhs, p, w):
    """Largest feasible step along w: (gamma, lowest blocking row) or (None, None)."""
    best = None
    best_i = None
    for i, (row, bi) in enumerate(zip(rows, rhs)):
        rate = _dot(row, w)
        if rate < 0:
            g = (_dot(row, p) - bi) / (-rate)
            if best is None or g < best:
                best, best_i = g, i
    return best, best_i


def _active_indices(rows, rhs, p):
    return [i for i, (row, bi) in enumerate(zip(rows, rhs)) if _dot(row, p) == bi]


def _purify_loop(rows, rhs, p, max_moves):
    """Greedy slack descent: null-space rays of the active set, then rank gains.

    Each move adds an independent tight row, so at most dim moves happen.
    Returns the final point; stops early if only unblocked line directions
    remain (degenerate polyhedra with lines).
    """
    dim = len(p)
    p = list(p)
    for _ in range(max_moves):
        act = _active_indices(rows, rhs, p)
        act_rows = [rows[i] for i in act]
        if len(act) and _rank(act_rows) >= dim:
            break
        basis = _null_space(act_rows, dim)
        if not basis:
            break
        move_done = False
        slack_dirs = [w for w in basis if w[-1] != 0]
        if slack_dirs:
            w = slack_dirs[0]
            if w[-1] > 0:
                w = tuple(-x for x in w)
            gamma, _ = _ray_limit(rows, rhs, p, w)
            if gamma is None:
                raise UnboundedRay("slack-decreasing ray escaped the polyhedron")
            p = [x + gamma * wx for x, wx in zip(p, w)]
            move_done = True
        else:
            for nb in basis:
                for w in (nb, tuple(-x for x in nb)):
                    gamma, _ = _ray_limit(rows, rhs, p, w)
                    if gamma is not None:
                        p = [x + gamma * wx for x, wx in zip(p, w)]
                        move_done = True
                        break
                if move_done:
                    break
        if not move_done:
            break  # only line directions remain
    return p


def _independent_active_basis(rows, rhs, p, dim):
    chosen = []
    chosen_rows = []
    for i in _active_indices(rows, rhs, p):
        trial = chosen_rows + [rows[i]]
        if _rank(trial) == len(trial):
            chosen.append(i)
            chosen_rows.append(rows[i])
        if len(chosen) == dim:
            return chosen
    return None


def _bland_min_slack(rows, rhs, p, basis):
    """Pivot along edges until the last coordinate is minimal (Bland's rule)."""
    dim = len(p)
    p = list(p)
    basis = list(basis)
    while True:
        rb = [rows[i] for i in basis]
        direction = None
        leave_pos = None
        for pos in sorted(range(dim), key=lambda t: basis[t]):
            e = [Fraction(0)] * dim
            e[pos] = Fraction(1)
            w = _solve_square(rb, e)
            if w is None:
                raise InternalInconsistency("degenerate pivot basis")
            if w[-1] < 0:
                direction = w
                leave_pos = pos
                break
        if direction is None:
            return p, basis
        gamma, enter = _ray_limit(rows, rhs, p, direction)
        if gamma is None:
            raise UnboundedRay("slack is unbounded below (internal error)")
        p = [x + gamma * wx for x, wx in zip(p, direction)]
        basis[leave_pos] = enter


def _descend_min_slack(rows, rhs, p):
    """Exact global minimization of the last coordinate over {row.p >= rhs}.

    Polyhedra with lines are pinned along their lineality space first (line
    directions never move the slack coordinate), then greedy purification
    reaches a vertex and Bland pivoting finishes the descent.
    """
    dim = len(p)
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    rhs = [Fraction(x) for x in rhs]
    lines = _null_space(rows, dim)
    for ell in lines:
        level = _dot(ell, p)
        rows.append(tuple(ell))
        rhs.append(level)
        rows.append(tuple(-x for x in ell))
        rhs.append(-level)
    p = _purify_loop(rows, rhs, p, dim + 1)
    basis = _independent_active_basis(rows, rhs, p, dim)
    if basis is None:
        raise InternalInconsistency("purification did not reach a vertex")
    p, _ = _bland_min_slack(rows, rhs, p, basis)
    return p


def _slack_polytope(a, b):
    """Rows and rhs of {(z, tau): A z + tau 1 >= b, tau >= 0}."""
    n = len(a[0])
    rows = [tuple(int(e) for e in row) + (1,) for row in a]
    rows.append((0,) * n + (1,))
    rhs = [Fraction(x) for x in b] + [Fraction(0)]
    return rows, rhs


def purify_min_t(a, b, x, t):
    """Move (x, t) to a vertex of {(z, tau): A z + tau 1 >= b, tau >= 0}
    without ever increasing tau.

    Directions come from the exact null space of the active rows: the first
    basis vector with a nonzero tau-component (sign-normalized to decrease
    tau), otherwise any basis vector that gains rank.  Each ray stops at the
    nearest newly tight constraint, so at most N+1 moves occur.  On
    degenerate systems whose feasible set contains lines the loop stops when
    no usable direction remains (the point then need not be a vertex).
    """
    rows, rhs = _slack_polytope(a, b)
    p = [Fraction(v) for v in x] + [Fraction(t)]
    for row, bi in zip(rows, rhs):
        if _dot(row, p) < bi:
            raise ValueError("purify_min_t needs a feasible starting point")
    p = _purify_loop(rows, rhs, p, len(p) + 1)
    return tuple(p[:-1]), p[-1]


# ---------------------------------------------------------------------------
# weak systems: A x >= b

def _strip_zero_rows(a, b):
    """Drop all-zero rows (0 >= b_i).  Returns (rows, rhs, kept, bad_row)."""
    kept = []
    rows = []
    rhs = []
    bad = None
    for i, (row, bi) in enumerate(zip(a, b)):
        if all(e == 0 for e in row):
            if bi > 0 and bad is None:
                bad = i
            continue
        kept.append(i)
        rows.append(tuple(int(e) for e in row))
        rhs.append(int(bi))
    return rows, rhs, kept, bad


DET_ROUTE_LIMIT = 1 << 12  # beyond this the 1/D margin is numerically hopeless


def solve_weak(a, b, config: SolverConfig | None = None,
               strategy: str = "auto") -> tuple[Fraction, ...]:
    """x with A x >= b (assumed feasible), by strict relaxation + purification.

    The textbook route bounds the slack by 1/D for a determinant bound D, so
    one greedy purification pass must land on t = 0.  That constraint makes
    the strict subproblem's margin about D^-2, which is only tractable while
    D is small; past DET_ROUTE_LIMIT the slack is left unbounded (the strict
    system is then structurally well-margined) and the exact pivoting
    descent drives it to its true minimum, which is 0 exactly when the weak
    system is feasible.
    """
    n = len(a[0])
    rows, rhs, _kept, bad = _strip_zero_rows(a, b)
    if bad is not None:
        raise PurificationFailed(f"zero row {bad} demands 0 >= {b[bad]} > 0")
    if not rows:
        return (Fraction(0),) * n

    if strategy == "auto":
        stacked = [row + (1,) for row in rows] + [(0,) * n + (1,)]
        strategy = "det-bound" if hadamard_det_bound(stacked) <= DET_ROUTE_LIMIT \
            else "descent"

    if strategy == "det-bound":
        stacked = [row + (1,) for row in rows] + [(0,) * n + (1,)]
        d = hadamard_det_bound(stacked)
        strict_rows = [row + (1,) for row in rows]
        strict_rows.append((0,) * n + (1,))       # t > 0
        strict_rows.append((0,) * n + (-d,))      # D t < 1
        strict_rhs = list(rhs) + [0, -1]
        sol = solve_strict(strict_rows, strict_rhs, config)
        xhat, that = purify_min_t(rows, rhs, sol[:n], sol[n])
        if that != 0:
            # degenerate stop without a vertex: finish with the exact descent
            prows, prhs = _slack_polytope(rows, rhs)
            p = _descend_min_slack(prows, prhs, list(xhat) + [that])
            xhat, that = tuple(p[:-1]), p[-1]
        if that != 0:
            raise PurificationFailed("slack did not purify to zero: system infeasible")
        return xhat
    if strategy == "descent":
        strict_rows = [row + (1,) for row in rows]
        strict_rows.append((0,) * n + (1,))
        strict_rhs = list(rhs) + [0]
        sol = solve_strict(strict_rows, strict_rhs, config)
        prows, prhs = _slack_polytope(rows, rhs)
        p = _descend_min_slack(prows, prhs, list(sol))
        if p[-1] != 0:
            raise PurificationFailed("slack minimum is positive: system infeasible")
        return tuple(p[:-1])
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# certificates and full LP

def _min_slack_lp_data(a, b):
    """(rows, rhs, objective) of  min t  s.t.  A z + t 1 >= b, t >= 0."""
    n = len(a[0])
    m_rows = [tuple(int(e) for e in row) + (1,) for row in a]
    m_rows.append((0,) * n + (1,))
    d = [int(x) for x in b] + [0]
    c = (0,) * n + (1,)
    return m_rows, d, c


def _primal_dual_system(m_rows, d, c):
    """Rows/rhs over (w, y) encoding M w >= d, M^T y = c, y >= 0, c.w <= d.y."""
    n_w = len(m_rows[0])
    n_y = len(m_rows)
    dim = n_w + n_y
    rows = []
    rhs = []
    for row, di in zip(m_rows, d):
        rows.append(tuple(row) + (0,) * n_y)
        rhs.append(int(di))
    for j in range(n_w):
        col = tuple(m_rows[i][j] for i in range(n_y))
        rows.append((0,) * n_w + col)
        rhs.append(int(c[j]))
        rows.append((0,) * n_w + tuple(-e for e in col))
        rhs.append(-int(c[j]))
    for i in range(n_y):
        e = [0] * dim
        e[n_w + i] = 1
        rows.append(tuple(e))
        rhs.append(0)
    rows.append(tuple(-int(e) for e in c) + tuple(int(x) for x in d))
    rhs.append(0)
    return rows, rhs


def feasibility_certificate(a, b, config: SolverConfig | None = None) -> Certificate:
    """Solve A x >= b or produce an exact infeasibility witness, no assumptions.

    The LP  min t : A z + t 1 >= b, t >= 0  is always feasible and bounded,
    so its primal-dual optimality system is solvable; reading the optimal t
    off an exact solution decides feasibility, and for t > 0 the dual vector
    is a verified witness (y >= 0, A^T y = 0, b^T y > 0).
    """
    n = len(a[0])
    rows, rhs, kept, bad = _strip_zero_rows(a, b)
    if bad is not None:
        y = [Fraction(0)] * len(a)
        y[bad] = Fraction(1)
        return Certificate(kind="infeasible", witness=tuple(y),
                           detail=f"zero row {bad} demands 0 >= {b[bad]}")
    if not rows:
        return Certificate(kind="solution", x=(Fraction(0),) * n)

    m_rows, d, c = _min_slack_lp_data(rows, rhs)
    pd_rows, pd_rhs = _primal_dual_system(m_rows, d, c)
    try:
        sol = solve_weak(pd_rows, pd_rhs, config, strategy="descent")
    except PurificationFailed as exc:
        raise InternalInconsistency(
            "primal-dual system of a structurally feasible LP failed") from exc
    n_w = n + 1
    w = sol[:n_w]
    y = sol[n_w:]
    t_star = w[n]
    if t_star == 0:
        z = tuple(w[:n])
        for row, bi in zip(rows, rhs):
            if _dot(row, z) < bi:
                raise InternalInconsistency("t* = 0 but A z >= b fails")
        return Certificate(kind="solution", x=z)
    # Farkas witness from the dual block: y1 >= 0, A^T y1 = 0, b^T y1 = t* > 0
    y1 = list(y[:len(rows)])
    if any(yi < 0 for yi in y1):
        raise InternalInconsistency("dual block is not nonnegative")
    for j in range(n):
        if sum((row[j] * yi for row, yi in zip(rows, y1)), Fraction(0)) != 0:
            raise InternalInconsistency("Farkas witness fails A^T y = 0")
    gain = sum((bi * yi for bi, yi in zip(rhs, y1)), Fraction(0))
    if gain <= 0:
        raise InternalInconsistency("Farkas witness has nonpositive gain")
    full = [Fraction(0)] * len(a)
    for idx, yi in zip(kept, y1):
        full[idx] = yi
    return Certificate(kind="infeasible", witness=tuple(full),
                       detail=f"min slack t* = {t_star}")


def _dual_feasibility_data(a, c):
    """Rows/rhs of the dual cone A^T y = c, y >= 0 as an inequality system."""
    m = len(a)
    n = len(a[0])
    rows = []
    rhs = []
    for j in range(n):
        col = tuple(int(a[i][j]) for i in range(m))
        rows.append(col)
        rhs.append(int(c[j]))
        rows.append(tuple(-e for e in col))
        rhs.append(-int(c[j]))
    for i in range(m):
        e = [0] * m
        e[i] = 1
        rows.append(tuple(e))
        rhs.append(0)
    return rows, rhs


def solve_lp(a, b, c, config: SolverConfig | None = None) -> Certificate:
    """min c^T x s.t. A x >= b: exact optimum, or an exact in/unboundedness witness.

    One feasibility certificate for the primal, one for the dual cone (its
    infeasibility certifies an unbounded primal via the Farkas ray), then the
    combined primal-dual optimality system pinned by c^T x <= b^T y; weak
    duality forces equality, so the returned pair is exactly optimal.
    """
    a = [tuple(int(e) for e in row) for row in a]
    b = [int(x) for x in b]
    c = [int(x) for x in c]
    m = len(a)
    n = len(a[0])

    primal = feasibility_certificate(a, b, config)
    if primal.kind == "infeasible":
        return primal

    dual_rows, dual_rhs = _dual_feasibility_data(a, c)
    dual = feasibility_certificate(dual_rows, dual_rhs, config)
    if dual.kind == "infeasible":
        # Farkas u = (u+, u-, s) with A(u+ - u-) + s = 0, c.(u+ - u-) > 0;
        # r = -(u+ - u-) is a feasible ray with c^T r < 0
        u = dual.witness
        diff = [u[2 * j] - u[2 * j + 1] for j in range(n)]
        ray = tuple(-x for x in diff)
        for row in a:
            if _dot(row, ray) < 0:
                raise InternalInconsistency("unboundedness ray is not recessive")
        if _dot(c, ray) >= 0:
            raise InternalInconsistency("unboundedness ray does not improve")
        return Certificate(kind="unbounded", witness=ray,
                           detail="dual cone A^T y = c, y >= 0 is empty")

    opt_rows, opt_rhs = _primal_dual_system(a, b, c)
    sol = solve_weak(opt_rows, opt_rhs, config, strategy="descent")
    x = tuple(sol[:n])
    y = tuple(sol[n:])
    for row, bi in zip(a, b):
        if _dot(row, x) < bi:
            raise InternalInconsistency("optimal x is infeasible")
    if any(yi < 0 for yi in y):
        raise InternalInconsistency("optimal y is negative")
    for j in range(n):
        if sum((a[i][j] * y[i] for i in range(m)), Fraction(0)) != c[j]:
            raise InternalInconsistency("optimal y fails A^T y = c")
    if _dot(c, x) != _dot(b, y):
        raise InternalInconsistency("strong duality gap is nonzero")
    return Certificate(kind="solution", x=x, witness=y,
                       detail="exact primal-dual optimal pair")
