import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linfeas.instances import generate_feasible_instance
from linfeas.newton import (
    DECREASE_PHASE1,
    DELTA_INV_UPPER,
    DomainExit,
    QPolicy,
    SolverConfig,
    SolverState,
    SolveStatus,
    choose_denominator,
    damped_newton_step,
    rescale_down,
    round_iterate,
    solve_feasibility,
    step_budget,
    verify_rows_strict,
)
from linfeas.potential import (
    DualIterate,
    NormalizedInstance,
    potential_value,
    quad_form,
)
from linfeas.qlinalg import GridVector
from linfeas.reductions import normalize_rows

ONE = NormalizedInstance.from_integer_rows([[1]])
EYE = NormalizedInstance.from_integer_rows([[1, 0], [0, 1]])


def exact_state(nums, den, inst=None):
    st_ = SolverState(v=DualIterate("exact", grid=GridVector(tuple(nums), den)))
    if inst is not None:
        st_.quad_form = quad_form(inst, st_.v)
    return st_


class TestDeltaConstant:
    def test_rational_upper_bound_on_inverse_delta(self):
        # 4/149 < 1/4 - log(5/4), so 149/4 over-estimates 1/delta
        assert float(1 / DELTA_INV_UPPER) < DECREASE_PHASE1
        assert DECREASE_PHASE1 == pytest.approx(0.0268563, abs=2e-7)


class TestChooseDenominator:
    def test_examples(self):
        assert choose_denominator(1, 1) == 1024
        assert choose_denominator(4, 4) == 16384
        assert choose_denominator(1, 1, QPolicy.fixed(2**20)) == 2**20

    def test_power_of_two_and_formula_bound(self):
        for m, om in [(1, 1), (3, F(7, 2)), (16, 977), (64, F(10**6))]:
            q = choose_denominator(m, om)
            assert q & (q - 1) == 0
            assert q >= 16 * m * math.sqrt(float(m * om)) / DECREASE_PHASE1 * 0.5


class TestDampedNewtonStep:
    def test_float_one_dim(self):
        st_ = SolverState(v=DualIterate("float", dense=np.array([2.0])), quad_form=4.0)
        out = damped_newton_step(ONE, st_, SolverConfig(mode="float"))
        lam = math.sqrt(1.8)
        assert out.lambda_hat == pytest.approx(lam)
        assert out.v.dense[0] == pytest.approx(2.0 - (6.0 / 5.0) / (1.0 + lam))
        f0 = potential_value(ONE, [2.0])
        f1 = potential_value(ONE, out.v.dense)
        assert f0 - f1 >= DECREASE_PHASE1
        assert out.phase == 1

    def test_float_stationary(self):
        st_ = SolverState(v=DualIterate("float", dense=np.array([1.0])), quad_form=1.0)
        out = damped_newton_step(ONE, st_, SolverConfig(mode="float"))
        assert out.lambda_hat == 0.0
        assert out.v.dense[0] == 1.0

    def test_exact_one_dim(self):
        st_ = exact_state([2], 1, ONE)
        out = damped_newton_step(ONE, st_, SolverConfig(mode="exact"))
        assert out.lambda_hat == F(2)
        assert out.v.fracs == (F(8, 5),)
        assert out.quad_form == F(64, 25)

    def test_exact_stationary(self):
        st_ = exact_state([1], 1, ONE)
        out = damped_newton_step(ONE, st_, SolverConfig(mode="exact"))
        assert out.lambda_hat == F(0)
        assert out.v.grid.nums == (1,)

    def test_exact_quad_identity(self):
        gen = generate_feasible_instance(m=3, n=2, bits=2, margin=F(1, 4), seed=5)
        inst = normalize_rows(gen.a)
        st_ = exact_state([7] * inst.m_rows, 5, inst)
        out = damped_newton_step(inst, st_, SolverConfig(mode="exact"))
        assert out.quad_form == quad_form(inst, out.v.fracs)

    def test_exact_keeps_positivity(self):
        gen = generate_feasible_instance(m=4, n=3, bits=2, margin=F(1, 16), seed=9)
        inst = normalize_rows(gen.a)
        st_ = exact_state([1] * inst.m_rows, inst.m_rows, inst)
        for _ in range(5):
            st_ = damped_newton_step(inst, st_, SolverConfig(mode="exact"))
            assert all(x > 0 for x in st_.v.vector())
            st_ = round_iterate(st_, 4096)
            st_.quad_form = quad_form(inst, st_.v)


class TestRescaleDown:
    def test_identity_below_trigger(self):
        st_ = exact_state([1, 1], 1, EYE)
        out = rescale_down(EYE, st_)
        assert out.v.grid.nums == (1, 1) and out.v.grid.den == 1

    def test_two_dim_example(self):
        st_ = exact_state([4, 4], 1, EYE)
        assert st_.quad_form == F(32)
        out = rescale_down(EYE, st_)
        assert out.v.grid.entries() == [F(1), F(1)]
        assert out.quad_form == F(2)
        f_before = potential_value(EYE, st_.v)
        f_after = potential_value(EYE, out.v)
        assert f_after <= f_before

    def test_one_dim_example(self):
        st_ = exact_state([4], 1, ONE)
        out = rescale_down(ONE, st_)
        assert out.v.grid.entries() == [F(1)]
        assert potential_value(ONE, st_.v) == pytest.approx(8 - math.log(4))
        assert potential_value(ONE, out.v) == pytest.approx(0.5)

    def test_quad_lands_in_band(self):
        gen = generate_feasible_instance(m=4, n=3, bits=3, margin=F(1, 4), seed=2)
        inst = normalize_rows(gen.a)
        m = inst.m_rows
        st_ = exact_state([40] * m, 3, inst)
        if st_.quad_form >= 4 * m:
            out = rescale_down(inst, st_)
            assert m <= out.quad_form <= 4 * m
            assert out.quad_form == quad_form(inst, out.v)


class TestRoundIterate:
    def test_examples(self):
        st_ = SolverState(v=DualIterate("exact", fracs=(F(3, 10),)))
        assert round_iterate(st_, 2).v.grid.entries() == [F(1, 2)]
        st_ = SolverState(v=DualIterate("exact", fracs=(F(1, 3), F(2, 3))))
        assert round_iterate(st_, 3).v.grid.nums == (2, 3)

    def test_on_grid_increments(self):
        st_ = SolverState(v=DualIterate("exact", grid=GridVector((3, 5), 7)))
        out = round_iterate(st_, 7)
        assert out.v.grid.nums == (4, 6)

    def test_float_rejected(self):
        st_ = SolverState(v=DualIterate("float", dense=np.array([1.0])))
        with pytest.raises(ValueError):
            round_iterate(st_, 8)


class TestSolveFeasibility:
    def test_trivial_one(self):
        rep = solve_feasibility(ONE, SolverConfig(mode="float"))
        assert rep.status is SolveStatus.SOLVED
        assert rep.x == (F(1),)
        assert rep.steps_total == 0
        assert rep.exact_check

    def test_trivial_eye_exact(self):
        rep = solve_feasibility(EYE, SolverConfig(mode="exact"))
        assert rep.status is SolveStatus.SOLVED
        assert rep.steps_total == 0
        assert verify_rows_strict(EYE, rep.x)

    def test_tight_instance_needs_work_both_modes(self):
        gen = generate_feasible_instance(m=5, n=2, bits=2, margin=F(1, 16),
                                         seed=1, tight_rows=3)
        inst = normalize_rows(gen.a)
        ow = gen.witness_squared_norm()
        for mode in ("exact", "float"):
            rep = solve_feasibility(inst, SolverConfig(mode=mode, omega_bound=ow,
                                                       q_policy=QPolicy.from_omega(),
                                                       trace=True))
            assert rep.status is SolveStatus.SOLVED, mode
            assert rep.steps_total > 0
            assert verify_rows_strict(inst, rep.x)
            assert rep.steps_total <= step_budget(inst.m_rows, ow)

    def test_budget_reported_without_adaptive(self):
        gen = generate_feasible_instance(m=3, n=2, bits=3, margin=F(1, 16),
                                         seed=0, tight_rows=2)
        inst = normalize_rows(gen.a)
        rep = solve_feasibility(inst, SolverConfig(
            mode="float", q_policy=QPolicy.from_omega(), max_steps=1))
        assert rep.status is SolveStatus.STEP_BUDGET_EXCEEDED
        assert rep.x is None

    def test_adaptive_exhausts_after_eight_retries(self):
        gen = generate_feasible_instance(m=3, n=2, bits=3, margin=F(1, 16),
                                         seed=0, tight_rows=2)
        inst = normalize_rows(gen.a)
        rep = solve_feasibility(inst, SolverConfig(
            mode="exact", q_policy=QPolicy.adaptive(start_q=2), max_steps=2))
        assert rep.status is SolveStatus.STEP_BUDGET_EXCEEDED
        assert rep.attempts == 9  # initial run plus eight doubling restarts
        assert rep.q_used == 2 * 2**8

    def test_adaptive_default_solves(self):
        gen = generate_feasible_instance(m=3, n=2, bits=3, margin=F(1, 16),
                                         seed=0, tight_rows=2)
        inst = normalize_rows(gen.a)
        rep = solve_feasibility(inst, SolverConfig(mode="exact",
                                                   q_policy=QPolicy.adaptive()))
        assert rep.status is SolveStatus.SOLVED
        assert verify_rows_strict(inst, rep.x)

    def test_exact_denominators_all_q(self):
        gen = generate_feasible_instance(m=4, n=3, bits=2, margin=F(1, 16), seed=31,
                                         tight_rows=2)
        inst = normalize_rows(gen.a)
        ow = gen.witness_squared_norm()
        cfg = SolverConfig(mode="exact", omega_bound=ow,
                           q_policy=QPolicy.from_omega(), trace=True)
        rep = solve_feasibility(inst, cfg)
        assert rep.status is SolveStatus.SOLVED
        for rec in rep.trace:
            assert rec.den == rep.q_used
            assert rec.rounded

    def test_trace_wire_fields(self):
        gen = generate_feasible_instance(m=3, n=2, bits=3, margin=F(1, 16),
                                         seed=0, tight_rows=2)
        inst = normalize_rows(gen.a)
        rep = solve_feasibility(inst, SolverConfig(
            mode="float", omega_bound=gen.witness_squared_norm(),
            q_policy=QPolicy.from_omega(), trace=True))
        assert rep.trace, "expected at least one Newton step"
        wire = rep.trace[0].to_wire()
        assert set(wire) == {"step", "lambda_hat", "quad_form", "min_residual",
                             "rescaled", "rounded", "F_float_observed"}

    @pytest.mark.parametrize("mode", ["exact", "float"])
    def test_monotone_decrease(self, mode):
        gen = generate_feasible_instance(m=6, n=3, bits=2, margin=F(1, 16),
                                         seed=4, tight_rows=3)
        inst = normalize_rows(gen.a)
        rep = solve_feasibility(inst, SolverConfig(
            mode=mode, omega_bound=gen.witness_squared_norm(),
            q_policy=QPolicy.from_omega(), trace=True))
        assert rep.status is SolveStatus.SOLVED
        assert len(rep.trace) > 3
        values = [rep.start_potential] + [r.potential_observed for r in rep.trace]
        for a, b in zip(values, values[1:]):
            assert b < a

    @settings(deadline=None, max_examples=25)
    @given(seed=st.integers(min_value=0, max_value=10**6),
           m=st.integers(min_value=1, max_value=5),
           n=st.integers(min_value=1, max_value=4),
           mode=st.sampled_from(["exact", "float"]))
    def test_random_instances_solve_and_verify(self, seed, m, n, mode):
        gen = generate_feasible_instance(m=m, n=n, bits=2, margin=F(1, 4), seed=seed)
        inst = normalize_rows(gen.a)
        cfg = SolverConfig(mode=mode, omega_bound=gen.witness_squared_norm(),
                           q_policy=QPolicy.from_omega())
        rep = solve_feasibility(inst, cfg)
        assert rep.status is SolveStatus.SOLVED
        assert rep.exact_check
        assert verify_rows_strict(inst, rep.x)


class TestStepBudget:
    def test_formula(self):
        assert step_budget(1, 1) == math.ceil(4 * 1 / DECREASE_PHASE1) + 16
        m, om = 8, F(50)
        expect = math.ceil(4 * (m * math.log(m) + 1 + m * math.log(50.0))
                           / DECREASE_PHASE1) + 16
        assert step_budget(m, om) == expect
