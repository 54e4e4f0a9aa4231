import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linfeas.instances import generate_feasible_instance, lifted_witness
from linfeas.perceptron import (
    CapExceeded,
    PerceptronState,
    perceptron_solve,
    perceptron_step,
)
from linfeas.potential import NormalizedInstance
from linfeas.reductions import normalize_rows

ONE = NormalizedInstance.from_integer_rows([[1]])
AXES = NormalizedInstance.from_integer_rows([[1, 0], [0, 1]])


def run_stepper(inst, cap=10_000):
    st_ = PerceptronState.initial(inst)
    while st_.t < cap:
        nxt = perceptron_step(inst, st_)
        if nxt is None:
            return st_
        st_ = nxt
    raise AssertionError("stepper did not converge")


class TestStep:
    def test_first_step_from_zero(self):
        st_ = PerceptronState.initial(ONE)
        out = perceptron_step(ONE, st_)
        assert out.x == (F(1),) and out.t == 1 and out.v_counts == (1,)

    def test_converged(self):
        st_ = PerceptronState(x=(F(1),), t=1, v_counts=(1,))
        assert perceptron_step(ONE, st_) is None

    def test_lowest_violated_row_two_steps(self):
        st_ = PerceptronState(x=(F(1), F(0)), t=1, v_counts=(1, 0))
        out = perceptron_step(AXES, st_)
        assert out.x == (F(1), F(1))
        assert perceptron_step(AXES, out) is None


class TestSolve:
    def test_trivial_bound_tight(self):
        rep = perceptron_solve(ONE, 1)
        assert rep.x == (F(1),) and rep.steps == 1

    def test_axes(self):
        rep = perceptron_solve(AXES, 4)
        assert rep.steps <= 4
        assert all(sum(F(e) * x for e, x in zip(row, rep.x)) > 0
                   for row in AXES.rows)

    def test_cap_exceeded(self):
        with pytest.raises(CapExceeded):
            perceptron_solve(AXES, 1)

    def test_matches_stepper_and_reconstruction(self):
        for seed in range(6):
            gen = generate_feasible_instance(m=3, n=2, bits=2, margin=F(1, 4),
                                             seed=seed)
            inst = normalize_rows(gen.a)
            fast = perceptron_solve(inst, 10_000)
            slow = run_stepper(inst)
            assert fast.steps == slow.t
            assert fast.v_counts == slow.v_counts
            assert fast.x == slow.x
            # reconstruction identity: x == sum v_counts[m] rows[m]/norms[m]
            recon = [sum((F(c * row[j], rho) for c, row, rho
                          in zip(fast.v_counts, inst.rows, inst.row_norms)),
                         F(0)) for j in range(inst.n_cols)]
            assert tuple(recon) == fast.x

    def test_planted_cap_always_suffices(self):
        for seed in range(5):
            gen = generate_feasible_instance(m=4, n=3, bits=2, margin=F(1, 4),
                                             seed=seed)
            inst = normalize_rows(gen.a)
            cap = math.ceil(sum(x * x for x in lifted_witness(gen)))
            rep = perceptron_solve(inst, cap)
            assert rep.steps <= cap


class TestLadder:
    @settings(deadline=None, max_examples=12)
    @given(seed=st.integers(min_value=0, max_value=10**5))
    def test_cauchy_ladder_exact(self, seed):
        gen = generate_feasible_instance(m=3, n=2, bits=2, margin=F(1, 4), seed=seed)
        inst = normalize_rows(gen.a)
        w = lifted_witness(gen)
        omega = sum(x * x for x in w)
        st_ = PerceptronState.initial(inst)
        while True:
            nxt = perceptron_step(inst, st_)
            if nxt is None:
                break
            st_ = nxt
            t = st_.t
            xx = sum(x * x for x in st_.x)
            wx = sum(a * b for a, b in zip(w, st_.x))
            assert xx <= t
            assert wx >= t
            assert wx * wx <= xx * omega  # Cauchy
            assert t * t <= omega * t  # the ladder's conclusion
            assert t <= omega
