from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linfeas.instances import (
    DimensionMismatch,
    Instance,
    MalformedHeader,
    NonIntegerEntry,
    RejectionBudgetExceeded,
    RowLengthMismatch,
    ZeroRow,
    generate_feasible_instance,
    lifted_witness,
    parse_instance,
    verify_solution_exact,
    write_instance,
)
from linfeas.reductions import normalize_rows


class TestFormat:
    def test_trivial_instances(self):
        assert parse_instance("1 1\n1\n").a == ((1,),)
        assert parse_instance("2 2\n1 0\n0 1\n").a == ((1, 0), (0, 1))
        inst = parse_instance("1 2\n3 4\n")
        assert inst.a == ((3, 4),) and inst.entry_bits == 3

    def test_round_trip_byte_identical(self):
        inst = generate_feasible_instance(m=3, n=2, bits=4, margin=F(1, 4), seed=5)
        text = write_instance(inst)
        again = parse_instance(text)
        assert again == inst
        assert write_instance(again) == text

    def test_header_errors(self):
        with pytest.raises(MalformedHeader):
            parse_instance("")
        with pytest.raises(MalformedHeader):
            parse_instance("2\n1\n")
        with pytest.raises(MalformedHeader):
            parse_instance("1 1\n")
        with pytest.raises(MalformedHeader):
            parse_instance("1 1\n1\nstray\n")

    def test_row_errors(self):
        with pytest.raises(RowLengthMismatch):
            parse_instance("1 2\n3\n")
        with pytest.raises(NonIntegerEntry):
            parse_instance("1 1\n1.5\n")
        with pytest.raises(ZeroRow):
            parse_instance("1 2\n0 0\n")

    def test_meta_round_trip(self):
        text = "2 1\n3\n-2\n# seed: 9\n# margin: 1/8\n# witness: 5/2\n"
        inst = parse_instance(text)
        assert inst.seed == 9 and inst.margin == F(1, 8)
        assert inst.witness == (F(5, 2),)

    def test_large_entries(self):
        big = 10**40
        inst = parse_instance(f"1 1\n{big}\n")
        assert inst.a[0][0] == big


class TestGenerator:
    def test_planted_solution_strict(self):
        for seed in range(8):
            inst = generate_feasible_instance(m=4, n=3, bits=3, margin=F(1, 4),
                                              seed=seed)
            assert verify_solution_exact(inst, inst.witness, "strict").ok

    def test_determinism(self):
        a = generate_feasible_instance(m=5, n=4, bits=3, margin=F(1, 4), seed=77)
        b = generate_feasible_instance(m=5, n=4, bits=3, margin=F(1, 4), seed=77)
        assert write_instance(a) == write_instance(b)

    def test_one_by_one_single_bit(self):
        inst = generate_feasible_instance(m=1, n=1, bits=1, margin=F(1), seed=3)
        assert inst.a[0][0] != 0
        assert verify_solution_exact(inst, inst.witness).ok

    def test_normalized_margin_exactly_one(self):
        for seed in (0, 4, 9):
            inst = generate_feasible_instance(m=4, n=3, bits=2, margin=F(1, 4),
                                              seed=seed)
            norm = normalize_rows(inst.a)
            w = lifted_witness(inst)
            margins = [sum(F(e) * x for e, x in zip(row, w)) / rho
                       for row, rho in zip(norm.rows, norm.row_norms)]
            assert min(margins) == 1
            assert all(m >= 1 for m in margins)

    def test_margin_exact_acceptance(self):
        # every accepted row satisfies the squared-margin inequality exactly
        inst = generate_feasible_instance(m=6, n=3, bits=3, margin=F(1, 4), seed=1)
        g = F(1, 4)
        x = inst.witness
        xx = sum(e * e for e in x)
        for row in inst.a:
            dot = sum(e * w for e, w in zip(row, x))
            rr = sum(F(e * e) for e in row)
            assert dot > 0
            assert dot * dot >= g * g * rr * xx

    def test_tight_rows_cap_margin(self):
        inst = generate_feasible_instance(m=6, n=3, bits=3, margin=F(1, 8), seed=2,
                                          tight_rows=3)
        g = F(1, 8)
        x = inst.witness
        xx = sum(e * e for e in x)
        capped = 0
        for row in inst.a[:3]:
            dot = sum(e * w for e, w in zip(row, x))
            rr = sum(F(e * e) for e in row)
            assert dot * dot <= 4 * g * g * rr * xx
            capped += 1
        assert capped == 3

    def test_rejection_budget(self):
        with pytest.raises(RejectionBudgetExceeded):
            # margin 1 with several rows is hopeless for random draws
            generate_feasible_instance(m=4, n=4, bits=2, margin=F(1), seed=0,
                                       max_tries=200)

    @settings(deadline=None, max_examples=20)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_round_trip_property(self, seed):
        inst = generate_feasible_instance(m=3, n=2, bits=2, margin=F(1, 4), seed=seed)
        assert parse_instance(write_instance(inst)) == inst


class TestVerify:
    def test_examples(self):
        one = Instance(((1,),))
        assert verify_solution_exact(one, [F(1)]).ok
        assert verify_solution_exact(one, [F(1)]).margin == 1
        pm = Instance(((1,), (-1,)))
        res = verify_solution_exact(pm, [F(0)])
        assert not res.ok and res.margin == 0
        two = Instance(((2,),))
        res = verify_solution_exact(two, [F(1)], "weak", rhs=[2])
        assert res.ok and res.margin == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            verify_solution_exact(Instance(((1, 2),)), [F(1)])
        with pytest.raises(DimensionMismatch):
            verify_solution_exact(Instance(((1,),)), [F(1)], rhs=[1, 2])
