"""Sequence families, splitting coefficients, and admissibility reports."""

from decimal import Decimal, getcontext

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobweb import (
    CustomTable,
    CustomTLambda,
    FamilySpecError,
    Fp,
    Gaussian,
    LambdaRuleError,
    ModifiedGaussian,
    Natural,
    Powers,
    TableRangeError,
    TLambdaAB,
    is_cobweb_admissible,
    lambda_composition,
    lambda_composition_reversed,
    lambda_split,
    parse_family_spec,
    term,
    term_via_ones,
)
from conftest import TABLE_A, TABLE_B, TABLE_C, TABLE_E, TABLE_F, compositions_of, lambda_families


class TestTerm:
    def test_natural_identity(self):
        assert term(Natural(), 5) == 5

    def test_fp2_published_prefix(self):
        # F(2) runs 0, 1, 2, 5, 12, 29, 70, 169, ... from index 0
        got = [term(Fp(2), n) for n in range(1, 12)]
        assert got == [1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741]

    def test_fp3_fp4_published_prefixes(self):
        assert [term(Fp(3), n) for n in range(1, 8)] == [1, 3, 10, 33, 109, 360, 1189]
        assert [term(Fp(4), n) for n in range(1, 8)] == [1, 4, 17, 72, 305, 1292, 5473]

    def test_modified_gaussian_prefix(self):
        got = [term(ModifiedGaussian(2), n) for n in range(1, 9)]
        assert got == [1, 4, 12, 32, 80, 192, 448, 1024]

    def test_gaussian_closed_form(self):
        # oracle: (a^n - b^n)/(a - b) with a=1, b=2 gives 7 at n=3
        assert term(Gaussian(2), 3) == 7
        assert [term(Gaussian(2), n) for n in range(1, 6)] == [1, 3, 7, 15, 31]

    def test_powers(self):
        assert [term(Powers(2), n) for n in range(1, 6)] == [2, 4, 8, 16, 32]

    def test_index_zero_rejected(self):
        with pytest.raises(ValueError):
            term(Natural(), 0)

    def test_custom_table_range(self):
        table = CustomTable((1, 2, 5))
        assert term(table, 3) == 5
        with pytest.raises(TableRangeError):
            term(table, 4)

    def test_degenerate_tlab_rejected(self):
        with pytest.raises(FamilySpecError):
            TLambdaAB(0, 0)


class TestLambdaSplit:
    def test_natural_pair(self):
        assert tuple(lambda_split(Natural(), 3, 4)) == (1, 1)

    def test_fibonacci_pair(self):
        lam = lambda_split(Fp(1), 2, 3)
        assert tuple(lam) == (1, 2)
        assert lam.lambda_k * term(Fp(1), 2) + lam.lambda_m * term(Fp(1), 3) == term(Fp(1), 5) == 5

    def test_gaussian_pair(self):
        for k in range(1, 6):
            for m in range(1, 6):
                assert tuple(lambda_split(Gaussian(2), k, m)) == (1, 2**k)

    def test_powers_pair_skips_m_branch(self):
        lam = lambda_split(Powers(2), 3, 4)
        assert lam.lambda_m == 0
        assert lam.lambda_k == 2**4

    def test_split_identity_sweep(self):
        for F in lambda_families():
            for k in range(1, 13):
                for m in range(1, 13):
                    lam = lambda_split(F, k, m)
                    assert lam.lambda_k * term(F, k) + lam.lambda_m * term(F, m) == term(F, k + m)

    def test_table_has_no_rule(self):
        with pytest.raises(LambdaRuleError):
            lambda_split(TABLE_C, 1, 2)

    @settings(deadline=None, max_examples=60)
    @given(k=st.integers(1, 12), m=st.integers(1, 12),
           p=st.integers(1, 4))
    def test_fp_split_property(self, k, m, p):
        F = Fp(p)
        lam = lambda_split(F, k, m)
        assert lam.lambda_k * term(F, k) + lam.lambda_m * term(F, m) == term(F, k + m)


class TestLambdaComposition:
    def test_all_ones_natural(self):
        assert lambda_composition(Natural(), (1, 1, 1)) == (1, 1, 1)

    def test_tlab_closed_form_example(self):
        # alpha=1, beta=2: coefficients alpha^suffix * beta^prefix
        lams = lambda_composition(TLambdaAB(1, 2), (2, 1))
        assert lams == (1, 4)
        F = TLambdaAB(1, 2)
        assert 1 * term(F, 2) + 4 * term(F, 1) == term(F, 3) == 7

    def test_fibonacci_two_twos(self):
        lams = lambda_composition(Fp(1), (2, 2))
        assert lams == (1, 2)
        assert 1 * term(Fp(1), 2) + 2 * term(Fp(1), 2) == term(Fp(1), 4) == 3

    def test_composition_identity_sweep(self):
        for F in lambda_families():
            for n in range(1, 11):
                for parts in compositions_of(n):
                    lams = lambda_composition(F, parts)
                    total = sum(l * term(F, b) for l, b in zip(lams, parts))
                    assert total == term(F, n)

    def test_forward_and_reversed_agree_on_sum(self):
        for F in lambda_families():
            for n in range(2, 9):
                for parts in compositions_of(n, max_parts=4):
                    fwd = lambda_composition(F, parts)
                    rev = lambda_composition_reversed(F, parts)
                    weigh = lambda lams: sum(l * term(F, b) for l, b in zip(lams, parts))
                    assert weigh(fwd) == weigh(rev) == term(F, n)

    def test_tlab_closed_form_agrees_with_fold(self):
        # the folded coefficients equal alpha^suffix * beta^prefix directly
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                F = TLambdaAB(a, b)
                for n in range(2, 9):
                    for parts in compositions_of(n, max_parts=4):
                        fold = lambda_composition(F, parts)
                        closed = tuple(
                            a ** sum(parts[s + 1:]) * b ** sum(parts[:s])
                            for s in range(len(parts))
                        )
                        assert fold == closed


class TestTermViaOnes:
    def test_examples(self):
        assert term_via_ones(Natural(), 4) == 4
        assert term_via_ones(Gaussian(2), 3) == 7
        assert term_via_ones(Fp(2), 4) == 12

    def test_matches_term_everywhere(self):
        for F in lambda_families():
            for n in range(1, 21):
                assert term_via_ones(F, n) == term(F, n)


class TestClosedForms:
    def test_tlab_closed_form_vs_split_folding(self):
        # closed-form terms agree with folding the split rule up from 1_F
        for a in (0, 1, 2, 3):
            for b in (1, 2, 3):
                F = TLambdaAB(a, b, one=2)
                folded = {1: term(F, 1)}
                for n in range(2, 21):
                    lam = lambda_split(F, 1, n - 1)
                    folded[n] = lam.lambda_k * folded[1] + lam.lambda_m * folded[n - 1]
                    assert folded[n] == term(F, n)

    def test_k_times_n_identity(self):
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                F = TLambdaAB(a, b)
                for k in range(1, 7):
                    for n in range(1, 7):
                        rhs = term(F, n) * sum(
                            a ** ((k - s) * n) * b ** ((s - 1) * n)
                            for s in range(1, k + 1)
                        )
                        assert term(F, k * n) == rhs

    def test_fp_explicit_phi_formula(self):
        getcontext().prec = 60
        for p in (1, 2, 3, 4):
            root = Decimal(p * p + 4).sqrt()
            phi1 = (Decimal(p) + root) / 2
            phi2 = (Decimal(p) - root) / 2
            F = Fp(p)
            for n in range(1, 31):
                approx = (phi1**n - phi2**n) / root
                rounded = int(approx.to_integral_value(rounding="ROUND_HALF_EVEN"))
                assert rounded == term(F, n)

    def test_fp_linear_recurrence(self):
        for p in (1, 2, 3, 4):
            F = Fp(p)
            for n in range(3, 31):
                assert term(F, n) == p * term(F, n - 1) + term(F, n - 2)


class TestAdmissibility:
    def test_natural_binomials(self):
        report = is_cobweb_admissible(Natural(), 12)
        assert report.admissible_up_to_bound and report.first_failure is None

    def test_fibonomials(self):
        assert is_cobweb_admissible(Fp(1), 12).admissible_up_to_bound

    def test_custom_table_failure_witness(self):
        report = is_cobweb_admissible(CustomTable((1, 2, 4, 5, 7)), 5)
        assert not report.admissible_up_to_bound
        assert report.first_failure == (5, 2)

    def test_example_table_fixtures(self):
        # bounded verdicts for the printed table prefixes
        assert is_cobweb_admissible(TABLE_A, 7).first_failure == (4, 2)
        for table in (TABLE_B, TABLE_C, TABLE_E, TABLE_F):
            report = is_cobweb_admissible(table, len(table.terms))
            assert report.admissible_up_to_bound, table.spec_string()

    def test_report_is_bounded(self):
        report = is_cobweb_admissible(Natural(), 6)
        assert report.bound == 6


class TestCustomTLambda:
    def test_valid_rule_accepted(self):
        F = CustomTLambda(
            term_rule=lambda n: n,
            lambda_k_rule=lambda k, m: 1,
            lambda_m_rule=lambda k, m: 1,
            validated_to=10,
            label="natural-again",
        )
        assert term(F, 7) == 7
        assert tuple(lambda_split(F, 3, 4)) == (1, 1)

    def test_invalid_rule_rejected_with_witness(self):
        with pytest.raises(LambdaRuleError) as err:
            CustomTLambda(
                term_rule=lambda n: n,
                lambda_k_rule=lambda k, m: 2,
                lambda_m_rule=lambda k, m: 1,
                validated_to=8,
            )
        assert "(k=1, m=1)" in str(err.value)


class TestFamilySpec:
    @pytest.mark.parametrize("spec", [
        "natural", "powers:q=2", "gaussian:q=3", "modgauss:q=2",
        "tlab:a=1,b=2,one=1", "fp:p=3", "table:[1,2,5]",
    ])
    def test_round_trip(self, spec):
        F = parse_family_spec(spec)
        assert parse_family_spec(F.spec_string()) == F

    def test_bad_specs(self):
        for bad in ("nope", "powers:z=1", "tlab:a=1", "table:[1,x]", "natural:q=2"):
            with pytest.raises(FamilySpecError):
                parse_family_spec(bad)
