"""Series classification, infinite products, and blocked products."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spcd.sequences import (
    AffineLinear,
    AlphaBlocking,
    AlternatingPowerLaw,
    Constant,
    ConvergesTo,
    DivergesMinus,
    DivergesPlus,
    ExtendedMeasure,
    Geometric,
    NegativeFactor,
    Oscillates,
    Polynomial,
    PowerLaw,
    QuadraticPoly,
    SequenceSpec,
    UnsupportedBlocking,
    Zero,
    classify_sum,
    negative_part_sum,
    ordinary_alpha_product,
    ordinary_product,
    term,
)

# Frozen oracle values: brute-force partial sums/products (1e7 terms for the
# power-law sum, 1e6 for the rest) agree with these analytic limits.
BASEL = 1.6449340668482264          # sum 1/(k+1)^2
NEG_PART_ALT_P2 = -0.4112335167120566  # negative terms of (-1)^k/(k+1)^2
E_SQUARED = 7.389056098930650       # prod exp(2^-k)
LN2 = 0.6931471805599453            # sum (-1)^k/(k+1)
ETA2 = 0.8224670334241132           # sum (-1)^k/(k+1)^2


class TestTerm:
    def test_head_lookup(self):
        assert term(SequenceSpec((5.0,), Constant(1.0)), 0) == 5.0

    def test_affine_tail(self):
        assert term(SequenceSpec((), AffineLinear(-1.0, 3.0)), 2) == 1.0

    def test_geometric_tail(self):
        assert term(SequenceSpec((), Geometric(1.0, 0.5)), 3) == 0.125

    def test_head_then_tail_boundary(self):
        spec = SequenceSpec((9.0, 8.0), Geometric(1.0, 0.5))
        assert spec.term(1) == 8.0
        assert spec.term(2) == 1.0  # q^(k - start) restarts at the boundary
        assert spec.term(4) == 0.25

    def test_alternating_uses_absolute_index(self):
        spec = SequenceSpec((0.0,), AlternatingPowerLaw(1.0, 0.0))
        assert spec.term(1) == -1.0
        assert spec.term(2) == 1.0

    def test_polynomial_tail(self):
        spec = SequenceSpec((), Polynomial((1.0, 0.0, 2.0)))
        assert spec.term(3) == 19.0

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            SequenceSpec((), Zero()).term(-1)

    def test_nonfinite_parameters_rejected(self):
        with pytest.raises(ValueError):
            Constant(math.inf)
        with pytest.raises(ValueError):
            SequenceSpec((math.nan,), Zero())


class TestClassifySum:
    def test_zero_tail(self):
        assert classify_sum(SequenceSpec((1.0, -4.0), Zero())) == ConvergesTo(-3.0, True, 0.0)

    @pytest.mark.parametrize("c,expected", [(0.5, DivergesPlus()), (-2.0, DivergesMinus())])
    def test_constant_tail(self, c, expected):
        assert classify_sum(SequenceSpec((), Constant(c))) == expected

    def test_geometric_half(self):
        verdict = classify_sum(SequenceSpec((), Geometric(1.0, 0.5)))
        assert verdict == ConvergesTo(2.0, True, 0.0)

    def test_geometric_with_head(self):
        verdict = classify_sum(SequenceSpec((10.0,), Geometric(1.0, 0.5)))
        assert verdict.value == pytest.approx(12.0, abs=1e-15)

    @pytest.mark.parametrize("a,q,expected", [
        (1.0, 1.0, DivergesPlus()),
        (-1.0, 1.0, DivergesMinus()),
        (2.0, 1.5, DivergesPlus()),
        (-2.0, 1.5, DivergesMinus()),
        (1.0, -1.0, Oscillates()),
        (1.0, -2.0, Oscillates()),
    ])
    def test_geometric_divergent(self, a, q, expected):
        assert classify_sum(SequenceSpec((), Geometric(a, q))) == expected

    def test_geometric_q_zero(self):
        assert classify_sum(SequenceSpec((), Geometric(3.0, 0.0))) == ConvergesTo(3.0, True, 0.0)

    def test_power_law_basel(self):
        verdict = classify_sum(SequenceSpec((), PowerLaw(1.0, 2.0)))
        assert isinstance(verdict, ConvergesTo)
        assert verdict.absolutely
        assert verdict.remainder_bound <= 1.0 / 100_000
        assert abs(verdict.value - BASEL) <= verdict.remainder_bound

    def test_power_law_depth_controls_bound(self):
        coarse = classify_sum(SequenceSpec((), PowerLaw(1.0, 2.0)), depth=100)
        assert abs(coarse.value - BASEL) <= coarse.remainder_bound
        assert coarse.remainder_bound > 1e-8

    @pytest.mark.parametrize("c,p,expected", [
        (1.0, 1.0, DivergesPlus()),
        (-1.0, 1.0, DivergesMinus()),
        (1.0, 0.5, DivergesPlus()),
        (2.0, -1.0, DivergesPlus()),
        (-2.0, -1.0, DivergesMinus()),
    ])
    def test_power_law_divergent(self, c, p, expected):
        assert classify_sum(SequenceSpec((), PowerLaw(c, p))) == expected

    @pytest.mark.parametrize("gamma", [-1.0, 0.0, 2.0, 10.0])
    def test_affine_negative_slope(self, gamma):
        # the slope forces -inf whatever the intercept
        assert classify_sum(SequenceSpec((), AffineLinear(-1.0, gamma))) == DivergesMinus()

    def test_affine_positive_slope(self):
        assert classify_sum(SequenceSpec((), AffineLinear(0.5, -100.0))) == DivergesPlus()

    def test_affine_degenerates_to_constant(self):
        assert classify_sum(SequenceSpec((), AffineLinear(0.0, 0.0))) == ConvergesTo(0.0, True, 0.0)

    def test_quadratic_black_scholes_rates(self):
        sigma, r = 0.2, 0.05
        tail = QuadraticPoly(-sigma**2 / 2, sigma**2 / 2 - r, r)
        assert classify_sum(SequenceSpec((), tail)) == DivergesMinus()

    def test_quadratic_degenerates_to_affine(self):
        assert classify_sum(SequenceSpec((), QuadraticPoly(0.0, 2.0, 1.0))) == DivergesPlus()

    @pytest.mark.parametrize("coeffs,expected", [
        ((0.0, 2.0, -3.0, 1.0), DivergesPlus()),
        ((0.0, 0.0, 0.0, -0.5), DivergesMinus()),
        ((0.0, 0.0, 0.0, 0.0), ConvergesTo(0.0, True, 0.0)),
    ])
    def test_polynomial(self, coeffs, expected):
        assert classify_sum(SequenceSpec((), Polynomial(coeffs))) == expected

    def test_alternating_unit_oscillates(self):
        assert classify_sum(SequenceSpec((), AlternatingPowerLaw(1.0, 0.0))) == Oscillates()

    def test_alternating_growing_oscillates(self):
        assert classify_sum(SequenceSpec((), AlternatingPowerLaw(1.0, -1.0))) == Oscillates()

    def test_alternating_harmonic_conditional(self):
        verdict = classify_sum(SequenceSpec((), AlternatingPowerLaw(1.0, 1.0)))
        assert isinstance(verdict, ConvergesTo)
        assert not verdict.absolutely
        assert abs(verdict.value - LN2) <= verdict.remainder_bound

    def test_alternating_p2_absolute(self):
        verdict = classify_sum(SequenceSpec((), AlternatingPowerLaw(1.0, 2.0)))
        assert verdict.absolutely
        assert abs(verdict.value - ETA2) <= verdict.remainder_bound


# a pool of tails covering every class and behavior
_TAIL_POOL = [
    Zero(),
    Constant(0.7),
    Constant(-1.2),
    Geometric(2.0, 0.5),
    Geometric(1.0, -0.5),
    Geometric(0.5, 1.25),
    Geometric(1.0, -1.0),
    PowerLaw(1.0, 2.0),
    PowerLaw(-2.0, 0.5),
    AffineLinear(-1.0, 3.0),
    AffineLinear(0.25, -2.0),
    QuadraticPoly(-0.02, -0.03, 0.05),
    AlternatingPowerLaw(1.0, 1.0),
    AlternatingPowerLaw(1.0, 0.0),
    Polynomial((1.0, 0.0, 0.0, 0.25)),
]


class TestHeadPrependInvariant:
    @settings(max_examples=60, deadline=None)
    @given(
        tail=st.sampled_from(_TAIL_POOL),
        old_head=st.lists(st.floats(-5, 5, allow_nan=False), max_size=3),
        new_head=st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=4),
    )
    def test_prepending_a_head_shifts_by_a_finite_amount(self, tail, old_head, new_head):
        spec = SequenceSpec(tuple(old_head), tail)
        extended = SequenceSpec(tuple(new_head) + tuple(old_head), tail)
        v1 = classify_sum(spec)
        v2 = classify_sum(extended)
        assert type(v1) is type(v2)
        if isinstance(v1, ConvergesTo):
            if isinstance(tail, Geometric):
                # geometric tails are anchored to the head length and shift
                # with it: only the new head values change the sum
                adjustment = math.fsum(new_head)
            else:
                # absolute-index tails stay pinned: the new head displaces
                # the tail values at the indices it now covers
                displaced = [spec.term(k) for k in range(spec.start, extended.start)]
                adjustment = math.fsum(new_head) - math.fsum(displaced)
            slack = v1.remainder_bound + v2.remainder_bound + 1e-9
            assert abs((v2.value - v1.value) - adjustment) <= slack


class TestPartialSumsMatchTags:
    """Brute-force partial sums never contradict the symbolic tag."""

    @pytest.mark.parametrize("tail", [
        AffineLinear(-1.0, 3.0),
        QuadraticPoly(-0.02, -0.03, 0.05),
        PowerLaw(-1.0, 1.0),
        Constant(-0.25),
    ])
    def test_diverges_minus_sinks(self, tail):
        spec = SequenceSpec((), tail)
        assert classify_sum(spec) == DivergesMinus()
        checkpoint = math.fsum(tail.value_at(k, 0) for k in range(1_000))
        total = checkpoint + math.fsum(tail.value_at(k, 0) for k in range(1_000, 1_000_000))
        assert total < checkpoint  # still sinking
        assert total < -10.0

    def test_oscillating_partial_sums_have_two_accumulation_points(self):
        spec = SequenceSpec((), AlternatingPowerLaw(1.0, 0.0))
        partial = np.cumsum([spec.term(k) for k in range(100)])
        assert set(np.round(partial, 12)) == {0.0, 1.0}


class TestOrdinaryProduct:
    def test_all_ones(self):
        assert ordinary_product(SequenceSpec((), Constant(1.0))) == ExtendedMeasure.finite(1.0)

    def test_all_halves_collapse(self):
        assert ordinary_product(SequenceSpec((), Constant(0.5))).is_zero

    def test_exp_geometric_factors(self):
        product = ordinary_product(SequenceSpec((), Geometric(1.0, 0.5)), log_domain=True)
        assert product.is_finite
        assert product.value == pytest.approx(E_SQUARED, rel=1e-12)

    def test_zero_factor_forces_zero(self):
        assert ordinary_product(SequenceSpec((2.0, 0.0), Constant(2.0))).is_zero

    def test_affine_integer_root_forces_zero(self):
        # factors k - 3 hit exactly zero at k = 3
        assert ordinary_product(SequenceSpec((1.0,), AffineLinear(1.0, -3.0))).is_zero

    def test_growing_factors_infinite(self):
        assert ordinary_product(SequenceSpec((), Constant(2.0))).is_infinite
        assert ordinary_product(SequenceSpec((), AffineLinear(1.0, 1.0))).is_infinite

    def test_head_product_with_ones_tail(self):
        product = ordinary_product(SequenceSpec((2.0, 3.0), Constant(1.0)))
        assert product == ExtendedMeasure.finite(6.0)

    def test_even_negative_head_allowed(self):
        product = ordinary_product(SequenceSpec((-2.0, -3.0), Constant(1.0)))
        assert product == ExtendedMeasure.finite(6.0)

    def test_odd_negative_head_rejected(self):
        with pytest.raises(NegativeFactor):
            ordinary_product(SequenceSpec((-2.0,), Constant(1.0)))

    def test_alternating_sign_factors_rejected(self):
        with pytest.raises(NegativeFactor):
            ordinary_product(SequenceSpec((), Geometric(1.0, -1.0)))
        with pytest.raises(NegativeFactor):
            ordinary_product(SequenceSpec((), Constant(-1.0)))

    def test_sign_flips_with_vanishing_magnitude_converge_to_zero(self):
        # factors -1/2, +1/4, ... : signed partial products tend to 0
        assert ordinary_product(SequenceSpec((), Geometric(-0.5, -0.5))).is_zero

    def test_oscillating_log_factors_undefined(self):
        spec = SequenceSpec((), AlternatingPowerLaw(math.log(2.0), 0.0))
        assert ordinary_product(spec, log_domain=True).is_undefined

    def test_log_factors_diverging_down_give_zero(self):
        assert ordinary_product(SequenceSpec((), Constant(-0.1)), log_domain=True).is_zero

    def test_log_factors_diverging_up_give_infinity(self):
        assert ordinary_product(SequenceSpec((), Constant(0.1)), log_domain=True).is_infinite

    def test_log_route_matches_direct_route(self):
        # positive factors head (2, 3) then ones, via both encodings
        direct = ordinary_product(SequenceSpec((2.0, 3.0), Constant(1.0)))
        logged = ordinary_product(
            SequenceSpec((math.log(2.0), math.log(3.0)), Zero()), log_domain=True)
        assert direct.is_finite and logged.is_finite
        assert math.log(direct.value) == pytest.approx(math.log(logged.value), abs=1e-12)

    @pytest.mark.parametrize("direct,logged", [
        # hand-logged encodings of the same positive factor sequences
        (SequenceSpec((), Constant(0.5)), SequenceSpec((), Constant(math.log(0.5)))),
        (SequenceSpec((), Constant(2.0)), SequenceSpec((), Constant(math.log(2.0)))),
        (SequenceSpec((), Geometric(1.0, 0.5)),
         SequenceSpec((), AffineLinear(math.log(0.5), 0.0))),
        (SequenceSpec((), Geometric(1.0, 2.0)),
         SequenceSpec((), AffineLinear(math.log(2.0), 0.0))),
        (SequenceSpec((5.0,), Constant(1.0)), SequenceSpec((math.log(5.0),), Zero())),
    ])
    def test_positive_factor_tags_agree_across_routes(self, direct, logged):
        left = ordinary_product(direct)
        right = ordinary_product(logged, log_domain=True)
        assert left.tag == right.tag
        if left.is_finite:
            assert left.value == pytest.approx(right.value, rel=1e-12)


class TestAlphaBlocking:
    def test_block_starts(self):
        alpha = AlphaBlocking(SequenceSpec((1.0,), Constant(2.0)))  # (1, 2, 2, ...)
        assert [alpha.block_start(k) for k in range(4)] == [0, 1, 3, 5]
        assert alpha.size(0) == 1 and alpha.size(3) == 2

    def test_affine_sizes(self):
        alpha = AlphaBlocking(SequenceSpec((), AffineLinear(1.0, 1.0)))  # (1, 2, 3, ...)
        assert [alpha.block_start(k) for k in range(4)] == [0, 1, 3, 6]

    def test_identity_detection(self):
        assert AlphaBlocking.identity().is_identity
        assert AlphaBlocking(SequenceSpec((1.0, 1.0), Constant(1.0))).is_identity
        assert not AlphaBlocking.constant(2).is_identity

    @pytest.mark.parametrize("sizes", [
        SequenceSpec((0.0,), Constant(1.0)),
        SequenceSpec((1.5,), Constant(1.0)),
        SequenceSpec((), Constant(0.0)),
        SequenceSpec((), Geometric(1.0, 2.0)),
        SequenceSpec((), AffineLinear(-1.0, 10.0)),
    ])
    def test_invalid_sizes_rejected(self, sizes):
        with pytest.raises(ValueError):
            AlphaBlocking(sizes)


class TestAlphaProduct:
    def test_identity_blocking_delegates(self):
        specs = [
            (SequenceSpec((), Constant(1.0)), False),
            (SequenceSpec((), Constant(0.5)), False),
            (SequenceSpec((), Geometric(1.0, 0.5)), True),
            (SequenceSpec((), AlternatingPowerLaw(1.0, 0.0)), True),
        ]
        alpha = AlphaBlocking.identity()
        for spec, log_domain in specs:
            blocked = ordinary_alpha_product(alpha, spec, log_domain=log_domain)
            plain = ordinary_product(spec, log_domain=log_domain)
            assert blocked.tag == plain.tag
            if plain.is_finite:
                assert blocked.value == pytest.approx(plain.value, rel=1e-12)

    def test_pairs_cancel_the_two_half_pattern(self):
        # factors 2, 1/2, 2, 1/2, ...: every pair multiplies to 1
        alpha = AlphaBlocking.constant(2)
        log_factors = SequenceSpec((), AlternatingPowerLaw(math.log(2.0), 0.0))
        assert ordinary_alpha_product(alpha, log_factors, log_domain=True) == \
            ExtendedMeasure.finite(1.0)
        assert ordinary_product(log_factors, log_domain=True).is_undefined

    def test_triples_of_halves_collapse(self):
        alpha = AlphaBlocking.constant(3)
        assert ordinary_alpha_product(alpha, SequenceSpec((), Constant(0.5))).is_zero

    def test_odd_blocks_stay_undefined(self):
        alpha = AlphaBlocking.constant(3)
        log_factors = SequenceSpec((), AlternatingPowerLaw(math.log(2.0), 0.0))
        assert ordinary_alpha_product(alpha, log_factors, log_domain=True).is_undefined

    def test_prefix_survives_blocking(self):
        # one irregular head value, then the cancelling pattern
        alpha = AlphaBlocking.constant(2)
        log_factors = SequenceSpec((0.5, math.log(2.0)), Geometric(math.log(2.0), -1.0))
        product = ordinary_alpha_product(alpha, log_factors, log_domain=True)
        assert product.is_finite
        # blocks: (0.5 + ln2), (ln2 - ln2), (ln2 - ln2), ...
        assert product.value == pytest.approx(math.exp(0.5 + math.log(2.0)), rel=1e-12)

    def test_growing_alternation_with_even_blocks(self):
        # log factors (-1)^k (k+1): pair sums are -1 each, so the product dies
        alpha = AlphaBlocking.constant(2)
        log_factors = SequenceSpec((), AlternatingPowerLaw(1.0, -1.0))
        assert ordinary_alpha_product(alpha, log_factors, log_domain=True).is_zero
        flipped = SequenceSpec((), AlternatingPowerLaw(-1.0, -1.0))
        assert ordinary_alpha_product(alpha, flipped, log_domain=True).is_infinite

    def test_geometric_minus_two_even_blocks(self):
        # log factors 1, -2, 4, -8, ...: pair sums -1, -4, ... diverge down
        alpha = AlphaBlocking.constant(2)
        log_factors = SequenceSpec((), Geometric(1.0, -2.0))
        assert ordinary_alpha_product(alpha, log_factors, log_domain=True).is_zero

    def test_unsupported_blocking_raises(self):
        alpha = AlphaBlocking(SequenceSpec((), AffineLinear(1.0, 2.0)))
        log_factors = SequenceSpec((), AlternatingPowerLaw(1.0, 0.0))
        with pytest.raises(UnsupportedBlocking):
            ordinary_alpha_product(alpha, log_factors, log_domain=True)

    def test_direct_factors_blocked_equal_unblocked(self):
        alpha = AlphaBlocking.constant(2)
        for spec in (SequenceSpec((), Constant(0.5)), SequenceSpec((2.0, 3.0), Constant(1.0))):
            assert ordinary_alpha_product(alpha, spec).tag == ordinary_product(spec).tag


class TestNegativePartSum:
    def test_all_positive_tail_gives_zero(self):
        assert negative_part_sum(SequenceSpec((), PowerLaw(1.0, 2.0))) == ConvergesTo(0.0, True, 0.0)

    def test_head_negatives_are_collected(self):
        verdict = negative_part_sum(SequenceSpec((-1.0, 2.0, -0.5), PowerLaw(1.0, 2.0)))
        assert verdict == ConvergesTo(-1.5, True, 0.0)

    def test_alternating_harmonic_diverges(self):
        assert negative_part_sum(SequenceSpec((), AlternatingPowerLaw(1.0, 1.0))) == DivergesMinus()

    def test_alternating_p2_value(self):
        verdict = negative_part_sum(SequenceSpec((), AlternatingPowerLaw(1.0, 2.0)))
        assert isinstance(verdict, ConvergesTo)
        assert abs(verdict.value - NEG_PART_ALT_P2) <= verdict.remainder_bound

    def test_alternating_negative_coefficient_flips_parity(self):
        # with c = -1 the negative terms are the even indices: -1, -1/9, ...
        verdict = negative_part_sum(SequenceSpec((), AlternatingPowerLaw(-1.0, 2.0)))
        expected = -(BASEL + ETA2) / 2  # sum over even k of 1/(k+1)^2 is pi^2/8
        assert abs(verdict.value - expected) <= verdict.remainder_bound + 1e-12

    def test_affine_with_finite_dip(self):
        # terms k - 3: negatives are -3, -2, -1
        verdict = negative_part_sum(SequenceSpec((), AffineLinear(1.0, -3.0)))
        assert verdict == ConvergesTo(-6.0, True, 0.0)

    def test_affine_negative_slope_diverges(self):
        assert negative_part_sum(SequenceSpec((), AffineLinear(-0.5, 100.0))) == DivergesMinus()

    def test_quadratic_dip(self):
        # k^2 - 4k + 3 < 0 at k = 2 only (roots 1 and 3): term -1
        verdict = negative_part_sum(SequenceSpec((), QuadraticPoly(1.0, -4.0, 3.0)))
        assert verdict == ConvergesTo(-1.0, True, 0.0)

    def test_quadratic_wide_dip(self):
        verdict = negative_part_sum(SequenceSpec((), QuadraticPoly(1.0, -100.0, 0.0)))
        brute = math.fsum(min(0.0, k * k - 100.0 * k) for k in range(200))
        assert verdict.value == pytest.approx(brute, rel=1e-12)

    def test_geometric_alternating_closed_form(self):
        # factors 1, -1/2, 1/4, ...: negative terms sum to -(1/2)/(1 - 1/4)
        verdict = negative_part_sum(SequenceSpec((), Geometric(1.0, -0.5)))
        assert verdict.value == pytest.approx(-2.0 / 3.0, rel=1e-15)

    def test_geometric_all_negative(self):
        verdict = negative_part_sum(SequenceSpec((), Geometric(-1.0, 0.5)))
        assert verdict.value == pytest.approx(-2.0, rel=1e-15)
        assert negative_part_sum(SequenceSpec((), Geometric(-1.0, 1.0))) == DivergesMinus()

    def test_polynomial_dip(self):
        tail = Polynomial((-6.0, 1.0, 0.0, 0.25))  # negative at k = 0, 1
        brute = math.fsum(min(0.0, tail.value_at(k, 0)) for k in range(50))
        verdict = negative_part_sum(SequenceSpec((), tail))
        assert verdict.value == pytest.approx(brute, rel=1e-12)

    def test_brute_force_divergence_scale(self):
        # mirrors the tag: the partial negative-part sums sink below -6 by 1e6
        k = np.arange(1_000_000)
        terms = (-1.0) ** (k % 2) / (k + 1.0)
        assert terms[terms < 0].sum() < -6.0
