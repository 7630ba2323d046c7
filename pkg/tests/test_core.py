from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thinset.core import (CircleRational, DigitExpansion, DomainError,
                          InsufficientDigitsError, RatInterval, SIN_UPPER,
                          dist_to_int, expand, frac_scaled, mult_mod1,
                          reconstruct, reconstruct_exact, sin_envelope,
                          support, tail_bound)
from thinset.ideals import FiniteSet
from thinset.sequences import ArithmeticSequence


def digit_list(e, depth):
    return [e.digit(n) for n in range(1, depth + 1)]


class TestCircleRational:
    def test_parse_and_reduce(self):
        x = CircleRational.from_fraction(Fraction(10, 16))
        assert (x.num, x.den) == (5, 8)

    def test_wraps_into_unit_interval(self):
        assert CircleRational.from_fraction(Fraction(7, 3)).frac() == Fraction(1, 3)
        assert CircleRational.from_fraction(Fraction(-1, 4)).frac() == Fraction(3, 4)

    def test_rejects_invalid(self):
        with pytest.raises(DomainError):
            CircleRational(3, 2)
        with pytest.raises(DomainError):
            CircleRational(2, 4)


class TestExpand:
    def test_dyadic_five_eighths(self):
        e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 3)
        assert digit_list(e, 3) == [1, 0, 1]

    def test_one_third_dyadic(self):
        e = expand(CircleRational.parse("1/3"), ArithmeticSequence.dyadic(), 6)
        assert digit_list(e, 6) == [0, 1, 0, 1, 0, 1]

    def test_one_half_factorial(self):
        e = expand(CircleRational.parse("1/2"), ArithmeticSequence.factorial(), 4)
        assert digit_list(e, 4) == [0, 1, 0, 0]

    def test_digits_below_ratios(self):
        seq = ArithmeticSequence.from_ratios([2, 3, 5])
        e = expand(CircleRational.parse("29/30"), seq, 3)
        for n, c in e.digits.items():
            assert 0 < c < seq.q(n)

    def test_depth_must_be_positive(self):
        with pytest.raises(DomainError):
            expand(CircleRational.parse("1/2"), ArithmeticSequence.dyadic(), 0)


class TestReconstruct:
    def test_round_trip_examples(self):
        seq = ArithmeticSequence.dyadic()
        for text in ("5/8", "1/1024", "255/256"):
            x = CircleRational.parse(text)
            assert reconstruct(expand(x, seq, 12), 12) == x

    def test_partial_prefix(self):
        e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 3)
        assert reconstruct(e, 1).frac() == Fraction(1, 2)

    def test_exact_needs_untruncated(self):
        e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 3)
        with pytest.raises(InsufficientDigitsError):
            reconstruct_exact(e)
        finite = DigitExpansion(ArithmeticSequence.dyadic(), {1: 1, 3: 1}, None)
        assert reconstruct_exact(finite).frac() == Fraction(5, 8)

    def test_depth_beyond_truncation_rejected(self):
        e = expand(CircleRational.parse("1/3"), ArithmeticSequence.dyadic(), 4)
        with pytest.raises(InsufficientDigitsError):
            reconstruct(e, 5)


@settings(max_examples=200, deadline=None)
@given(num=st.integers(min_value=0), k=st.integers(min_value=1, max_value=20),
       pick=st.integers(min_value=0, max_value=2))
def test_round_trip_property(num, k, pick):
    seq = [ArithmeticSequence.dyadic(), ArithmeticSequence.factorial(),
           ArithmeticSequence.from_ratios([2, 3, 7])][pick]
    uk = seq.u(k)
    x = CircleRational.from_fraction(Fraction(num % uk, uk))
    assert reconstruct(expand(x, seq, k), k) == x


class TestNorm:
    def test_values(self):
        assert dist_to_int(Fraction(1, 3)) == Fraction(1, 3)
        assert dist_to_int(Fraction(2, 3)) == Fraction(1, 3)
        assert dist_to_int(Fraction(7, 2)) == Fraction(1, 2)
        assert dist_to_int(5) == 0

    @settings(max_examples=200, deadline=None)
    @given(st.fractions())
    def test_axioms(self, x):
        d = dist_to_int(x)
        assert 0 <= d <= Fraction(1, 2)
        assert dist_to_int(-x) == d
        assert dist_to_int(x + 1) == d

    @settings(max_examples=100, deadline=None)
    @given(st.fractions(), st.fractions())
    def test_subadditive(self, x, y):
        assert dist_to_int(x + y) <= dist_to_int(x) + dist_to_int(y)


def test_mult_mod1():
    x = CircleRational.parse("1/3")
    assert mult_mod1(2, x).frac() == Fraction(2, 3)
    assert mult_mod1(3, x).frac() == 0
    assert mult_mod1(4, x).frac() == Fraction(1, 3)


def test_tail_bound():
    seq = ArithmeticSequence.dyadic()
    assert tail_bound(seq, 3) == RatInterval(Fraction(0), Fraction(1, 8))
    with pytest.raises(DomainError):
        tail_bound(seq, 0)


class TestFracScaled:
    def test_wraparound_example(self):
        # a=4, digits 1,0,1 over dyadic, truncated at 3: head {4*5/8} = 1/2,
        # width 4/8 spans through 1
        e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 3)
        enc = frac_scaled(4, e, 3)
        assert not enc.wraparound
        assert enc.parts == (RatInterval(Fraction(1, 2), Fraction(1)),)

    def test_true_wraparound(self):
        # head {3*5/8} = 7/8 plus width 3/8 crosses the seam
        e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 3)
        enc = frac_scaled(3, e, 3)
        assert enc.wraparound
        assert enc.parts == (RatInterval(Fraction(7, 8), Fraction(1)),
                             RatInterval(Fraction(0), Fraction(1, 4)))

    def test_enclosure_contains_true_value(self):
        seq = ArithmeticSequence.dyadic()
        x = CircleRational.parse("11/64")
        full = expand(x, seq, 6)
        for k in range(1, 6):
            trunc = expand(x, seq, k)
            for a in (1, 3, 5):
                enc = frac_scaled(a, trunc, k)
                true = mult_mod1(a, x).frac()
                assert any(p.contains(true) for p in enc.parts)

    def test_whole_circle_when_tail_dominates(self):
        e = expand(CircleRational.parse("1/2"), ArithmeticSequence.dyadic(), 2)
        enc = frac_scaled(8, e, 2)
        assert enc.parts[0] == RatInterval(Fraction(0), Fraction(1))

    def test_norm_interval(self):
        e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 3)
        norm = frac_scaled(1, e, 3).dist_interval()
        assert norm.contains(Fraction(3, 8))


def test_sin_envelope():
    env = sin_envelope(Fraction(1, 2))
    assert env.lo == 1
    assert env.hi == SIN_UPPER / 2
    assert sin_envelope(Fraction(0)).hi == 0
    # the bracket really contains |sin(pi x)| at a spot check
    import math
    val = abs(math.sin(math.pi / 3))
    env = sin_envelope(Fraction(1, 3))
    assert float(env.lo) <= val <= float(env.hi)


def test_support():
    e = DigitExpansion(ArithmeticSequence.dyadic(), {2: 1, 5: 1}, None)
    assert support(e) == FiniteSet([2, 5])


def test_expansion_json_round_trip():
    e = expand(CircleRational.parse("5/8"), ArithmeticSequence.dyadic(), 4)
    back = DigitExpansion.from_json(e.to_json())
    assert back.digits == e.digits
    assert back.depth == e.depth
