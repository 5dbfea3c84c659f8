import pytest
from fractions import Fraction
from markoff_lab.contfrac import (
    CFExpansion,
    cf_value,
    convergents,
    enclosure_digits,
    is_reduced_quad,
    periodic_value,
    prefix_interval,
    quad_cf_expand,
    reversed_period_matches,
    serret_tail,
)
from markoff_lab.exactnum import IDENTITY, RatInterval, moebius_apply, quadirr_height, quadirr_make
from markoff_lab.markoff import enumerate_tree, markoff_alpha
from markoff_lab.words import Word, phi, pi_word

GOLDEN_CONJ = quadirr_make(-1, 1, 5, 2)


def test_quad_cf_expand():
    # Test
    golden = quad_cf_expand(GOLDEN_CONJ)
    assert (golden.a0, golden.preperiod, golden.period) == (0, Word(), Word((1,)))

    silver = quad_cf_expand(quadirr_make(-1, 1, 2, 1))
    assert (silver.a0, silver.period) == (0, Word((2,)))

    alpha, _ = markoff_alpha((5, 1, 2))
    expansion = quad_cf_expand(alpha)
    assert expansion.a0 == 0
    assert expansion.stream(12) == Word.parse("112211221122")


def test_quad_cf_expand_with_preperiod():
    # Setup
    x = quadirr_make(0, 1, 7, 1)

    # Test
    expansion = quad_cf_expand(x)
    assert expansion.a0 == 2
    assert expansion.period == Word((1, 1, 1, 4))
    assert str(expansion) == "[2; | 1, 1, 1, 4]"


def test_cf_value_round_trip():
    # Test
    for x in (GOLDEN_CONJ, quadirr_make(0, 1, 7, 1), quadirr_make(5, -3, 13, 7), quadirr_make(-23, 1, 1517, 26)):
        assert cf_value(quad_cf_expand(x)) == x


def test_cf_value_needs_a_period():
    # Test
    with pytest.raises(ValueError):
        cf_value(CFExpansion(0, Word((1, 2)), Word(), periodic=False))


def test_periodic_value():
    # Test
    assert periodic_value(Word((1,))) == quadirr_make(1, 1, 5, 2)
    assert periodic_value(Word((2,))) == quadirr_make(1, 1, 2, 1)


def test_is_reduced_quad():
    # Test
    assert is_reduced_quad(GOLDEN_CONJ)
    assert not is_reduced_quad(quadirr_make(0, 1, 2, 1))
    for node in enumerate_tree(4):
        alpha, _ = markoff_alpha(node)
        assert is_reduced_quad(alpha)


def test_markoff_alpha_periods():
    # Test
    for node in enumerate_tree(4):
        alpha, _ = markoff_alpha(node)
        word = pi_word(node)
        expansion = quad_cf_expand(alpha)
        assert expansion.stream(3 * len(word)) == word * 3
        assert reversed_period_matches(alpha)
        assert quadirr_height(alpha) <= phi(word).norm()


def test_convergents():
    # Test
    assert convergents([1, 1, 2]) == [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3, 5)]
    assert convergents([2]) == [Fraction(0), Fraction(1, 2)]
    assert convergents([1, 1, 1, 1, 2, 2])[-1] == Fraction(19, 31)


def test_convergents_alternate_around_value():
    # Setup
    alpha, _ = markoff_alpha((13, 1, 5))
    digits = quad_cf_expand(alpha).stream(20)
    values = convergents(digits)

    # Test
    for k in range(1, len(values) - 1):
        side = alpha.compare(values[k])
        assert side == (1 if k % 2 == 0 else -1)
        gap = abs(alpha.enclosure(128).midpoint() - values[k])
        assert gap < Fraction(1, values[k].denominator * values[k + 1].denominator)


@pytest.mark.parametrize(
    "digits, endpoints",
    [
        ([1, 1, 2], (Fraction(4, 7), Fraction(3, 5))),
        ([1], (Fraction(1, 2), Fraction(1))),
        ([2, 2], (Fraction(2, 5), Fraction(3, 7))),
    ],
)
def test_prefix_interval(digits, endpoints):
    # Test
    assert prefix_interval(digits) == RatInterval(*endpoints)


def test_prefix_interval_nested():
    # Setup
    digits = quad_cf_expand(GOLDEN_CONJ).stream(30)

    # Test
    previous = prefix_interval(digits[:1])
    for n in range(2, 31):
        current = prefix_interval(digits[:n])
        assert previous.contains(current)
        assert current.width() < previous.width()
        assert current.lo < GOLDEN_CONJ and GOLDEN_CONJ < current.hi
        previous = current


def test_serret_tail():
    # Setup
    digits = Word((1, 1, 2, 2, 1, 1, 2, 2))

    # Test
    tail, g = serret_tail(digits, 0, 0)
    assert g == IDENTITY
    assert tail.preperiod == digits

    tail, g = serret_tail(digits, 0, 1)
    assert tail.preperiod == Word((1, 2, 2, 1, 1, 2, 2))

    _, once = serret_tail(digits, 0, 1)
    _, twice = serret_tail(digits[1:], 0, 1)
    _, both = serret_tail(digits, 0, 2)
    assert once @ twice == both

    with pytest.raises(ValueError):
        serret_tail(digits, 0, 9)


def test_serret_tail_maps_tail_to_value():
    # Setup
    digits = quad_cf_expand(GOLDEN_CONJ).stream(3)

    # Test
    _, g = serret_tail(digits, 0, 3)
    assert moebius_apply(g, GOLDEN_CONJ) == GOLDEN_CONJ


def test_enclosure_digits():
    # Setup
    alpha, _ = markoff_alpha((5, 1, 2))
    box = alpha.enclosure(200)

    # Test
    a0, digits = enclosure_digits(box, 40)
    assert a0 == 0
    assert digits == Word.parse("1122") * 10


def test_enclosure_digits_stops_on_wide_interval():
    # Test
    a0, digits = enclosure_digits(RatInterval(Fraction(1, 3), Fraction(1, 2)), 10)
    assert a0 == 0
    assert len(digits) == 0
